//! Agents, preference profiles with ties and incomplete lists, matchings,
//! and the stability and cost notions defined on them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{domain, Error, Result};

/// Dense index of an agent, `0..n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId(pub usize);

impl AgentId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Unordered pair of distinct agents, stored with the smaller id first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair(AgentId, AgentId);

impl Pair {
    pub fn new(a: AgentId, b: AgentId) -> Pair {
        assert_ne!(a, b, "a pair needs two distinct agents");
        if a < b {
            Pair(a, b)
        } else {
            Pair(b, a)
        }
    }

    pub fn lo(self) -> AgentId {
        self.0
    }

    pub fn hi(self) -> AgentId {
        self.1
    }

    pub fn contains(self, x: AgentId) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint different from `x`. Panics if `x` is not an endpoint.
    pub fn other(self, x: AgentId) -> AgentId {
        if self.0 == x {
            self.1
        } else {
            assert_eq!(self.1, x, "{x} is not an endpoint of {self:?}");
            self.0
        }
    }

    pub fn endpoints(self) -> [AgentId; 2] {
        [self.0, self.1]
    }

    pub fn is_disjoint(self, other: Pair) -> bool {
        !self.contains(other.0) && !self.contains(other.1)
    }
}

/// Preference list as a sequence of tie groups; earlier groups are strictly
/// preferred. Members of a group are kept sorted by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceList {
    groups: Vec<Vec<AgentId>>,
}

impl PreferenceList {
    /// Builds a list without checking the profile-level invariants.
    pub fn new(mut groups: Vec<Vec<AgentId>>) -> PreferenceList {
        for g in &mut groups {
            g.sort();
        }
        PreferenceList { groups }
    }

    /// A list with no ties, most preferred first.
    pub fn strict(order: Vec<AgentId>) -> PreferenceList {
        PreferenceList { groups: order.into_iter().map(|a| vec![a]).collect() }
    }

    pub fn groups(&self) -> &[Vec<AgentId>] {
        &self.groups
    }

    /// Number of acceptable agents, `|V_i|`.
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// All acceptable agents from most to least preferred.
    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.groups.iter().flatten().copied()
    }

    pub fn has_ties(&self) -> bool {
        self.groups.iter().any(|g| g.len() > 1)
    }
}

/// How an unmatched agent contributes to the egalitarian cost.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostSemantics {
    /// An unmatched agent costs its list length.
    ListLength,
    /// Unmatched agents are free.
    Zero,
    /// Every unmatched agent costs the same positive constant.
    Constant(usize),
}

impl CostSemantics {
    pub fn validate(self) -> Result<CostSemantics> {
        match self {
            CostSemantics::Constant(0) => domain("constant unmatched cost must be at least 1"),
            s => Ok(s),
        }
    }
}

/// A preference profile. Acceptability is symmetric and no list is empty.
#[derive(Clone, Debug)]
pub struct Profile {
    names: Vec<String>,
    lists: Vec<PreferenceList>,
    // Per agent: (acceptable agent, group index), sorted by agent.
    index: Vec<Vec<(AgentId, u32)>>,
    // Per agent: number of agents in groups before g, for g in 0..=groups.
    before: Vec<Vec<u32>>,
    by_name: HashMap<String, AgentId>,
}

impl PartialEq for Profile {
    fn eq(&self, other: &Profile) -> bool {
        self.names == other.names && self.lists == other.lists
    }
}

impl Eq for Profile {}

impl Profile {
    /// Validates and builds a profile. Tie groups are canonicalized.
    pub fn new(names: Vec<String>, lists: Vec<PreferenceList>) -> Result<Profile> {
        let n = names.len();
        if lists.len() != n {
            return Err(Error::Invalid(format!("{} names but {} preference lists", n, lists.len())));
        }
        let mut by_name = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Invalid(format!("agent {i} has an empty name")));
            }
            if by_name.insert(name.clone(), AgentId(i)).is_some() {
                return Err(Error::Invalid(format!("duplicate agent name `{name}`")));
            }
        }
        let lists: Vec<PreferenceList> = lists.into_iter().map(|l| PreferenceList::new(l.groups)).collect();
        let mut index = Vec::with_capacity(n);
        let mut before = Vec::with_capacity(n);
        for (i, list) in lists.iter().enumerate() {
            let who = &names[i];
            if list.is_empty() {
                return Err(Error::Invalid(format!("agent `{who}` has an empty preference list")));
            }
            let mut entries = Vec::with_capacity(list.len());
            let mut cum = Vec::with_capacity(list.groups.len() + 1);
            let mut seen = 0u32;
            for (g, group) in list.groups.iter().enumerate() {
                if group.is_empty() {
                    return Err(Error::Invalid(format!("agent `{who}` has an empty tie group")));
                }
                cum.push(seen);
                for &a in group {
                    if a.0 >= n {
                        return Err(Error::Invalid(format!("agent `{who}` lists unknown agent id {}", a.0)));
                    }
                    if a.0 == i {
                        return Err(Error::Invalid(format!("agent `{who}` lists itself")));
                    }
                    entries.push((a, g as u32));
                }
                seen += group.len() as u32;
            }
            cum.push(seen);
            entries.sort();
            if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::Invalid(format!(
                    "agent `{who}` lists `{}` more than once",
                    names[w[0].0 .0]
                )));
            }
            index.push(entries);
            before.push(cum);
        }
        let profile = Profile { names, lists, index, before, by_name };
        for i in 0..n {
            for &(j, _) in &profile.index[i] {
                if profile.group_of(j, AgentId(i)).is_none() {
                    return Err(Error::Invalid(format!(
                        "acceptability is not mutual: `{}` lists `{}` but not vice versa",
                        profile.names[i], profile.names[j.0]
                    )));
                }
            }
        }
        Ok(profile)
    }

    /// Builds a profile whose agents are named `1..=n`.
    pub fn with_numbered_names(lists: Vec<PreferenceList>) -> Result<Profile> {
        let names = (1..=lists.len()).map(|i| i.to_string()).collect();
        Profile::new(names, lists)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.n()).map(AgentId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: AgentId) -> &str {
        &self.names[a.0]
    }

    pub fn id(&self, name: &str) -> Option<AgentId> {
        self.by_name.get(name).copied()
    }

    pub fn list(&self, a: AgentId) -> &PreferenceList {
        &self.lists[a.0]
    }

    pub fn lists(&self) -> &[PreferenceList] {
        &self.lists
    }

    /// `|V_a|`.
    pub fn degree(&self, a: AgentId) -> usize {
        self.index[a.0].len()
    }

    /// Index of the tie group of `target` in `owner`'s list.
    pub fn group_of(&self, owner: AgentId, target: AgentId) -> Option<usize> {
        let entries = &self.index[owner.0];
        entries.binary_search_by(|e| e.0.cmp(&target)).ok().map(|p| entries[p].1 as usize)
    }

    pub fn acceptable(&self, owner: AgentId, target: AgentId) -> bool {
        self.group_of(owner, target).is_some()
    }

    /// Rank of `target` for `owner`; `None` stands for being unmatched and
    /// yields the list length.
    pub fn rank(&self, owner: AgentId, target: Option<AgentId>) -> Result<usize> {
        match target {
            None => Ok(self.degree(owner)),
            Some(t) => match self.group_of(owner, t) {
                Some(g) => Ok(self.before[owner.0][g] as usize),
                None => domain(format!("`{}` is not acceptable to `{}`", self.name(t), self.name(owner))),
            },
        }
    }

    /// Rank of an acceptable agent. Panics if `target` is not acceptable.
    pub fn rank_of(&self, owner: AgentId, target: AgentId) -> usize {
        let g = self.group_of(owner, target).expect("target not acceptable");
        self.before[owner.0][g] as usize
    }

    /// Number of agents other than `target` that `owner` likes at least as
    /// much as `target`: the worst rank `target` can take when ties are broken.
    pub fn weak_count(&self, owner: AgentId, target: AgentId) -> usize {
        let g = self.group_of(owner, target).expect("target not acceptable");
        self.before[owner.0][g + 1] as usize - 1
    }

    /// Combined rank of both endpoints of an acceptable pair.
    pub fn pair_cost(&self, p: Pair) -> usize {
        self.rank_of(p.lo(), p.hi()) + self.rank_of(p.hi(), p.lo())
    }

    /// Whether `owner` strictly prefers `x` to `y`, where `None` is being
    /// unmatched. `x` must be acceptable to `owner`.
    pub fn prefers(&self, owner: AgentId, x: AgentId, y: Option<AgentId>) -> bool {
        let gx = self.group_of(owner, x).expect("x not acceptable");
        match y {
            None => true,
            Some(y) => gx < self.group_of(owner, y).expect("y not acceptable"),
        }
    }

    pub fn is_tie_free(&self) -> bool {
        self.lists.iter().all(|l| !l.has_ties())
    }

    pub fn require_tie_free(&self) -> Result<()> {
        match self.agents().find(|&a| self.list(a).has_ties()) {
            Some(a) => domain(format!("preference list of `{}` contains ties", self.name(a))),
            None => Ok(()),
        }
    }

    /// Every agent finds every other agent acceptable.
    pub fn is_complete(&self) -> bool {
        self.agents().all(|a| self.degree(a) + 1 == self.n())
    }

    /// Edges of the acceptability graph in increasing order.
    pub fn edges(&self) -> Vec<Pair> {
        let mut out = Vec::new();
        for a in self.agents() {
            for &(b, _) in &self.index[a.0] {
                if a < b {
                    out.push(Pair::new(a, b));
                }
            }
        }
        out
    }

    /// Acceptable agents of `a` in increasing id order.
    pub fn neighbors(&self, a: AgentId) -> impl Iterator<Item = AgentId> + '_ {
        self.index[a.0].iter().map(|e| e.0)
    }

    /// Checks that every pair of `m` is an acceptability edge.
    pub fn check_matching(&self, m: &Matching) -> Result<()> {
        if m.n() != self.n() {
            return domain(format!("matching is over {} agents, profile has {}", m.n(), self.n()));
        }
        for p in m.pairs() {
            if !self.acceptable(p.lo(), p.hi()) {
                return domain(format!(
                    "`{}` and `{}` are not mutually acceptable",
                    self.name(p.lo()),
                    self.name(p.hi())
                ));
            }
        }
        Ok(())
    }

    fn blocks(&self, m: &Matching, x: AgentId, y: AgentId) -> bool {
        self.prefers(x, y, m.partner(x)) && self.prefers(y, x, m.partner(y))
    }

    /// Whether `pair` blocks `m`.
    pub fn is_blocking(&self, m: &Matching, pair: Pair) -> Result<bool> {
        let (x, y) = (pair.lo(), pair.hi());
        if !self.acceptable(x, y) {
            return domain(format!(
                "`{}` and `{}` are not mutually acceptable",
                self.name(x),
                self.name(y)
            ));
        }
        if m.partner(x) == Some(y) {
            return domain(format!("`{}` and `{}` are matched together", self.name(x), self.name(y)));
        }
        Ok(self.blocks(m, x, y))
    }

    /// All pairs blocking `m`, in increasing order.
    pub fn blocking_pairs(&self, m: &Matching) -> Vec<Pair> {
        self.edges()
            .into_iter()
            .filter(|p| m.partner(p.lo()) != Some(p.hi()) && self.blocks(m, p.lo(), p.hi()))
            .collect()
    }

    pub fn is_stable(&self, m: &Matching) -> bool {
        self.agents().all(|x| {
            self.index[x.0]
                .iter()
                .all(|&(y, _)| y < x || m.partner(x) == Some(y) || !self.blocks(m, x, y))
        })
    }

    pub fn is_perfect(&self, m: &Matching) -> bool {
        self.agents().all(|a| m.partner(a).is_some())
    }

    /// Cost an unmatched agent contributes under `semantics`.
    pub fn unmatched_cost(&self, a: AgentId, semantics: CostSemantics) -> usize {
        match semantics {
            CostSemantics::ListLength => self.degree(a),
            CostSemantics::Zero => 0,
            CostSemantics::Constant(c) => c,
        }
    }

    pub fn egalitarian_cost(&self, m: &Matching, semantics: CostSemantics) -> usize {
        self.agents()
            .map(|a| match m.partner(a) {
                Some(b) => self.rank_of(a, b),
                None => self.unmatched_cost(a, semantics),
            })
            .sum()
    }

    /// Agents involved in at least one blocking pair, in increasing order.
    pub fn blocking_agents(&self, m: &Matching) -> Vec<AgentId> {
        let set: BTreeSet<AgentId> = self.blocking_pairs(m).into_iter().flat_map(Pair::endpoints).collect();
        set.into_iter().collect()
    }
}

/// A set of disjoint pairs over `n` agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    mate: Vec<Option<AgentId>>,
    pairs: Vec<Pair>,
}

impl Matching {
    pub fn empty(n: usize) -> Matching {
        Matching { mate: vec![None; n], pairs: Vec::new() }
    }

    /// Builds a matching; fails if an agent is out of range or occurs twice.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = Pair>) -> Result<Matching> {
        let mut mate = vec![None; n];
        let mut list = Vec::new();
        for p in pairs {
            for a in p.endpoints() {
                if a.0 >= n {
                    return domain(format!("agent id {} out of range", a.0));
                }
                if mate[a.0].is_some() {
                    return domain(format!("agent id {} occurs in two pairs", a.0));
                }
            }
            mate[p.lo().0] = Some(p.hi());
            mate[p.hi().0] = Some(p.lo());
            list.push(p);
        }
        list.sort();
        Ok(Matching { mate, pairs: list })
    }

    /// Builds a matching from a partner table that must be symmetric.
    pub fn from_mates(mate: Vec<Option<AgentId>>) -> Matching {
        let mut pairs = Vec::new();
        for (i, m) in mate.iter().enumerate() {
            if let Some(j) = *m {
                assert_eq!(mate[j.0], Some(AgentId(i)), "partner table is not symmetric");
                if i < j.0 {
                    pairs.push(Pair::new(AgentId(i), j));
                }
            }
        }
        Matching { mate, pairs }
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    pub fn partner(&self, a: AgentId) -> Option<AgentId> {
        self.mate[a.0]
    }

    pub fn is_matched(&self, a: AgentId) -> bool {
        self.mate[a.0].is_some()
    }

    /// Pairs in increasing order.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.mate[p.lo().0] == Some(p.hi())
    }
}

impl PartialOrd for Matching {
    fn partial_cmp(&self, other: &Matching) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the sorted pair lists.
impl Ord for Matching {
    fn cmp(&self, other: &Matching) -> Ordering {
        self.pairs.cmp(&other.pairs).then(self.mate.len().cmp(&other.mate.len()))
    }
}

/// A matching together with its cost, ordered by cost first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Solution {
    pub cost: usize,
    pub matching: Matching,
}
