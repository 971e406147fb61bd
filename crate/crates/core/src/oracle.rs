//! Ground truth by exhaustive search over all matchings of the
//! acceptability graph.
//!
//! The search decides agents one at a time (unmatched, or matched to a still
//! undecided neighbour) and checks every pair as soon as both endpoints are
//! decided. Pruning only discards partial matchings whose completions all
//! violate the requested bound, so results equal plain enumeration.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{AgentId, CostSemantics, Matching, Pair, Profile, Solution};

/// Size limits beyond which the exhaustive oracles refuse to run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_agents: usize,
    pub max_edges: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_agents: 12, max_edges: 66 }
    }
}

impl OracleLimits {
    fn check(&self, profile: &Profile) -> Result<()> {
        let edges = profile.edges().len();
        if profile.n() > self.max_agents || edges > self.max_edges {
            return Err(Error::Capacity(format!(
                "oracle limited to {} agents and {} edges, instance has {} and {}",
                self.max_agents,
                self.max_edges,
                profile.n(),
                edges
            )));
        }
        Ok(())
    }
}

/// Everything the oracle knows about a small instance.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub all_stable: Vec<Matching>,
    pub opt_list_length: Option<Solution>,
    pub opt_zero: Option<Solution>,
    pub min_bp: (Matching, usize),
    pub min_ba: (Matching, usize),
}

pub fn oracle_report(profile: &Profile, limits: OracleLimits) -> Result<OracleReport> {
    limits.check(profile)?;
    let all_stable = all_stable_matchings_with(profile, limits)?;
    let best = |s: CostSemantics| {
        all_stable
            .iter()
            .map(|m| Solution { cost: profile.egalitarian_cost(m, s), matching: m.clone() })
            .min()
    };
    Ok(OracleReport {
        opt_list_length: best(CostSemantics::ListLength),
        opt_zero: best(CostSemantics::Zero),
        min_bp: min_bp_brute_with(profile, limits)?,
        min_ba: min_ba_brute_with(profile, limits)?,
        all_stable,
    })
}

pub fn all_stable_matchings(profile: &Profile) -> Result<Vec<Matching>> {
    all_stable_matchings_with(profile, OracleLimits::default())
}

/// Every stable matching, in increasing lexicographic order.
pub fn all_stable_matchings_with(profile: &Profile, limits: OracleLimits) -> Result<Vec<Matching>> {
    limits.check(profile)?;
    let mut out = Vec::new();
    let mut search = Search::new(profile);
    search.bp_limit = 0;
    search.run(|leaf, _| {
        out.push(leaf.matching());
        true
    })?;
    out.sort();
    Ok(out)
}

pub fn opt_egal_brute(profile: &Profile, semantics: CostSemantics) -> Result<Option<Solution>> {
    opt_egal_brute_with(profile, semantics, OracleLimits::default())
}

/// Minimum-cost stable matching; ties go to the lexicographically smallest.
pub fn opt_egal_brute_with(
    profile: &Profile,
    semantics: CostSemantics,
    limits: OracleLimits,
) -> Result<Option<Solution>> {
    limits.check(profile)?;
    let semantics = semantics.validate()?;
    Ok(all_stable_matchings_with(profile, limits)?
        .into_iter()
        .map(|m| Solution { cost: profile.egalitarian_cost(&m, semantics), matching: m })
        .min())
}

pub fn min_bp_brute(profile: &Profile) -> Result<(Matching, usize)> {
    min_bp_brute_with(profile, OracleLimits::default())
}

/// A matching with the fewest blocking pairs.
pub fn min_bp_brute_with(profile: &Profile, limits: OracleLimits) -> Result<(Matching, usize)> {
    limits.check(profile)?;
    Ok(fewest(profile, Measure::Pairs, usize::MAX, None)?.expect("the empty matching always qualifies"))
}

pub fn min_ba_brute(profile: &Profile) -> Result<(Matching, usize)> {
    min_ba_brute_with(profile, OracleLimits::default())
}

/// A matching with the fewest blocking agents.
pub fn min_ba_brute_with(profile: &Profile, limits: OracleLimits) -> Result<(Matching, usize)> {
    limits.check(profile)?;
    Ok(fewest(profile, Measure::Agents, usize::MAX, None)?.expect("the empty matching always qualifies"))
}

/// A stable matching of cost at most `bound`, found by pruned search with no
/// agent cap. Fails with a capacity error after `node_budget` search nodes.
pub fn stable_within(
    profile: &Profile,
    semantics: CostSemantics,
    bound: usize,
    node_budget: u64,
) -> Result<Option<Solution>> {
    let semantics = semantics.validate()?;
    let mut search = Search::new(profile);
    search.bp_limit = 0;
    search.cost = Some((semantics, bound));
    search.node_budget = node_budget;
    let mut found = None;
    search.run(|leaf, _| {
        found = Some(Solution { cost: leaf.cost, matching: leaf.matching() });
        false
    })?;
    Ok(found)
}

/// A matching with at most `bound` blocking pairs, or `None`; uncapped, with
/// a search-node budget.
pub fn matching_with_bp_at_most(profile: &Profile, bound: usize, node_budget: u64) -> Result<Option<(Matching, usize)>> {
    fewest(profile, Measure::Pairs, bound, Some(node_budget))
}

/// A matching with at most `bound` blocking agents, or `None`.
pub fn matching_with_ba_at_most(profile: &Profile, bound: usize, node_budget: u64) -> Result<Option<(Matching, usize)>> {
    fewest(profile, Measure::Agents, bound, Some(node_budget))
}

#[derive(Copy, Clone)]
enum Measure {
    Pairs,
    Agents,
}

// Minimizes the measure among matchings whose value is at most `bound`.
fn fewest(profile: &Profile, measure: Measure, bound: usize, budget: Option<u64>) -> Result<Option<(Matching, usize)>> {
    let mut search = Search::new(profile);
    match measure {
        Measure::Pairs => search.bp_limit = bound,
        Measure::Agents => search.ba_limit = bound,
    }
    if let Some(b) = budget {
        search.node_budget = b;
    }
    let mut best: Option<(Matching, usize)> = None;
    search.run(|leaf, s| {
        let value = match measure {
            Measure::Pairs => leaf.bp,
            Measure::Agents => leaf.ba,
        };
        best = Some((leaf.matching(), value));
        if value == 0 {
            return false;
        }
        match measure {
            Measure::Pairs => s.bp_limit = value - 1,
            Measure::Agents => s.ba_limit = value - 1,
        }
        true
    })?;
    Ok(best)
}

/// A completed assignment reached by the search.
pub(crate) struct Leaf<'a> {
    mate: &'a [Option<AgentId>],
    pub bp: usize,
    pub ba: usize,
    pub cost: usize,
}

impl Leaf<'_> {
    pub fn matching(&self) -> Matching {
        Matching::from_mates(self.mate.to_vec())
    }
}

/// Limits that the leaf callback may tighten while the search runs.
pub(crate) struct Bounds {
    pub bp_limit: usize,
    pub ba_limit: usize,
}

pub(crate) struct Search<'a> {
    profile: &'a Profile,
    order: Vec<AgentId>,
    pub bp_limit: usize,
    pub ba_limit: usize,
    pub cost: Option<(CostSemantics, usize)>,
    /// Pairs that must block and may not be matched; all other pairs must
    /// not block.
    pub exact: Option<&'a HashSet<Pair>>,
    pub node_budget: u64,
}

struct State {
    mate: Vec<Option<AgentId>>,
    decided: Vec<bool>,
    bp: usize,
    ba: usize,
    blocking_count: Vec<u32>,
    cost: usize,
    violations: usize,
    nodes: u64,
    stop: bool,
}

impl<'a> Search<'a> {
    pub fn new(profile: &'a Profile) -> Search<'a> {
        Search {
            profile,
            order: bfs_order(profile),
            bp_limit: usize::MAX,
            ba_limit: usize::MAX,
            cost: None,
            exact: None,
            node_budget: u64::MAX,
        }
    }

    /// Visits admissible leaves in a fixed order until the callback returns
    /// false. The callback may tighten the blocking limits.
    pub fn run<F>(&mut self, mut visit: F) -> Result<()>
    where
        F: FnMut(&Leaf<'_>, &mut Bounds) -> bool,
    {
        let n = self.profile.n();
        let mut st = State {
            mate: vec![None; n],
            decided: vec![false; n],
            bp: 0,
            ba: 0,
            blocking_count: vec![0; n],
            cost: 0,
            violations: 0,
            nodes: 0,
            stop: false,
        };
        let mut bounds = Bounds { bp_limit: self.bp_limit, ba_limit: self.ba_limit };
        self.step(0, &mut st, &mut bounds, &mut visit)?;
        self.bp_limit = bounds.bp_limit;
        self.ba_limit = bounds.ba_limit;
        Ok(())
    }

    fn step<F>(&self, mut pos: usize, st: &mut State, bounds: &mut Bounds, visit: &mut F) -> Result<()>
    where
        F: FnMut(&Leaf<'_>, &mut Bounds) -> bool,
    {
        st.nodes += 1;
        if st.nodes > self.node_budget {
            return Err(Error::Capacity(format!("search exceeded {} nodes", self.node_budget)));
        }
        while pos < self.order.len() && st.decided[self.order[pos].0] {
            pos += 1;
        }
        if pos == self.order.len() {
            let leaf = Leaf { mate: &st.mate, bp: st.bp, ba: st.ba, cost: st.cost };
            if !visit(&leaf, bounds) {
                st.stop = true;
            }
            return Ok(());
        }
        let x = self.order[pos];
        let p = self.profile;
        for g in p.list(x).groups() {
            for &y in g {
                if st.stop {
                    return Ok(());
                }
                if st.decided[y.0] || self.exact.is_some_and(|b| b.contains(&Pair::new(x, y))) {
                    continue;
                }
                let mark = self.decide(st, x, Some(y));
                let mark2 = self.decide(st, y, Some(x));
                if self.admissible(st, bounds) {
                    self.step(pos + 1, st, bounds, visit)?;
                }
                self.undo(st, y, mark2);
                self.undo(st, x, mark);
            }
        }
        if st.stop {
            return Ok(());
        }
        let mark = self.decide(st, x, None);
        if self.admissible(st, bounds) {
            self.step(pos + 1, st, bounds, visit)?;
        }
        self.undo(st, x, mark);
        Ok(())
    }

    fn admissible(&self, st: &State, bounds: &Bounds) -> bool {
        st.bp <= bounds.bp_limit
            && st.ba <= bounds.ba_limit
            && self.cost.is_none_or(|(_, bound)| st.cost <= bound)
            && st.violations == 0
    }

    // Fixes the fate of `x` and accounts for every pair {x, z} with z
    // already decided. Returns what is needed to undo.
    fn decide(&self, st: &mut State, x: AgentId, mate: Option<AgentId>) -> Undo {
        let p = self.profile;
        st.mate[x.0] = mate;
        st.decided[x.0] = true;
        let added_cost = match (mate, self.cost) {
            (_, None) => 0,
            (Some(m), Some(_)) => p.rank_of(x, m),
            (None, Some((s, _))) => p.unmatched_cost(x, s),
        };
        st.cost += added_cost;
        let mut undo = Undo { cost: added_cost, pairs: Vec::new(), violations: 0 };
        for z in p.neighbors(x) {
            if !st.decided[z.0] || mate == Some(z) {
                continue;
            }
            let blocks = p.prefers(x, z, mate) && p.prefers(z, x, st.mate[z.0]);
            if let Some(b) = self.exact {
                if blocks != b.contains(&Pair::new(x, z)) {
                    undo.violations += 1;
                }
                continue;
            }
            if blocks {
                st.bp += 1;
                for a in [x, z] {
                    st.blocking_count[a.0] += 1;
                    if st.blocking_count[a.0] == 1 {
                        st.ba += 1;
                    }
                }
                undo.pairs.push(z);
            }
        }
        st.violations += undo.violations;
        undo
    }

    fn undo(&self, st: &mut State, x: AgentId, u: Undo) {
        st.violations -= u.violations;
        for z in u.pairs {
            st.bp -= 1;
            for a in [x, z] {
                st.blocking_count[a.0] -= 1;
                if st.blocking_count[a.0] == 0 {
                    st.ba -= 1;
                }
            }
        }
        st.cost -= u.cost;
        st.mate[x.0] = None;
        st.decided[x.0] = false;
    }
}

struct Undo {
    cost: usize,
    pairs: Vec<AgentId>,
    violations: usize,
}

// Breadth-first order over the acceptability graph so that pairs become
// decided early; components are started from their smallest agent.
fn bfs_order(profile: &Profile) -> Vec<AgentId> {
    let n = profile.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([AgentId(s)]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for y in profile.neighbors(x) {
                if !seen[y.0] {
                    seen[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}
