//! Egalitarian stable roommates with ties and incomplete lists.
//!
//! The solver pads the instance with dummy agents so that only perfect
//! stable matchings need to be found, then separates the edges of a
//! hypothetical solution from the edges that could block it: cheap edges
//! are kept, costly edges are filtered by a guessed set `E'`, and critical
//! edges by a guessed agent set `V'`. What survives contains no two edges
//! blocking each other, so a minimum-cost perfect matching on it is stable.
//!
//! Unmatched agents cost nothing under [`CostSemantics::Zero`]; that
//! variant is NP-hard already for budget 0 and has no solver here. Use the
//! exhaustive oracle for it.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::coverfree::{self, build_family};
use crate::error::{domain, Result};
use crate::matching_engine::{min_cost_perfect_matching, WeightedGraph};
use crate::model::{AgentId, CostSemantics, Matching, Pair, PreferenceList, Profile, Solution};

/// How the separating sets `E'` and `V'` are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyStrategy {
    /// Every set of costly edges that could be the costly part of a
    /// solution, each with the matching agent set. Exact.
    Exhaustive,
    /// Random cover-free families with `trials` members each. A solution is
    /// found with high probability once `trials` is large enough.
    Randomized { trials: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TiesOptions {
    pub strategy: FamilyStrategy,
    /// Keep searching after the first matching within budget and return
    /// the cheapest one.
    pub optimal: bool,
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
}

impl Default for TiesOptions {
    fn default() -> Self {
        TiesOptions { strategy: FamilyStrategy::Exhaustive, optimal: false, jobs: 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeClassification {
    /// Pairs of mutual first choices.
    pub zero_edges: Vec<Pair>,
    /// Pairs with combined rank between 1 and `γ`.
    pub costly_edges: Vec<Pair>,
    /// Pairs too expensive to appear in any solution.
    pub discarded: Vec<Pair>,
}

pub fn classify_edges(profile: &Profile, gamma: usize) -> EdgeClassification {
    let mut out = EdgeClassification::default();
    for e in profile.edges() {
        match profile.pair_cost(e) {
            0 => out.zero_edges.push(e),
            c if c <= gamma => out.costly_edges.push(e),
            _ => out.discarded.push(e),
        }
    }
    out
}

/// Whether the costly edge `e` is critical for its endpoint `x`: some tie
/// breaking of `x`'s list puts the other endpoint beyond rank `γ`. Zero
/// edges are never critical.
pub fn is_critical(profile: &Profile, gamma: usize, e: Pair, x: AgentId) -> bool {
    profile.pair_cost(e) > 0 && profile.weak_count(x, e.other(x)) > gamma
}

/// Blocking pairs `(u, u')` with `u ∈ e`, `u' ∈ f` that arise when both
/// edges are matched. Overlapping edges induce none.
pub fn induced_blocking_pairs(profile: &Profile, e: Pair, f: Pair) -> Vec<(AgentId, AgentId)> {
    let mut out = Vec::new();
    if !e.is_disjoint(f) {
        return out;
    }
    for u in e.endpoints() {
        for w in f.endpoints() {
            if profile.acceptable(u, w)
                && profile.prefers(u, w, Some(e.other(u)))
                && profile.prefers(w, u, Some(f.other(w)))
            {
                out.push((u, w));
            }
        }
    }
    out
}

/// Edges within budget, outside `m`, that some edge of `m` blocks at an
/// endpoint for which they are harmless.
pub fn harmlessly_blocked(profile: &Profile, gamma: usize, m: &Matching) -> BTreeSet<Pair> {
    let mut out = BTreeSet::new();
    for f in within_budget(profile, gamma) {
        if m.contains(f) {
            continue;
        }
        let hit = m.pairs().iter().any(|&e| {
            induced_blocking_pairs(profile, e, f).iter().any(|&(_, w)| !is_critical(profile, gamma, f, w))
        });
        if hit {
            out.insert(f);
        }
    }
    out
}

/// Agents `u'` on an edge within budget outside `m` that would form a
/// blocking pair with an endpoint of an edge of `m`.
pub fn culprits(profile: &Profile, gamma: usize, m: &Matching) -> BTreeSet<AgentId> {
    let mut out = BTreeSet::new();
    for f in within_budget(profile, gamma) {
        if m.contains(f) {
            continue;
        }
        for &e in m.pairs() {
            out.extend(induced_blocking_pairs(profile, e, f).into_iter().map(|(_, w)| w));
        }
    }
    out
}

fn within_budget(profile: &Profile, gamma: usize) -> impl Iterator<Item = Pair> + '_ {
    profile.edges().into_iter().filter(move |&e| profile.pair_cost(e) <= gamma)
}

#[derive(Clone, Debug)]
pub struct PerfectnessReduction {
    pub profile: Profile,
    /// The added agents; original agents keep their ids.
    pub dummies: Vec<AgentId>,
}

/// Adds up to `γ` dummy agents so that stable matchings of cost at most
/// `γ` correspond to perfect stable matchings of the same cost.
///
/// Agents with at most `γ` acceptable partners get all dummies appended as
/// one tied group; dummies accept each other and those agents at rank 0.
pub fn perfectness_reduction(profile: &Profile, gamma: usize) -> Result<PerfectnessReduction> {
    let n = profile.n();
    let short: Vec<AgentId> = profile.agents().filter(|&a| profile.degree(a) <= gamma).collect();
    // Unmatched agents number at most γ and share the parity of n.
    let mut k = if gamma % 2 == n % 2 { gamma } else { gamma.saturating_sub(1) };
    if k == 1 && short.is_empty() {
        // A lone dummy without partners; no agent may stay unmatched anyway.
        k = 0;
    }
    if k == 0 {
        return Ok(PerfectnessReduction { profile: profile.clone(), dummies: Vec::new() });
    }
    let dummies: Vec<AgentId> = (n..n + k).map(AgentId).collect();
    let mut lists: Vec<PreferenceList> = profile.lists().to_vec();
    for &b in &short {
        let mut groups = lists[b.0].groups().to_vec();
        groups.push(dummies.clone());
        lists[b.0] = PreferenceList::new(groups);
    }
    for &d in &dummies {
        let group: Vec<AgentId> = dummies.iter().copied().filter(|&x| x != d).chain(short.iter().copied()).collect();
        lists.push(PreferenceList::new(vec![group]));
    }
    let mut names = profile.names().to_vec();
    names.extend(fresh_names(profile, "a", k));
    Ok(PerfectnessReduction { profile: Profile::new(names, lists)?, dummies })
}

// `prefix1..prefixk`, with underscores prepended until no name clashes.
fn fresh_names(profile: &Profile, base: &str, k: usize) -> Vec<String> {
    let taken: BTreeSet<&str> = profile.names().iter().map(String::as_str).collect();
    let mut prefix = base.to_string();
    while (1..=k).any(|j| taken.contains(format!("{prefix}{j}").as_str())) {
        prefix.insert(0, '_');
    }
    (1..=k).map(|j| format!("{prefix}{j}")).collect()
}

/// Which costly edges and which agents a separation step keeps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeparationContext {
    pub e_prime: BTreeSet<Pair>,
    pub v_prime: BTreeSet<AgentId>,
}

/// Edges left after one round of the four reduction rules for the given
/// separation.
pub fn apply_rules(profile: &Profile, gamma: usize, ctx: &SeparationContext) -> Vec<Pair> {
    let inst = TieInstance::from_profile(profile);
    let alg = Separator::new(&inst, gamma);
    let e_prime: Vec<bool> = alg.edges.iter().map(|&(u, v, _)| ctx.e_prime.contains(&pair(u, v))).collect();
    let mut v_prime = vec![false; inst.n];
    for a in &ctx.v_prime {
        v_prime[a.0] = true;
    }
    let alive = alg.reduce(&e_prime, &v_prime);
    alg.edges.iter().zip(alive).filter(|(_, keep)| *keep).map(|(&(u, v, _), _)| pair(u, v)).collect()
}

fn pair(u: usize, v: usize) -> Pair {
    Pair::new(AgentId(u), AgentId(v))
}

/// Stable matching of cost at most `gamma` (unmatched agents pay their
/// list length), or `None`. With `optimal` set the cheapest such matching.
pub fn solve_egal_ties(profile: &Profile, gamma: usize, opts: &TiesOptions) -> Result<Option<Solution>> {
    let reduced = perfectness_reduction(profile, gamma)?;
    let inst = TieInstance::from_profile(&reduced.profile);
    let Some((_, pairs)) = solve_perfect(&inst, gamma, opts)? else {
        return Ok(None);
    };
    let n = profile.n();
    let kept = pairs.into_iter().filter(|&(u, v)| u < n && v < n).map(|(u, v)| pair(u, v));
    let matching = Matching::from_pairs(n, kept)?;
    let cost = profile.egalitarian_cost(&matching, CostSemantics::ListLength);
    assert!(profile.is_stable(&matching) && cost <= gamma, "separation produced an invalid matching");
    Ok(Some(Solution { cost, matching }))
}

/// Cheapest stable matching when every unmatched agent costs `c`, provided
/// its cost is at most `gamma`.
///
/// Guesses the set `A` of unmatched agents (at most `γ / c` of them,
/// pairwise unacceptable), cuts every other agent's list below its best
/// agent in `A`, and asks for a perfect stable matching of the rest within
/// the remaining budget.
pub fn solve_egal_constant(profile: &Profile, gamma: usize, c: usize, opts: &TiesOptions) -> Result<Option<Solution>> {
    if c == 0 {
        return domain("unmatched cost must be at least 1");
    }
    let n = profile.n();
    let full = TieInstance::from_profile(profile);
    let inner = TiesOptions { optimal: true, ..*opts };
    let mut best: Option<Solution> = None;
    for size in 0..=(gamma / c).min(n) {
        if (n - size) % 2 == 1 {
            continue;
        }
        for set in coverfree::subsets_of_size(n, size) {
            if set.iter().any(|&a| set.iter().any(|&b| full.acceptable(a, b))) {
                continue;
            }
            let residual = full.without(&set);
            let budget = gamma - c * size;
            let Some((cost, pairs)) = solve_perfect(&residual.inst, budget, &inner)? else {
                continue;
            };
            let pairs = pairs.into_iter().map(|(u, v)| pair(residual.ids[u], residual.ids[v]));
            let matching = Matching::from_pairs(n, pairs)?;
            let total = cost as usize + c * size;
            debug_assert_eq!(total, profile.egalitarian_cost(&matching, CostSemantics::Constant(c)));
            let cand = Solution { cost: total, matching };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    if let Some(s) = &best {
        assert!(
            profile.is_stable(&s.matching) && s.cost <= gamma,
            "unmatched-set guess produced an invalid matching"
        );
    }
    Ok(best)
}

// Preferences as ranks, so that truncated lists can keep the ranks (and
// tie sizes) of the instance they came from.
#[derive(Clone, Debug)]
struct TieInstance {
    n: usize,
    // rank[u * n + v], or NONE when unacceptable
    rank: Vec<u32>,
    // |{x != v : x ⪰_u v}|
    weak: Vec<u32>,
}

const NONE: u32 = u32::MAX;

struct Residual {
    inst: TieInstance,
    // residual index -> original index
    ids: Vec<usize>,
}

impl TieInstance {
    fn from_profile(p: &Profile) -> TieInstance {
        let n = p.n();
        let mut rank = vec![NONE; n * n];
        let mut weak = vec![0; n * n];
        for u in p.agents() {
            for v in p.list(u).agents() {
                rank[u.0 * n + v.0] = p.rank_of(u, v) as u32;
                weak[u.0 * n + v.0] = p.weak_count(u, v) as u32;
            }
        }
        TieInstance { n, rank, weak }
    }

    fn acceptable(&self, u: usize, v: usize) -> bool {
        self.rank[u * self.n + v] != NONE
    }

    fn rank(&self, u: usize, v: usize) -> u32 {
        self.rank[u * self.n + v]
    }

    fn cost(&self, u: usize, v: usize) -> u64 {
        u64::from(self.rank(u, v)) + u64::from(self.rank(v, u))
    }

    fn critical(&self, gamma: usize, u: usize, v: usize) -> bool {
        self.cost(u, v) > 0 && self.weak[u * self.n + v] as usize > gamma
    }

    // Drops `removed` and, for every other agent, each partner it likes
    // strictly less than its favourite removed agent.
    fn without(&self, removed: &[usize]) -> Residual {
        let ids: Vec<usize> = (0..self.n).filter(|x| !removed.contains(x)).collect();
        let cap: Vec<u32> = (0..self.n)
            .map(|u| removed.iter().filter(|&&a| self.acceptable(u, a)).map(|&a| self.rank(u, a)).min().unwrap_or(NONE))
            .collect();
        let m = ids.len();
        let mut rank = vec![NONE; m * m];
        let mut weak = vec![0; m * m];
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate() {
                if self.acceptable(u, v) && self.rank(u, v) <= cap[u] && self.rank(v, u) <= cap[v] {
                    rank[i * m + j] = self.rank(u, v);
                    weak[i * m + j] = self.weak[u * self.n + v];
                }
            }
        }
        Residual { inst: TieInstance { n: m, rank, weak }, ids }
    }
}

// Edges within budget plus every ordered pair of edges that would block
// each other.
struct Separator<'a> {
    inst: &'a TieInstance,
    gamma: usize,
    edges: Vec<(usize, usize, u64)>,
    costly: Vec<usize>,
    // (i, j, u, w): edges i and j induce the blocking pair {u, w}, u on i
    induced: Vec<(usize, usize, usize, usize)>,
}

impl<'a> Separator<'a> {
    fn new(inst: &'a TieInstance, gamma: usize) -> Separator<'a> {
        let n = inst.n;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if inst.acceptable(u, v) && inst.cost(u, v) <= gamma as u64 {
                    edges.push((u, v, inst.cost(u, v)));
                }
            }
        }
        let costly = (0..edges.len()).filter(|&i| edges[i].2 > 0).collect();
        let mut induced = Vec::new();
        let other = |e: (usize, usize, u64), x: usize| if e.0 == x { e.1 } else { e.0 };
        for (i, &e) in edges.iter().enumerate() {
            for (j, &f) in edges.iter().enumerate() {
                if i == j || e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1 {
                    continue;
                }
                for u in [e.0, e.1] {
                    for w in [f.0, f.1] {
                        if inst.acceptable(u, w)
                            && inst.rank(u, w) < inst.rank(u, other(e, u))
                            && inst.rank(w, u) < inst.rank(w, other(f, w))
                        {
                            induced.push((i, j, u, w));
                        }
                    }
                }
            }
        }
        Separator { inst, gamma, edges, costly, induced }
    }

    fn critical_at(&self, i: usize, x: usize) -> bool {
        let (u, v, _) = self.edges[i];
        self.inst.critical(self.gamma, x, if x == u { v } else { u })
    }

    /// Applies the four rules; `e_prime` is indexed like `edges`.
    fn reduce(&self, e_prime: &[bool], v_prime: &[bool]) -> Vec<bool> {
        // Rule 1: costly edges outside E' go.
        let mut alive: Vec<bool> = (0..self.edges.len()).map(|i| self.edges[i].2 == 0 || e_prime[i]).collect();
        // Rule 2: edges of E' harmlessly blocking each other go. The
        // condition only looks at E', so one pass reaches the fixpoint.
        let mut harmless_hits = HashSet::new();
        for &(i, j, _, w) in &self.induced {
            if e_prime[i] && e_prime[j] && !self.critical_at(j, w) {
                harmless_hits.insert((i, j));
            }
        }
        for &(i, j) in &harmless_hits {
            if harmless_hits.contains(&(j, i)) {
                alive[i] = false;
                alive[j] = false;
            }
        }
        // Rule 3: agents outside V' keep no edge critical for them.
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            if alive[i] && ((!v_prime[u] && self.critical_at(i, u)) || (!v_prime[v] && self.critical_at(i, v))) {
                alive[i] = false;
            }
        }
        // Rule 4: an edge blocked at an endpoint of an edge critical there
        // goes. Evaluated against the edges present before the rule.
        let snapshot = alive.clone();
        for &(i, j, u, _) in &self.induced {
            if snapshot[i] && snapshot[j] && self.critical_at(i, u) {
                alive[j] = false;
            }
        }
        alive
    }

    fn solve(&self, alive: &[bool]) -> Option<(u64, Vec<(usize, usize)>)> {
        let kept = self.edges.iter().zip(alive).filter(|(_, &a)| a).map(|(&e, _)| e);
        let g = WeightedGraph::new(self.inst.n, kept).expect("edges are simple");
        let (pairs, cost) = min_cost_perfect_matching(&g)?;
        (cost <= self.gamma as u64).then_some((cost, pairs))
    }

    fn e_prime_mask(&self, chosen: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.edges.len()];
        for &i in chosen {
            mask[i] = true;
        }
        mask
    }
}

type Found = (u64, Vec<(usize, usize)>);

// Perfect stable matching of cost at most `gamma`, as internal pairs.
fn solve_perfect(inst: &TieInstance, gamma: usize, opts: &TiesOptions) -> Result<Option<Found>> {
    if inst.n % 2 == 1 {
        return Ok(None);
    }
    let sep = Separator::new(inst, gamma);
    let n = inst.n;
    match opts.strategy {
        FamilyStrategy::Exhaustive => {
            let mut tasks = Vec::new();
            choose_costly(&sep, 0, gamma as u64, &mut vec![false; n], &mut Vec::new(), &mut tasks);
            let eval = |chosen: &Vec<usize>| {
                let mut v_prime = vec![false; n];
                for &i in chosen {
                    let (u, v, _) = sep.edges[i];
                    v_prime[u] |= sep.critical_at(i, u);
                    v_prime[v] |= sep.critical_at(i, v);
                }
                sep.solve(&sep.reduce(&sep.e_prime_mask(chosen), &v_prime))
            };
            run_tasks(&tasks, opts, eval)
        }
        FamilyStrategy::Randomized { trials, seed } => {
            let ne = sep.costly.len();
            let (p2, q2) = clamp_pq(gamma, gamma.pow(3), ne);
            let f2 = build_family(ne, p2, q2, coverfree::Strategy::Randomized { trials, seed })?;
            let (p3, q3) = clamp_pq(2 * gamma, gamma * gamma + 2 * gamma, n);
            let f3 = build_family(n, p3, q3, coverfree::Strategy::Randomized { trials, seed: seed.wrapping_add(1) })?;
            let tasks: Vec<Vec<usize>> = dedup(f2.members)
                .into_iter()
                .map(|m| m.into_iter().map(|k| sep.costly[k]).collect())
                .collect();
            let agent_sets: Vec<Vec<bool>> = dedup(f3.members)
                .into_iter()
                .map(|m| {
                    let mut mask = vec![false; n];
                    for x in m {
                        mask[x] = true;
                    }
                    mask
                })
                .collect();
            let eval = |chosen: &Vec<usize>| {
                let e_prime = sep.e_prime_mask(chosen);
                let mut seen = HashSet::new();
                let mut best: Option<Found> = None;
                for v_prime in &agent_sets {
                    let alive = sep.reduce(&e_prime, v_prime);
                    if seen.contains(&alive) {
                        continue;
                    }
                    let found = sep.solve(&alive);
                    seen.insert(alive);
                    if let Some(found) = found {
                        if !opts.optimal {
                            return Some(found);
                        }
                        if best.as_ref().is_none_or(|b| found < *b) {
                            best = Some(found);
                        }
                    }
                }
                best
            };
            run_tasks(&tasks, opts, eval)
        }
    }
}

fn clamp_pq(p: usize, q: usize, universe: usize) -> (usize, usize) {
    let p = p.min(universe);
    (p, q.min(universe - p))
}

fn dedup(members: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    members.into_iter().filter(|m| seen.insert(m.clone())).collect()
}

// Every set of pairwise disjoint costly edges with total cost within
// `budget`, in lexicographic order of edge indices.
fn choose_costly(
    sep: &Separator<'_>,
    from: usize,
    budget: u64,
    used: &mut Vec<bool>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(chosen.clone());
    for k in from..sep.costly.len() {
        let i = sep.costly[k];
        let (u, v, c) = sep.edges[i];
        if c > budget || used[u] || used[v] {
            continue;
        }
        used[u] = true;
        used[v] = true;
        chosen.push(i);
        choose_costly(sep, k + 1, budget - c, used, chosen, out);
        chosen.pop();
        used[u] = false;
        used[v] = false;
    }
}

fn run_tasks<T, F>(tasks: &[T], opts: &TiesOptions, eval: F) -> Result<Option<Found>>
where
    T: Sync,
    F: Fn(&T) -> Option<Found> + Sync,
{
    if opts.jobs <= 1 {
        return Ok(if opts.optimal { tasks.iter().filter_map(eval).min() } else { tasks.iter().find_map(eval) });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| crate::Error::Invalid(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(|| {
        if opts.optimal {
            tasks.par_iter().filter_map(&eval).min()
        } else {
            tasks.par_iter().find_map_first(&eval)
        }
    }))
}
