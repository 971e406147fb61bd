//! Egalitarian stable roommates without ties: a kernel whose size depends
//! only on the budget, and an exact branching solver.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{AgentId, Matching, Pair, PreferenceList, Profile, Solution};
use crate::phase1::{phase1_no_instance, run_phase1, Phase1Result};

/// Where a kernel agent comes from.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Original(AgentId),
    /// Dummy number `i`, counting from 1.
    Dummy(usize),
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub profile: Profile,
    pub gamma_hat: usize,
    /// Kernel ids of the dummy agents, `d1` first.
    pub dummies: Vec<AgentId>,
    /// Origin of every kernel agent, indexed by kernel id.
    pub origin: Vec<Origin>,
    /// Ordered pairs `(x, y)` of original agents where `x` survives and `y`
    /// sits beyond the reduced budget in `x`'s list.
    pub over_budget: BTreeSet<(AgentId, AgentId)>,
}

#[derive(Clone, Debug)]
pub enum KernelOutcome {
    /// The budget is provably insufficient.
    TrivialNo,
    Kernel(Box<Kernel>),
}

// Budget left after paying for fixed pairs and agents that stay unmatched.
fn residual_budget(profile: &Profile, p1: &Phase1Result, gamma: usize) -> Option<usize> {
    let fixed: usize = p1.fixed_pairs.iter().map(|&p| profile.pair_cost(p)).sum();
    let unmatched: usize = p1.marked_agents.iter().map(|&x| profile.degree(x)).sum();
    gamma.checked_sub(fixed + unmatched)
}

/// Shrinks a tie-free instance to at most `2γ̂` original agents plus
/// `2⌈γ̂/2⌉` dummies. Original agents keep at most `γ̂ + 1` entries.
pub fn kernelize(profile: &Profile, gamma: usize) -> Result<KernelOutcome> {
    let p1 = run_phase1(profile)?;
    if phase1_no_instance(profile, &p1, gamma) {
        return Ok(KernelOutcome::TrivialNo);
    }
    let Some(gh) = residual_budget(profile, &p1, gamma) else {
        return Ok(KernelOutcome::TrivialNo);
    };
    let fixed = p1.fixed_agents();
    let rest: Vec<AgentId> = p1.unmarked_agents.iter().copied().filter(|x| !fixed.contains(x)).collect();
    // Every surviving agent is matched inside `rest` by every stable
    // matching, and no such pair is a pair of mutual first choices, so each
    // pair costs at least one.
    if rest.len() > 2 * gh {
        return Ok(KernelOutcome::TrivialNo);
    }

    let mut over_budget = BTreeSet::new();
    for &x in &rest {
        for y in profile.list(x).agents() {
            if profile.rank_of(x, y) > gh {
                over_budget.insert((x, y));
            }
        }
    }

    let k = gh.div_ceil(2);
    let dummy_count = 2 * k;
    let mut kid = vec![None; profile.n()];
    for (i, &x) in rest.iter().enumerate() {
        kid[x.0] = Some(AgentId(i));
    }
    let dummy_id = |j: usize| AgentId(rest.len() + j - 1);
    let mut dummy_lists: Vec<Vec<AgentId>> = (1..=dummy_count)
        .map(|j| vec![dummy_id(if j <= k { j + k } else { j - k })])
        .collect();
    let mut lists = Vec::with_capacity(rest.len() + dummy_count);
    for &a in &rest {
        let mut kept = Vec::new();
        let mut used = 0;
        let mut originals = 0;
        for x in profile.list(a).agents().take(gh + 1) {
            let gone = fixed.contains(&x) || p1.marked_agents.contains(&x) || profile.rank_of(x, a) > gh;
            if gone {
                used += 1;
                // Only reachable when every entry is gone.
                if used > dummy_count {
                    return Ok(KernelOutcome::TrivialNo);
                }
                kept.push(dummy_id(used));
                dummy_lists[used - 1].push(kid[a.0].expect("surviving agent"));
            } else {
                originals += 1;
                kept.push(kid[x.0].expect("kept entries survive"));
            }
        }
        // An agent left without original partners within budget cannot be
        // matched cheaply enough, yet every stable matching matches it.
        if originals == 0 {
            return Ok(KernelOutcome::TrivialNo);
        }
        lists.push(PreferenceList::strict(kept));
    }
    lists.extend(dummy_lists.into_iter().map(PreferenceList::strict));

    let mut names: Vec<String> = rest.iter().map(|&x| profile.name(x).to_string()).collect();
    let taken: BTreeSet<&str> = profile.names().iter().map(String::as_str).collect();
    let mut prefix = String::from("d");
    while (1..=dummy_count).any(|j| taken.contains(format!("{prefix}{j}").as_str())) {
        prefix.insert(0, '_');
    }
    names.extend((1..=dummy_count).map(|j| format!("{prefix}{j}")));

    let mut origin: Vec<Origin> = rest.iter().map(|&x| Origin::Original(x)).collect();
    origin.extend((1..=dummy_count).map(Origin::Dummy));
    let kernel_profile = Profile::new(names, lists)?;
    Ok(KernelOutcome::Kernel(Box::new(Kernel {
        profile: kernel_profile,
        gamma_hat: gh,
        dummies: (1..=dummy_count).map(dummy_id).collect(),
        origin,
        over_budget,
    })))
}

/// One branching step: `u` gets partner `v` with the given combined rank
/// while `remaining` budget was available.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BranchStep {
    pub u: AgentId,
    pub v: AgentId,
    pub pair_cost: usize,
    pub remaining: usize,
}

/// Minimum-cost stable matching of cost at most `gamma`, if any.
pub fn solve_egal_noties(profile: &Profile, gamma: usize) -> Result<Option<Solution>> {
    solve_egal_noties_observed(profile, gamma, |_| {})
}

/// Like [`solve_egal_noties`], reporting every explored branch.
pub fn solve_egal_noties_observed(
    profile: &Profile,
    gamma: usize,
    mut observe: impl FnMut(BranchStep),
) -> Result<Option<Solution>> {
    let p1 = run_phase1(profile)?;
    if phase1_no_instance(profile, &p1, gamma) {
        return Ok(None);
    }
    let Some(budget) = residual_budget(profile, &p1, gamma) else {
        return Ok(None);
    };
    let fixed = p1.fixed_agents();
    let mut mate = vec![None; profile.n()];
    for p in &p1.fixed_pairs {
        mate[p.lo().0] = Some(p.hi());
        mate[p.hi().0] = Some(p.lo());
    }
    let rest: Vec<AgentId> = p1.unmarked_agents.iter().copied().filter(|x| !fixed.contains(x)).collect();
    let mut ctx = Branching { profile, p1: &p1, rest: &rest, gamma, best: None, observe: &mut observe };
    ctx.branch(&mut mate, budget);
    Ok(ctx.best)
}

struct Branching<'a, F> {
    profile: &'a Profile,
    p1: &'a Phase1Result,
    rest: &'a [AgentId],
    gamma: usize,
    best: Option<Solution>,
    observe: &'a mut F,
}

impl<F: FnMut(BranchStep)> Branching<'_, F> {
    fn branch(&mut self, mate: &mut Vec<Option<AgentId>>, remaining: usize) {
        let p = self.profile;
        let Some(&u) = self.rest.iter().find(|x| mate[x.0].is_none()) else {
            let m = Matching::from_mates(mate.clone());
            let cost = p.egalitarian_cost(&m, crate::model::CostSemantics::ListLength);
            if cost <= self.gamma && p.is_stable(&m) {
                let cand = Solution { cost, matching: m };
                if self.best.as_ref().is_none_or(|b| cand < *b) {
                    self.best = Some(cand);
                }
            }
            return;
        };
        let mut options: Vec<(usize, AgentId)> = self
            .rest
            .iter()
            .copied()
            .filter(|&v| v != u && mate[v.0].is_none() && p.acceptable(u, v) && !self.p1.is_marked(u, v))
            .map(|v| (p.pair_cost(Pair::new(u, v)), v))
            .filter(|&(c, _)| c <= remaining)
            .collect();
        options.sort();
        for (c, v) in options {
            if let Some(b) = &self.best {
                if self.gamma - remaining + c > b.cost {
                    continue;
                }
            }
            (self.observe)(BranchStep { u, v, pair_cost: c, remaining });
            mate[u.0] = Some(v);
            mate[v.0] = Some(u);
            self.branch(mate, remaining - c);
            mate[u.0] = None;
            mate[v.0] = None;
        }
    }
}
