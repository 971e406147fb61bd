//! Phase-1 marking for profiles without ties.
//!
//! Each agent proposes to the first agent it has not been rejected by (its
//! first unmarked entry); the receiver then marks every pair with an agent
//! it likes less than the proposer. The procedure repeats until no new pair
//! gets marked.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{AgentId, Pair, Profile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase1Result {
    /// Pairs that occur in no stable matching.
    pub marked: BTreeSet<Pair>,
    pub first_unmarked: Vec<Option<AgentId>>,
    pub last_unmarked: Vec<Option<AgentId>>,
    /// Pairs of mutual first unmarked choices.
    pub fixed_pairs: BTreeSet<Pair>,
    /// Agents whose whole list is marked.
    pub marked_agents: BTreeSet<AgentId>,
    pub unmarked_agents: BTreeSet<AgentId>,
}

impl Phase1Result {
    pub fn is_marked(&self, a: AgentId, b: AgentId) -> bool {
        self.marked.contains(&Pair::new(a, b))
    }

    pub fn first(&self, a: AgentId) -> Option<AgentId> {
        self.first_unmarked[a.0]
    }

    pub fn last(&self, a: AgentId) -> Option<AgentId> {
        self.last_unmarked[a.0]
    }

    /// Agents that belong to a fixed pair.
    pub fn fixed_agents(&self) -> BTreeSet<AgentId> {
        self.fixed_pairs.iter().flat_map(|p| p.endpoints()).collect()
    }
}

pub fn run_phase1(profile: &Profile) -> Result<Phase1Result> {
    let order: Vec<AgentId> = profile.agents().collect();
    run_phase1_in_order(profile, &order)
}

/// Phase 1 with proposers scanned in the given order. The fixpoint does not
/// depend on the order.
pub fn run_phase1_in_order(profile: &Profile, order: &[AgentId]) -> Result<Phase1Result> {
    profile.require_tie_free()?;
    let mut marked = BTreeSet::new();
    loop {
        let mut changed = false;
        for &u in order {
            let Some(w) = profile.list(u).agents().find(|&w| !marked.contains(&Pair::new(u, w))) else {
                continue;
            };
            for v in profile.list(w).agents().skip_while(|&v| v != u).skip(1) {
                changed |= marked.insert(Pair::new(v, w));
            }
        }
        if !changed {
            break;
        }
    }
    let unmarked_of = |x: AgentId| {
        profile.list(x).agents().filter(|&y| !marked.contains(&Pair::new(x, y))).collect::<Vec<_>>()
    };
    let n = profile.n();
    let mut first_unmarked = vec![None; n];
    let mut last_unmarked = vec![None; n];
    let mut marked_agents = BTreeSet::new();
    let mut unmarked_agents = BTreeSet::new();
    for x in profile.agents() {
        let rest = unmarked_of(x);
        first_unmarked[x.0] = rest.first().copied();
        last_unmarked[x.0] = rest.last().copied();
        if rest.is_empty() {
            marked_agents.insert(x);
        } else {
            unmarked_agents.insert(x);
        }
    }
    let fixed_pairs = profile
        .agents()
        .filter_map(|x| {
            let y = first_unmarked[x.0]?;
            (x < y && first_unmarked[y.0] == Some(x)).then(|| Pair::new(x, y))
        })
        .collect();
    Ok(Phase1Result { marked, first_unmarked, last_unmarked, fixed_pairs, marked_agents, unmarked_agents })
}

/// Quick rejection: too many agents are forced to stay unmatched, or some
/// agent cannot even get its first unmarked choice within budget.
pub fn phase1_no_instance(profile: &Profile, result: &Phase1Result, gamma: usize) -> bool {
    result.marked_agents.len() > gamma
        || result
            .unmarked_agents
            .iter()
            .any(|&x| profile.rank_of(x, result.first(x).expect("unmarked agent has an entry")) > gamma)
}
