//! Matchings with few blocking pairs or few blocking agents.
//!
//! Both solvers guess the exact set of blocking pairs, smallest first, and
//! ask whether some matching is blocked by exactly that set. The check is a
//! pruned exhaustive search rather than a polynomial procedure, so it is
//! exponential in the worst case.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::coverfree::subsets_of_size;
use crate::error::{domain, Error, Result};
use crate::model::{AgentId, Matching, Pair, Profile};
use crate::oracle::Search;

/// A matching together with everything that blocks it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingCertificate {
    pub matching: Matching,
    pub pairs: Vec<Pair>,
    pub agents: Vec<AgentId>,
}

impl BlockingCertificate {
    pub fn new(profile: &Profile, matching: Matching) -> BlockingCertificate {
        BlockingCertificate {
            pairs: profile.blocking_pairs(&matching),
            agents: profile.blocking_agents(&matching),
            matching,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockingOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub jobs: usize,
    /// Search nodes allowed per feasibility check.
    pub node_budget: u64,
}

impl Default for BlockingOptions {
    fn default() -> Self {
        BlockingOptions { jobs: 1, node_budget: 50_000_000 }
    }
}

/// A matching blocked by exactly the pairs in `b`, if one exists.
pub fn exact_blocking_set_feasible(profile: &Profile, b: &BTreeSet<Pair>) -> Result<Option<Matching>> {
    profile.require_tie_free()?;
    feasible(profile, &b.iter().copied().collect(), BlockingOptions::default().node_budget)
}

fn feasible(profile: &Profile, b: &HashSet<Pair>, node_budget: u64) -> Result<Option<Matching>> {
    for p in b {
        if !profile.acceptable(p.lo(), p.hi()) {
            return domain(format!(
                "{{{}, {}}} is not an acceptable pair",
                profile.name(p.lo()),
                profile.name(p.hi())
            ));
        }
    }
    let mut search = Search::new(profile);
    search.exact = Some(b);
    search.node_budget = node_budget;
    let mut found = None;
    search.run(|leaf, _| {
        found = Some(leaf.matching());
        false
    })?;
    if let Some(m) = &found {
        let got: HashSet<Pair> = profile.blocking_pairs(m).into_iter().collect();
        assert_eq!(&got, b, "search returned a matching with a different blocking set");
    }
    Ok(found)
}

/// A matching with the fewest blocking pairs, provided there are at most
/// `beta_max` of them.
pub fn min_blocking_pairs(profile: &Profile, beta_max: usize) -> Result<Option<BlockingCertificate>> {
    min_blocking_pairs_with(profile, beta_max, &BlockingOptions::default())
}

pub fn min_blocking_pairs_with(
    profile: &Profile,
    beta_max: usize,
    opts: &BlockingOptions,
) -> Result<Option<BlockingCertificate>> {
    profile.require_tie_free()?;
    let edges = profile.edges();
    for size in 0..=beta_max.min(edges.len()) {
        let guesses: Vec<Vec<Pair>> =
            subsets_of_size(edges.len(), size).into_iter().map(|s| s.into_iter().map(|i| edges[i]).collect()).collect();
        if let Some(m) = first_feasible(profile, &guesses, opts)? {
            return Ok(Some(BlockingCertificate::new(profile, m)));
        }
    }
    Ok(None)
}

/// A matching with the fewest blocking agents, provided there are at most
/// `ba_max` of them.
pub fn min_blocking_agents(profile: &Profile, ba_max: usize) -> Result<Option<BlockingCertificate>> {
    min_blocking_agents_with(profile, ba_max, &BlockingOptions::default())
}

pub fn min_blocking_agents_with(
    profile: &Profile,
    ba_max: usize,
    opts: &BlockingOptions,
) -> Result<Option<BlockingCertificate>> {
    profile.require_tie_free()?;
    let n = profile.n();
    for size in 0..=ba_max.min(n) {
        // One blocking agent alone is impossible.
        if size == 1 {
            continue;
        }
        let mut guesses = Vec::new();
        for set in subsets_of_size(n, size) {
            let agents: Vec<AgentId> = set.into_iter().map(AgentId).collect();
            let inside: Vec<Pair> = profile.edges().into_iter().filter(|p| agents.contains(&p.lo()) && agents.contains(&p.hi())).collect();
            if inside.len() > 24 {
                return Err(Error::Capacity(format!("{} agents span too many pairs to enumerate", size)));
            }
            // Every subset of the pairs inside the set that touches all of it.
            for mask in 0u64..1 << inside.len() {
                let b: Vec<Pair> = (0..inside.len()).filter(|&i| mask >> i & 1 == 1).map(|i| inside[i]).collect();
                if agents.iter().all(|&a| b.iter().any(|p| p.contains(a))) {
                    guesses.push(b);
                }
            }
        }
        if let Some(m) = first_feasible(profile, &guesses, opts)? {
            return Ok(Some(BlockingCertificate::new(profile, m)));
        }
    }
    Ok(None)
}

// First guess, in order, that some matching realizes exactly.
fn first_feasible(profile: &Profile, guesses: &[Vec<Pair>], opts: &BlockingOptions) -> Result<Option<Matching>> {
    let check = |b: &Vec<Pair>| -> Result<Option<Matching>> {
        feasible(profile, &b.iter().copied().collect(), opts.node_budget)
    };
    if opts.jobs <= 1 {
        for b in guesses {
            if let Some(m) = check(b)? {
                return Ok(Some(m));
            }
        }
        return Ok(None);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker threads: {e}")))?;
    // Errors and hits both end the scan; the earliest one wins.
    pool.install(|| guesses.par_iter().find_map_first(|b| check(b).transpose())).transpose()
}
