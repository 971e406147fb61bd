//! Solvers for stable roommates problems parameterized by egalitarian cost
//! and by the number of blocking pairs or agents, with exhaustive oracles
//! and generators for hardness gadgets.

pub mod blocking;
pub mod cli;
pub mod coverfree;
pub mod error;
pub mod matching_engine;
pub mod model;
pub mod noties;
pub mod oracle;
pub mod phase1;
pub mod random;
pub mod reductions;
pub mod ties;

pub use error::{Error, Result};
pub use model::{AgentId, CostSemantics, Matching, Pair, PreferenceList, Profile, Solution};
