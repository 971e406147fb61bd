//! Seeded random instances for sweeps and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{AgentId, PreferenceList, Profile};
use crate::reductions::{ColoredGraph, Graph};

#[derive(Clone, Copy, Debug)]
pub struct ProfileShape {
    pub agents: usize,
    /// Chance that a pair of agents is mutually acceptable.
    pub edge_prob: f64,
    /// Chance that an entry is tied with the one before it.
    pub tie_prob: f64,
}

/// Random profile; agents that drew no partner get one at random.
///
/// Panics if fewer than two agents are requested.
pub fn random_profile<R: Rng + ?Sized>(rng: &mut R, shape: ProfileShape) -> Profile {
    let n = shape.agents;
    assert!(n >= 2, "need at least two agents");
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(shape.edge_prob) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    for u in 0..n {
        if adj[u].is_empty() {
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let lists = adj
        .into_iter()
        .map(|mut nb| {
            nb.shuffle(rng);
            let mut groups: Vec<Vec<AgentId>> = Vec::new();
            for v in nb {
                match groups.last_mut() {
                    Some(g) if rng.gen_bool(shape.tie_prob) => g.push(AgentId(v)),
                    _ => groups.push(vec![AgentId(v)]),
                }
            }
            PreferenceList::new(groups)
        })
        .collect();
    Profile::with_numbered_names(lists).expect("generated lists are consistent")
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, vertices: usize, edge_prob: f64) -> Graph {
    let mut g = Graph { names: (1..=vertices).map(|i| format!("v{i}")).collect(), ..Graph::default() };
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(edge_prob) {
                g.edges.insert((u, v));
            }
        }
    }
    g
}

/// `classes` color classes of 1 to `max_class` vertices each.
pub fn random_colored_graph<R: Rng + ?Sized>(rng: &mut R, classes: usize, max_class: usize, edge_prob: f64) -> ColoredGraph {
    let sizes: Vec<usize> = (0..classes).map(|_| rng.gen_range(1..=max_class)).collect();
    let total = sizes.iter().sum();
    let graph = random_graph(rng, total, edge_prob);
    let mut next = 0;
    let classes = sizes
        .iter()
        .map(|&s| {
            next += s;
            (next - s..next).collect()
        })
        .collect();
    ColoredGraph { graph, classes }
}
