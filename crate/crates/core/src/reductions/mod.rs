//! Generators for the hardness constructions, each with a decoder that maps
//! solutions back to the source problem.

mod gadgets;
mod indset;
mod mcis;
mod sat;

use std::collections::{BTreeSet, HashMap, VecDeque};

pub use gadgets::{selector_gadget, selector_standalone, vertex_gadget};
pub use indset::{is_to_egal_const, IsDecoder, IsReduction};
pub use mcis::{mcis_to_mbp, McisDecoder, McisReduction};
pub use sat::{sat3_to_egal_zero, SatDecoder, SatReduction};

use crate::error::{Error, Result};
use crate::model::{AgentId, PreferenceList, Profile};

/// Simple undirected graph with named vertices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    pub names: Vec<String>,
    /// Edges `(u, v)` with `u < v`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    /// Some independent set of exactly `k` vertices, by exhaustive search.
    pub fn independent_set(&self, k: usize) -> Option<Vec<usize>> {
        fn go(g: &Graph, next: usize, k: usize, cur: &mut Vec<usize>) -> bool {
            if cur.len() == k {
                return true;
            }
            for v in next..g.n() {
                if cur.iter().all(|&u| !g.adjacent(u, v)) {
                    cur.push(v);
                    if go(g, v + 1, k, cur) {
                        return true;
                    }
                    cur.pop();
                }
            }
            false
        }
        let mut cur = Vec::new();
        go(self, 0, k, &mut cur).then_some(cur)
    }
}

/// Graph whose vertices are split into color classes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ColoredGraph {
    pub graph: Graph,
    pub classes: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Classes must be disjoint and cover every vertex.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.graph.n()];
        for class in &self.classes {
            for &v in class {
                if v >= seen.len() {
                    return Err(Error::Domain(format!("class member {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Domain(format!("vertex `{}` is in two classes", self.graph.names[v])));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Domain(format!("vertex `{}` belongs to no class", self.graph.names[v])));
        }
        Ok(())
    }

    /// One vertex per class, pairwise non-adjacent.
    pub fn is_mcis(&self, set: &[usize]) -> bool {
        set.len() == self.classes.len()
            && self.graph.is_independent(set)
            && self.classes.iter().all(|c| set.iter().filter(|v| c.contains(v)).count() == 1)
    }

    /// A multicolored independent set, by exhaustive search.
    pub fn mcis(&self) -> Option<Vec<usize>> {
        fn go(g: &ColoredGraph, j: usize, cur: &mut Vec<usize>) -> bool {
            if j == g.classes.len() {
                return true;
            }
            for &v in &g.classes[j] {
                if cur.iter().all(|&u| !g.graph.adjacent(u, v)) {
                    cur.push(v);
                    if go(g, j + 1, cur) {
                        return true;
                    }
                    cur.pop();
                }
            }
            false
        }
        let mut cur = Vec::new();
        go(self, 0, &mut cur).then_some(cur)
    }
}

/// CNF formula over variables `1..=num_vars`; literal `-v` negates `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// A satisfying assignment by trying all of them.
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars < 30, "too many variables for exhaustive search");
        (0u64..1 << self.num_vars)
            .map(|bits| (0..self.num_vars).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.satisfied_by(a))
    }
}

/// Preference lists keyed by agent name, some possibly left open so that
/// gadgets can be glued together.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialProfile {
    agents: Vec<String>,
    index: HashMap<String, usize>,
    lists: Vec<Option<Vec<Vec<String>>>>,
}

impl PartialProfile {
    pub fn new() -> PartialProfile {
        PartialProfile::default()
    }

    /// Registers an agent if unknown and returns its position.
    pub fn agent(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.index.insert(name.to_string(), self.agents.len());
        self.agents.push(name.to_string());
        self.lists.push(None);
        self.agents.len() - 1
    }

    /// Defines the list of `name`; each agent's list is defined once.
    pub fn set_list(&mut self, name: &str, groups: Vec<Vec<String>>) {
        let i = self.agent(name);
        for g in &groups {
            for x in g {
                self.agent(x);
            }
        }
        assert!(self.lists[i].is_none(), "list of `{name}` defined twice");
        self.lists[i] = Some(groups);
    }

    /// Strict list, most preferred first.
    pub fn set_strict(&mut self, name: &str, order: &[&str]) {
        self.set_list(name, order.iter().map(|s| vec![s.to_string()]).collect());
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn list(&self, name: &str) -> Option<&[Vec<String>]> {
        self.index.get(name).and_then(|&i| self.lists[i].as_deref())
    }

    /// Agents whose lists are still open.
    pub fn open_agents(&self) -> Vec<&str> {
        self.agents.iter().zip(&self.lists).filter(|(_, l)| l.is_none()).map(|(a, _)| a.as_str()).collect()
    }

    pub fn merge(&mut self, other: PartialProfile) {
        for (name, list) in other.agents.into_iter().zip(other.lists) {
            match list {
                Some(l) => self.set_list(&name, l),
                None => {
                    self.agent(&name);
                }
            }
        }
    }

    /// Closes the profile; every agent needs a list.
    pub fn into_profile(self) -> Result<Profile> {
        if let Some(a) = self.open_agents().first() {
            return Err(Error::Invalid(format!("agent `{a}` has no preference list")));
        }
        let lists = self
            .lists
            .into_iter()
            .map(|l| {
                PreferenceList::new(
                    l.expect("checked above")
                        .into_iter()
                        .map(|g| g.iter().map(|x| AgentId(self.index[x])).collect())
                        .collect(),
                )
            })
            .collect();
        Profile::new(self.agents, lists)
    }
}

/// Whether the acceptability graph is two-colorable.
pub fn is_bipartite(profile: &Profile) -> bool {
    let mut color: Vec<Option<bool>> = vec![None; profile.n()];
    for s in profile.agents() {
        if color[s.0].is_some() {
            continue;
        }
        color[s.0] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x.0].expect("colored when queued");
            for y in profile.neighbors(x) {
                match color[y.0] {
                    None => {
                        color[y.0] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}
