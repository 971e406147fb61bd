//! Independent set to egalitarian stable roommates where an unmatched agent
//! costs a constant `c`.
//!
//! `n - k` selector agents accept every vertex agent at rank 0; the `k`
//! vertex agents left over stay unmatched at cost `c` each, which is stable
//! only if no two of them are adjacent. Dummy pairs pad each vertex list so
//! that matching two vertex agents is too expensive.

use super::Graph;
use crate::error::{domain, Result};
use crate::model::{AgentId, Matching, Profile};
use crate::reductions::PartialProfile;

#[derive(Clone, Debug)]
pub struct IsReduction {
    pub profile: Profile,
    /// Cost budget, `c * k`.
    pub gamma: usize,
    pub decoder: IsDecoder,
}

#[derive(Clone, Debug)]
pub struct IsDecoder {
    vertex_agents: Vec<AgentId>,
    selectors: Vec<AgentId>,
}

impl IsDecoder {
    /// Vertices whose agents are not matched to a selector.
    pub fn decode(&self, m: &Matching) -> Vec<usize> {
        (0..self.vertex_agents.len())
            .filter(|&v| !m.partner(self.vertex_agents[v]).is_some_and(|p| self.selectors.contains(&p)))
            .collect()
    }
}

pub fn is_to_egal_const(g: &Graph, k: usize, c: usize) -> Result<IsReduction> {
    let n = g.n();
    if c == 0 {
        return domain("unmatched cost must be at least 1");
    }
    if k == 0 || k > n {
        return domain(format!("k must lie in 1..={n}"));
    }
    let vname = |v: usize| format!("v[{}]", g.names[v]);
    let sel: Vec<String> = (1..=n - k).map(|i| format!("s[{i}]")).collect();
    let d1 = |v: usize, i: usize| format!("d1[{},{i}]", g.names[v]);
    let d2 = |v: usize, i: usize| format!("d2[{},{i}]", g.names[v]);
    let mut p = PartialProfile::new();
    for v in 0..n {
        p.agent(&vname(v));
    }
    for s in &sel {
        p.set_list(s, vec![(0..n).map(vname).collect()]);
    }
    // Neighbors must rank above c so that matching two vertex agents costs
    // more than leaving both unmatched. Without selectors the c dummies
    // alone only reach rank c, so one more dummy pair is added.
    let dummies = if sel.is_empty() { c + 1 } else { c };
    for v in 0..n {
        let mut groups = Vec::new();
        if !sel.is_empty() {
            groups.push(sel.clone());
        }
        for i in 1..=dummies {
            groups.push(vec![d1(v, i)]);
        }
        let nb = g.neighbors(v);
        if !nb.is_empty() {
            groups.push(nb.into_iter().map(vname).collect());
        }
        p.set_list(&vname(v), groups);
        for i in 1..=dummies {
            p.set_strict(&d1(v, i), &[&d2(v, i), &vname(v)]);
            p.set_strict(&d2(v, i), &[&d1(v, i)]);
        }
    }
    let profile = p.into_profile()?;
    let decoder = IsDecoder {
        vertex_agents: (0..n).map(|v| profile.id(&vname(v)).expect("exists")).collect(),
        selectors: sel.iter().map(|s| profile.id(s).expect("exists")).collect(),
    };
    Ok(IsReduction { profile, gamma: c * k, decoder })
}
