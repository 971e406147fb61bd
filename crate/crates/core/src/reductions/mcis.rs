//! Multicolored independent set to matchings with few blocking pairs.
//!
//! Every vertex gets a vertex gadget; per color class two selection gadgets
//! pick the vertex whose gadget is "opened" (its ends matched to the
//! selectors). Adjacent opened gadgets produce an extra blocking pair, so
//! `2k` blocking pairs are reachable exactly when an independent set with
//! one vertex per class exists.

use super::{gadgets, ColoredGraph, Graph, PartialProfile};
use crate::error::{domain, Result};
use crate::model::{AgentId, Matching, Pair, Profile};

#[derive(Clone, Debug)]
pub struct McisReduction {
    pub profile: Profile,
    /// Blocking-pair budget, `2k`.
    pub beta: usize,
    pub decoder: McisDecoder,
}

/// Reads the selected vertices off a matching.
#[derive(Clone, Debug)]
pub struct McisDecoder {
    /// The input graph after class padding; decoded indices refer to it.
    pub padded: ColoredGraph,
    /// Number of vertices of the original graph; padding comes after.
    pub original_vertices: usize,
    // (vertex, selector agent a, gadget agent u^{.,0})
    hooks: Vec<(usize, AgentId, AgentId)>,
}

impl McisDecoder {
    /// Vertices `v` whose selector agent is matched to `v`'s gadget.
    pub fn decode(&self, m: &Matching) -> Vec<usize> {
        self.hooks.iter().filter(|&&(_, a, u)| m.contains(Pair::new(a, u))).map(|&(v, _, _)| v).collect()
    }
}

// Pads each class to odd size at least 3. Padding vertices are adjacent to
// all vertices of other classes, so they never join a multicolored
// independent set when k >= 2.
fn pad(g: &ColoredGraph) -> ColoredGraph {
    let mut out = g.clone();
    let taken: std::collections::BTreeSet<String> = g.graph.names.iter().cloned().collect();
    for j in 0..out.classes.len() {
        let len = out.classes[j].len();
        let target = if len < 3 { 3 } else { len | 1 };
        for i in len..target {
            let mut name = format!("pad[j={},i={}]", j + 1, i);
            while taken.contains(&name) {
                name.push('\'');
            }
            out.classes[j].push(out.graph.names.len());
            out.graph.names.push(name);
        }
    }
    if out.classes.len() >= 2 {
        for (j, class) in out.classes.iter().enumerate() {
            for &p in class.iter().filter(|&&v| v >= g.graph.n()) {
                for (j2, other) in out.classes.iter().enumerate() {
                    if j2 != j {
                        for &v in other {
                            out.graph.edges.insert((p.min(v), p.max(v)));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn mcis_to_mbp(g: &ColoredGraph) -> Result<McisReduction> {
    g.validate()?;
    let k = g.classes.len();
    if k == 0 {
        return domain("multicolored independent set needs k >= 1 classes");
    }
    if let Some(j) = g.classes.iter().position(Vec::is_empty) {
        return domain(format!("class {} is empty", j + 1));
    }
    let padded = pad(g);
    let graph: &Graph = &padded.graph;
    let n = graph.n();
    let mut class_of = vec![(0, 0); n];
    for (j, class) in padded.classes.iter().enumerate() {
        for (i, &v) in class.iter().enumerate() {
            class_of[v] = (j + 1, i);
        }
    }
    let x_name = |v: usize, z: usize| {
        let (j, i) = class_of[v];
        format!("u[j={j},i={i},z={z}]")
    };
    let tagged = |letter: &str, v: usize| {
        let (j, i) = class_of[v];
        format!("{letter}[j={j},i={i}]")
    };

    // y-slots: edges in increasing order, each endpoint takes its lowest
    // free slot; slot z of v is played by x^{2z'} of the neighbour.
    let mut slots: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut used = vec![0usize; n];
    for &(v, w) in &graph.edges {
        used[v] += 1;
        used[w] += 1;
        let (zv, zw) = (used[v], used[w]);
        slots[v].push(x_name(w, 2 * zw));
        slots[w].push(x_name(v, 2 * zv));
    }

    let mut p = PartialProfile::new();
    let mut last_x = vec![0; n];
    for class in &padded.classes {
        for &v in class {
            let mut y = slots[v].clone();
            // An isolated vertex gets a private neighbour that is always
            // matched to its own partner, keeping the gadget well formed.
            if y.is_empty() {
                let (pv, qv) = (tagged("p", v), tagged("q", v));
                p.set_strict(&qv, &[&pv]);
                p.set_strict(&pv, &[&qv, &x_name(v, 2)]);
                y.push(pv);
            }
            let delta = y.len();
            let xs: Vec<String> = (0..2 * delta + 2).map(|z| x_name(v, z)).collect();
            last_x[v] = 2 * delta + 1;
            p.merge(gadgets::vertex_gadget(delta, &tagged("a", v), &tagged("b", v), &y, &xs)?);
        }
    }
    for class in &padded.classes {
        let n_prime = (class.len() - 1) / 2;
        let names = |letter: &str| class.iter().map(|&v| tagged(letter, v)).collect::<Vec<_>>();
        let first: Vec<String> = class.iter().map(|&v| x_name(v, 0)).collect();
        let second: Vec<String> = class.iter().map(|&v| x_name(v, last_x[v])).collect();
        p.merge(gadgets::selector_gadget(n_prime, &first, &names("a"), &names("c"), &names("d"))?);
        p.merge(gadgets::selector_gadget(n_prime, &second, &names("b"), &names("f"), &names("w"))?);
    }
    let profile = p.into_profile()?;
    let hooks = (0..n)
        .map(|v| {
            let a = profile.id(&tagged("a", v)).expect("selector agent exists");
            let u = profile.id(&x_name(v, 0)).expect("gadget agent exists");
            (v, a, u)
        })
        .collect();
    Ok(McisReduction {
        profile,
        beta: 2 * k,
        decoder: McisDecoder { original_vertices: g.graph.n(), padded, hooks },
    })
}
