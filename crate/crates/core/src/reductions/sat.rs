//! 3-SAT (each literal exactly twice) to zero-cost stable marriage with
//! ties, where unmatched agents are free.
//!
//! Variable gadget for `x_i`, with solid edges at rank 0 and dashed at 1:
//! `a*` picks `a^true` or `a^false`; each `a^s` leads (dashed) to two
//! chains `b^s_t - c^s_t - d^s_t`. Clause gadget for `C_j`: `u*` and `w*`
//! both accept `x_{j,1..3}`, and `x_{j,r}` leads (dashed) to `y_{j,r} - z_{j,r}`.
//! Occurrence `r` of a literal in `C_j` identifies `y_{j,r}` with a free
//! `d` and `z_{j,r}` with the matching `c` of that literal's chains.

use super::{CnfFormula, PartialProfile};
use crate::error::{domain, Result};
use crate::model::{AgentId, Matching, Pair, Profile};

#[derive(Clone, Debug)]
pub struct SatReduction {
    pub profile: Profile,
    /// Cost budget; always 0.
    pub gamma: usize,
    pub decoder: SatDecoder,
}

#[derive(Clone, Debug)]
pub struct SatDecoder {
    // (a*_i, a^true_i) per variable
    hooks: Vec<(AgentId, AgentId)>,
}

impl SatDecoder {
    /// `x_i` is true iff `a*_i` is matched to `a^true_i`.
    pub fn decode(&self, m: &Matching) -> Vec<bool> {
        self.hooks.iter().map(|&(s, t)| m.contains(Pair::new(s, t))).collect()
    }
}

// Clause index and position of a literal occurrence, both from 1.
type Occurrence = (usize, usize);

fn sign_name(positive: bool) -> &'static str {
    if positive {
        "true"
    } else {
        "false"
    }
}

pub fn sat3_to_egal_zero(f: &CnfFormula) -> Result<SatReduction> {
    let n = f.num_vars;
    let mut count = vec![[0usize; 2]; n + 1];
    for (j, c) in f.clauses.iter().enumerate() {
        if c.len() != 3 {
            return domain(format!("clause {} has {} literals, expected 3", j + 1, c.len()));
        }
        for &l in c {
            let v = l.unsigned_abs() as usize;
            if l == 0 || v > n {
                return domain(format!("literal {l} out of range"));
            }
            count[v][usize::from(l > 0)] += 1;
        }
    }
    for (v, c) in count.iter().enumerate().skip(1) {
        if c[0] != 2 || c[1] != 2 {
            return domain(format!(
                "variable {v} occurs {} times positively and {} times negatively, expected 2 and 2",
                c[1], c[0]
            ));
        }
    }

    let star = |i: usize| format!("a*[i={i}]");
    let lit = |i: usize, s: bool| format!("a[i={i},{}]", sign_name(s));
    let chain = |letter: &str, i: usize, s: bool, t: usize| format!("{letter}[i={i},{},t={t}]", sign_name(s));
    let xname = |j: usize, r: usize| format!("x[j={j},r={r}]");

    let mut p = PartialProfile::new();
    // Which clause occurrence each chain end d^s_{i,t} serves.
    let mut serves: Vec<[[Option<Occurrence>; 2]; 2]> = vec![[[None; 2]; 2]; n + 1];
    for (j, c) in f.clauses.iter().enumerate() {
        for (r, &l) in c.iter().enumerate() {
            let v = l.unsigned_abs() as usize;
            let s = usize::from(l > 0);
            let t = serves[v][s].iter().position(Option::is_none).expect("literal count checked");
            serves[v][s][t] = Some((j + 1, r + 1));
        }
    }
    for (i, slots) in serves.iter().enumerate().skip(1) {
        p.set_list(&star(i), vec![vec![lit(i, true), lit(i, false)]]);
        for s in [true, false] {
            p.set_list(&lit(i, s), vec![vec![star(i)], vec![chain("b", i, s, 1), chain("b", i, s, 2)]]);
            for t in 1..=2 {
                let (b, c, d) = (chain("b", i, s, t), chain("c", i, s, t), chain("d", i, s, t));
                let (j, r) = slots[usize::from(s)][t - 1].expect("every chain serves one occurrence");
                p.set_strict(&b, &[&c, &lit(i, s)]);
                p.set_list(&c, vec![vec![b.clone(), d.clone()]]);
                p.set_strict(&d, &[&c, &xname(j, r)]);
            }
        }
    }
    for (j0, _) in f.clauses.iter().enumerate() {
        let j = j0 + 1;
        let xs: Vec<String> = (1..=3).map(|r| xname(j, r)).collect();
        let (u, w) = (format!("u*[j={j}]"), format!("w*[j={j}]"));
        p.set_list(&u, vec![xs.clone()]);
        p.set_list(&w, vec![xs.clone()]);
        for r in 1..=3 {
            let lit_here = f.clauses[j0][r - 1];
            let v = lit_here.unsigned_abs() as usize;
            let s = lit_here > 0;
            let t = serves[v][usize::from(s)].iter().position(|o| *o == Some((j, r))).expect("assigned above") + 1;
            p.set_list(&xname(j, r), vec![vec![u.clone(), w.clone()], vec![chain("d", v, s, t)]]);
        }
    }
    let profile = p.into_profile()?;
    let hooks = (1..=n)
        .map(|i| (profile.id(&star(i)).expect("exists"), profile.id(&lit(i, true)).expect("exists")))
        .collect();
    Ok(SatReduction { profile, gamma: 0, decoder: SatDecoder { hooks } })
}
