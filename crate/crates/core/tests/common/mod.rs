//! Brute-force ground truth shared by the integration tests. Everything
//! here works from the raw preference lists and shares no code with the
//! library's solvers or oracles.

#![allow(dead_code)]

use roommates::{AgentId, CostSemantics, Matching, Profile};

/// Partner of every agent, by index.
pub type Mate = Vec<Option<usize>>;

/// Rank tables read straight off the preference lists.
pub struct Raw {
    pub n: usize,
    /// `rank[i][j]`: how many agents `i` strictly prefers to `j`.
    pub rank: Vec<Vec<Option<usize>>>,
    pub len: Vec<usize>,
}

impl Raw {
    pub fn new(p: &Profile) -> Raw {
        let n = p.n();
        let mut rank = vec![vec![None; n]; n];
        let mut len = vec![0; n];
        for i in 0..n {
            let mut before = 0;
            for group in p.list(AgentId(i)).groups() {
                for a in group {
                    rank[i][a.0] = Some(before);
                }
                before += group.len();
            }
            len[i] = before;
        }
        Raw { n, rank, len }
    }

    pub fn acceptable(&self, i: usize, j: usize) -> bool {
        self.rank[i][j].is_some()
    }

    /// Whether `i` strictly prefers `j` to its current state.
    pub fn prefers(&self, i: usize, j: usize, cur: Option<usize>) -> bool {
        match (self.rank[i][j], cur) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(r), Some(c)) => r < self.rank[i][c].expect("matched to an acceptable partner"),
        }
    }

    pub fn unmatched_cost(&self, i: usize, sem: CostSemantics) -> usize {
        match sem {
            CostSemantics::ListLength => self.len[i],
            CostSemantics::Zero => 0,
            CostSemantics::Constant(c) => c,
        }
    }

    pub fn cost(&self, mate: &Mate, sem: CostSemantics) -> usize {
        (0..self.n)
            .map(|i| match mate[i] {
                Some(j) => self.rank[i][j].unwrap(),
                None => self.unmatched_cost(i, sem),
            })
            .sum()
    }

    pub fn blocking_pairs(&self, mate: &Mate) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if mate[i] != Some(j) && self.prefers(i, j, mate[i]) && self.prefers(j, i, mate[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_stable(&self, mate: &Mate) -> bool {
        self.blocking_pairs(mate).is_empty()
    }

    pub fn blocking_agent_count(&self, mate: &Mate) -> usize {
        let mut hit = vec![false; self.n];
        for (i, j) in self.blocking_pairs(mate) {
            hit[i] = true;
            hit[j] = true;
        }
        hit.iter().filter(|&&h| h).count()
    }

    /// Calls `visit` on every matching of the acceptability graph.
    pub fn each_matching(&self, visit: &mut dyn FnMut(&Mate)) {
        fn go(raw: &Raw, mate: &mut Mate, done: &mut Vec<bool>, visit: &mut dyn FnMut(&Mate)) {
            let Some(i) = done.iter().position(|d| !d) else {
                visit(mate);
                return;
            };
            done[i] = true;
            go(raw, mate, done, visit);
            for j in i + 1..raw.n {
                if !done[j] && raw.acceptable(i, j) {
                    done[j] = true;
                    mate[i] = Some(j);
                    mate[j] = Some(i);
                    go(raw, mate, done, visit);
                    mate[i] = None;
                    mate[j] = None;
                    done[j] = false;
                }
            }
            done[i] = false;
        }
        go(self, &mut vec![None; self.n], &mut vec![false; self.n], visit);
    }

    pub fn stable_matchings(&self) -> Vec<Mate> {
        let mut out = Vec::new();
        self.each_matching(&mut |m| {
            if self.is_stable(m) {
                out.push(m.clone());
            }
        });
        out
    }

    pub fn opt_cost(&self, sem: CostSemantics) -> Option<usize> {
        self.stable_matchings().iter().map(|m| self.cost(m, sem)).min()
    }

    /// Whether a stable matching of cost at most `bound` exists, optionally
    /// restricted to perfect matchings. Prunes on partial cost.
    pub fn stable_within(&self, sem: CostSemantics, bound: usize, perfect: bool) -> bool {
        fn go(raw: &Raw, sem: CostSemantics, left: usize, perfect: bool, mate: &mut Mate, done: &mut Vec<bool>) -> bool {
            let Some(i) = done.iter().position(|d| !d) else {
                return raw.is_stable(mate);
            };
            done[i] = true;
            let alone = raw.unmatched_cost(i, sem);
            if !perfect && alone <= left && go(raw, sem, left - alone, perfect, mate, done) {
                done[i] = false;
                return true;
            }
            for j in i + 1..raw.n {
                if done[j] || !raw.acceptable(i, j) {
                    continue;
                }
                let c = raw.rank[i][j].unwrap() + raw.rank[j][i].unwrap();
                if c > left {
                    continue;
                }
                done[j] = true;
                mate[i] = Some(j);
                mate[j] = Some(i);
                let hit = go(raw, sem, left - c, perfect, mate, done);
                mate[i] = None;
                mate[j] = None;
                done[j] = false;
                if hit {
                    done[i] = false;
                    return true;
                }
            }
            done[i] = false;
            false
        }
        go(self, sem, bound, perfect, &mut vec![None; self.n], &mut vec![false; self.n])
    }

    pub fn min_blocking_pairs(&self) -> usize {
        let mut best = usize::MAX;
        self.each_matching(&mut |m| best = best.min(self.blocking_pairs(m).len()));
        best
    }

    pub fn min_blocking_agents(&self) -> usize {
        let mut best = usize::MAX;
        self.each_matching(&mut |m| best = best.min(self.blocking_agent_count(m)));
        best
    }
}

pub fn mate_of(m: &Matching) -> Mate {
    (0..m.n()).map(|i| m.partner(AgentId(i)).map(|a| a.0)).collect()
}

/// Cheapest perfect matching of a weighted graph, by enumeration.
pub fn min_perfect_matching(n: usize, edges: &[(usize, usize, u64)]) -> Option<u64> {
    fn go(n: usize, w: &[Vec<Option<u64>>], done: &mut Vec<bool>) -> Option<u64> {
        let Some(i) = done.iter().position(|d| !d) else {
            return Some(0);
        };
        done[i] = true;
        let mut best: Option<u64> = None;
        for j in i + 1..n {
            if let (false, Some(c)) = (done[j], w[i][j]) {
                done[j] = true;
                if let Some(rest) = go(n, w, done) {
                    best = Some(best.map_or(c + rest, |b| b.min(c + rest)));
                }
                done[j] = false;
            }
        }
        done[i] = false;
        best
    }
    let mut w = vec![vec![None; n]; n];
    for &(u, v, c) in edges {
        w[u][v] = Some(c);
        w[v][u] = Some(c);
    }
    go(n, &w, &mut vec![false; n])
}

/// Every `k`-subset of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Whether some subset of `vertices` of size `k` is pairwise non-adjacent.
pub fn has_independent_set(vertices: usize, adjacent: impl Fn(usize, usize) -> bool, k: usize) -> bool {
    combinations(vertices, k).iter().any(|s| s.iter().all(|&u| s.iter().all(|&v| u == v || !adjacent(u, v))))
}

pub const FIG1_LEFT: &str = "agents 1 2 3 4\nprefs 1: 2 3 4\nprefs 2: 3 1\nprefs 3: 4 2 1\nprefs 4: 1 3\n";
pub const FIG1_MIDDLE: &str = "agents 1 2 3 4\nprefs 1: (2 3) 4\nprefs 2: 1 3\nprefs 3: (1 2) 4\nprefs 4: 3 1\n";
pub const FIG1_RIGHT: &str = "agents 1 2 3 4\nprefs 1: 2 3 4\nprefs 2: 3 1 4\nprefs 3: 1 2 4\nprefs 4: 1 2 3\n";
pub const EXAMPLE_TEN: &str = "agents 1 2 3 4 5 6 7 8 9 10\n\
prefs 1: 6 2 7 4 10 3 5 8 9\n\
prefs 2: 7 8 6 1\n\
prefs 3: 8 6 1 7\n\
prefs 4: 1\n\
prefs 5: 10 1\n\
prefs 6: 2 3 1 8\n\
prefs 7: 3 1 8 2\n\
prefs 8: 2 6 7 3 1\n\
prefs 9: 1\n\
prefs 10: 5 1\n";
