//! `(n, p, q)`-cover-free families: for every `S` of size `p + q` in the
//! universe and every `S' ⊆ S` of size `p`, some member `A` has
//! `S ∩ A = S'`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};

/// Largest universe for which the exhaustive (power set) family is built.
pub const EXHAUSTIVE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every subset of the universe.
    Exhaustive,
    /// `trials` random subsets, each element included independently with
    /// probability `p / (p + q)`.
    Randomized { trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFreeFamily {
    pub universe_size: usize,
    pub p: usize,
    pub q: usize,
    pub strategy: Strategy,
    /// Sorted element lists, in construction order.
    pub members: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: u64,
    pub failures: u64,
}

/// Chance that one random member witnesses a fixed challenge.
fn hit_probability(p: usize, q: usize) -> f64 {
    if p + q == 0 {
        return 1.0;
    }
    let r = p as f64 / (p + q) as f64;
    r.powi(p as i32) * (1.0 - r).powi(q as i32)
}

/// Trial count after which a fixed challenge is missed with probability at
/// most `2^-20`.
pub fn default_trials(p: usize, q: usize) -> usize {
    let hit = hit_probability(p, q);
    if hit >= 1.0 {
        return 1;
    }
    (20.0 * std::f64::consts::LN_2 / -(1.0 - hit).ln()).ceil() as usize
}

pub fn build_family(universe_size: usize, p: usize, q: usize, strategy: Strategy) -> Result<CoverFreeFamily> {
    if p + q > universe_size {
        return domain(format!("p + q = {} exceeds the universe size {universe_size}", p + q));
    }
    let members = match strategy {
        Strategy::Exhaustive => {
            if universe_size > EXHAUSTIVE_CAP {
                return Err(Error::Capacity(format!(
                    "exhaustive family over {universe_size} elements exceeds the cap of {EXHAUSTIVE_CAP}"
                )));
            }
            (0u64..1 << universe_size)
                .map(|mask| (0..universe_size).filter(|&i| mask >> i & 1 == 1).collect())
                .collect()
        }
        Strategy::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let prob = if p + q == 0 { 0.0 } else { p as f64 / (p + q) as f64 };
            (0..trials)
                .map(|_| (0..universe_size).filter(|_| rng.gen_bool(prob)).collect())
                .collect()
        }
    };
    Ok(CoverFreeFamily { universe_size, p, q, strategy, members })
}

impl CoverFreeFamily {
    /// Whether some member meets `s` in exactly `s_prime`.
    pub fn witnesses(&self, s: &[usize], s_prime: &[usize]) -> bool {
        self.members.iter().any(|a| s.iter().all(|x| a.binary_search(x).is_ok() == s_prime.contains(x)))
    }
}

/// Checks `samples` random challenges.
pub fn verify_property(family: &CoverFreeFamily, samples: u64, seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::default();
    for _ in 0..samples {
        let s = sample(&mut rng, family.universe_size, family.p + family.q).into_vec();
        let s_prime = &s[..family.p];
        report.checked += 1;
        if !family.witnesses(&s, s_prime) {
            report.failures += 1;
        }
    }
    report
}

/// Checks every challenge. Intended for small universes.
pub fn verify_all(family: &CoverFreeFamily) -> VerifyReport {
    let mut report = VerifyReport::default();
    for s in subsets_of_size(family.universe_size, family.p + family.q) {
        for pick in subsets_of_size(s.len(), family.p) {
            let s_prime: Vec<usize> = pick.iter().map(|&i| s[i]).collect();
            report.checked += 1;
            if !family.witnesses(&s, &s_prime) {
                report.failures += 1;
            }
        }
    }
    report
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_p_is_met_by_the_empty_member() {
        let f = build_family(5, 0, 3, Strategy::Randomized { trials: 1, seed: 0 }).unwrap();
        assert_eq!(f.members, vec![Vec::<usize>::new()]);
        assert_eq!(verify_all(&f).failures, 0);
    }

    #[test]
    fn exhaustive_small() {
        let f = build_family(4, 1, 1, Strategy::Exhaustive).unwrap();
        assert_eq!(f.members.len(), 16);
        assert_eq!(verify_all(&f), VerifyReport { checked: 12, failures: 0 });
    }

    #[test]
    fn lone_empty_member_fails() {
        let f = CoverFreeFamily { universe_size: 2, p: 1, q: 1, strategy: Strategy::Exhaustive, members: vec![vec![]] };
        assert!(verify_property(&f, 10, 1).failures > 0);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_family(3, 2, 2, Strategy::Exhaustive), Err(Error::Domain(_))));
        assert!(matches!(build_family(EXHAUSTIVE_CAP + 1, 1, 1, Strategy::Exhaustive), Err(Error::Capacity(_))));
    }

    #[test]
    fn randomized_is_reproducible() {
        let s = Strategy::Randomized { trials: 4096, seed: 7 };
        let f = build_family(20, 2, 4, s).unwrap();
        assert_eq!(f, build_family(20, 2, 4, s).unwrap());
        assert_eq!(verify_property(&f, 1000, 3).failures, 0);
    }

    #[test]
    fn default_trials_shrink_miss_chance() {
        for (p, q) in [(1, 1), (2, 4), (3, 9), (4, 0)] {
            let t = default_trials(p, q) as f64;
            assert!((1.0 - hit_probability(p, q)).powf(t) <= 2f64.powi(-20) * 1.0001);
        }
    }
}
