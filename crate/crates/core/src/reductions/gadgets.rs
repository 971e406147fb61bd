use super::PartialProfile;
use crate::error::{domain, Result};
use crate::model::Profile;

/// Selection gadget over `2n'+1` indices (arithmetic mod `2n'+1`):
///
/// ```text
/// a^i: a^{i+1} > a^{i-1} > u^i > c^i > d^i
/// c^i: d^i > a^i
/// d^i: a^i > c^i
/// ```
///
/// The `u` agents are registered but their lists stay open.
pub fn selector_gadget(
    n_prime: usize,
    u: &[String],
    a: &[String],
    c: &[String],
    d: &[String],
) -> Result<PartialProfile> {
    if n_prime == 0 {
        return domain("selector gadget needs n' >= 1");
    }
    let size = 2 * n_prime + 1;
    if [u.len(), a.len(), c.len(), d.len()].iter().any(|&l| l != size) {
        return domain(format!("selector gadget with n' = {n_prime} needs {size} agents per group"));
    }
    let mut p = PartialProfile::new();
    for name in a.iter().chain(u).chain(c).chain(d) {
        p.agent(name);
    }
    for i in 0..size {
        let next = &a[(i + 1) % size];
        let prev = &a[(i + size - 1) % size];
        p.set_strict(&a[i], &[next, prev, &u[i], &c[i], &d[i]]);
        p.set_strict(&c[i], &[&d[i], &a[i]]);
        p.set_strict(&d[i], &[&a[i], &c[i]]);
    }
    Ok(p)
}

/// A selection gadget closed by letting each `u^i` accept only `a^i`.
/// Agents are named `a[i=..]`, `u[i=..]`, `c[i=..]`, `d[i=..]`.
pub fn selector_standalone(n_prime: usize) -> Result<Profile> {
    let names = |letter: &str| (0..2 * n_prime + 1).map(|i| format!("{letter}[i={i}]")).collect::<Vec<_>>();
    let (a, u, c, d) = (names("a"), names("u"), names("c"), names("d"));
    let mut p = selector_gadget(n_prime, &u, &a, &c, &d)?;
    for (ui, ai) in u.iter().zip(&a) {
        p.set_strict(ui, &[ai]);
    }
    p.into_profile()
}

/// Vertex gadget with `2δ+2` agents `x^0..x^{2δ+1}`:
///
/// ```text
/// x^0:      x^1 > a > x^{2δ+1}
/// x^{2i-1}: x^{2i} > x^{2i-2}          (1 <= i <= δ)
/// x^{2i}:   x^{2i+1} > y^i > x^{2i-1}   (1 <= i <= δ)
/// x^{2δ+1}: x^0 > b > x^{2δ}
/// ```
///
/// `y[i-1]` plays `y^i`. Lists of `a`, `b`, and the `y` agents stay open.
pub fn vertex_gadget(delta: usize, a: &str, b: &str, y: &[String], x: &[String]) -> Result<PartialProfile> {
    if delta == 0 {
        return domain("vertex gadget needs degree >= 1");
    }
    if y.len() != delta || x.len() != 2 * delta + 2 {
        return domain(format!("vertex gadget with degree {delta} needs {delta} y-slots and {} x-agents", 2 * delta + 2));
    }
    let mut p = PartialProfile::new();
    for name in x {
        p.agent(name);
    }
    let last = 2 * delta + 1;
    p.set_strict(&x[0], &[&x[1], a, &x[last]]);
    for i in 1..=delta {
        p.set_strict(&x[2 * i - 1], &[&x[2 * i], &x[2 * i - 2]]);
        p.set_strict(&x[2 * i], &[&x[2 * i + 1], &y[i - 1], &x[2 * i - 1]]);
    }
    p.set_strict(&x[last], &[&x[0], b, &x[2 * delta]]);
    Ok(p)
}
