//! Acceptance suite. Prints one line per criterion and exits non-zero on
//! any unexpected result: a failure or overrun of a criterion without a
//! known gap, or a pass of one with a known gap.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{combinations, has_independent_set, mate_of, min_perfect_matching, Mate, Raw};
use roommates::blocking::{min_blocking_agents, min_blocking_pairs};
use roommates::cli::format::parse_instance;
use roommates::coverfree::{build_family, default_trials, verify_all, verify_property, CoverFreeFamily, Strategy};
use roommates::matching_engine::{min_cost_perfect_matching, WeightedGraph};
use roommates::noties::{kernelize, solve_egal_noties, KernelOutcome};
use roommates::oracle::{all_stable_matchings, matching_with_bp_at_most, stable_within};
use roommates::phase1::run_phase1;
use roommates::random::{random_colored_graph, random_graph, random_profile, ProfileShape};
use roommates::reductions::{is_to_egal_const, mcis_to_mbp, sat3_to_egal_zero, CnfFormula, ColoredGraph};
use roommates::ties::{culprits, harmlessly_blocked, perfectness_reduction, solve_egal_ties, TiesOptions};
use roommates::{AgentId, CostSemantics, Matching, Pair, Profile};

const LIST: CostSemantics = CostSemantics::ListLength;
const NODE_BUDGET: u64 = 500_000_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn lib<T>(r: roommates::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn parse(text: &str) -> Profile {
    parse_instance(text).expect("fixture parses")
}

// A matching as a sorted list of "a-b" name pairs.
fn named(p: &Profile, mate: &Mate) -> Vec<String> {
    let mut out: Vec<String> = (0..mate.len())
        .filter_map(|i| mate[i].filter(|&j| i < j).map(|j| format!("{}-{}", p.name(AgentId(i)), p.name(AgentId(j)))))
        .collect();
    out.sort();
    out
}

fn expect_set(list: &[&[&str]]) -> BTreeSet<Vec<String>> {
    list.iter().map(|m| m.iter().map(|s| s.to_string()).collect()).collect()
}

fn to_matching(n: usize, mate: &Mate) -> Matching {
    let pairs = (0..n).filter_map(|i| mate[i].filter(|&j| i < j).map(|j| Pair::new(AgentId(i), AgentId(j))));
    Matching::from_pairs(n, pairs).expect("valid matching")
}

// Checks a solver's answer against brute force: stable, correctly costed,
// within budget.
fn check_solution(raw: &Raw, sem: CostSemantics, gamma: usize, cost: usize, m: &Matching) -> Result<(), String> {
    let mate = mate_of(m);
    ensure!(raw.is_stable(&mate), "returned matching is not stable");
    ensure!(raw.cost(&mate, sem) == cost, "reported cost {cost}, actual {}", raw.cost(&mate, sem));
    ensure!(cost <= gamma, "cost {cost} exceeds budget {gamma}");
    Ok(())
}

fn tie_free_sweep(seed: u64, count: usize, max_agents: usize, max_gamma: usize) -> Vec<(Profile, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let shape = ProfileShape {
                agents: rng.gen_range(2..=max_agents),
                edge_prob: rng.gen_range(0.25..0.95),
                tie_prob: 0.0,
            };
            (random_profile(&mut rng, shape), rng.gen_range(0..=max_gamma))
        })
        .collect()
}

// Instances shared by criteria 6, 7 and 8.
fn ties_sweep() -> Vec<(Profile, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..500)
        .map(|_| {
            let shape = ProfileShape {
                agents: rng.gen_range(2..=7),
                edge_prob: rng.gen_range(0.3..0.9),
                tie_prob: 0.4,
            };
            (random_profile(&mut rng, shape), rng.gen_range(0..=4))
        })
        .collect()
}

fn golden_examples() -> Outcome {
    let cases: [(&str, &str, BTreeSet<Vec<String>>); 3] = [
        ("left", common::FIG1_LEFT, expect_set(&[&["1-2", "3-4"], &["1-4", "2-3"]])),
        ("middle", common::FIG1_MIDDLE, expect_set(&[&["1-3"], &["1-2", "3-4"]])),
        ("right", common::FIG1_RIGHT, BTreeSet::new()),
    ];
    for (label, text, want) in &cases {
        let p = parse(text);
        let raw = Raw::new(&p);
        let brute: BTreeSet<Vec<String>> = raw.stable_matchings().iter().map(|m| named(&p, m)).collect();
        ensure!(&brute == want, "{label}: brute force found {brute:?}");
        let from_lib: BTreeSet<Vec<String>> =
            lib(all_stable_matchings(&p))?.iter().map(|m| named(&p, &mate_of(m))).collect();
        ensure!(&from_lib == want, "{label}: oracle found {from_lib:?}");
    }

    let middle = parse(common::FIG1_MIDDLE);
    let raw = Raw::new(&middle);
    let mut costs: Vec<(Vec<String>, usize)> =
        raw.stable_matchings().iter().map(|m| (named(&middle, m), raw.cost(m, LIST))).collect();
    costs.sort();
    let want = vec![(vec!["1-2".to_string(), "3-4".to_string()], 2), (vec!["1-3".to_string()], 4)];
    ensure!(costs == want, "middle costs {costs:?}");
    let optimal = TiesOptions { optimal: true, ..TiesOptions::default() };
    let s = lib(solve_egal_ties(&middle, 4, &optimal))?.ok_or("ties solver found nothing at budget 4")?;
    ensure!(s.cost == 2, "ties solver returned cost {}", s.cost);
    ensure!(lib(solve_egal_ties(&middle, 1, &optimal))?.is_none(), "ties solver found a matching at budget 1");
    let left = parse(common::FIG1_LEFT);
    let s = lib(solve_egal_noties(&left, 10))?.ok_or("no-ties solver found nothing on the left instance")?;
    ensure!(s.cost == Raw::new(&left).opt_cost(LIST).unwrap(), "left optimum mismatch");
    ensure!(lib(solve_egal_noties(&parse(common::FIG1_RIGHT), 100))?.is_none(), "right instance solved");
    Ok("3 instances; middle costs 4 and 2".into())
}

fn phase1_example() -> Outcome {
    let p = parse(common::EXAMPLE_TEN);
    let p1 = lib(run_phase1(&p))?;
    let marked: BTreeSet<&str> = p1.marked_agents.iter().map(|&a| p.name(a)).collect();
    ensure!(marked == BTreeSet::from(["4", "9"]), "marked agents {marked:?}");
    let fixed: Vec<(&str, &str)> = p1.fixed_pairs.iter().map(|q| (p.name(q.lo()), p.name(q.hi()))).collect();
    ensure!(fixed == vec![("5", "10")], "fixed pairs {fixed:?}");

    let raw = Raw::new(&p);
    let mut brute: Vec<usize> = raw.stable_matchings().iter().map(|m| raw.cost(m, LIST)).collect();
    brute.sort();
    // M1 = {16, 27, 38, 5 10} is the matching expected at cost 10.
    let id = |s: &str| p.id(s).unwrap().0;
    let mut m1: Mate = vec![None; p.n()];
    for (a, b) in [("1", "6"), ("2", "7"), ("3", "8"), ("5", "10")] {
        m1[id(a)] = Some(id(b));
        m1[id(b)] = Some(id(a));
    }
    let blockers: Vec<String> = raw
        .blocking_pairs(&m1)
        .iter()
        .map(|&(a, b)| format!("{{{},{}}}", p.name(AgentId(a)), p.name(AgentId(b))))
        .collect();
    ensure!(
        brute == vec![8, 10],
        "brute-force stable costs {brute:?}; M1 (cost {}) is blocked by {}",
        raw.cost(&m1, LIST),
        blockers.join(" ")
    );
    let mut oracle: Vec<usize> = lib(all_stable_matchings(&p))?.iter().map(|m| raw.cost(&mate_of(m), LIST)).collect();
    oracle.sort();
    ensure!(oracle == vec![8, 10], "oracle stable costs {oracle:?}");
    Ok("marked {4,9}, fixed {5,10}, stable costs 10 and 8".into())
}

fn kernel_golden() -> Outcome {
    let p = parse(common::EXAMPLE_TEN);
    let KernelOutcome::Kernel(k) = lib(kernelize(&p, 8))? else {
        return Err("kernel reported a trivial no-instance".into());
    };
    ensure!(k.gamma_hat == 6, "reduced budget {}", k.gamma_hat);
    let o: Vec<(&str, &str)> = k.over_budget.iter().map(|&(x, y)| (p.name(x), p.name(y))).collect();
    ensure!(o == vec![("1", "8"), ("1", "9")], "over-budget pairs {o:?}");
    ensure!(k.dummies.len() == 6, "{} dummies", k.dummies.len());
    ensure!(k.profile.n() <= 13, "{} kernel agents", k.profile.n());
    let longest = k.profile.lists().iter().map(|l| l.len()).max().unwrap_or(0);
    ensure!(longest <= 7, "longest kernel list has {longest} entries");
    let yes = Raw::new(&k.profile).stable_within(LIST, k.gamma_hat, false);
    ensure!(yes, "kernel has no stable matching within the reduced budget");
    Ok(format!("gamma_hat 6, O = {{(1,8),(1,9)}}, 6 dummies, {} agents, lists <= {longest}", k.profile.n()))
}

fn kernel_sweep() -> Outcome {
    let mut yes = 0;
    for (idx, (p, gamma)) in tie_free_sweep(4, 500, 8, 5).iter().enumerate() {
        let want = Raw::new(p).opt_cost(LIST).is_some_and(|c| c <= *gamma);
        let got = match lib(kernelize(p, *gamma))? {
            KernelOutcome::TrivialNo => false,
            KernelOutcome::Kernel(k) => Raw::new(&k.profile).stable_within(LIST, k.gamma_hat, false),
        };
        ensure!(want == got, "instance {idx} (gamma {gamma}): original {want}, kernel {got}");
        yes += usize::from(want);
    }
    Ok(format!("500 instances, {yes} yes"))
}

fn noties_sweep() -> Outcome {
    let mut yes = 0;
    for (idx, (p, gamma)) in tie_free_sweep(4, 500, 8, 5).iter().enumerate() {
        let raw = Raw::new(p);
        let opt = raw.opt_cost(LIST).filter(|&c| c <= *gamma);
        match (lib(solve_egal_noties(p, *gamma))?, opt) {
            (None, None) => {}
            (Some(s), Some(c)) => {
                check_solution(&raw, LIST, *gamma, s.cost, &s.matching).map_err(|e| format!("instance {idx}: {e}"))?;
                ensure!(s.cost == c, "instance {idx}: solver cost {}, optimum {c}", s.cost);
                yes += 1;
            }
            (got, _) => return Err(format!("instance {idx} (gamma {gamma}): solver {:?}, optimum {opt:?}", got.map(|s| s.cost))),
        }
    }
    Ok(format!("500 instances, {yes} yes"))
}

fn ties_end_to_end() -> Outcome {
    let early = TiesOptions::default();
    let optimal = TiesOptions { optimal: true, ..early };
    let mut yes = 0;
    for (idx, (p, gamma)) in ties_sweep().iter().enumerate() {
        let raw = Raw::new(p);
        let opt = raw.opt_cost(LIST).filter(|&c| c <= *gamma);
        for opts in [&early, &optimal] {
            match (lib(solve_egal_ties(p, *gamma, opts))?, opt) {
                (None, None) => {}
                (Some(s), Some(c)) => {
                    check_solution(&raw, LIST, *gamma, s.cost, &s.matching).map_err(|e| format!("instance {idx}: {e}"))?;
                    ensure!(!opts.optimal || s.cost == c, "instance {idx}: optimal mode cost {}, optimum {c}", s.cost);
                }
                (got, _) => {
                    return Err(format!("instance {idx} (gamma {gamma}): solver {:?}, optimum {opt:?}", got.map(|s| s.cost)))
                }
            }
        }
        yes += usize::from(opt.is_some());
    }
    Ok(format!("500 instances, {yes} yes, early and optimal modes"))
}

fn blocked_edge_and_culprit_bounds() -> Outcome {
    let mut checked = 0;
    let (mut max_hb, mut max_cul) = (0, 0);
    for (idx, (p, gamma)) in ties_sweep().iter().enumerate() {
        let raw = Raw::new(p);
        for mate in raw.stable_matchings().iter().filter(|m| raw.cost(m, LIST) <= *gamma) {
            let m = to_matching(p.n(), mate);
            let hb = harmlessly_blocked(p, *gamma, &m).len();
            let cul = culprits(p, *gamma, &m);
            ensure!(hb <= gamma.pow(3), "instance {idx}: {hb} harmlessly blocked edges, gamma {gamma}");
            ensure!(cul.len() <= gamma.pow(2), "instance {idx}: {} culprits, gamma {gamma}", cul.len());
            ensure!(cul.iter().all(|c| mate[c.0].is_some()), "instance {idx}: unmatched culprit");
            max_hb = max_hb.max(hb);
            max_cul = max_cul.max(cul.len());
            checked += 1;
        }
    }
    Ok(format!("{checked} solutions; max {max_hb} harmlessly blocked, max {max_cul} culprits"))
}

fn perfectness() -> Outcome {
    let mut yes = 0;
    for (idx, (p, gamma)) in ties_sweep().iter().enumerate() {
        let r = lib(perfectness_reduction(p, *gamma))?;
        ensure!(r.profile.n() <= p.n() + gamma, "instance {idx}: {} agents after reduction", r.profile.n());
        let before = Raw::new(p).stable_within(LIST, *gamma, false);
        let after = Raw::new(&r.profile).stable_within(LIST, *gamma, true);
        ensure!(before == after, "instance {idx} (gamma {gamma}): original {before}, perfect {after}");
        yes += usize::from(before);
    }
    Ok(format!("500 instances, {yes} yes"))
}

// Challenges `(S, S')` that no member of the family witnesses.
fn failed_challenges(f: &CoverFreeFamily, challenges: impl Iterator<Item = (u64, u64)>) -> usize {
    let masks: Vec<u64> = f.members.iter().map(|a| a.iter().fold(0, |m, &x| m | 1 << x)).collect();
    challenges.filter(|&(s, sp)| !masks.iter().any(|&a| a & s == sp)).count()
}

fn mask(items: &[usize]) -> u64 {
    items.iter().fold(0, |m, &x| m | 1 << x)
}

fn cover_free() -> Outcome {
    let mut exhaustive = 0;
    for n in 1..=10 {
        for p in 0..=4 {
            for q in 0..=4 - p {
                if p + q == 0 || p + q > n {
                    continue;
                }
                let f = lib(build_family(n, p, q, Strategy::Exhaustive))?;
                let challenges = combinations(n, p + q).into_iter().flat_map(|s| {
                    combinations(p + q, p).into_iter().map(move |pick| (mask(&s), mask(&pick.iter().map(|&i| s[i]).collect::<Vec<_>>())))
                });
                let bad = failed_challenges(&f, challenges);
                ensure!(bad == 0, "exhaustive ({n},{p},{q}): {bad} failed challenges");
                ensure!(verify_all(&f).failures == 0, "exhaustive ({n},{p},{q}): library verification failed");
                exhaustive += 1;
            }
        }
    }

    let n = 24;
    let mut randomized = 0;
    let shapes = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3), (4, 0), (0, 4), (2, 4), (3, 6)];
    for (i, &(p, q)) in shapes.iter().enumerate() {
        let trials = default_trials(p, q);
        let f = lib(build_family(n, p, q, Strategy::Randomized { trials, seed: 900 + i as u64 }))?;
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        let challenges: Vec<(u64, u64)> = (0..10_000)
            .map(|_| {
                let s = rand::seq::index::sample(&mut rng, n, p + q).into_vec();
                let pick = rand::seq::index::sample(&mut rng, p + q, p).into_vec();
                (mask(&s), mask(&pick.iter().map(|&j| s[j]).collect::<Vec<_>>()))
            })
            .collect();
        let bad = failed_challenges(&f, challenges.into_iter());
        ensure!(bad == 0, "randomized ({n},{p},{q}) with {trials} trials: {bad} of 10000 challenges failed");
        let report = verify_property(&f, 10_000, 7 + i as u64);
        ensure!(report.failures == 0, "randomized ({n},{p},{q}): library sampling found {} failures", report.failures);
        randomized += 1;
    }
    Ok(format!("{exhaustive} exhaustive families verified in full, {randomized} randomized families x 10^4 challenges"))
}

fn matching_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut perfect = 0;
    for idx in 0..100 {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.3..1.0);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    edges.push((u, v, rng.gen_range(0..=20u64)));
                }
            }
        }
        let want = min_perfect_matching(n, &edges);
        let got = min_cost_perfect_matching(&lib(WeightedGraph::new(n, edges.clone()))?);
        ensure!(want == got.as_ref().map(|g| g.1), "graph {idx}: brute {want:?}, engine {:?}", got.map(|g| g.1));
        if let Some((pairs, cost)) = got {
            let mut seen = vec![false; n];
            let mut total = 0;
            for (u, v) in pairs {
                let w = edges.iter().find(|e| (e.0, e.1) == (u.min(v), u.max(v))).ok_or(format!("graph {idx}: non-edge used"))?;
                ensure!(!seen[u] && !seen[v], "graph {idx}: vertex matched twice");
                seen[u] = true;
                seen[v] = true;
                total += w.2;
            }
            ensure!(seen.iter().all(|&s| s) && total == cost, "graph {idx}: returned matching inconsistent");
            perfect += 1;
        }
    }
    Ok(format!("100 graphs, {perfect} with a perfect matching"))
}

fn blocking() -> Outcome {
    let (mut bp_yes, mut ba_yes) = (0, 0);
    for (idx, (p, _)) in tie_free_sweep(11, 300, 8, 0).iter().enumerate() {
        let raw = Raw::new(p);
        let bp = raw.min_blocking_pairs();
        match lib(min_blocking_pairs(p, 2))? {
            Some(c) => {
                ensure!(c.pairs.len() == bp, "instance {idx}: solver {} blocking pairs, minimum {bp}", c.pairs.len());
                ensure!(raw.blocking_pairs(&mate_of(&c.matching)).len() == bp, "instance {idx}: bad certificate");
                bp_yes += 1;
            }
            None => ensure!(bp > 2, "instance {idx}: solver gave up, minimum is {bp}"),
        }
        let ba = raw.min_blocking_agents();
        match lib(min_blocking_agents(p, 3))? {
            Some(c) => {
                ensure!(c.agents.len() == ba, "instance {idx}: solver {} blocking agents, minimum {ba}", c.agents.len());
                ensure!(raw.blocking_agent_count(&mate_of(&c.matching)) == ba, "instance {idx}: bad certificate");
                ba_yes += 1;
            }
            None => ensure!(ba > 3, "instance {idx}: solver gave up, minimum is {ba}"),
        }
    }
    Ok(format!("300 instances, {bp_yes} within 2 pairs, {ba_yes} within 3 agents"))
}

fn brute_mcis(g: &ColoredGraph) -> bool {
    fn go(g: &ColoredGraph, j: usize, cur: &mut Vec<usize>) -> bool {
        if j == g.classes.len() {
            return true;
        }
        for &v in &g.classes[j] {
            if cur.iter().all(|&u| !g.graph.edges.contains(&(u.min(v), u.max(v)))) {
                cur.push(v);
                if go(g, j + 1, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    go(g, 0, &mut Vec::new())
}

fn mcis_graphs() -> Vec<ColoredGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    (0..50)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            let p = rng.gen_range(0.3..0.8);
            random_colored_graph(&mut rng, k, 3, p)
        })
        .collect()
}

fn sat_formulas() -> Vec<CnfFormula> {
    // Literal index l stands for variable l / 2 + 1, negated when odd.
    let lit = |l: usize| if l.is_multiple_of(2) { (l / 2 + 1) as i32 } else { -((l / 2 + 1) as i32) };
    let mut clauses = Vec::new();
    for a in 0..6 {
        for b in a..6 {
            for c in b..6 {
                clauses.push([a, b, c]);
            }
        }
    }
    let mut out = Vec::new();
    let m = clauses.len();
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                for l in k..m {
                    let mut count = [0; 6];
                    for x in [i, j, k, l].iter().flat_map(|&c| clauses[c]) {
                        count[x] += 1;
                    }
                    if count.iter().all(|&c| c == 2) {
                        let cl = [i, j, k, l].iter().map(|&c| clauses[c].iter().map(|&x| lit(x)).collect()).collect();
                        out.push(CnfFormula { num_vars: 3, clauses: cl });
                    }
                }
            }
        }
    }
    out
}

fn reductions() -> Outcome {
    // (a) multicolored independent set to few blocking pairs.
    let mut with_mcis = 0;
    for (idx, g) in mcis_graphs().iter().enumerate() {
        let k = g.classes.len();
        let red = lib(mcis_to_mbp(g))?;
        ensure!(red.beta == 2 * k, "graph {idx}: budget {} for k = {k}", red.beta);
        ensure!(lib(matching_with_bp_at_most(&red.profile, 2 * k - 1, NODE_BUDGET))?.is_none(), "graph {idx}: fewer than 2k blocking pairs");
        let found = lib(matching_with_bp_at_most(&red.profile, 2 * k, NODE_BUDGET))?;
        let exists = brute_mcis(g);
        ensure!(found.is_some() == exists, "graph {idx}: reduction {}, multicolored independent set {exists}", found.is_some());
        if let Some((m, bp)) = found {
            ensure!(bp == 2 * k && Raw::new(&red.profile).blocking_pairs(&mate_of(&m)).len() == 2 * k, "graph {idx}: certificate");
            let picked = red.decoder.decode(&m);
            ensure!(red.decoder.padded.is_mcis(&picked) && brute_check_mcis(&red.decoder.padded, &picked), "graph {idx}: decoded {picked:?}");
            with_mcis += 1;
        }
    }

    // (b) 3-SAT to zero-cost stable matching.
    let formulas = sat_formulas();
    let mut satisfiable = 0;
    for (idx, f) in formulas.iter().enumerate() {
        let want = (0..8u32).any(|bits| satisfies(f, &(0..3).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>()));
        let red = lib(sat3_to_egal_zero(f))?;
        let found = lib(stable_within(&red.profile, CostSemantics::Zero, 0, NODE_BUDGET))?;
        ensure!(found.is_some() == want, "formula {idx} {:?}: satisfiable {want}, reduction {}", f.clauses, found.is_some());
        if let Some(s) = found {
            ensure!(satisfies(f, &red.decoder.decode(&s.matching)), "formula {idx}: decoded assignment fails");
            satisfiable += 1;
        }
    }

    // (c) independent set to constant-cost stable matching.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut cases, mut is_yes) = (0, 0);
    for idx in 0..40 {
        let n = rng.gen_range(1..=6);
        let density = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, density);
        for k in 1..=n.min(3) {
            for c in 1..=2 {
                let want = has_independent_set(n, |u, v| g.edges.contains(&(u.min(v), u.max(v))), k);
                let red = lib(is_to_egal_const(&g, k, c))?;
                ensure!(red.gamma == c * k, "graph {idx}: budget {}", red.gamma);
                let found = lib(stable_within(&red.profile, CostSemantics::Constant(c), c * k, NODE_BUDGET))?;
                ensure!(found.is_some() == want, "graph {idx}, k {k}, c {c}: independent set {want}, reduction {}", found.is_some());
                if let Some(s) = found {
                    let picked = red.decoder.decode(&s.matching);
                    ensure!(picked.len() >= k && g.is_independent(&picked), "graph {idx}, k {k}, c {c}: decoded {picked:?}");
                    is_yes += 1;
                }
                cases += 1;
            }
        }
    }
    Ok(format!(
        "(a) 50 graphs, {with_mcis} with a solution; (b) {} formulas, {satisfiable} satisfiable; (c) {cases} cases, {is_yes} yes",
        formulas.len()
    ))
}

fn brute_check_mcis(g: &ColoredGraph, set: &[usize]) -> bool {
    set.len() == g.classes.len()
        && g.classes.iter().all(|c| set.iter().filter(|v| c.contains(v)).count() == 1)
        && set.iter().all(|&u| set.iter().all(|&v| u == v || !g.graph.edges.contains(&(u.min(v), u.max(v)))))
}

fn satisfies(f: &CnfFormula, a: &[bool]) -> bool {
    f.clauses.iter().all(|c| c.iter().any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0)))
}

fn mcis_structure() -> Outcome {
    let mut graphs = mcis_graphs();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let k = rng.gen_range(1..=4);
        let max_class = rng.gen_range(1..=4);
        let p = rng.gen_range(0.1..0.9);
        graphs.push(random_colored_graph(&mut rng, k, max_class, p));
    }
    let mut agents = 0;
    for (idx, g) in graphs.iter().enumerate() {
        let red = lib(mcis_to_mbp(g))?;
        for a in red.profile.agents() {
            let groups = red.profile.list(a).groups();
            ensure!(groups.iter().all(|g| g.len() == 1), "graph {idx}: agent {} has a tie", red.profile.name(a));
            ensure!(groups.len() <= 5, "graph {idx}: agent {} lists {} partners", red.profile.name(a), groups.len());
        }
        agents += red.profile.n();
    }
    Ok(format!("{} outputs, {agents} agents, no ties, lists <= 5", graphs.len()))
}

struct Criterion {
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
    /// Set when the criterion cannot hold for the given data; it must then
    /// fail, and a pass is reported as an error so the note gets revisited.
    known_gap: Option<&'static str>,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { title: "golden examples", limit: secs(1), run: golden_examples, known_gap: None },
        Criterion {
            title: "phase 1 on the ten-agent example",
            limit: secs(1),
            run: phase1_example,
            known_gap: Some("the ten-agent profile has one stable matching; {7,8} blocks M1"),
        },
        Criterion { title: "kernel golden", limit: secs(1), run: kernel_golden, known_gap: None },
        Criterion { title: "kernel soundness sweep", limit: secs(120), run: kernel_sweep, known_gap: None },
        Criterion { title: "branching solver sweep", limit: secs(120), run: noties_sweep, known_gap: None },
        Criterion { title: "ties solver end to end", limit: secs(600), run: ties_end_to_end, known_gap: None },
        Criterion { title: "blocked edge and culprit bounds", limit: None, run: blocked_edge_and_culprit_bounds, known_gap: None },
        Criterion { title: "perfectness reduction", limit: None, run: perfectness, known_gap: None },
        Criterion { title: "cover-free property", limit: None, run: cover_free, known_gap: None },
        Criterion { title: "matching engine", limit: secs(30), run: matching_engine, known_gap: None },
        Criterion { title: "blocking pairs and agents", limit: secs(300), run: blocking, known_gap: None },
        Criterion { title: "reduction equivalences", limit: secs(900), run: reductions, known_gap: None },
        Criterion { title: "mcis output structure", limit: None, run: mcis_structure, known_gap: None },
    ];
    let (mut failed, mut unexpected) = (0, 0);
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let limit = c.limit.map_or("no limit".to_string(), |l| format!("limit {l:?}"));
        match (outcome, c.known_gap) {
            (Ok(detail), None) => println!("criterion {:>2} PASS  {}: {detail} [{took:.2?}, {limit}]", i + 1, c.title),
            (Ok(detail), Some(gap)) => {
                unexpected += 1;
                println!("criterion {:>2} PASS  {}: {detail} [{took:.2?}, {limit}] (unexpected; known gap: {gap})", i + 1, c.title);
            }
            (Err(why), gap) => {
                failed += 1;
                unexpected += usize::from(gap.is_none());
                let note = gap.map_or(String::new(), |g| format!(" (known gap: {g})"));
                println!("criterion {:>2} FAIL  {}: {why} [{took:.2?}, {limit}]{note}", i + 1, c.title);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed, {unexpected} unexpected", criteria.len() - failed);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
