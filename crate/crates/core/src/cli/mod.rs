//! Command-line front end. Every command prints one JSON object on standard
//! output (generators without `-o` print the instance instead) and
//! diagnostics on standard error.
//!
//! Exit codes: 0 on success, 1 when a `solve` command finds nothing within
//! the bound, 2 on usage, input, or limit errors.

pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::blocking::{min_blocking_agents_with, min_blocking_pairs_with, BlockingCertificate, BlockingOptions};
use crate::error::Error;
use crate::model::{AgentId, CostSemantics, Matching, Pair, Profile, Solution};
use crate::noties::{kernelize, solve_egal_noties, KernelOutcome};
use crate::oracle::{all_stable_matchings, min_ba_brute, min_bp_brute, opt_egal_brute};
use crate::phase1::run_phase1;
use crate::reductions::{is_to_egal_const, mcis_to_mbp, sat3_to_egal_zero};
use crate::ties::{solve_egal_constant, solve_egal_ties, FamilyStrategy, TiesOptions};

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "roommates", version, about = "Stable roommates solvers and gadget generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Shrink a tie-free instance to a kernel for the given budget.
    Kernelize {
        input: PathBuf,
        #[arg(long)]
        gamma: usize,
        /// Also write the kernel instance to this file.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Run the proposal phase on a tie-free instance.
    Phase1 { input: PathBuf },
    /// Generate instances from hardness reductions.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Exhaustive ground truth for small instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
enum SolveCommand {
    /// Stable matching of egalitarian cost at most the budget.
    Egal {
        input: PathBuf,
        #[arg(long)]
        gamma: usize,
        #[arg(long, default_value = "listlen")]
        cost_model: CostModel,
        #[arg(long, default_value = "exhaustive")]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Return the cheapest matching instead of the first within budget.
        #[arg(long)]
        optimal: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Matching with the fewest blocking pairs, up to a bound.
    Mbp {
        input: PathBuf,
        #[arg(long)]
        max_bp: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Matching with the fewest blocking agents, up to a bound.
    Mba {
        input: PathBuf,
        #[arg(long)]
        max_ba: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write the report to this file.
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Multicolored independent set to few blocking pairs.
    McisMbp {
        input: PathBuf,
        /// Record the bound as blocking agents instead of pairs.
        #[arg(long)]
        agents: bool,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// 3-SAT (every literal twice) to zero-cost stable matching.
    Sat3Egal {
        input: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Independent set to stable matching with constant unmatched cost.
    IsConst {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    StableAll {
        input: PathBuf,
    },
    Egal {
        input: PathBuf,
        #[arg(long, default_value = "listlen")]
        cost_model: CostModel,
    },
    Mbp {
        input: PathBuf,
    },
    Mba {
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug)]
struct CostModel(CostSemantics);

impl FromStr for CostModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let sem = match s {
            "listlen" => CostSemantics::ListLength,
            "zero" => CostSemantics::Zero,
            _ => match s.strip_prefix("const:").map(str::parse::<usize>) {
                Some(Ok(c)) if c >= 1 => CostSemantics::Constant(c),
                _ => return Err(format!("expected listlen, zero, or const:<c> with c >= 1, got `{s}`")),
            },
        };
        Ok(CostModel(sem))
    }
}

fn cost_model_name(s: CostSemantics) -> String {
    match s {
        CostSemantics::ListLength => "listlen".into(),
        CostSemantics::Zero => "zero".into(),
        CostSemantics::Constant(c) => format!("const:{c}"),
    }
}

#[derive(Clone, Copy, Debug)]
enum Family {
    Exhaustive,
    Random(usize),
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exhaustive" {
            return Ok(Family::Exhaustive);
        }
        match s.strip_prefix("random:").map(str::parse::<usize>) {
            Some(Ok(t)) if t >= 1 => Ok(Family::Random(t)),
            _ => Err(format!("expected exhaustive or random:<trials>, got `{s}`")),
        }
    }
}

/// What a command produced: the text for standard output and the exit code.
struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn report(mut value: Value, code: i32) -> Outcome {
        value["schema"] = json!(SCHEMA);
        Outcome { stdout: format!("{}\n", serde_json::to_string(&value).expect("serializable")), code }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code, writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

/// Runs the process command line.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Profile, String> {
    format::parse_instance(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn lib(e: Error) -> String {
    e.to_string()
}

fn named_pairs(profile: &Profile, pairs: &[Pair]) -> Value {
    json!(pairs.iter().map(|p| [profile.name(p.lo()), profile.name(p.hi())]).collect::<Vec<_>>())
}

fn named_agents(profile: &Profile, agents: &[AgentId]) -> Value {
    json!(agents.iter().map(|&a| profile.name(a)).collect::<Vec<_>>())
}

fn matching_json(profile: &Profile, m: &Matching) -> Value {
    named_pairs(profile, m.pairs())
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn execute(command: Command) -> Result<Outcome, String> {
    match command {
        Command::Solve(s) => solve(s),
        Command::Kernelize { input, gamma, output } => {
            let profile = load(&input)?;
            let value = match kernelize(&profile, gamma).map_err(lib)? {
                KernelOutcome::TrivialNo => json!({ "command": "kernelize", "status": "trivial_no", "gamma": gamma }),
                KernelOutcome::Kernel(k) => {
                    let text = format::serialize_instance(&k.profile);
                    if let Some(path) = &output {
                        write_file(path, &text)?;
                    }
                    json!({
                        "command": "kernelize",
                        "status": "kernel",
                        "gamma": gamma,
                        "gamma_hat": k.gamma_hat,
                        "agents": k.profile.n(),
                        "dummies": named_agents(&k.profile, &k.dummies),
                        "over_budget": k.over_budget.iter()
                            .map(|&(x, y)| [profile.name(x), profile.name(y)]).collect::<Vec<_>>(),
                        "instance": text,
                    })
                }
            };
            Ok(Outcome::report(value, 0))
        }
        Command::Phase1 { input } => {
            let profile = load(&input)?;
            let r = run_phase1(&profile).map_err(lib)?;
            let name_of = |a: Option<AgentId>| a.map(|a| profile.name(a).to_string());
            let lists: serde_json::Map<String, Value> = profile
                .agents()
                .map(|a| {
                    let entry = json!({ "first": name_of(r.first(a)), "last": name_of(r.last(a)) });
                    (profile.name(a).to_string(), entry)
                })
                .collect();
            let marked: Vec<Pair> = r.marked.iter().copied().collect();
            let fixed: Vec<Pair> = r.fixed_pairs.iter().copied().collect();
            let marked_agents: Vec<AgentId> = r.marked_agents.iter().copied().collect();
            Ok(Outcome::report(
                json!({
                    "command": "phase1",
                    "marked_pairs": named_pairs(&profile, &marked),
                    "fixed_pairs": named_pairs(&profile, &fixed),
                    "marked_agents": named_agents(&profile, &marked_agents),
                    "unmarked": lists,
                }),
                0,
            ))
        }
        Command::Gen(g) => generate(g),
        Command::Oracle(o) => oracle(o),
    }
}

fn solve(command: SolveCommand) -> Result<Outcome, String> {
    let start = Instant::now();
    let (mut value, found, output) = match command {
        SolveCommand::Egal { input, gamma, cost_model, family, seed, optimal, common } => {
            let profile = load(&input)?;
            let sem = cost_model.0;
            let strategy = match family {
                Family::Exhaustive => FamilyStrategy::Exhaustive,
                Family::Random(trials) => FamilyStrategy::Randomized { trials, seed },
            };
            let opts = TiesOptions { strategy, optimal, jobs: common.jobs };
            let result: Option<Solution> = match sem {
                CostSemantics::ListLength if profile.is_tie_free() => solve_egal_noties(&profile, gamma).map_err(lib)?,
                CostSemantics::ListLength => solve_egal_ties(&profile, gamma, &opts).map_err(lib)?,
                CostSemantics::Constant(c) => solve_egal_constant(&profile, gamma, c, &opts).map_err(lib)?,
                CostSemantics::Zero => {
                    return Err("no solver for cost model `zero` (NP-hard even for budget 0); use `oracle egal --cost-model zero`".into())
                }
            };
            let mut value = json!({
                "command": "solve egal",
                "gamma": gamma,
                "cost_model": cost_model_name(sem),
                "seed": seed,
            });
            if let Some(s) = &result {
                let cost = profile.egalitarian_cost(&s.matching, sem);
                if !profile.is_stable(&s.matching) || cost != s.cost || cost > gamma {
                    return Err("internal error: solver returned an invalid matching".into());
                }
                value["matching"] = matching_json(&profile, &s.matching);
                value["cost"] = json!(s.cost);
                value["blocking_pairs"] = json!([]);
            }
            (value, result.is_some(), common.output)
        }
        SolveCommand::Mbp { input, max_bp, common } => {
            let profile = load(&input)?;
            let opts = BlockingOptions { jobs: common.jobs, ..BlockingOptions::default() };
            let cert = min_blocking_pairs_with(&profile, max_bp, &opts).map_err(lib)?;
            let mut value = json!({ "command": "solve mbp", "max_bp": max_bp });
            if let Some(c) = &cert {
                certificate(&profile, c, &mut value)?;
                value["value"] = json!(c.pairs.len());
            }
            (value, cert.is_some(), common.output)
        }
        SolveCommand::Mba { input, max_ba, common } => {
            let profile = load(&input)?;
            let opts = BlockingOptions { jobs: common.jobs, ..BlockingOptions::default() };
            let cert = min_blocking_agents_with(&profile, max_ba, &opts).map_err(lib)?;
            let mut value = json!({ "command": "solve mba", "max_ba": max_ba });
            if let Some(c) = &cert {
                certificate(&profile, c, &mut value)?;
                value["value"] = json!(c.agents.len());
            }
            (value, cert.is_some(), common.output)
        }
    };
    value["status"] = json!(if found { "found" } else { "not_found" });
    value["elapsed_ms"] = json!(elapsed_ms(start));
    let outcome = Outcome::report(value, if found { 0 } else { 1 });
    if let Some(path) = output {
        write_file(&path, &outcome.stdout)?;
    }
    Ok(outcome)
}

fn certificate(profile: &Profile, c: &BlockingCertificate, value: &mut Value) -> Result<(), String> {
    if profile.blocking_pairs(&c.matching) != c.pairs {
        return Err("internal error: certificate does not match its matching".into());
    }
    value["matching"] = matching_json(profile, &c.matching);
    value["blocking_pairs"] = named_pairs(profile, &c.pairs);
    value["blocking_agents"] = named_agents(profile, &c.agents);
    Ok(())
}

fn generate(command: GenCommand) -> Result<Outcome, String> {
    let (text, output, summary) = match command {
        GenCommand::McisMbp { input, agents, output } => {
            let g = format::parse_graph(&read(&input)?).map_err(|e| format!("{}: {e}", input.display()))?;
            let r = mcis_to_mbp(&g).map_err(lib)?;
            let key = if agents { "ba" } else { "beta" };
            let header = format!("# {key} = {}\n", r.beta);
            let summary = json!({ "command": "gen mcis-mbp", key: r.beta, "agents": r.profile.n() });
            (header + &format::serialize_instance(&r.profile), output, summary)
        }
        GenCommand::Sat3Egal { input, output } => {
            let f = format::parse_dimacs(&read(&input)?).map_err(|e| format!("{}: {e}", input.display()))?;
            let r = sat3_to_egal_zero(&f).map_err(lib)?;
            let header = format!("# gamma = {}\n# cost-model = zero\n", r.gamma);
            let summary = json!({ "command": "gen sat3-egal", "gamma": r.gamma, "cost_model": "zero", "agents": r.profile.n() });
            (header + &format::serialize_instance(&r.profile), output, summary)
        }
        GenCommand::IsConst { input, k, c, output } => {
            let g = format::parse_graph(&read(&input)?).map_err(|e| format!("{}: {e}", input.display()))?;
            let r = is_to_egal_const(&g.graph, k, c).map_err(lib)?;
            let header = format!("# gamma = {}\n# cost-model = const:{c}\n", r.gamma);
            let summary = json!({ "command": "gen is-const", "gamma": r.gamma, "cost_model": format!("const:{c}"), "agents": r.profile.n() });
            (header + &format::serialize_instance(&r.profile), output, summary)
        }
    };
    match output {
        Some(path) => {
            write_file(&path, &text)?;
            let mut summary = summary;
            summary["output"] = json!(path.display().to_string());
            Ok(Outcome::report(summary, 0))
        }
        None => Ok(Outcome { stdout: text, code: 0 }),
    }
}

fn oracle(command: OracleCommand) -> Result<Outcome, String> {
    let value = match command {
        OracleCommand::StableAll { input } => {
            let profile = load(&input)?;
            let all = all_stable_matchings(&profile).map_err(lib)?;
            json!({
                "command": "oracle stable-all",
                "count": all.len(),
                "matchings": all.iter().map(|m| matching_json(&profile, m)).collect::<Vec<_>>(),
            })
        }
        OracleCommand::Egal { input, cost_model } => {
            let profile = load(&input)?;
            let best = opt_egal_brute(&profile, cost_model.0).map_err(lib)?;
            let mut value = json!({
                "command": "oracle egal",
                "cost_model": cost_model_name(cost_model.0),
                "status": if best.is_some() { "found" } else { "not_found" },
            });
            if let Some(s) = best {
                value["matching"] = matching_json(&profile, &s.matching);
                value["cost"] = json!(s.cost);
            }
            value
        }
        OracleCommand::Mbp { input } => {
            let profile = load(&input)?;
            let (m, v) = min_bp_brute(&profile).map_err(lib)?;
            let mut value = json!({ "command": "oracle mbp", "value": v });
            certificate(&profile, &BlockingCertificate::new(&profile, m), &mut value)?;
            value
        }
        OracleCommand::Mba { input } => {
            let profile = load(&input)?;
            let (m, v) = min_ba_brute(&profile).map_err(lib)?;
            let mut value = json!({ "command": "oracle mba", "value": v });
            certificate(&profile, &BlockingCertificate::new(&profile, m), &mut value)?;
            value
        }
    };
    Ok(Outcome::report(value, 0))
}
