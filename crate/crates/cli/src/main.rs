//! Command-line harness: formula generation, expansion certificates, closure
//! computation, solving and checking, width and filter reports, span
//! verification suites, bound calculators, and the experiment runner.
//!
//! Exit codes: 0 valid/sat/ok, 1 invalid proof, 2 refutation produced,
//! 3 budget exceeded, 64 usage error, 65 any other failure.

mod config;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::Config;
use pigeonlab::formula::{encode, read_dimacs_file, write_dimacs_file, Variant};
use pigeonlab::graph::{
    certify_boundary_expansion, estimate_expansion_monte_carlo, read_graph_file, sample_random,
    write_graph_file, BipartiteGraph, DEFAULT_ENUM_BUDGET,
};
use pigeonlab::numeric::{rat_int, rat_to_f64};
use pigeonlab::resolution::{
    check_proof, prove_dp, prove_dpll, read_trace_file, write_trace_file, Branching, DpOutcome,
    ProverOutcome, Verdict,
};
use pigeonlab::Rat;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_UNSAT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_FAIL: u8 = 65;

#[derive(Parser)]
#[command(name = "pigeonlab", about = "Pigeonhole formula workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand; flags override config file entries.
#[derive(Args, Clone, Default)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for any randomized step.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (meaning depends on the subcommand).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct GraphArgs {
    /// Graph source: complete | random | file.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Graph file to read when `--graph file`.
    #[arg(long)]
    graph_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a formula in DIMACS format.
    Gen {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        variant: Option<String>,
        /// Also write the graph itself to this path.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Certify or estimate boundary expansion.
    Expansion {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        r: Option<usize>,
        /// Expansion constant, e.g. `3/2`.
        #[arg(long)]
        c: Option<String>,
        /// exhaustive | monte-carlo.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Compute the closure of a pigeon set.
    Closure {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated pigeon ids.
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        nu: Option<String>,
        /// Augmentation size bound; `unbounded` verifies maximality.
        #[arg(long)]
        k_aug: Option<String>,
    },
    /// Solve a DIMACS formula.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cnf: Option<PathBuf>,
        /// dpll | dp.
        #[arg(long)]
        solver: Option<String>,
        /// fixed-order | max-occurrence.
        #[arg(long)]
        branching: Option<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        clause_budget: Option<u64>,
        /// Write the refutation trace here.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Check a trace against a DIMACS formula.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Accept proofs that do not end in the empty clause.
        #[arg(long)]
        no_refutation: bool,
        /// Extra axioms (a DIMACS file) the trace may use.
        #[arg(long)]
        extra_axioms: Option<PathBuf>,
    },
    /// Per-line pseudo-width report for a trace.
    Width {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        w0: Option<usize>,
    },
    /// Sample a filter vector over capacity vectors.
    Filter {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        w0: Option<usize>,
        #[arg(long)]
        max_attempts: Option<u64>,
        /// File with one whitespace-separated capacity vector per line.
        #[arg(long)]
        rvecs: Option<PathBuf>,
        /// Generate this many random capacity vectors instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Span-containment sweep on the functional preset instance.
    SpanVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        derivations: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Vertex-side span suite on the matching preset instance.
    PmVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        derivations: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Growth-rate exponent and hypothesis-regime reports.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// fphp | pm.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        alpha: Option<usize>,
        /// cor-random-fphp | cor-random-pm: validate the random-graph regime
        /// instead of the growth exponent.
        #[arg(long)]
        regime: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Run a sweep experiment and emit CSV plus a plot description.
    Experiment {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        graph: Option<String>,
        /// Hole counts: `3..7` or `3,4,5`.
        #[arg(long)]
        ns: Option<String>,
        /// Seeds: `1..5` or `1,2,3`.
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long)]
        delta: Option<usize>,
        /// Pigeons as `n+K` or a fixed integer.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        clause_budget: Option<u64>,
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long)]
        w0: Option<usize>,
        #[arg(long)]
        keep_proofs: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            if e.downcast_ref::<pigeonlab::Error>()
                .map(|pe| matches!(pe, pigeonlab::Error::Budget { .. }))
                .unwrap_or(false)
            {
                return ExitCode::from(EXIT_BUDGET);
            }
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().context("bad ratio numerator")?;
        let den: i64 = den.trim().parse().context("bad ratio denominator")?;
        if den == 0 {
            bail!("zero denominator");
        }
        Ok(pigeonlab::numeric::rat(num, den))
    } else if s.contains('.') {
        let neg = s.starts_with('-');
        let body = s.trim_start_matches('-');
        let (int, frac) = body.split_once('.').unwrap();
        let scale = 10i64.pow(frac.len() as u32);
        let int: i64 = if int.is_empty() { 0 } else { int.parse().context("bad decimal")? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().context("bad decimal")? };
        let value = pigeonlab::numeric::rat(int * scale + frac, scale);
        Ok(if neg { -value } else { value })
    } else {
        let v: i64 = s.parse().context("bad integer")?;
        Ok(rat_int(v))
    }
}

fn parse_id_list(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("bad id `{}`: {}", t, e)))
        .collect()
}

/// Range list syntax: `3..7` (inclusive) or `3,4,5`.
fn parse_range_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().context("bad range start")?;
        let b: u64 = b.trim().parse().context("bad range end")?;
        if b < a {
            bail!("empty range `{}`", s);
        }
        Ok((a..=b).collect())
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| anyhow!("bad entry `{}`: {}", t, e)))
            .collect()
    }
}

fn load_graph(args: &GraphArgs, cfg: &Config, seed: u64) -> Result<BipartiteGraph> {
    let kind = cfg.pick_str("graph", args.graph.clone()).unwrap_or_else(|| "random".into());
    match kind.as_str() {
        "complete" => {
            let m = cfg.need_usize("m", args.m)?;
            let n = cfg.need_usize("n", args.n)?;
            Ok(pigeonlab::graph::complete_graph(m, n))
        }
        "random" => {
            let m = cfg.need_usize("m", args.m)?;
            let n = cfg.need_usize("n", args.n)?;
            let delta = cfg.need_usize("delta", args.delta)?;
            Ok(sample_random(m, n, delta, seed)?)
        }
        "file" => {
            let path = cfg
                .pick_path("graph-file", args.graph_file.clone())
                .ok_or_else(|| anyhow!("--graph file requires --graph-file"))?;
            Ok(read_graph_file(&path)?)
        }
        other => bail!("unknown graph source `{}`", other),
    }
}

/// Writes to `--out` when given, otherwise prints to stdout.
fn emit(cfg: &Config, out: Option<PathBuf>, text: &str) -> Result<()> {
    match cfg.pick_path("out", out) {
        Some(path) => {
            std::fs::write(&path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", text),
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Gen { common, graph, variant, graph_out } => {
            let cfg = Config::load(common.config.as_deref())?;
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(0);
            let variant =
                Variant::parse(&cfg.pick_str("variant", variant).unwrap_or_else(|| "php".into()))?;
            let g = load_graph(&graph, &cfg, seed)?;
            let mut f = encode(&g, variant);
            f.seed = Some(seed);
            let out =
                cfg.pick_path("out", common.out).ok_or_else(|| anyhow!("gen requires --out"))?;
            write_dimacs_file(&f.to_dimacs(), &out)?;
            if let Some(gpath) = cfg.pick_path("graph-out", graph_out) {
                write_graph_file(&g, &gpath)?;
            }
            println!("wrote {} ({} vars, {} clauses)", out.display(), f.num_vars(), f.clauses.len());
            Ok(EXIT_OK)
        }
        Command::Expansion { common, graph, r, c, mode, trials, budget } => {
            let cfg = Config::load(common.config.as_deref())?;
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(0);
            let g = load_graph(&graph, &cfg, seed)?;
            let r = cfg.need_usize("r", r)?;
            let c = parse_rat(&cfg.pick_str("c", c).unwrap_or_else(|| "1".into()))?;
            let mode = cfg.pick_str("mode", mode).unwrap_or_else(|| "exhaustive".into());
            let budget =
                budget.or_else(|| cfg.get("budget").and_then(|v| v.parse().ok())).unwrap_or(DEFAULT_ENUM_BUDGET);
            let report = match mode.as_str() {
                "exhaustive" => certify_boundary_expansion(&g, r, &c, budget)?,
                "monte-carlo" | "mc" => {
                    let trials = cfg.pick_u64("trials", trials).unwrap_or(1000);
                    estimate_expansion_monte_carlo(&g, r, &c, trials, seed)?
                }
                other => bail!("unknown mode `{}`", other),
            };
            let text = format!(
                "r {}\nc {}\ncertified {}\nworst_ratio {} ({:.4})\nworst_set {}\nmode {}\n",
                report.r,
                report.c,
                report.certified,
                report.worst_ratio,
                rat_to_f64(&report.worst_ratio),
                report.worst_set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                match report.mode {
                    pigeonlab::graph::CertMode::Exhaustive => "exhaustive",
                    pigeonlab::graph::CertMode::MonteCarlo => "monte-carlo",
                }
            );
            emit(&cfg, common.out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Closure { common, graph, t, r, nu, k_aug } => {
            let cfg = Config::load(common.config.as_deref())?;
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(0);
            let g = load_graph(&graph, &cfg, seed)?;
            let t = parse_id_list(&cfg.pick_str("t", t).unwrap_or_default())?;
            let r = cfg.need_usize("r", r)?;
            let nu = parse_rat(&cfg.pick_str("nu", nu).ok_or_else(|| anyhow!("need --nu"))?)?;
            let k_aug = match cfg.pick_str("k-aug", k_aug) {
                None => {
                    if g.left_count() <= 16 {
                        None
                    } else {
                        Some(2)
                    }
                }
                Some(s) if s == "unbounded" => None,
                Some(s) => Some(s.parse::<usize>().context("bad k-aug")?),
            };
            let params = pigeonlab::closure::ClosureParams::new(r, nu, k_aug)?;
            let snap = pigeonlab::closure::Snapshot::from_graph(&g);
            let seed_set = t.iter().copied().collect();
            let result = pigeonlab::closure::closure(&snap, &seed_set, &params)?;
            let text = format!(
                "closure {}\nmaximal_verified {}\ntrace {}\n",
                result.closure_set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                result.maximal_verified,
                result
                    .trace
                    .iter()
                    .map(|a| a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("+"))
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            emit(&cfg, common.out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Solve { common, cnf, solver, branching, node_budget, clause_budget, trace_out } => {
            let cfg = Config::load(common.config.as_deref())?;
            let cnf_path =
                cfg.pick_path("cnf", cnf).ok_or_else(|| anyhow!("solve requires --cnf"))?;
            let f = read_dimacs_file(&cnf_path)?;
            let solver = cfg.pick_str("solver", solver).unwrap_or_else(|| "dpll".into());
            let node_budget = cfg.pick_u64("node-budget", node_budget).unwrap_or(1 << 26);
            let clause_budget = cfg.pick_u64("clause-budget", clause_budget).unwrap_or(1 << 22);
            let trace_out = cfg.pick_path("trace-out", trace_out).or(common.out);
            let (verdict, proof) = match solver.as_str() {
                "dpll" => {
                    let branching = Branching::parse(
                        &cfg.pick_str("branching", branching)
                            .unwrap_or_else(|| "max-occurrence".into()),
                    )?;
                    match prove_dpll(f.num_vars, &f.clauses, branching, 0, node_budget) {
                        Ok(ProverOutcome::Sat(_)) => ("sat", None),
                        Ok(ProverOutcome::Unsat(p)) => ("unsat", Some(p)),
                        Err(pigeonlab::Error::Budget { required, cap }) => {
                            println!("budget exceeded: {} > {}", required, cap);
                            return Ok(EXIT_BUDGET);
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                "dp" => match prove_dp(f.num_vars, &f.clauses, None, clause_budget) {
                    Ok(DpOutcome::Sat) => ("sat", None),
                    Ok(DpOutcome::Unsat(p)) => ("unsat", Some(p)),
                    Err(pigeonlab::Error::Budget { required, cap }) => {
                        println!("budget exceeded: {} > {}", required, cap);
                        return Ok(EXIT_BUDGET);
                    }
                    Err(e) => return Err(e.into()),
                },
                other => bail!("unknown solver `{}`", other),
            };
            match proof {
                None => {
                    println!("{}", verdict);
                    Ok(EXIT_OK)
                }
                Some(proof) => {
                    println!("{} length {}", verdict, proof.len());
                    if let Some(path) = trace_out {
                        write_trace_file(&proof, &path)?;
                    }
                    Ok(EXIT_UNSAT)
                }
            }
        }
        Command::Check { common, cnf, trace, no_refutation, extra_axioms } => {
            let cfg = Config::load(common.config.as_deref())?;
            let cnf_path =
                cfg.pick_path("cnf", cnf).ok_or_else(|| anyhow!("check requires --cnf"))?;
            let trace_path =
                cfg.pick_path("trace", trace).ok_or_else(|| anyhow!("check requires --trace"))?;
            let f = read_dimacs_file(&cnf_path)?;
            let proof = read_trace_file(&trace_path)?;
            let extra = match cfg.pick_path("extra-axioms", extra_axioms) {
                Some(p) => read_dimacs_file(&p)?.clauses,
                None => Vec::new(),
            };
            match check_proof(&f.clauses, &extra, &proof, !no_refutation) {
                Verdict::Accepted => {
                    println!("valid ({} lines)", proof.len());
                    Ok(EXIT_OK)
                }
                Verdict::Rejected { line_id, reason } => {
                    println!("invalid at line {}: {}", line_id, reason);
                    Ok(EXIT_INVALID)
                }
            }
        }
        Command::Width { common, graph_file, variant, cnf, trace, alpha, w0 } => {
            let cfg = Config::load(common.config.as_deref())?;
            let gpath = cfg
                .pick_path("graph-file", graph_file)
                .ok_or_else(|| anyhow!("width requires --graph-file"))?;
            let g = read_graph_file(&gpath)?;
            let variant = cfg.pick_str("variant", variant).unwrap_or_else(|| "fphp".into());
            let f = encode(&g, Variant::parse(&variant)?);
            if let Some(cnf_path) = cfg.pick_path("cnf", cnf) {
                let disk = read_dimacs_file(&cnf_path)?;
                if disk.clauses != f.clauses {
                    bail!("formula on disk does not match the graph and variant");
                }
            }
            let trace_path =
                cfg.pick_path("trace", trace).ok_or_else(|| anyhow!("width requires --trace"))?;
            let proof = read_trace_file(&trace_path)?;
            let alpha = cfg.pick_usize("alpha", alpha).unwrap_or(2);
            let w0 = cfg.pick_usize("w0", w0).unwrap_or(4);
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(0);
            let derived = pigeonlab::pseudowidth::derive_profile(&f, &proof, alpha, w0, seed, 200)?;
            let mut buf = Vec::new();
            pigeonlab::pseudowidth::width_report_csv(&g, &f.vars, &proof, &derived.profile, &mut buf)?;
            let text = String::from_utf8(buf).expect("csv is ASCII");
            emit(&cfg, common.out, &text)?;
            let width = pigeonlab::pseudowidth::pseudo_width(&g, &f.vars, &proof, &derived.profile);
            eprintln!("pseudo-width {}", width);
            Ok(EXIT_OK)
        }
        Command::Filter { common, m, alpha, w0, max_attempts, rvecs, random } => {
            let cfg = Config::load(common.config.as_deref())?;
            let m = cfg.need_usize("m", m)?;
            let alpha = cfg.pick_usize("alpha", alpha).unwrap_or(2);
            let w0 = cfg.pick_usize("w0", w0).unwrap_or(alpha * alpha);
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(0);
            let max_attempts = cfg.pick_u64("max-attempts", max_attempts).unwrap_or(200);
            let vectors: Vec<Vec<usize>> = if let Some(path) = cfg.pick_path("rvecs", rvecs) {
                let text = std::fs::read_to_string(&path)?;
                text.lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| {
                        l.split_whitespace()
                            .map(|t| t.parse::<usize>().map_err(|e| anyhow!("bad entry: {}", e)))
                            .collect()
                    })
                    .collect::<Result<_>>()?
            } else {
                let count = cfg.pick_usize("random", random).unwrap_or(16);
                let dist = pigeonlab::pseudowidth::filter_distribution(m, alpha)?;
                let mut rng = pigeonlab::rng::SplitMix64::substream(seed, 0xAB);
                (0..count)
                    .map(|_| (0..m).map(|_| rng.below(dist.t as u64 + 1) as usize + 1).collect())
                    .collect()
            };
            match pigeonlab::pseudowidth::sample_filter_vector(&vectors, m, w0, alpha, seed, max_attempts)? {
                Ok((vector, transcript)) => {
                    let mut text = format!("accepted after {} attempts\n", transcript.attempts);
                    text.push_str(&vector.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                    text.push('\n');
                    for (idx, (case, c1, c2)) in transcript.cases.iter().enumerate() {
                        text.push_str(&format!(
                            "vector {} case {} counts {} {}\n",
                            idx,
                            match case {
                                pigeonlab::pseudowidth::FilterCase::ManySuperHeavy => 1,
                                pigeonlab::pseudowidth::FilterCase::FewHeavy => 2,
                            },
                            c1,
                            c2
                        ));
                    }
                    emit(&cfg, common.out, &text)?;
                    Ok(EXIT_OK)
                }
                Err(fail) => {
                    println!("rejected after {} attempts; worst input {}", fail.attempts, fail.worst_input);
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::SpanVerify { common, derivations, steps } => {
            let cfg = Config::load(common.config.as_deref())?;
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(1);
            let derivations = cfg.pick_usize("derivations", derivations).unwrap_or(20);
            let steps = cfg.pick_usize("steps", steps).unwrap_or(4);
            let preset = pigeonlab::spanlab::find_fphp_preset(6000, 40_000)?;
            println!("preset graph seed {}", preset.graph_seed);
            let summary = pigeonlab::spanlab::run_span_sweep(&preset, derivations, steps, seed, 1 << 24)?;
            let mut buf = Vec::new();
            pigeonlab::spanlab::span_report_csv(&summary.rows, &mut buf)?;
            emit(&cfg, common.out, &String::from_utf8(buf).expect("ASCII"))?;
            println!(
                "checked {} skipped {} violations {}",
                summary.checked, summary.skipped, summary.violations
            );
            Ok(if summary.violations == 0 { EXIT_OK } else { EXIT_INVALID })
        }
        Command::PmVerify { common, derivations, steps } => {
            let cfg = Config::load(common.config.as_deref())?;
            let seed = cfg.pick_u64("seed", common.seed).unwrap_or(1);
            let derivations = cfg.pick_usize("derivations", derivations).unwrap_or(10);
            let steps = cfg.pick_usize("steps", steps).unwrap_or(3);
            let preset = pigeonlab::matchinglab::find_pm_preset(0, 500, 77)?;
            println!("preset graph seed {}", preset.graph_seed);
            let summary = pigeonlab::matchinglab::run_pm_sweep(&preset, derivations, steps, seed, 1 << 24)?;
            let mut buf = Vec::new();
            pigeonlab::spanlab::span_report_csv(&summary.rows, &mut buf)?;
            emit(&cfg, common.out, &String::from_utf8(buf).expect("ASCII"))?;
            println!(
                "axioms {} fakes {} steps {} skipped {} violations {}",
                summary.axiom_passes,
                summary.fake_passes,
                summary.steps_checked,
                summary.steps_skipped,
                summary.violations
            );
            Ok(if summary.violations == 0 { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Bounds { common, variant, m, n, delta, r, alpha, regime, epsilon } => {
            let cfg = Config::load(common.config.as_deref())?;
            if let Some(regime) = cfg.pick_str("regime", regime) {
                let variant = match regime.as_str() {
                    "cor-random-fphp" => pigeonlab::pseudowidth::RegimeVariant::RandomFphp,
                    "cor-random-pm" => pigeonlab::pseudowidth::RegimeVariant::RandomPm,
                    other => bail!("unknown regime `{}`", other),
                };
                let m = cfg
                    .pick_str("m", m)
                    .ok_or_else(|| anyhow!("need --m"))?
                    .parse::<pigeonlab::BigUint>()
                    .map_err(|e| anyhow!("bad m: {}", e))?;
                let n = cfg
                    .pick_str("n", n)
                    .ok_or_else(|| anyhow!("need --n"))?
                    .parse::<pigeonlab::BigUint>()
                    .map_err(|e| anyhow!("bad n: {}", e))?;
                let delta = cfg.need_usize("delta", delta)?;
                let eps = parse_rat(
                    &cfg.pick_str("epsilon", epsilon).ok_or_else(|| anyhow!("need --epsilon"))?,
                )?;
                let report = pigeonlab::pseudowidth::regime_validator(&m, &n, delta, &eps, variant)?;
                let mut text = String::new();
                for check in &report.checks {
                    text.push_str(&format!(
                        "{}: {} (lhs {:.4}, rhs {:.4})\n",
                        check.name,
                        if check.holds { "pass" } else { "fail" },
                        check.lhs,
                        check.rhs
                    ));
                }
                emit(&cfg, common.out, &text)?;
                return Ok(EXIT_OK);
            }
            let variant = match cfg.pick_str("variant", variant).as_deref() {
                Some("pm") => pigeonlab::pseudowidth::BoundVariant::Pm,
                _ => pigeonlab::pseudowidth::BoundVariant::Fphp,
            };
            let m = cfg
                .pick_str("m", m)
                .ok_or_else(|| anyhow!("need --m"))?
                .parse::<usize>()
                .context("bad m")?;
            let n = cfg
                .pick_str("n", n)
                .ok_or_else(|| anyhow!("need --n"))?
                .parse::<usize>()
                .context("bad n")?;
            let r = cfg.need_usize("r", r)?;
            let alpha = cfg.pick_usize("alpha", alpha).unwrap_or(2);
            let report = pigeonlab::pseudowidth::bound_calculator(m, n, r, alpha, variant)?;
            let mut text =
                format!("exponent {} ({:.4})\n", report.exponent, rat_to_f64(&report.exponent));
            for (name, ok) in &report.conditions {
                text.push_str(&format!("{}: {}\n", name, if *ok { "pass" } else { "fail" }));
            }
            emit(&cfg, common.out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Experiment {
            common,
            variant,
            solver,
            graph,
            ns,
            seeds,
            delta,
            m,
            node_budget,
            clause_budget,
            graph_file,
            alpha,
            w0,
            keep_proofs,
        } => {
            let cfg = Config::load(common.config.as_deref())?;
            use pigeonlab::experiment::*;
            let variant =
                Variant::parse(&cfg.pick_str("variant", variant).unwrap_or_else(|| "php".into()))?;
            let solver =
                Solver::parse(&cfg.pick_str("solver", solver).unwrap_or_else(|| "dpll".into()))?;
            let graph_kind = cfg.pick_str("graph", graph).unwrap_or_else(|| "complete".into());
            let source = match graph_kind.as_str() {
                "complete" => GraphSource::Complete,
                "random" => GraphSource::Random { delta: cfg.need_usize("delta", delta)? },
                "file" => GraphSource::File(
                    cfg.pick_path("graph-file", graph_file)
                        .ok_or_else(|| anyhow!("graph file source requires --graph-file"))?,
                ),
                other => bail!("unknown graph source `{}`", other),
            };
            let ns: Vec<usize> = match cfg.pick_str("ns", ns) {
                Some(s) => parse_range_list(&s)?.into_iter().map(|v| v as usize).collect(),
                None => vec![],
            };
            let seeds = match cfg.pick_str("seeds", seeds) {
                Some(s) => parse_range_list(&s)?,
                None => vec![cfg.pick_u64("seed", common.seed).unwrap_or(0)],
            };
            let (m_offset, m_fixed) = match cfg.pick_str("m", m) {
                None => (1isize, None),
                Some(s) => {
                    let s = s.trim().to_string();
                    if let Some(rest) = s.strip_prefix("n+") {
                        (rest.parse::<isize>().context("bad m rule")?, None)
                    } else if s == "n" {
                        (0, None)
                    } else {
                        (0, Some(s.parse::<usize>().context("bad m")?))
                    }
                }
            };
            let spec = ExperimentSpec {
                variant,
                solver,
                source,
                ns,
                m_offset,
                m_fixed,
                seeds,
                node_budget: cfg.pick_u64("node-budget", node_budget).unwrap_or(1 << 26),
                clause_budget: cfg.pick_u64("clause-budget", clause_budget).unwrap_or(1 << 22),
                width_profile: match (cfg.pick_usize("alpha", alpha), cfg.pick_usize("w0", w0)) {
                    (Some(a), Some(w)) => Some((a, w)),
                    _ => None,
                },
                keep_proofs: keep_proofs
                    || cfg.get("keep-proofs").map(|v| v == "true").unwrap_or(false),
            };
            let out = cfg
                .pick_path("out", common.out)
                .ok_or_else(|| anyhow!("experiment requires --out"))?;
            let output = run_experiment(&spec, &out)?;
            println!(
                "wrote {} rows to {} (plot: {})",
                output.rows.len(),
                output.csv_path.display(),
                output.plot_path.display()
            );
            Ok(EXIT_OK)
        }
    }
}
