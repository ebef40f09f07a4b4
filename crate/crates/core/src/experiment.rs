//! Experiment runner: sweeps formula instances over hole counts and seeds,
//! solves each in isolation on a worker pool, and emits a deterministic CSV
//! (sorted by hole count, then seed) plus a renderer-agnostic plot
//! description. Wall-clock columns are excluded from the determinism
//! contract.

pub use crate::numeric::chernoff_bound;

/// Report form of the concentration bound: probabilities cap at 1.
pub fn chernoff_bound_report(mu: &crate::Rat, dev: &crate::Rat) -> crate::Rat {
    let raw = chernoff_bound(mu, dev);
    let one = crate::numeric::rat_int(1);
    if raw > one {
        one
    } else {
        raw
    }
}

use crate::formula::{encode, GraphCnf, Variant};
use crate::graph::{complete_graph, read_graph_file, sample_random, BipartiteGraph};
use crate::pseudowidth::{derive_profile, pseudo_width};
use crate::resolution::{
    check_proof, prove_dp, prove_dpll, Branching, DpOutcome, ProverOutcome, ResolutionProof,
};
use crate::{Error, Result};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Dpll,
    Dp,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Dpll => "dpll",
            Solver::Dp => "dp",
        }
    }
    pub fn parse(s: &str) -> Result<Solver> {
        match s {
            "dpll" => Ok(Solver::Dpll),
            "dp" => Ok(Solver::Dp),
            other => Err(Error::param(format!("unknown solver `{}`", other))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum GraphSource {
    /// Complete graph `K_{m,n}`.
    Complete,
    /// Per-pigeon random subsets of the given degree.
    Random { delta: usize },
    /// A single graph file; the sweep collapses to one row per seed-less run.
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub variant: Variant,
    pub solver: Solver,
    pub source: GraphSource,
    /// Hole counts to sweep.
    pub ns: Vec<usize>,
    /// Pigeons as an offset from the hole count (`m = n + m_offset`) unless
    /// `m_fixed` is set.
    pub m_offset: isize,
    pub m_fixed: Option<usize>,
    pub seeds: Vec<u64>,
    pub node_budget: u64,
    pub clause_budget: u64,
    /// Optional width profiling: (alpha, w0).
    pub width_profile: Option<(usize, usize)>,
    pub keep_proofs: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_budget == 0 || self.clause_budget == 0 {
            return Err(Error::param("budgets must be positive"));
        }
        Ok(())
    }

    fn m_for(&self, n: usize) -> usize {
        match self.m_fixed {
            Some(m) => m,
            None => (n as isize + self.m_offset).max(1) as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowVerdict {
    Sat,
    Unsat,
    Budget,
}

impl RowVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RowVerdict::Sat => "sat",
            RowVerdict::Unsat => "unsat",
            RowVerdict::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResultRow {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub seed: u64,
    pub variant: Variant,
    pub solver: Solver,
    pub verdict: RowVerdict,
    pub proof_length: Option<usize>,
    pub pseudo_width: Option<usize>,
    pub wall_ms: u128,
}

pub const CSV_HEADER: &str = "n,m,delta,seed,variant,solver,verdict,proof_length,pseudo_width,wall_ms";

fn fmt_row(r: &ResultRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.n,
        r.m,
        r.delta,
        r.seed,
        r.variant.as_str(),
        r.solver.as_str(),
        r.verdict.as_str(),
        r.proof_length.map(|v| v.to_string()).unwrap_or_default(),
        r.pseudo_width.map(|v| v.to_string()).unwrap_or_default(),
        r.wall_ms,
    )
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&fmt_row(r));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub csv_path: PathBuf,
    pub plot_path: PathBuf,
}

struct Job {
    n: usize,
    seed: u64,
}

fn build_graph(spec: &ExperimentSpec, job: &Job) -> Result<(BipartiteGraph, usize)> {
    match &spec.source {
        GraphSource::Complete => {
            let m = spec.m_for(job.n);
            Ok((complete_graph(m, job.n), job.n))
        }
        GraphSource::Random { delta } => {
            let m = spec.m_for(job.n);
            Ok((sample_random(m, job.n, *delta, job.seed)?, *delta))
        }
        GraphSource::File(path) => {
            let g = read_graph_file(path)?;
            let delta = g.delta_max();
            Ok((g, delta))
        }
    }
}

fn solve_one(
    spec: &ExperimentSpec,
    f: &GraphCnf,
) -> Result<(RowVerdict, Option<ResolutionProof>)> {
    match spec.solver {
        Solver::Dpll => match prove_dpll(
            f.num_vars(),
            &f.clauses,
            Branching::MaxOccurrence,
            0,
            spec.node_budget,
        ) {
            Ok(ProverOutcome::Sat(_)) => Ok((RowVerdict::Sat, None)),
            Ok(ProverOutcome::Unsat(p)) => Ok((RowVerdict::Unsat, Some(p))),
            Err(Error::Budget { .. }) => Ok((RowVerdict::Budget, None)),
            Err(e) => Err(e),
        },
        Solver::Dp => match prove_dp(f.num_vars(), &f.clauses, None, spec.clause_budget) {
            Ok(DpOutcome::Sat) => Ok((RowVerdict::Sat, None)),
            Ok(DpOutcome::Unsat(p)) => Ok((RowVerdict::Unsat, Some(p))),
            Err(Error::Budget { .. }) => Ok((RowVerdict::Budget, None)),
            Err(e) => Err(e),
        },
    }
}

fn run_job(spec: &ExperimentSpec, job: &Job, trace_dir: Option<&Path>) -> Result<ResultRow> {
    let start = std::time::Instant::now();
    let (graph, delta) = build_graph(spec, job)?;
    let mut f = encode(&graph, spec.variant);
    f.seed = Some(job.seed);
    let (verdict, proof) = solve_one(spec, &f)?;
    let mut pseudo = None;
    if let (Some(proof), Some((alpha, w0))) = (&proof, spec.width_profile) {
        if let Ok(derived) = derive_profile(&f, proof, alpha, w0, job.seed, 200) {
            pseudo = Some(pseudo_width(&graph, &f.vars, proof, &derived.profile));
        }
    }
    if let (Some(dir), Some(proof)) = (trace_dir, &proof) {
        let verdict = check_proof(&f.clauses, &[], proof, true);
        if !verdict.is_accepted() {
            return Err(Error::rule("produced proof failed its own check"));
        }
        let name = format!(
            "{}-n{}-m{}-s{}.trc",
            spec.variant.as_str(),
            job.n,
            graph.left_count(),
            job.seed
        );
        crate::resolution::write_trace_file(proof, &dir.join(name))?;
    }
    Ok(ResultRow {
        n: graph.right_count(),
        m: graph.left_count(),
        delta,
        seed: job.seed,
        variant: spec.variant,
        solver: spec.solver,
        verdict,
        proof_length: proof.as_ref().map(|p| p.len()),
        pseudo_width: pseudo,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Runs the sweep and writes `<out>.csv` and `<out>.plot`. Budget failures
/// become rows; row order is canonical regardless of worker count.
pub fn run_experiment(spec: &ExperimentSpec, out_base: &Path) -> Result<ExperimentOutput> {
    spec.validate()?;
    let csv_path = out_base.with_extension("csv");
    let plot_path = out_base.with_extension("plot");
    // fail before solving if the output location is unusable
    if let Some(parent) = csv_path.parent() {
        if !parent.as_os_str().is_empty() && !parent.exists() {
            return Err(Error::param(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    let trace_dir = if spec.keep_proofs {
        let dir = out_base.with_extension("traces");
        std::fs::create_dir_all(&dir)?;
        Some(dir)
    } else {
        None
    };
    let ns: Vec<usize> = match spec.source {
        GraphSource::File(_) => vec![0],
        _ => spec.ns.clone(),
    };
    let mut jobs = Vec::new();
    for &n in &ns {
        for &seed in &spec.seeds {
            jobs.push(Job { n, seed });
        }
    }
    let results: Result<Vec<ResultRow>> = jobs
        .par_iter()
        .map(|job| run_job(spec, job, trace_dir.as_deref()))
        .collect();
    let mut rows = results?;
    rows.sort_by_key(|r| (r.n, r.seed));
    std::fs::write(&csv_path, rows_to_csv(&rows))?;
    std::fs::write(&plot_path, plot_description(&csv_path))?;
    Ok(ExperimentOutput { rows, csv_path, plot_path })
}

/// Declarative plot description; any renderer can consume it.
fn plot_description(csv_path: &Path) -> String {
    let mut out = String::new();
    out.push_str("# plot description\n");
    out.push_str(&format!("data {}\n", csv_path.display()));
    out.push_str("x n\n");
    out.push_str("y proof_length\n");
    out.push_str("yscale log\n");
    out.push_str("group variant,solver\n");
    out.push_str("title refutation length vs hole count\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat_int, rat_to_f64};

    fn base_spec() -> ExperimentSpec {
        ExperimentSpec {
            variant: Variant::Php,
            solver: Solver::Dpll,
            source: GraphSource::Complete,
            ns: vec![3, 4, 5],
            m_offset: 1,
            m_fixed: None,
            seeds: vec![1],
            node_budget: 1 << 24,
            clause_budget: 1 << 20,
            width_profile: None,
            keep_proofs: false,
        }
    }

    #[test]
    fn php_sweep_rows() {
        let dir = std::env::temp_dir().join(format!("lab-exp-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let out = run_experiment(&base_spec(), &dir.join("php")).unwrap();
        assert_eq!(out.rows.len(), 3);
        assert!(out.rows.iter().all(|r| r.verdict == RowVerdict::Unsat));
        assert!(out.rows.windows(2).all(|w| w[0].proof_length < w[1].proof_length));
        let csv = std::fs::read_to_string(&out.csv_path).unwrap();
        assert!(csv.starts_with(CSV_HEADER));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn deterministic_modulo_wall_ms() {
        let dir = std::env::temp_dir().join(format!("lab-exp2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut spec = base_spec();
        spec.ns = vec![3, 4];
        spec.seeds = vec![1, 2];
        spec.source = GraphSource::Random { delta: 2 };
        spec.variant = Variant::Pm;
        spec.m_offset = 0;
        let a = run_experiment(&spec, &dir.join("a")).unwrap();
        let b = run_experiment(&spec, &dir.join("b")).unwrap();
        let strip = |p: &std::path::Path| -> Vec<String> {
            std::fs::read_to_string(p)
                .unwrap()
                .lines()
                .map(|l| l.rsplit_once(',').unwrap().0.to_string())
                .collect()
        };
        assert_eq!(strip(&a.csv_path), strip(&b.csv_path));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn empty_sweep_header_only() {
        let dir = std::env::temp_dir().join(format!("lab-exp3-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut spec = base_spec();
        spec.ns = vec![];
        let out = run_experiment(&spec, &dir.join("x")).unwrap();
        assert!(out.rows.is_empty());
        let csv = std::fs::read_to_string(&out.csv_path).unwrap();
        assert_eq!(csv, format!("{}\n", CSV_HEADER));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn kept_proofs_are_checker_accepted() {
        let dir = std::env::temp_dir().join(format!("lab-exp4-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut spec = base_spec();
        spec.ns = vec![3, 4];
        spec.keep_proofs = true;
        let out = run_experiment(&spec, &dir.join("kept")).unwrap();
        for row in &out.rows {
            assert_eq!(row.verdict, RowVerdict::Unsat);
            let trace = dir.join("kept.traces").join(format!(
                "{}-n{}-m{}-s{}.trc",
                row.variant.as_str(),
                row.n,
                row.m,
                row.seed
            ));
            let proof = crate::resolution::read_trace_file(&trace).unwrap();
            let g = crate::graph::complete_graph(row.m, row.n);
            let f = encode(&g, row.variant);
            assert!(crate::resolution::check_proof(&f.clauses, &[], &proof, true).is_accepted());
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn unwritable_output_fails_before_solving() {
        let spec = base_spec();
        let out = run_experiment(&spec, Path::new("/nonexistent-dir-xyz/out"));
        assert!(out.is_err());
    }

    #[test]
    fn chernoff_reexport() {
        let v = chernoff_bound(&rat_int(50), &rat_int(30));
        assert!((rat_to_f64(&v) - 2.0 * (-900.0f64 / 130.0).exp()).abs() < 1e-9);
        // vacuous bounds clamp to 1 in reports
        assert_eq!(chernoff_bound_report(&rat_int(50), &rat_int(0)), rat_int(1));
        assert_eq!(chernoff_bound_report(&rat_int(50), &rat_int(30)), v);
    }
}
