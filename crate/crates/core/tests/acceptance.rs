//! Acceptance suite: one test per shipping criterion, each printing a
//! pass/fail line and enforcing its wall-clock budget. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use pigeonlab::closure::{closure, ClosureParams, Snapshot};
use pigeonlab::formula::{
    clause_status, encode_fphp, encode_php, encode_pm, matching_to_assignment, Clause,
    ClauseStatus, PartialAssignment,
};
use pigeonlab::graph::{
    certify_boundary_expansion, complete_graph, sample_random, BipartiteGraph,
    DEFAULT_ENUM_BUDGET,
};
use pigeonlab::matchinglab as pm;
use pigeonlab::numeric::{rat, rat_int, rat_pow, rat_usize};
use pigeonlab::pseudowidth as pw;
use pigeonlab::resolution::{
    check_proof, prove_dpll, Branching, ProofLine, ProverOutcome, ResolutionProof, Rule,
};
use pigeonlab::rng::SplitMix64;
use pigeonlab::spanlab as span;
use pigeonlab::Rat;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

fn finish(name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    eprintln!("{}: PASS ({:.1?} of {:.0?} budget)", name, elapsed, budget);
    assert!(
        elapsed <= budget,
        "{} exceeded its wall-clock budget: {:.1?} > {:.0?}",
        name,
        elapsed,
        budget
    );
}

fn dpll(f: &pigeonlab::formula::GraphCnf) -> ProverOutcome {
    prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 1 << 28)
        .expect("within budget")
}

fn refute(f: &pigeonlab::formula::GraphCnf) -> ResolutionProof {
    match dpll(f) {
        ProverOutcome::Unsat(p) => p,
        ProverOutcome::Sat(_) => panic!("expected unsatisfiable instance"),
    }
}

/// Criterion 1: every complete-graph instance with n <= 6 < m <= 8 is
/// refuted with a checker-accepted proof, and matching-formula verdicts
/// agree with the matching oracle on 200 seeded random graphs.
#[test]
fn criterion_01_unsat_sanity() {
    let start = Instant::now();
    for m in 7..=8usize {
        for n in 1..=6usize {
            let g = complete_graph(m, n);
            for f in [encode_php(&g), encode_fphp(&g)] {
                let proof = refute(&f);
                assert!(
                    check_proof(&f.clauses, &[], &proof, true).is_accepted(),
                    "proof rejected for m={} n={}",
                    m,
                    n
                );
            }
        }
    }
    let mut mismatches = 0;
    for seed in 0..200u64 {
        let n = 3 + (seed % 4) as usize; // 3..=6
        let delta = 1 + (seed % 3) as usize;
        let g = sample_random(n, n, delta, seed).unwrap();
        let f = encode_pm(&g);
        let sat = matches!(dpll(&f), ProverOutcome::Sat(_));
        if sat != g.exists_perfect_matching() {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0, "matching-formula verdicts disagree with the oracle");
    finish("criterion 1 (unsat sanity)", start, Duration::from_secs(180));
}

/// Single-token mutations of a proof: flip a literal sign, retarget a
/// variable, drop or add a literal, retarget an antecedent, or change a
/// pivot.
fn mutate(proof: &ResolutionProof, num_vars: usize, rng: &mut SplitMix64) -> Option<ResolutionProof> {
    let mut lines: Vec<ProofLine> = proof.lines.clone();
    let idx = rng.below(lines.len() as u64) as usize;
    let line = &mut lines[idx];
    let kind = rng.below(6);
    match kind {
        0 | 1 | 2 => {
            // literal-level token edits
            let mut lits: Vec<i64> = line.clause.lits().to_vec();
            match kind {
                0 => {
                    if lits.is_empty() {
                        return None;
                    }
                    let k = rng.below(lits.len() as u64) as usize;
                    lits[k] = -lits[k];
                }
                1 => {
                    if lits.is_empty() {
                        return None;
                    }
                    let k = rng.below(lits.len() as u64) as usize;
                    let new_var = rng.below(num_vars as u64) as i64 + 1;
                    let signed = if lits[k] > 0 { new_var } else { -new_var };
                    if signed == lits[k] {
                        return None;
                    }
                    lits[k] = signed;
                }
                _ => {
                    let new_var = rng.below(num_vars as u64) as i64 + 1;
                    let lit = if rng.coin() { new_var } else { -new_var };
                    if lits.contains(&lit) {
                        if lits.len() <= 1 {
                            return None;
                        }
                        let k = rng.below(lits.len() as u64) as usize;
                        lits.remove(k);
                    } else {
                        lits.push(lit);
                    }
                }
            }
            line.clause = Clause::new(lits);
        }
        3 | 4 => {
            let target = rng.below(lines.len() as u64) as usize + 1;
            let line_id = lines[idx].id;
            if target >= line_id {
                return None;
            }
            match &mut lines[idx].rule {
                Rule::Resolve { a, b, .. } => {
                    let slot = if kind == 3 { a } else { b };
                    if *slot == target {
                        return None;
                    }
                    *slot = target;
                }
                Rule::Weaken { parent } => {
                    if *parent == target {
                        return None;
                    }
                    *parent = target;
                }
                Rule::Axiom => return None,
            }
        }
        _ => match &mut lines[idx].rule {
            Rule::Resolve { pivot, .. } => {
                let new_pivot = rng.below(num_vars as u64) as usize + 1;
                if new_pivot == *pivot {
                    return None;
                }
                *pivot = new_pivot;
            }
            _ => return None,
        },
    }
    Some(ResolutionProof { lines })
}

/// Truth-table entailment of each line from its stated parents; an
/// independent legality check for mutants the checker accepts.
fn semantically_valid(axioms: &[Clause], proof: &ResolutionProof) -> bool {
    for line in &proof.lines {
        match &line.rule {
            Rule::Axiom => {
                if !axioms.contains(&line.clause) {
                    return false;
                }
            }
            Rule::Resolve { a, b, .. } => {
                let (pa, pb) = match (proof.line(*a), proof.line(*b)) {
                    (Some(pa), Some(pb)) if pa.id < line.id && pb.id < line.id => (pa, pb),
                    _ => return false,
                };
                if !entails(&[&pa.clause, &pb.clause], &line.clause) {
                    return false;
                }
            }
            Rule::Weaken { parent } => {
                let p = match proof.line(*parent) {
                    Some(p) if p.id < line.id => p,
                    _ => return false,
                };
                if !entails(&[&p.clause], &line.clause) {
                    return false;
                }
            }
        }
    }
    proof.is_refutation()
}

fn entails(premises: &[&Clause], conclusion: &Clause) -> bool {
    let mut vars: BTreeSet<usize> = BTreeSet::new();
    for c in premises.iter().copied().chain([conclusion]) {
        vars.extend(c.vars());
    }
    let vars: Vec<usize> = vars.into_iter().collect();
    if vars.len() > 20 {
        return false; // out of scope for the whitelist check
    }
    for mask in 0u32..(1 << vars.len()) {
        let mut rho = PartialAssignment::new();
        for (k, &v) in vars.iter().enumerate() {
            rho.set(v, mask & (1 << k) != 0);
        }
        let premises_hold = premises
            .iter()
            .all(|c| clause_status(c, &rho) == ClauseStatus::Satisfied);
        if premises_hold && clause_status(conclusion, &rho) != ClauseStatus::Satisfied {
            return false;
        }
    }
    true
}

/// Criterion 2: at least 999 of 1000 seeded single-token mutations are
/// rejected; any survivor must be independently legal.
#[test]
fn criterion_02_checker_adversarial() {
    let start = Instant::now();
    let g = complete_graph(4, 3);
    let f = encode_fphp(&g);
    let proof = refute(&f);
    assert!(check_proof(&f.clauses, &[], &proof, true).is_accepted());
    let mut rng = SplitMix64::new(20240);
    let mut rejected = 0;
    let mut produced = 0;
    while produced < 1000 {
        let mutant = match mutate(&proof, f.num_vars(), &mut rng) {
            Some(m) => m,
            None => continue,
        };
        if mutant == proof {
            continue;
        }
        produced += 1;
        if check_proof(&f.clauses, &[], &mutant, true).is_accepted() {
            assert!(
                semantically_valid(&f.clauses, &mutant),
                "checker accepted a semantically invalid mutant"
            );
        } else {
            rejected += 1;
        }
    }
    assert!(rejected >= 999, "only {} of 1000 mutants rejected", rejected);
    finish("criterion 2 (checker adversarial)", start, Duration::from_secs(30));
}

/// Naive oracle: enumerate all nonempty subsets up to size r with fresh
/// boundary recounts.
fn naive_worst_ratio(g: &BipartiteGraph, r: usize) -> (Rat, Vec<usize>) {
    let mut best: Option<(Rat, Vec<usize>)> = None;
    let m = g.left_count();
    let mut subset: Vec<usize> = Vec::new();
    fn recurse(
        g: &BipartiteGraph,
        from: usize,
        r: usize,
        subset: &mut Vec<usize>,
        best: &mut Option<(Rat, Vec<usize>)>,
    ) {
        if !subset.is_empty() {
            let mut counts = std::collections::HashMap::new();
            for &i in subset.iter() {
                for &j in g.neighbours(i) {
                    *counts.entry(j).or_insert(0u32) += 1;
                }
            }
            let boundary = counts.values().filter(|&&c| c == 1).count();
            let ratio = rat_usize(boundary) / rat_usize(subset.len());
            let better = match best {
                None => true,
                Some((b, bset)) => ratio < *b || (ratio == *b && subset < bset),
            };
            if better {
                *best = Some((ratio, subset.clone()));
            }
            // unique-neighbour inequality on every enumerated set
            assert!(pigeonlab::graph::check_unique_neighbour_inequality(g, subset).unwrap());
        }
        if subset.len() == r {
            return;
        }
        for v in from..=g.left_count() {
            subset.push(v);
            recurse(g, v + 1, r, subset, best);
            subset.pop();
        }
    }
    recurse(g, 1, r.min(m), &mut subset, &mut best);
    best.expect("nonempty graph")
}

/// Criterion 3: the exhaustive certifier agrees with an independent naive
/// enumerator on 100 random graphs, and the unique-neighbour inequality
/// holds for every enumerated set.
#[test]
fn criterion_03_expansion_oracle_agreement() {
    let start = Instant::now();
    for seed in 0..100u64 {
        let m = 6 + (seed % 7) as usize; // 6..=12
        let n = 8 + (seed % 9) as usize; // 8..=16
        let delta = 2 + (seed % 3) as usize;
        let r = 2 + (seed % 3) as usize; // 2..=4
        let g = sample_random(m, n, delta, seed).unwrap();
        let report = certify_boundary_expansion(&g, r, &rat_int(1), DEFAULT_ENUM_BUDGET).unwrap();
        let (naive_ratio, naive_set) = naive_worst_ratio(&g, r);
        assert_eq!(report.worst_ratio, naive_ratio, "seed {}", seed);
        assert_eq!(report.worst_set, naive_set, "seed {}", seed);
        assert_eq!(report.certified, naive_ratio >= rat_int(1));
    }
    finish("criterion 3 (expansion oracle)", start, Duration::from_secs(120));
}

/// Criterion 4: with m = 64, alpha = 2, w0 = 9, and 64 random capacity
/// vectors per trial, an accepted filter vector appears within 200 attempts
/// in at least 95 of 100 trials, with both disjuncts verified per vector.
#[test]
fn criterion_04_filter_executable() {
    let start = Instant::now();
    let m = 64;
    let (alpha, w0) = (2usize, 9usize);
    let dist = pw::filter_distribution(m, alpha).unwrap();
    let cap = pw::GAMMA as usize * alpha * w0;
    let mut successes = 0;
    for trial in 0..100u64 {
        let mut rng = SplitMix64::substream(4242, trial);
        let rvecs: Vec<Vec<usize>> = (0..64)
            .map(|_| (0..m).map(|_| rng.below(dist.t as u64 + 1) as usize + 1).collect())
            .collect();
        match pw::sample_filter_vector(&rvecs, m, w0, alpha, trial, 200).unwrap() {
            Ok((vector, transcript)) => {
                // re-verify the accepted disjunct for every input vector
                for (input, (case, c1, c2)) in rvecs.iter().zip(&transcript.cases) {
                    let case1 = (0..m).filter(|&i| input[i] <= vector[i]).count();
                    let case2 = (0..m).filter(|&i| input[i] <= vector[i] + 1).count();
                    assert_eq!((case1, case2), (*c1, *c2));
                    match case {
                        pw::FilterCase::ManySuperHeavy => assert!(case1 >= w0),
                        pw::FilterCase::FewHeavy => assert!(case2 <= cap),
                    }
                }
                successes += 1;
            }
            Err(_) => {}
        }
    }
    assert!(successes >= 95, "only {} of 100 trials accepted", successes);
    finish("criterion 4 (filter executable)", start, Duration::from_secs(60));
}

/// Criterion 5: on 500 certified-expander instances the closure-size bound
/// holds, and where the residual-expansion preconditions are met the
/// residual property holds, with zero violations.
#[test]
fn criterion_05_closure_lemmas() {
    let start = Instant::now();
    let mut instances = 0u64;
    let mut residual_checked = 0u64;
    let mut seed = 0u64;
    while instances < 500 {
        seed += 1;
        let m = 5 + (seed % 6) as usize; // 5..=10
        let n = m + 2 + (seed % m as u64) as usize;
        let delta = 2 + (seed % 2) as usize;
        let g = match sample_random(m, n, delta, seed) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let r = 4.min(m);
        let report = certify_boundary_expansion(&g, r, &rat_int(0), DEFAULT_ENUM_BUDGET).unwrap();
        let c = report.worst_ratio.clone();
        if c <= rat_int(0) {
            continue; // not an expander at this radius
        }
        // certified at exactly its worst ratio
        let cert = certify_boundary_expansion(&g, r, &c, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(cert.certified);
        instances += 1;
        let nu = &c / rat_int(2);
        let params = ClosureParams::new(r, nu, None).unwrap();
        let t: BTreeSet<usize> = [(seed % m as u64) as usize + 1].into_iter().collect();
        // size bound
        assert!(
            pigeonlab::closure::validate_closure_size(&g, &t, &params, g.delta_max(), &c)
                .unwrap(),
            "size bound violated at seed {}",
            seed
        );
        // residual expansion where its preconditions hold
        match pigeonlab::closure::validate_closure_expansion(&g, &t, &params) {
            Ok(report) => {
                assert!(report.holds, "residual violation at seed {}: {:?}", seed, report.witness);
                residual_checked += 1;
            }
            Err(pigeonlab::Error::Precondition(_)) => {}
            Err(e) => panic!("unexpected error: {}", e),
        }
    }
    assert!(residual_checked >= 250, "only {} residual checks ran", residual_checked);
    finish("criterion 5 (closure lemmas)", start, Duration::from_secs(300));
}

/// Criterion 6: on the preset instance family, real axioms have empty
/// images, constructed axioms with exactly w0 super-heavy pigeons satisfy
/// the fraction bound exactly, and span containment holds over 200 random
/// derivations.
#[test]
fn criterion_06_fphp_span_suite() {
    let start = Instant::now();
    let preset = span::find_fphp_preset(6000, 40_000).unwrap();
    let g = &preset.graph;
    let f = encode_fphp(g);
    // real axioms map to the zero space
    for clause in &f.clauses {
        let lam = span::lambda_of_clause(
            g,
            &f.vars,
            clause,
            &preset.profile,
            &preset.spaces,
            &preset.params,
            1 << 24,
        )
        .unwrap();
        assert_eq!(lam.dim(), 0);
    }
    // every two-pigeon axiom with exactly w0 = 2 super-heavy pigeons
    let bound = rat_pow(&(rat_int(1) - &preset.xi), 2);
    for a in 1..=4usize {
        for b in (a + 1)..=4usize {
            let fake = pw::make_fake_axiom(g, &f.vars, &preset.profile, &[a, b]).unwrap();
            let h = pw::heavy_sets(g, &f.vars, &fake, &preset.profile);
            assert_eq!(h.super_heavy.len(), 2);
            let lam = span::lambda_of_clause(
                g,
                &f.vars,
                &fake,
                &preset.profile,
                &preset.spaces,
                &preset.params,
                1 << 24,
            )
            .unwrap();
            assert!(lam.dim_fraction() <= bound, "fraction bound violated for ({}, {})", a, b);
        }
    }
    // 200 random short derivations
    let summary = span::run_span_sweep(&preset, 200, 2, 606, 1 << 24).unwrap();
    assert_eq!(summary.violations, 0, "span containment violated");
    assert!(summary.checked >= 200, "only {} steps checked", summary.checked);
    finish("criterion 6 (span suite)", start, Duration::from_secs(600));
}

/// Criterion 7: sampled partitions pass independent re-verification in
/// 100/100 runs; the extension procedure satisfies its claims on 500 random
/// runs while the eager control fails; the vertex-side span suite reports
/// zero violations.
#[test]
fn criterion_07_pm_machinery() {
    let start = Instant::now();
    // partition sampling and independent re-verification
    let (g, profile, fakes, clauses) = partition_fixture();
    let f = encode_pm(&g);
    let xi = rat(1, 8);
    let mut accepted = 0;
    for run in 0..100u64 {
        let out = pm::sample_partition(&g, &f.vars, &clauses, &fakes, &profile, 4, &xi, run, 64)
            .unwrap();
        let sampled = match out {
            Ok(s) => s,
            Err(fail) => panic!("run {} exhausted retries: {:?}", run, fail),
        };
        assert!(
            reverify_partition(&g, &f.vars, &clauses, &fakes, &profile, &sampled.partition, 4, &xi),
            "independent re-verification failed on run {}",
            run
        );
        accepted += 1;
    }
    assert_eq!(accepted, 100);

    // extension claims on 500 random runs
    let mut rng = SplitMix64::new(505);
    let mut runs = 0;
    while runs < 500 {
        let gg = sample_random(6, 8, 3, rng.next_u64()).unwrap();
        // random partition, psi, and pairwise-disjoint right lists
        let v_p: BTreeSet<usize> = (1..=14).filter(|_| rng.coin()).collect();
        let partition = pm::Partition { v_p, seed: 0, retries: 0 };
        let mut psi = pigeonlab::formula::Matching::empty();
        for i in 4..=6usize {
            let js = gg.neighbours(i);
            let j = js[rng.below(js.len() as u64) as usize];
            let _ = psi.insert(&gg, i, j);
        }
        // lists live on the hole side of the partition, as in the extension
        // procedure's intended use
        let t = vec![1usize, 2];
        let mut used = BTreeSet::new();
        let mut lists = Vec::new();
        for &v in &t {
            let mut list = Vec::new();
            for &j in gg.neighbours(v) {
                if partition.in_h(gg.left_count() + j) && used.insert(j) {
                    list.push(j);
                }
            }
            if list.is_empty() {
                lists.clear();
                break;
            }
            lists.push((v, list));
        }
        if lists.len() != t.len() {
            continue;
        }
        runs += 1;
        let outputs = pm::extend_matching(&gg, &t, &psi, &lists).unwrap();
        assert!(!outputs.is_empty());
        let must_cover: Vec<usize> = t.clone();
        let report = pm::validate_extend_claims(&gg, &partition, &psi, &must_cover, &outputs);
        assert!(report.all_hold(), "claims violated on run {}: {:?}", runs, report);
    }

    // the eager control violates the matched-rights law
    let g9 = BipartiteGraph::new(
        9,
        2,
        vec![vec![1, 2]; 8].into_iter().chain([vec![1]]).collect(),
    )
    .unwrap();
    let psi = pigeonlab::formula::Matching::new(&g9, &[(9, 1)]).unwrap();
    let lists = [(1usize, vec![1usize, 2])];
    let partition = pm::Partition { v_p: BTreeSet::new(), seed: 0, retries: 0 };
    let eager = pm::extend_matching_eager(&g9, &[1], &psi, &lists).unwrap();
    let report = pm::validate_extend_claims(&g9, &partition, &psi, &[1], &eager);
    assert!(!report.matched_rights_stay_matched, "eager control unexpectedly passed");
    let lazy = pm::extend_matching(&g9, &[1], &psi, &lists).unwrap();
    let report = pm::validate_extend_claims(&g9, &partition, &psi, &[1], &lazy);
    assert!(report.all_hold());

    // the vertex-side span suite
    let preset = pm::find_pm_preset(0, 500, 77).unwrap();
    let summary = pm::run_pm_sweep(&preset, 20, 3, 909, 1 << 24).unwrap();
    assert_eq!(summary.violations, 0, "vertex-side suite reported violations");
    assert!(summary.steps_checked > 0);
    finish("criterion 7 (matching machinery)", start, Duration::from_secs(600));
}

/// Fixture for partition sampling: an 8 + 8 graph of degree 5 with two
/// proper fake axioms (two disjoint negative edges each) and a short clause
/// list.
fn partition_fixture() -> (BipartiteGraph, pm::VertexProfile, Vec<Clause>, Vec<Clause>) {
    for seed in 0..200u64 {
        let g = sample_random(8, 8, 5, seed).unwrap();
        let rdeg = g.right_degrees();
        if (1..=8).any(|j| rdeg[j] < 4) {
            continue;
        }
        let f = encode_pm(&g);
        let total = 16;
        let d: Vec<usize> = (1..=total).map(|v| pm::vertex_degree(&g, v) - 1).collect();
        let delta: Vec<Rat> = (1..=total).map(|_| rat_int(2)).collect();
        let profile = match pm::VertexProfile::new(&g, d, delta) {
            Ok(p) => p,
            Err(_) => continue,
        };
        // two fake axioms with exactly four fat vertices each
        let mut fakes = Vec::new();
        'outer: for (i1, i2) in [(1usize, 2usize), (3, 4)] {
            for &j1 in g.neighbours(i1) {
                for &j2 in g.neighbours(i2) {
                    if j1 == j2 {
                        continue;
                    }
                    let fake = Clause::new(vec![
                        -(f.vars.id(&g, i1, j1).unwrap() as i64),
                        -(f.vars.id(&g, i2, j2).unwrap() as i64),
                    ]);
                    let (fat, _) = pm::vertex_heavy_sets(&g, &f.vars, &fake, &profile);
                    if fat.len() == 4 {
                        fakes.push(fake);
                        continue 'outer;
                    }
                }
            }
        }
        if fakes.len() != 2 {
            continue;
        }
        let clauses: Vec<Clause> = f.clauses.iter().take(20).cloned().collect();
        return (g, profile, fakes, clauses);
    }
    panic!("no partition fixture found");
}

/// Second implementation of the four partition properties, written directly
/// from their statements.
#[allow(clippy::too_many_arguments)]
fn reverify_partition(
    g: &BipartiteGraph,
    vars: &pigeonlab::formula::VarMap,
    clauses: &[Clause],
    fakes: &[Clause],
    profile: &pm::VertexProfile,
    partition: &pm::Partition,
    w0: usize,
    xi: &Rat,
) -> bool {
    let total = g.left_count() + g.right_count();
    let half = |k: usize| rat_usize(k) / rat_int(2);
    // property 1
    for a in fakes {
        let fat: Vec<usize> = (1..=total)
            .filter(|&v| {
                pm::vertex_clause_degree(g, vars, a, v) >= profile.threshold(v)
            })
            .collect();
        let covered = fat.iter().filter(|&&v| partition.in_p(v)).count();
        if rat_usize(covered) < rat_usize(w0) / rat_int(4) {
            return false;
        }
    }
    // property 2
    for v in 1..=total {
        let nb = pm::vertex_neighbours(g, v);
        let in_h = nb.iter().filter(|&&u| !partition.in_p(u)).count() as i64;
        let dev = rat_int(in_h) - half(nb.len());
        let dev = if dev < rat_int(0) { -dev } else { dev };
        if dev > rat_int(4) * xi * rat_usize(nb.len()) {
            return false;
        }
    }
    // property 3
    for c in clauses {
        for j in 1..=g.right_count() {
            let v = g.left_count() + j;
            let nc = pm::vertex_clause_neighbourhood(g, vars, c, v);
            let in_h = nc.iter().filter(|&&u| !partition.in_p(u)).count() as i64;
            let dev = rat_int(in_h) - half(nc.len());
            let dev = if dev < rat_int(0) { -dev } else { dev };
            if dev > rat_int(4) * xi * rat_usize(pm::vertex_degree(g, v)) {
                return false;
            }
        }
    }
    // property 4
    for c in clauses {
        let mut bad = 0;
        for v in 1..=g.left_count() {
            let nc = pm::vertex_clause_neighbourhood(g, vars, c, v);
            let in_h = nc.iter().filter(|&&u| !partition.in_p(u)).count() as i64;
            let dev = rat_int(in_h) - half(nc.len());
            let dev = if dev < rat_int(0) { -dev } else { dev };
            if dev > rat_int(4) * xi * rat_usize(g.delta_max()) {
                bad += 1;
            }
        }
        if rat_usize(bad) > rat_usize(w0) / rat_int(8) {
            return false;
        }
    }
    true
}

/// Criterion 8: the proof transformation is checker-valid against the
/// extended axiom set, stays within the width cap, and every produced axiom
/// has exactly w0 super-heavy pigeons, across all criterion-1 proofs.
#[test]
fn criterion_08_transformation_contract() {
    let start = Instant::now();
    let mut fake_count = 0usize;
    for m in 7..=8usize {
        for n in 1..=6usize {
            let g = complete_graph(m, n);
            for f in [encode_php(&g), encode_fphp(&g)] {
                let proof = refute(&f);
                let alpha = 2usize;
                let mut w0 = alpha * alpha;
                while !pigeonlab::numeric::gt_ln_of(w0 as u64, proof.len() as u64) {
                    w0 += 1;
                }
                let derived = pw::derive_profile(&f, &proof, alpha, w0, 11, 200).unwrap();
                let out = pw::transform_proof(
                    &g,
                    &f.vars,
                    &proof,
                    &derived.profile,
                    &derived.filter_vector,
                )
                .unwrap();
                assert!(
                    check_proof(&f.clauses, &out.fake_axioms, &out.proof, true).is_accepted(),
                    "transformed proof rejected for m={} n={}",
                    m,
                    n
                );
                let width = pw::pseudo_width(&g, &f.vars, &out.proof, &derived.profile);
                assert!(
                    width <= 65 * alpha * w0,
                    "width {} exceeds 65 alpha w0 for m={} n={}",
                    width,
                    m,
                    n
                );
                for fake in &out.fake_axioms {
                    let h = pw::heavy_sets(&g, &f.vars, fake, &derived.profile);
                    assert_eq!(h.super_heavy.len(), w0);
                    fake_count += 1;
                }
            }
        }
    }
    eprintln!("  (transformation produced {} fake axioms across the sweep)", fake_count);
    finish("criterion 8 (transformation contract)", start, Duration::from_secs(120));
}

/// Criterion 9: refutation lengths over complete graphs with one extra
/// pigeon grow strictly, with the n = 7 length at least 50 times the n = 3
/// length.
#[test]
fn criterion_09_empirical_growth() {
    let start = Instant::now();
    let mut lengths = Vec::new();
    for n in 3..=7usize {
        let f = encode_php(&complete_graph(n + 1, n));
        lengths.push(refute(&f).len());
    }
    assert!(
        lengths.windows(2).all(|w| w[0] < w[1]),
        "lengths not strictly increasing: {:?}",
        lengths
    );
    assert!(
        lengths[4] >= 50 * lengths[0],
        "growth ratio {} below 50",
        lengths[4] as f64 / lengths[0] as f64
    );
    finish("criterion 9 (empirical growth)", start, Duration::from_secs(300));
}

/// Criterion 10: byte-identical round-trips on golden files for every text
/// format, the canonical growth-exponent value, and the exact pass/fail
/// pattern of the random-graph hypotheses.
#[test]
fn criterion_10_format_stability() {
    let start = Instant::now();
    let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");

    // graph file
    let graph_bytes = std::fs::read_to_string(golden.join("sample.graph")).unwrap();
    let g = pigeonlab::graph::read_graph(graph_bytes.as_bytes()).unwrap();
    assert_eq!(pigeonlab::graph::graph_to_string(&g), graph_bytes);
    assert_eq!(g, sample_random(6, 5, 2, 42).unwrap());

    // formula file
    let cnf_bytes = std::fs::read_to_string(golden.join("sample.cnf")).unwrap();
    let dimacs = pigeonlab::formula::read_dimacs(cnf_bytes.as_bytes()).unwrap();
    assert_eq!(pigeonlab::formula::dimacs_to_string(&dimacs), cnf_bytes);
    let mut regenerated = encode_fphp(&g);
    regenerated.seed = Some(42);
    assert_eq!(pigeonlab::formula::dimacs_to_string(&regenerated.to_dimacs()), cnf_bytes);

    // trace file
    let trace_bytes = std::fs::read_to_string(golden.join("sample.trc")).unwrap();
    let proof = pigeonlab::resolution::read_trace(trace_bytes.as_bytes()).unwrap();
    assert_eq!(pigeonlab::resolution::trace_to_string(&proof), trace_bytes);
    let php21 = encode_php(&complete_graph(2, 1));
    assert!(check_proof(&php21.clauses, &[], &proof, true).is_accepted());

    // partition file
    let part_bytes = std::fs::read_to_string(golden.join("sample.partition")).unwrap();
    let partition = pm::read_partition(part_bytes.as_bytes()).unwrap();
    assert_eq!(pm::partition_to_string(&partition), part_bytes);

    // experiment CSV (timing column excluded from the comparison)
    let csv_bytes = std::fs::read_to_string(golden.join("sample.csv")).unwrap();
    let dir = std::env::temp_dir().join(format!("lab-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = pigeonlab::experiment::ExperimentSpec {
        variant: pigeonlab::formula::Variant::Php,
        solver: pigeonlab::experiment::Solver::Dpll,
        source: pigeonlab::experiment::GraphSource::Complete,
        ns: vec![3, 4],
        m_offset: 1,
        m_fixed: None,
        seeds: vec![1],
        node_budget: 1 << 24,
        clause_budget: 1 << 20,
        width_profile: None,
        keep_proofs: false,
    };
    let out = pigeonlab::experiment::run_experiment(&spec, &dir.join("golden")).unwrap();
    let strip = |text: &str| -> Vec<String> {
        text.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    assert_eq!(strip(&std::fs::read_to_string(&out.csv_path).unwrap()), strip(&csv_bytes));
    std::fs::remove_dir_all(&dir).ok();

    // growth exponent 10.24 at (r = 1024, alpha = 4, log m = 10)
    let report = pw::bound_calculator(1024, 256, 1024, 4, pw::BoundVariant::Fphp).unwrap();
    assert_eq!(report.exponent, rat(256, 25));

    // hypothesis pattern at n = 2^20, eps = 1/2 (exact evaluation: the
    // first inequality fails at this scale, the other two hold), and the
    // all-pass pattern at n = 2^2048
    let n20 = pigeonlab::BigUint::from(1u128 << 20);
    let m40 = pigeonlab::BigUint::from(1u128 << 40);
    let rep =
        pw::regime_validator(&m40, &n20, 4096, &rat(1, 2), pw::RegimeVariant::RandomFphp).unwrap();
    let pattern: Vec<bool> = rep.checks.iter().map(|c| c.holds).collect();
    assert_eq!(pattern, vec![false, true, true]);
    let n_big = pigeonlab::BigUint::from(1u8) << 2048u32;
    let m_big = pigeonlab::BigUint::from(1u8) << 4096u32;
    let rep = pw::regime_validator(&m_big, &n_big, 4096, &rat(1, 2), pw::RegimeVariant::RandomFphp)
        .unwrap();
    assert!(rep.all_hold());
    finish("criterion 10 (format stability)", start, Duration::from_secs(10));
}

/// Extra end-to-end guard: transformed proofs strip cleanly back to
/// weakening-free checker-valid proofs.
#[test]
fn transformed_proofs_strip_cleanly() {
    let g = complete_graph(8, 5);
    let f = encode_fphp(&g);
    let base = Clause::new(vec![
        -(f.vars.id(&g, 1, 1).unwrap() as i64),
        -(f.vars.id(&g, 2, 1).unwrap() as i64),
    ]);
    let wide = Clause::new(
        (1..=8)
            .map(|i| -(f.vars.id(&g, i, if i <= 2 { 1 } else { 2 }).unwrap() as i64))
            .collect(),
    );
    let proof = ResolutionProof {
        lines: vec![
            ProofLine { id: 1, clause: base, rule: Rule::Axiom },
            ProofLine { id: 2, clause: wide, rule: Rule::Weaken { parent: 1 } },
        ],
    };
    let derived = pw::derive_profile(&f, &proof, 2, 8, 5, 100).unwrap();
    let out =
        pw::transform_proof(&g, &f.vars, &proof, &derived.profile, &derived.filter_vector).unwrap();
    assert!(!out.fake_axioms.is_empty());
    let stripped = pigeonlab::resolution::strip_weakenings(&out.proof);
    assert!(stripped.lines.iter().all(|l| !matches!(l.rule, Rule::Weaken { .. })));
    assert!(stripped.len() <= out.proof.len());
    assert!(check_proof(&f.clauses, &out.fake_axioms, &stripped, false).is_accepted());
}

/// Extra guard: closures on certified expanders are contained, contain their
/// seed, and match a brute-force maximal containment search on small
/// instances.
#[test]
fn closure_matches_bruteforce_oracle() {
    let mut validated = 0;
    let mut seed = 0u64;
    while validated < 40 {
        seed += 1;
        let m = 4 + (seed % 4) as usize; // 4..=7
        let g = sample_random(m, 2 * m, 2, seed).unwrap();
        let report =
            certify_boundary_expansion(&g, m.min(4), &rat_int(0), DEFAULT_ENUM_BUDGET).unwrap();
        if report.worst_ratio <= rat_int(0) {
            continue;
        }
        let nu = &report.worst_ratio / rat_int(2);
        let params = ClosureParams::new(m.min(4), nu.clone(), None).unwrap();
        let t: BTreeSet<usize> = [(seed % m as u64) as usize + 1].into_iter().collect();
        let snap = Snapshot::from_graph(&g);
        let result = closure(&snap, &t, &params).unwrap();
        assert!(result.closure_set.is_superset(&t));
        assert!(result.maximal_verified);
        let reference = snap.neighbourhood(&t).unwrap();
        assert!(pigeonlab::closure::is_contained(
            &snap,
            &result.closure_set,
            &reference,
            params.r,
            &params.nu
        )
        .unwrap());
        // brute force: the closure must be one of the maximal contained sets
        let maximal = bruteforce_maximal_contained(&g, &t, &reference, params.r, &nu);
        assert!(
            maximal.contains(&result.closure_set),
            "closure {:?} not among maximal contained sets {:?} (seed {})",
            result.closure_set,
            maximal,
            seed
        );
        validated += 1;
    }
}

fn bruteforce_maximal_contained(
    g: &BipartiteGraph,
    t: &BTreeSet<usize>,
    reference: &BTreeSet<usize>,
    r: usize,
    nu: &Rat,
) -> Vec<BTreeSet<usize>> {
    let m = g.left_count();
    let snap = Snapshot::from_graph(g);
    let mut contained: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 0u32..(1 << m) {
        let set: BTreeSet<usize> = (1..=m).filter(|&v| mask & (1 << (v - 1)) != 0).collect();
        if !set.is_superset(t) || set.len() > r {
            continue;
        }
        if pigeonlab::closure::is_contained(&snap, &set, reference, r, nu).unwrap() {
            contained.push(set);
        }
    }
    let maximal: Vec<BTreeSet<usize>> = contained
        .iter()
        .filter(|s| !contained.iter().any(|o| o.len() > s.len() && o.is_superset(s)))
        .cloned()
        .collect();
    maximal
}
