//! Exact-rational tensor spaces for clause progress measures: per-pigeon
//! Vandermonde vectors, subspaces spanned by the matchings a clause fails to
//! rule out, and validators for the axiom-fraction bound, the
//! proper-subspace bound, and per-step span containment.

use crate::closure::{closure, ClosureParams, ClosureResult, Snapshot};
use crate::formula::{clause_status, matching_to_assignment, Clause, ClauseStatus, Matching, VarMap};
use crate::graph::BipartiteGraph;
use crate::numeric::{rat_int, rat_pow, rat_usize};
use crate::pseudowidth::{heavy_sets, WeightProfile};
use crate::subspace::{is_nonsingular, kron, Subspace};
use crate::{Error, Rat, Result};
use num::{One, Zero};
use std::collections::BTreeSet;
use std::io::Write;

/// Per-pigeon spaces of dimension `deg_G(i) - d_i + floor(delta_i / 4)` with
/// a Vandermonde map hole -> vector, so any dim-sized subset of a pigeon's
/// hole vectors is independent.
#[derive(Debug, Clone)]
pub struct PigeonSpaces {
    pub dims: Vec<usize>,
}

impl PigeonSpaces {
    pub fn new(g: &BipartiteGraph, profile: &WeightProfile) -> Result<Self> {
        let mut dims = Vec::with_capacity(g.left_count());
        for i in 1..=g.left_count() {
            let quarter = (&profile.delta[i - 1] / rat_int(4)).floor();
            use num::ToPrimitive;
            let quarter = quarter.to_integer().to_usize().expect("slack fits usize");
            let deg = g.degree(i);
            let d = profile.d[i - 1];
            if d > deg {
                return Err(Error::param(format!("threshold exceeds degree for pigeon {}", i)));
            }
            let dim = deg - d + quarter;
            if dim < 1 {
                return Err(Error::precondition(format!(
                    "pigeon {} space has dimension {}; need at least 1",
                    i, dim
                )));
            }
            dims.push(dim);
        }
        let spaces = PigeonSpaces { dims };
        spaces.assert_spanning(g)?;
        Ok(spaces)
    }

    /// Total tensor dimension (pigeon 1 most significant).
    pub fn ambient(&self) -> usize {
        self.dims.iter().product()
    }

    /// Vandermonde vector for hole `j` in pigeon `i`'s space.
    pub fn lambda(&self, i: usize, j: usize) -> Vec<Rat> {
        make_lambda(self.dims[i - 1], j)
    }

    /// Exhaustively verifies that every dim-subset of each pigeon's hole
    /// vectors is linearly independent.
    fn assert_spanning(&self, g: &BipartiteGraph) -> Result<()> {
        for i in 1..=g.left_count() {
            let dim = self.dims[i - 1];
            let holes = g.neighbours(i);
            if holes.len() < dim {
                return Err(Error::precondition(format!(
                    "pigeon {} has degree {} below its space dimension {}",
                    i,
                    holes.len(),
                    dim
                )));
            }
            let vectors: Vec<Vec<Rat>> = holes.iter().map(|&j| self.lambda(i, j)).collect();
            let mut idx = vec![0usize; dim];
            if !check_subsets(&vectors, dim, 0, 0, &mut idx) {
                return Err(Error::precondition(format!(
                    "pigeon {} hole vectors are not in general position",
                    i
                )));
            }
        }
        Ok(())
    }
}

fn check_subsets(vectors: &[Vec<Rat>], dim: usize, depth: usize, from: usize, idx: &mut [usize]) -> bool {
    if depth == dim {
        let rows: Vec<Vec<Rat>> = idx.iter().map(|&k| vectors[k].clone()).collect();
        return is_nonsingular(&rows);
    }
    for k in from..vectors.len() {
        idx[depth] = k;
        if !check_subsets(vectors, dim, depth + 1, k + 1, idx) {
            return false;
        }
    }
    true
}

/// `(1, j, j^2, ..., j^(dim-1))` as exact rationals.
pub fn make_lambda(dim: usize, j: usize) -> Vec<Rat> {
    (0..dim).map(|p| rat_pow(&rat_usize(j), p as i64)).collect()
}

/// Subspace spanned by the tensor vectors of all total extensions of `phi`:
/// the single Vandermonde vector for matched pigeons, the full space for
/// unmatched ones.
pub fn lambda_of_matching(spaces: &PigeonSpaces, phi: &Matching) -> Subspace {
    let m = spaces.dims.len();
    let mut factor_bases: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(m);
    for i in 1..=m {
        match phi.hole_of(i) {
            Some(j) => factor_bases.push(vec![spaces.lambda(i, j)]),
            None => {
                let dim = spaces.dims[i - 1];
                let mut basis = Vec::with_capacity(dim);
                for k in 0..dim {
                    let mut e = vec![Rat::zero(); dim];
                    e[k] = Rat::one();
                    basis.push(e);
                }
                factor_bases.push(basis);
            }
        }
    }
    let mut rows = Vec::new();
    let mut pick = vec![0usize; m];
    loop {
        let factors: Vec<Vec<Rat>> =
            (0..m).map(|i| factor_bases[i][pick[i]].clone()).collect();
        rows.push(kron(&factors));
        // odometer over factor choices
        let mut pos = m;
        loop {
            if pos == 0 {
                return Subspace::from_rows(spaces.ambient(), &rows);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < factor_bases[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZeroSpace {
    pub domain: BTreeSet<usize>,
    pub matchings: Vec<Matching>,
}

/// All matchings with domain exactly `domain` whose induced assignment fails
/// to satisfy `c` (backtracking over holes in ascending order).
pub fn zero_space(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    domain: &BTreeSet<usize>,
    budget: u64,
) -> Result<ZeroSpace> {
    let pigeons: Vec<usize> = domain.iter().copied().collect();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    let mut visited: u64 = 0;
    enumerate_matchings(g, &pigeons, 0, &mut used, &mut pairs, &mut visited, budget, &mut |pairs| {
        let phi = Matching::new(g, pairs).expect("enumeration yields valid matchings");
        let rho = matching_to_assignment(g, vars, &phi);
        if clause_status(c, &rho) != ClauseStatus::Satisfied {
            out.push(phi);
        }
    })?;
    Ok(ZeroSpace { domain: domain.clone(), matchings: out })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_matchings(
    g: &BipartiteGraph,
    pigeons: &[usize],
    depth: usize,
    used: &mut BTreeSet<usize>,
    pairs: &mut Vec<(usize, usize)>,
    visited: &mut u64,
    budget: u64,
    emit: &mut impl FnMut(&[(usize, usize)]),
) -> Result<()> {
    // every search node counts against the budget, not just completions
    *visited += 1;
    if *visited > budget {
        return Err(Error::Budget { required: *visited as u128, cap: budget as u128 });
    }
    if depth == pigeons.len() {
        emit(pairs);
        return Ok(());
    }
    let i = pigeons[depth];
    for &j in g.neighbours(i) {
        if used.contains(&j) {
            continue;
        }
        used.insert(j);
        pairs.push((i, j));
        enumerate_matchings(g, pigeons, depth + 1, used, pairs, visited, budget, emit)?;
        pairs.pop();
        used.remove(&j);
    }
    Ok(())
}

/// Closure of a clause's heavy pigeons, maximality-verified.
pub fn clause_closure(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    profile: &WeightProfile,
    params: &ClosureParams,
) -> Result<ClosureResult> {
    let heavy = heavy_sets(g, vars, c, profile);
    let snap = Snapshot::from_graph(g);
    closure(&snap, &heavy.heavy, params)
}

/// Span of the tensor vectors of every matching in the clause's zero space,
/// over the closure of its heavy pigeons. The empty clause maps to the full
/// space.
pub fn lambda_of_clause(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    profile: &WeightProfile,
    spaces: &PigeonSpaces,
    params: &ClosureParams,
    budget: u64,
) -> Result<Subspace> {
    let cl = clause_closure(g, vars, c, profile, params)?;
    let z = zero_space(g, vars, c, &cl.closure_set, budget)?;
    let mut acc = Subspace::zero(spaces.ambient());
    for phi in &z.matchings {
        acc = acc.union(&lambda_of_matching(spaces, phi));
        if acc.is_full() {
            break;
        }
    }
    Ok(acc)
}

/// `dim lambda(A) / dim L <= (1 - xi)^w0`, exactly.
#[allow(clippy::too_many_arguments)]
pub fn validate_axiom_fraction(
    g: &BipartiteGraph,
    vars: &VarMap,
    fake_axiom: &Clause,
    profile: &WeightProfile,
    spaces: &PigeonSpaces,
    params: &ClosureParams,
    xi: &Rat,
    w0: usize,
    budget: u64,
) -> Result<bool> {
    let lam = lambda_of_clause(g, vars, fake_axiom, profile, spaces, params, budget)?;
    let bound = rat_pow(&(rat_int(1) - xi), w0 as i64);
    Ok(lam.dim_fraction() <= bound)
}

#[derive(Debug, Clone)]
pub struct ProperSubspaceReport {
    pub proper: bool,
    /// Whether the fake-axiom count satisfies the `(1 + xi)^w0` hypothesis;
    /// oversized sets are still evaluated and reported without judgment.
    pub within_hypothesis: bool,
    pub span_dim: usize,
}

/// Span of the images of all axioms (real and fake) against the full space.
#[allow(clippy::too_many_arguments)]
pub fn validate_proper_subspace(
    g: &BipartiteGraph,
    vars: &VarMap,
    formula_clauses: &[Clause],
    fake_axioms: &[Clause],
    profile: &WeightProfile,
    spaces: &PigeonSpaces,
    params: &ClosureParams,
    xi: &Rat,
    w0: usize,
    budget: u64,
) -> Result<ProperSubspaceReport> {
    let cap = rat_pow(&(rat_int(1) + xi), w0 as i64);
    let within_hypothesis = rat_usize(fake_axioms.len()) <= cap;
    let mut acc = Subspace::zero(spaces.ambient());
    for c in formula_clauses.iter().chain(fake_axioms) {
        acc = acc.union(&lambda_of_clause(g, vars, c, profile, spaces, params, budget)?);
        if acc.is_full() {
            break;
        }
    }
    Ok(ProperSubspaceReport { proper: !acc.is_full(), within_hypothesis, span_dim: acc.dim() })
}

#[derive(Debug, Clone)]
pub struct SpanStepReport {
    pub dim_c: usize,
    pub dim_span01: usize,
    pub contained: bool,
}

/// Per-step containment: the resolvent's space lies inside the span of its
/// premises' spaces. Closure sizes of all three clauses must stay within
/// `r/4` and be maximality-verified.
#[allow(clippy::too_many_arguments)]
pub fn validate_span_step(
    g: &BipartiteGraph,
    vars: &VarMap,
    c0: &Clause,
    c1: &Clause,
    c: &Clause,
    profile: &WeightProfile,
    spaces: &PigeonSpaces,
    params: &ClosureParams,
    budget: u64,
) -> Result<SpanStepReport> {
    for (idx, clause) in [c0, c1, c].into_iter().enumerate() {
        let cl = clause_closure(g, vars, clause, profile, params)?;
        if !cl.maximal_verified {
            return Err(Error::precondition(format!(
                "closure of clause {} not maximality-verified",
                idx
            )));
        }
        if 4 * cl.closure_set.len() > params.r {
            return Err(Error::precondition(format!(
                "closure of clause {} has size {} > r/4",
                idx,
                cl.closure_set.len()
            )));
        }
    }
    let l0 = lambda_of_clause(g, vars, c0, profile, spaces, params, budget)?;
    let l1 = lambda_of_clause(g, vars, c1, profile, spaces, params, budget)?;
    let lc = lambda_of_clause(g, vars, c, profile, spaces, params, budget)?;
    let span01 = l0.union(&l1);
    Ok(SpanStepReport {
        dim_c: lc.dim(),
        dim_span01: span01.dim(),
        contained: span01.contains(&lc),
    })
}

/// Validator rows: `step_id,dim_c,dim_span01,contained`.
pub fn span_report_csv<W: Write>(rows: &[(usize, SpanStepReport)], mut w: W) -> Result<()> {
    writeln!(w, "step_id,dim_c,dim_span01,contained")?;
    for (id, rep) in rows {
        writeln!(w, "{},{},{},{}", id, rep.dim_c, rep.dim_span01, rep.contained)?;
    }
    Ok(())
}

/// Validation instance: a small certified expander whose pigeon spaces are
/// two-dimensional (degree 8, thresholds 7, slacks 4), so the tensor space
/// has dimension 16 and every subspace is computed exhaustively.
#[derive(Debug, Clone)]
pub struct FphpPreset {
    pub graph: BipartiteGraph,
    pub profile: WeightProfile,
    pub spaces: PigeonSpaces,
    pub params: ClosureParams,
    pub xi: Rat,
    pub graph_seed: u64,
}

/// Scans seeds for a 4-pigeon, 32-hole, degree-8 graph certified as a
/// boundary expander at ratio 6 over every subset (certified instances occur
/// about once per 8000 seeds; the first is 6382). The closure radius 16
/// exceeds the pigeon count, so the radius-4 certificate extends vacuously.
pub fn find_fphp_preset(seed_from: u64, seed_to: u64) -> Result<FphpPreset> {
    let xi = crate::numeric::rat(1, 8);
    let c = rat_int(6); // (1 - 2 xi) * 8
    for seed in seed_from..seed_to {
        let g = crate::graph::sample_random(4, 32, 8, seed)?;
        let rep = crate::graph::certify_boundary_expansion(
            &g,
            4,
            &c,
            crate::graph::DEFAULT_ENUM_BUDGET,
        )?;
        if !rep.certified {
            continue;
        }
        let profile = WeightProfile::new(&g, vec![7; 4], vec![rat_int(4); 4], 2, 2)?;
        let spaces = PigeonSpaces::new(&g, &profile)?;
        let params = ClosureParams::new(16, rat_int(5), None)?;
        return Ok(FphpPreset { graph: g, profile, spaces, params, xi, graph_seed: seed });
    }
    Err(Error::param(format!(
        "no certified preset instance in seeds {}..{}",
        seed_from, seed_to
    )))
}

/// Random short derivations from a clause pool: each step picks a random
/// variable appearing in both polarities, resolves a random clashing pair on
/// it, appends the resolvent, and records (premise, premise, resolvent).
/// Tautological resolvents are skipped.
pub fn random_derivations(
    clauses: &[Clause],
    derivations: usize,
    steps_per: usize,
    seed: u64,
) -> Vec<(Clause, Clause, Clause)> {
    use std::collections::HashMap;
    let mut out = Vec::new();
    for k in 0..derivations {
        let mut rng = crate::rng::SplitMix64::substream(seed, k as u64);
        let mut pool: Vec<Clause> = clauses.to_vec();
        let mut pos: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut neg: HashMap<usize, Vec<usize>> = HashMap::new();
        let index = |pool_idx: usize,
                         clause: &Clause,
                         pos: &mut HashMap<usize, Vec<usize>>,
                         neg: &mut HashMap<usize, Vec<usize>>| {
            for &l in clause.lits() {
                let side = if l > 0 { &mut *pos } else { &mut *neg };
                side.entry(l.unsigned_abs() as usize).or_default().push(pool_idx);
            }
        };
        for (i, c) in pool.clone().iter().enumerate() {
            index(i, c, &mut pos, &mut neg);
        }
        let mut pivots: Vec<usize> = pos
            .keys()
            .copied()
            .filter(|v| neg.contains_key(v))
            .collect();
        pivots.sort_unstable();
        let mut made = 0;
        let mut guard = 0;
        while made < steps_per && guard < 200 && !pivots.is_empty() {
            guard += 1;
            let v = pivots[rng.below(pivots.len() as u64) as usize];
            let a_idx = pos[&v][rng.below(pos[&v].len() as u64) as usize];
            let b_idx = neg[&v][rng.below(neg[&v].len() as u64) as usize];
            let r = match crate::resolution::resolve(&pool[a_idx], &pool[b_idx], v) {
                Ok(r) => r,
                Err(_) => continue,
            };
            if r.is_tautology() || r.is_empty() {
                continue;
            }
            out.push((pool[a_idx].clone(), pool[b_idx].clone(), r.clone()));
            let new_idx = pool.len();
            pool.push(r);
            index(new_idx, &pool[new_idx], &mut pos, &mut neg);
            for &l in pool[new_idx].lits() {
                let var = l.unsigned_abs() as usize;
                if pos.contains_key(&var) && neg.contains_key(&var) && !pivots.contains(&var) {
                    pivots.push(var);
                }
            }
            made += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    pub rows: Vec<(usize, SpanStepReport)>,
}

/// Validates span containment for every step of random derivations over the
/// preset's formula; steps violating the closure-size precondition are
/// counted as skipped. Clause images are cached across steps.
pub fn run_span_sweep(
    preset: &FphpPreset,
    derivations: usize,
    steps_per: usize,
    seed: u64,
    budget: u64,
) -> Result<SweepSummary> {
    let f = crate::formula::encode_fphp(&preset.graph);
    let steps = random_derivations(&f.clauses, derivations, steps_per, seed);
    let mut summary = SweepSummary::default();
    let mut lambda_cache: std::collections::HashMap<Clause, Subspace> = Default::default();
    let mut closure_cache: std::collections::HashMap<Clause, (bool, usize)> = Default::default();
    let g = &preset.graph;
    for (idx, (c0, c1, c)) in steps.iter().enumerate() {
        let mut skip = false;
        for clause in [c0, c1, c] {
            let (maximal, size) = match closure_cache.get(clause) {
                Some(entry) => *entry,
                None => {
                    let cl = clause_closure(g, &f.vars, clause, &preset.profile, &preset.params)?;
                    let entry = (cl.maximal_verified, cl.closure_set.len());
                    closure_cache.insert(clause.clone(), entry);
                    entry
                }
            };
            if !maximal || 4 * size > preset.params.r {
                skip = true;
                break;
            }
        }
        if skip {
            summary.skipped += 1;
            continue;
        }
        let mut lambda = |clause: &Clause| -> Result<Subspace> {
            if let Some(s) = lambda_cache.get(clause) {
                return Ok(s.clone());
            }
            let s = lambda_of_clause(
                g,
                &f.vars,
                clause,
                &preset.profile,
                &preset.spaces,
                &preset.params,
                budget,
            )?;
            lambda_cache.insert(clause.clone(), s.clone());
            Ok(s)
        };
        let l0 = lambda(c0)?;
        let l1 = lambda(c1)?;
        let lc = lambda(c)?;
        let span01 = l0.union(&l1);
        let contained = span01.contains(&lc);
        summary.checked += 1;
        if !contained {
            summary.violations += 1;
        }
        summary
            .rows
            .push((idx + 1, SpanStepReport { dim_c: lc.dim(), dim_span01: span01.dim(), contained }));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{encode_fphp, ClauseSource};
    use crate::numeric::rat;
    use crate::resolution::resolve;
    use crate::rng::SplitMix64;

    static PRESET: std::sync::OnceLock<FphpPreset> = std::sync::OnceLock::new();

    fn first_preset() -> (BipartiteGraph, WeightProfile, PigeonSpaces, ClosureParams) {
        let p = PRESET
            .get_or_init(|| find_fphp_preset(6000, 40_000).expect("preset instance exists"));
        (p.graph.clone(), p.profile.clone(), p.spaces.clone(), p.params.clone())
    }

    #[test]
    fn lambda_vectors_vandermonde() {
        assert_eq!(make_lambda(2, 3), vec![rat_int(1), rat_int(3)]);
        let rows = vec![make_lambda(3, 2), make_lambda(3, 5), make_lambda(3, 7)];
        assert!(is_nonsingular(&rows));
        assert_eq!(make_lambda(1, 9), vec![rat_int(1)]);
    }

    #[test]
    fn lambda_matching_dims() {
        let (g, _profile, spaces, _params) = first_preset();
        let phi = Matching::new(&g, &[(1, g.neighbours(1)[0])]).unwrap();
        assert_eq!(lambda_of_matching(&spaces, &phi).dim(), 8); // 1*2*2*2
        assert_eq!(lambda_of_matching(&spaces, &Matching::empty()).dim(), 16);
        let total = Matching::new(
            &g,
            &[
                (1, g.neighbours(1)[0]),
                (2, g.neighbours(2).iter().copied().find(|j| *j != g.neighbours(1)[0]).unwrap()),
                (3, g.neighbours(3).iter().copied().find(|j| {
                    *j != g.neighbours(1)[0]
                        && Some(*j)
                            != g.neighbours(2).iter().copied().find(|x| *x != g.neighbours(1)[0])
                }).unwrap()),
                (4, *g.neighbours(4).iter().find(|j| {
                    let j0 = g.neighbours(1)[0];
                    let j1 = g.neighbours(2).iter().copied().find(|x| *x != j0).unwrap();
                    let j2 = g.neighbours(3).iter().copied().find(|x| *x != j0 && *x != j1).unwrap();
                    **j != j0 && **j != j1 && **j != j2
                }).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(lambda_of_matching(&spaces, &total).dim(), 1);
    }

    #[test]
    fn lambda_monotone_under_extension() {
        let (g, _profile, spaces, _params) = first_preset();
        let mut rng = SplitMix64::new(3);
        for _ in 0..40 {
            // random small matching and an extension of it
            let i1 = rng.below(4) as usize + 1;
            let j1 = g.neighbours(i1)[rng.below(8) as usize];
            let base = Matching::new(&g, &[(i1, j1)]).unwrap();
            let i2 = (i1 % 4) + 1;
            let j2 = match g.neighbours(i2).iter().copied().find(|&j| j != j1) {
                Some(j) => j,
                None => continue,
            };
            let mut ext = base.clone();
            ext.insert(&g, i2, j2).unwrap();
            let lb = lambda_of_matching(&spaces, &base);
            let le = lambda_of_matching(&spaces, &ext);
            assert!(lb.contains(&le));
        }
    }

    #[test]
    fn zero_space_examples() {
        let (g, profile, spaces, params) = first_preset();
        let vars = VarMap::new(&g);
        // empty clause over the empty domain: only the empty matching
        let z = zero_space(&g, &vars, &Clause::empty(), &BTreeSet::new(), 1 << 20).unwrap();
        assert_eq!(z.matchings.len(), 1);
        assert!(z.matchings[0].is_empty());
        // lambda of the empty clause is the full space
        let lam = lambda_of_clause(
            &g,
            &vars,
            &Clause::empty(),
            &profile,
            &spaces,
            &params,
            1 << 20,
        )
        .unwrap();
        assert!(lam.is_full());
    }

    #[test]
    fn zero_space_counts_vs_naive() {
        let (g, _profile, _spaces, _params) = first_preset();
        let vars = VarMap::new(&g);
        let c = Clause::new(vec![-(vars.id(&g, 1, g.neighbours(1)[0]).unwrap() as i64)]);
        let domain: BTreeSet<usize> = [1, 2].into_iter().collect();
        let z = zero_space(&g, &vars, &c, &domain, 1 << 20).unwrap();
        // naive recount: all ordered hole pairs, distinct, not satisfying c
        let mut count = 0;
        for &j1 in g.neighbours(1) {
            for &j2 in g.neighbours(2) {
                if j1 == j2 {
                    continue;
                }
                let phi = Matching::new(&g, &[(1, j1), (2, j2)]).unwrap();
                let rho = matching_to_assignment(&g, &vars, &phi);
                if clause_status(&c, &rho) != ClauseStatus::Satisfied {
                    count += 1;
                }
            }
        }
        assert_eq!(z.matchings.len(), count);
        assert!(z.matchings.iter().all(|phi| phi.domain_set() == domain));
    }

    #[test]
    fn real_axioms_have_empty_lambda() {
        let (g, profile, spaces, params) = first_preset();
        let f = encode_fphp(&g);
        for (clause, source) in f.clauses.iter().zip(&f.sources) {
            let lam =
                lambda_of_clause(&g, &f.vars, clause, &profile, &spaces, &params, 1 << 22)
                    .unwrap();
            assert_eq!(lam.dim(), 0, "nonzero image for {:?}", source);
        }
    }

    #[test]
    fn fake_axiom_fraction_bound() {
        let (g, profile, spaces, params) = first_preset();
        let vars = VarMap::new(&g);
        let xi = rat(1, 8);
        for pigeons in [vec![1, 2], vec![2, 4], vec![1, 4]] {
            let fake =
                crate::pseudowidth::make_fake_axiom(&g, &vars, &profile, &pigeons).unwrap();
            assert!(validate_axiom_fraction(
                &g, &vars, &fake, &profile, &spaces, &params, &xi, 2, 1 << 22
            )
            .unwrap());
        }
        // empty-image axiom has fraction zero
        let f = encode_fphp(&g);
        assert!(validate_axiom_fraction(
            &g,
            &vars,
            &f.clauses[0],
            &profile,
            &spaces,
            &params,
            &xi,
            2,
            1 << 22,
        )
        .unwrap());
    }

    #[test]
    fn proper_subspace_with_and_without_fakes() {
        let (g, profile, spaces, params) = first_preset();
        let f = encode_fphp(&g);
        let vars = &f.vars;
        let xi = rat(1, 8);
        // no fake axioms: the real axioms span nothing
        let report = validate_proper_subspace(
            &g, vars, &f.clauses, &[], &profile, &spaces, &params, &xi, 2, 1 << 22,
        )
        .unwrap();
        assert!(report.proper && report.within_hypothesis);
        assert_eq!(report.span_dim, 0);
        let fake =
            crate::pseudowidth::make_fake_axiom(&f.graph, vars, &profile, &[1, 2]).unwrap();
        let report = validate_proper_subspace(
            &g, vars, &f.clauses, &[fake.clone()], &profile, &spaces, &params, &xi, 2, 1 << 22,
        )
        .unwrap();
        assert!(report.proper && report.within_hypothesis);
        // oversized sets are evaluated and flagged, not refused
        let many = vec![fake; 3];
        let report = validate_proper_subspace(
            &g, vars, &f.clauses, &many, &profile, &spaces, &params, &xi, 2, 1 << 22,
        )
        .unwrap();
        assert!(!report.within_hypothesis);
    }

    #[test]
    fn span_step_weakening_and_resolution() {
        let (g, profile, spaces, params) = first_preset();
        let f = encode_fphp(&g);
        let vars = &f.vars;
        // weakening: c0 -> c0 or extra literal, premises (c0, c0)
        let c0 = f.clauses[0].clone();
        let extra = Clause::new(
            c0.lits()
                .iter()
                .copied()
                .chain([-(vars.id(&g, 2, g.neighbours(2)[0]).unwrap() as i64)])
                .collect(),
        );
        let rep =
            validate_span_step(&g, vars, &c0, &c0, &extra, &profile, &spaces, &params, 1 << 22)
                .unwrap();
        assert!(rep.contained);

        // resolution on a pigeon axiom and a hole axiom
        let pivot_hole = g.neighbours(1)[0];
        let other = g.right_neighbours(pivot_hole).into_iter().find(|&i| i != 1);
        if let Some(i2) = other {
            let pa = f.clauses[0].clone(); // pigeon axiom for 1
            let hole = Clause::new(vec![
                -(vars.id(&g, 1, pivot_hole).unwrap() as i64),
                -(vars.id(&g, i2, pivot_hole).unwrap() as i64),
            ]);
            assert!(f.clauses.contains(&hole));
            let pivot = vars.id(&g, 1, pivot_hole).unwrap();
            let resolvent = resolve(&pa, &hole, pivot).unwrap();
            let rep = validate_span_step(
                &g, vars, &pa, &hole, &resolvent, &profile, &spaces, &params, 1 << 22,
            )
            .unwrap();
            assert!(rep.contained);
        }
    }

    #[test]
    fn span_step_precondition_violation() {
        let (g, profile, spaces, _params) = first_preset();
        let f = encode_fphp(&g);
        // radius 4 makes r/4 = 1, so two heavy pigeons break the bound
        let tight = ClosureParams::new(4, rat_int(5), None).unwrap();
        let hole = f
            .clauses
            .iter()
            .zip(&f.sources)
            .find(|(_, s)| matches!(s, ClauseSource::Hole { .. }))
            .map(|(c, _)| c.clone())
            .unwrap();
        let err = validate_span_step(
            &g,
            &f.vars,
            &hole,
            &hole,
            &hole,
            &profile,
            &spaces,
            &tight,
            1 << 22,
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn csv_shape() {
        let rows = vec![(1, SpanStepReport { dim_c: 4, dim_span01: 8, contained: true })];
        let mut buf = Vec::new();
        span_report_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "step_id,dim_c,dim_span01,contained\n1,4,8,true\n"
        );
    }

    #[test]
    fn sweep_holds_on_preset() {
        let p = PRESET
            .get_or_init(|| find_fphp_preset(6000, 40_000).expect("preset instance exists"));
        let summary = run_span_sweep(p, 3, 4, 99, 1 << 22).unwrap();
        assert!(summary.checked > 0);
        assert_eq!(summary.violations, 0);
    }
}
