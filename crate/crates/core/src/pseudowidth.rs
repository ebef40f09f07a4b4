//! Pigeon-degree machinery: heavy and super-heavy pigeons of a clause, the
//! per-clause residual-capacity vectors, the filter-vector sampler with its
//! explicit acceptance check, threshold construction, the proof
//! transformation that swaps wide clauses for axioms with exactly `w0`
//! super-heavy pigeons, and the asymptotic-bound / hypothesis-regime
//! calculators.

use crate::formula::{Clause, GraphCnf, VarMap};
use crate::graph::BipartiteGraph;
use crate::numeric::{cmp_lnsum, gt_ln_of, log2_approx, rat_int, rat_pow, rat_usize};
use crate::resolution::{ProofLine, ResolutionProof, Rule};
use crate::rng::SplitMix64;
use crate::{Error, Rat, Result};
use num::bigint::{BigInt, BigUint};
use num::{Signed, Zero};
use std::collections::BTreeSet;
use std::io::Write;

/// Constants in the filter acceptance test, fixed by its derivation.
pub const GAMMA_PRIME: u64 = 13;
pub const GAMMA: u64 = 65;

/// Per-pigeon thresholds `d`, slacks `delta`, plus the filter base and the
/// target width. Slacks may be non-integral; comparisons stay exact.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    pub d: Vec<usize>,
    pub delta: Vec<Rat>,
    pub alpha: usize,
    pub w0: usize,
}

impl WeightProfile {
    pub fn new(g: &BipartiteGraph, d: Vec<usize>, delta: Vec<Rat>, alpha: usize, w0: usize) -> Result<Self> {
        let m = g.left_count();
        if d.len() != m || delta.len() != m {
            return Err(Error::param("profile vectors must have one entry per pigeon"));
        }
        for i in 1..=m {
            let di = d[i - 1];
            let deli = &delta[i - 1];
            if di < 1 || di > g.degree(i) {
                return Err(Error::param(format!(
                    "threshold {} for pigeon {} outside 1..=deg {}",
                    di,
                    i,
                    g.degree(i)
                )));
            }
            if !deli.is_positive() || *deli >= rat_usize(di) {
                return Err(Error::param(format!("slack for pigeon {} must lie in (0, d)", i)));
            }
        }
        Ok(WeightProfile { d, delta, alpha, w0 })
    }
}

/// Holes whose single-pigeon matching satisfies the clause: `j` counts when
/// the clause contains `x_{i,j}` positively or a negative literal on pigeon
/// `i` over a different hole.
pub fn clause_pigeon_neighbourhood(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    pigeon: usize,
) -> Vec<usize> {
    let mut pos_holes = Vec::new();
    let mut neg_holes = Vec::new();
    for &l in c.lits() {
        let (i, j) = vars.pair(l.unsigned_abs() as usize);
        if i != pigeon {
            continue;
        }
        if l > 0 {
            pos_holes.push(j);
        } else {
            neg_holes.push(j);
        }
    }
    g.neighbours(pigeon)
        .iter()
        .copied()
        .filter(|&j| pos_holes.contains(&j) || neg_holes.iter().any(|&j2| j2 != j))
        .collect()
}

pub fn clause_pigeon_degree(g: &BipartiteGraph, vars: &VarMap, c: &Clause, pigeon: usize) -> usize {
    clause_pigeon_neighbourhood(g, vars, c, pigeon).len()
}

#[derive(Debug, Clone)]
pub struct HeavyProfile {
    pub super_heavy: BTreeSet<usize>,
    pub heavy: BTreeSet<usize>,
}

impl HeavyProfile {
    pub fn pseudo_width(&self) -> usize {
        self.heavy.len()
    }
}

/// Pigeons whose clause degree reaches the threshold (super-heavy) or comes
/// within the slack of it (heavy).
pub fn heavy_sets(g: &BipartiteGraph, vars: &VarMap, c: &Clause, profile: &WeightProfile) -> HeavyProfile {
    let mut super_heavy = BTreeSet::new();
    let mut heavy = BTreeSet::new();
    for i in 1..=g.left_count() {
        let deg = clause_pigeon_degree(g, vars, c, i);
        let deg_rat = rat_usize(deg);
        let d = rat_usize(profile.d[i - 1]);
        if deg >= profile.d[i - 1] {
            super_heavy.insert(i);
        }
        if deg_rat >= d - &profile.delta[i - 1] {
            heavy.insert(i);
        }
    }
    HeavyProfile { super_heavy, heavy }
}

/// Maximum heavy-pigeon count over the lines of a proof.
pub fn pseudo_width(
    g: &BipartiteGraph,
    vars: &VarMap,
    proof: &ResolutionProof,
    profile: &WeightProfile,
) -> usize {
    proof
        .lines
        .iter()
        .map(|l| heavy_sets(g, vars, &l.clause, profile).pseudo_width())
        .max()
        .unwrap_or(0)
}

/// Residual-capacity vector: coordinate `i` is
/// `floor((deg_G(i) - deg_C(i)) / delta_i) + 1`.
pub fn clause_r_vector(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    delta: &[Rat],
) -> Vec<usize> {
    (1..=g.left_count())
        .map(|i| {
            let gap = g.degree(i) - clause_pigeon_degree(g, vars, c, i);
            let q = (rat_usize(gap) / &delta[i - 1]).floor();
            use num::ToPrimitive;
            q.to_integer().to_usize().expect("capacity fits usize") + 1
        })
        .collect()
}

/// `sum_i alpha^(-r_i)` as an exact rational.
pub fn weight(rvec: &[usize], alpha: usize) -> Rat {
    let alpha = rat_usize(alpha);
    rvec.iter().map(|&ri| rat_pow(&alpha, ri as i64).recip()).sum()
}

#[derive(Debug, Clone)]
pub struct FilterDistribution {
    pub t: usize,
    pub beta: Rat,
    /// `mu[i]` is the mass of value i+1.
    pub mu: Vec<Rat>,
}

/// Geometric distribution on `1..=t` with `t = floor(log_alpha m) - 1` and
/// mass `beta alpha^(-i)`.
pub fn filter_distribution(m: usize, alpha: usize) -> Result<FilterDistribution> {
    if alpha < 2 {
        return Err(Error::param("alpha must be at least 2"));
    }
    // floor(log_alpha m): largest p with alpha^p <= m
    let mut p = 0usize;
    let mut power = 1usize;
    while power <= m / alpha {
        power *= alpha;
        p += 1;
    }
    if p < 2 {
        return Err(Error::param(format!("m = {} too small: need m >= alpha^2", m)));
    }
    let t = p - 1;
    let alpha_rat = rat_usize(alpha);
    let beta = (&alpha_rat - rat_int(1)) / (rat_int(1) - rat_pow(&alpha_rat, -(t as i64)));
    let mu: Vec<Rat> = (1..=t).map(|i| &beta * rat_pow(&alpha_rat, -(i as i64)).clone()).collect();
    debug_assert_eq!(mu.iter().sum::<Rat>(), rat_int(1));
    Ok(FilterDistribution { t, beta, mu })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterCase {
    ManySuperHeavy,
    FewHeavy,
}

#[derive(Debug, Clone)]
pub struct FilterTranscript {
    pub attempts: u64,
    /// Per input vector: which disjunct held, with the verified counts.
    pub cases: Vec<(FilterCase, usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct FilterFailure {
    pub attempts: u64,
    /// Input vector index with the smallest case-1 count in the last attempt.
    pub worst_input: usize,
}

/// Samples threshold vectors coordinate-wise from the geometric distribution
/// until one satisfies, for every input vector, `#{i : in_i <= r_i} >= w0`
/// or `#{i : in_i <= r_i + 1} <= gamma alpha w0`. Every acceptance is
/// verified explicitly rather than trusted.
pub fn sample_filter_vector(
    rvecs: &[Vec<usize>],
    m: usize,
    w0: usize,
    alpha: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<std::result::Result<(Vec<usize>, FilterTranscript), FilterFailure>> {
    if alpha < 2 || w0 < alpha * alpha {
        return Err(Error::precondition("need w0 >= alpha^2 >= 4"));
    }
    if !gt_ln_of(w0 as u64, rvecs.len() as u64) {
        return Err(Error::precondition(format!(
            "need w0 > ln(number of vectors) = ln {}",
            rvecs.len()
        )));
    }
    for (idx, v) in rvecs.iter().enumerate() {
        if v.len() != m {
            return Err(Error::param(format!("vector {} has wrong arity", idx)));
        }
    }
    let dist = filter_distribution(m, alpha)?;
    // cumulative thresholds scaled to u64 draws
    let scale = BigInt::from(1u8) << 64u32;
    let mut cuts: Vec<u64> = Vec::with_capacity(dist.t);
    let mut acc = Rat::zero();
    for mass in &dist.mu {
        acc += mass;
        let cut = (&acc * Rat::from_integer(scale.clone())).floor().to_integer();
        use num::ToPrimitive;
        cuts.push(cut.to_u64().unwrap_or(u64::MAX));
    }
    let cap = rat_usize(GAMMA as usize * alpha * w0);
    let mut rng = SplitMix64::substream(seed, 0xF117);
    for attempt in 1..=max_attempts {
        let r: Vec<usize> = (0..m)
            .map(|_| {
                let draw = rng.next_u64();
                cuts.iter().position(|&c| draw < c).unwrap_or(dist.t - 1) + 1
            })
            .collect();
        let mut cases = Vec::with_capacity(rvecs.len());
        let mut ok = true;
        let mut worst = (usize::MAX, 0usize);
        for (idx, input) in rvecs.iter().enumerate() {
            let case1 = (0..m).filter(|&i| input[i] <= r[i]).count();
            let case2 = (0..m).filter(|&i| input[i] <= r[i] + 1).count();
            if case1 >= w0 {
                cases.push((FilterCase::ManySuperHeavy, case1, case2));
            } else if rat_usize(case2) <= cap {
                cases.push((FilterCase::FewHeavy, case1, case2));
            } else {
                ok = false;
                if case1 < worst.0 {
                    worst = (case1, idx);
                }
            }
        }
        if ok {
            return Ok(Ok((r, FilterTranscript { attempts: attempt, cases })));
        }
        if attempt == max_attempts {
            return Ok(Err(FilterFailure { attempts: attempt, worst_input: worst.1 }));
        }
    }
    unreachable!("loop returns on the last attempt")
}

/// Smallest integer thresholds compatible with a filter vector:
/// `d_i = deg_G(i) - ceil(delta_i r_i) + 1`. Thresholds driven below zero by
/// oversized slacks saturate at zero and are rejected by profile validation.
pub fn thresholds_from_filter(g: &BipartiteGraph, rvec: &[usize], delta: &[Rat]) -> Vec<usize> {
    (1..=g.left_count())
        .map(|i| {
            let cut = (&delta[i - 1] * rat_usize(rvec[i - 1])).ceil().to_integer();
            use num::ToPrimitive;
            let cut = cut.to_isize().expect("threshold fits isize");
            let d = g.degree(i) as isize - cut + 1;
            d.max(0) as usize
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaVariant {
    /// `delta_i = deg_G(i) log alpha / log m`.
    Upper,
    /// `delta_i = 4 deg_G(i) xi`.
    Lower,
}

/// The two slack constructors. Base-2 logarithms are dyadic approximations
/// with 64 fractional bits (exact on powers of two), so the two variants
/// coincide exactly when `xi` is derived as `log alpha / (4 log m)` from the
/// same approximations.
pub fn delta_default(g: &BipartiteGraph, alpha: usize, variant: DeltaVariant, xi: Option<&Rat>) -> Result<Vec<Rat>> {
    match variant {
        DeltaVariant::Upper => {
            if alpha < 2 {
                return Err(Error::param("alpha must be at least 2"));
            }
            let la = log2_approx(&BigUint::from(alpha), 64);
            let lm = log2_approx(&BigUint::from(g.left_count()), 64);
            if !lm.is_positive() {
                return Err(Error::param("need m >= 2"));
            }
            Ok((1..=g.left_count()).map(|i| rat_usize(g.degree(i)) * &la / &lm).collect())
        }
        DeltaVariant::Lower => {
            let xi = xi.ok_or_else(|| Error::param("lower variant requires xi"))?;
            Ok((1..=g.left_count()).map(|i| rat_int(4) * xi * rat_usize(g.degree(i))).collect())
        }
    }
}

/// `xi = log alpha / (4 log m)` under the same dyadic approximation used by
/// `delta_default`, making the two slack constructors agree exactly.
pub fn xi_from_alpha(alpha: usize, m: usize) -> Rat {
    let la = log2_approx(&BigUint::from(alpha), 64);
    let lm = log2_approx(&BigUint::from(m), 64);
    la / (rat_int(4) * lm)
}

#[derive(Debug, Clone)]
pub struct TransformOutput {
    pub proof: ResolutionProof,
    pub fake_axioms: Vec<Clause>,
    /// Line ids (in the output proof) of inserted axiom lines.
    pub fake_line_ids: Vec<usize>,
}

/// Replaces every line whose case-1 count reaches `w0` by a strengthening
/// that keeps exactly the literals of the `w0` lowest-indexed super-heavy
/// pigeons (an axiom with exactly `w0` super-heavy pigeons by construction),
/// re-deriving the original clause by weakening. Requires the thresholds to
/// match the filter vector and the filter vector to accept every line.
pub fn transform_proof(
    g: &BipartiteGraph,
    vars: &VarMap,
    proof: &ResolutionProof,
    profile: &WeightProfile,
    filter_vector: &[usize],
) -> Result<TransformOutput> {
    let m = g.left_count();
    if filter_vector.len() != m {
        return Err(Error::param("filter vector arity mismatch"));
    }
    let expected_d = thresholds_from_filter(g, filter_vector, &profile.delta);
    if expected_d != profile.d {
        return Err(Error::precondition(
            "profile thresholds do not match the filter vector",
        ));
    }
    let cap = rat_usize(GAMMA as usize * profile.alpha * profile.w0);
    // verify acceptance for every line's capacity vector
    for line in &proof.lines {
        let rvec = clause_r_vector(g, vars, &line.clause, &profile.delta);
        let case1 = (0..m).filter(|&i| rvec[i] <= filter_vector[i]).count();
        let case2 = (0..m).filter(|&i| rvec[i] <= filter_vector[i] + 1).count();
        if case1 < profile.w0 && rat_usize(case2) > cap {
            return Err(Error::precondition(format!(
                "filter vector rejects line {}",
                line.id
            )));
        }
    }
    let mut out_lines: Vec<ProofLine> = Vec::new();
    let mut fake_axioms: Vec<Clause> = Vec::new();
    let mut fake_line_ids = Vec::new();
    let mut remap: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for line in &proof.lines {
        let heavy = heavy_sets(g, vars, &line.clause, profile);
        let case1 = heavy.super_heavy.len();
        let rule = match &line.rule {
            Rule::Axiom => Rule::Axiom,
            Rule::Resolve { a, b, pivot } => {
                Rule::Resolve { a: remap[a], b: remap[b], pivot: *pivot }
            }
            Rule::Weaken { parent } => Rule::Weaken { parent: remap[parent] },
        };
        if case1 >= profile.w0 {
            let keep: BTreeSet<usize> =
                heavy.super_heavy.iter().copied().take(profile.w0).collect();
            let strengthened = Clause::new(
                line.clause
                    .lits()
                    .iter()
                    .copied()
                    .filter(|&l| keep.contains(&vars.pair(l.unsigned_abs() as usize).0))
                    .collect(),
            );
            let axiom_id = out_lines.len() + 1;
            out_lines.push(ProofLine { id: axiom_id, clause: strengthened.clone(), rule: Rule::Axiom });
            fake_line_ids.push(axiom_id);
            if !fake_axioms.contains(&strengthened) {
                fake_axioms.push(strengthened);
            }
            let weak_id = out_lines.len() + 1;
            out_lines.push(ProofLine {
                id: weak_id,
                clause: line.clause.clone(),
                rule: Rule::Weaken { parent: axiom_id },
            });
            remap.insert(line.id, weak_id);
        } else {
            let new_id = out_lines.len() + 1;
            out_lines.push(ProofLine { id: new_id, clause: line.clause.clone(), rule });
            remap.insert(line.id, new_id);
        }
    }
    Ok(TransformOutput { proof: ResolutionProof { lines: out_lines }, fake_axioms, fake_line_ids })
}

/// Per-line width report rows: `line_id,pseudo_width,n_super_heavy,case`.
pub fn width_report_csv<W: Write>(
    g: &BipartiteGraph,
    vars: &VarMap,
    proof: &ResolutionProof,
    profile: &WeightProfile,
    mut w: W,
) -> Result<()> {
    writeln!(w, "line_id,pseudo_width,n_super_heavy,case")?;
    for line in &proof.lines {
        let heavy = heavy_sets(g, vars, &line.clause, profile);
        let case = if heavy.super_heavy.len() >= profile.w0 { 1 } else { 2 };
        writeln!(
            w,
            "{},{},{},{}",
            line.id,
            heavy.pseudo_width(),
            heavy.super_heavy.len(),
            case
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    Fphp,
    Pm,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    /// `r log^2(alpha) / (alpha log^2 M)` with `M = m` or `m + n`; the length
    /// bound is exp of a positive constant times this.
    pub exponent: Rat,
    pub conditions: Vec<(String, bool)>,
}

/// Raw growth-rate exponent plus the finite-instance side conditions
/// `8 <= alpha^3/log alpha <= r / log M`.
pub fn bound_calculator(
    m: usize,
    n: usize,
    r: usize,
    alpha: usize,
    variant: BoundVariant,
) -> Result<BoundReport> {
    let scale = match variant {
        BoundVariant::Fphp => m,
        BoundVariant::Pm => m + n,
    };
    if scale < 2 {
        return Err(Error::param("need at least two vertices"));
    }
    let mut conditions = Vec::new();
    if alpha < 2 {
        conditions.push(("alpha >= 2".to_string(), false));
        return Ok(BoundReport { exponent: Rat::zero(), conditions });
    }
    conditions.push(("alpha >= 2".to_string(), true));
    let la = log2_approx(&BigUint::from(alpha), 64);
    let lm = log2_approx(&BigUint::from(scale), 64);
    let exponent = rat_usize(r) * &la * &la / (rat_usize(alpha) * &lm * &lm);
    let ratio = rat_usize(alpha.pow(3)) / &la;
    conditions.push(("8 <= alpha^3 / log alpha".to_string(), ratio >= rat_int(8)));
    conditions.push((
        "alpha^3 / log alpha <= r / log M".to_string(),
        &ratio * &lm <= rat_usize(r),
    ));
    Ok(BoundReport { exponent, conditions })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeVariant {
    RandomFphp,
    RandomPm,
}

#[derive(Debug, Clone)]
pub struct RegimeCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub checks: Vec<RegimeCheck>,
}

impl RegimeReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates the random-graph hypothesis inequalities exactly at the
/// canonical parameterization `chi = n^(eps/4)` with `xi = 16/(eps log n)`
/// (functional variant) or `xi = 32/(eps log n)` (matching variant):
///
///   (a) xi < 1/2          <=>  n^eps > 2^(32 k)   for xi = 16 k / (eps log n)
///   (b) xi ln chi >= 2    <=>  4 k ln 2 >= 2
///   (c) xi Delta ln chi >= 4 ln m   <=>  2^(k Delta) >= m
///
/// with k = 1 (functional) or 2 (matching). The fraction fields carry lossy
/// f64 approximations for display; pass/fail is decided exactly.
pub fn regime_validator(
    m: &BigUint,
    n: &BigUint,
    delta: usize,
    epsilon: &Rat,
    variant: RegimeVariant,
) -> Result<RegimeReport> {
    if *n < BigUint::from(2u8) || *m < BigUint::from(2u8) {
        return Err(Error::param("need m, n >= 2"));
    }
    if !epsilon.is_positive() || *epsilon > rat_int(1) {
        return Err(Error::param("epsilon must lie in (0, 1]"));
    }
    let k: i64 = match variant {
        RegimeVariant::RandomFphp => 1,
        RegimeVariant::RandomPm => 2,
    };
    let n_rat = Rat::from_integer(BigInt::from(n.clone()));
    let m_rat = Rat::from_integer(BigInt::from(m.clone()));
    let ln2 = std::f64::consts::LN_2;
    let log_n = crate::numeric::rat_to_f64(&log2_approx(n, 32));
    let log_m = crate::numeric::rat_to_f64(&log2_approx(m, 32));
    let eps = crate::numeric::rat_to_f64(epsilon);
    let xi = 16.0 * k as f64 / (eps * log_n);

    // (a) xi < 1/2  <=>  eps ln n - 32 k ln 2 > 0
    let a_holds = cmp_lnsum(
        &[(epsilon.clone(), n_rat.clone()), (rat_int(-32 * k), rat_int(2))],
        &Rat::zero(),
    ) == std::cmp::Ordering::Greater;
    // (b) 4 k ln 2 >= 2
    let b_holds = cmp_lnsum(&[(rat_int(4 * k), rat_int(2))], &rat_int(2))
        != std::cmp::Ordering::Less;
    // (c) k Delta ln 2 - ln m >= 0
    let c_holds = cmp_lnsum(
        &[(rat_int(k * delta as i64), rat_int(2)), (rat_int(-1), m_rat.clone())],
        &Rat::zero(),
    ) != std::cmp::Ordering::Less;

    let checks = vec![
        RegimeCheck { name: "xi < 1/2".into(), lhs: xi, rhs: 0.5, holds: a_holds },
        RegimeCheck {
            name: "xi ln chi >= 2".into(),
            lhs: 4.0 * k as f64 * ln2,
            rhs: 2.0,
            holds: b_holds,
        },
        RegimeCheck {
            name: "xi delta ln chi >= 4 ln m".into(),
            lhs: 4.0 * k as f64 * delta as f64 * ln2,
            rhs: 4.0 * log_m * ln2,
            holds: c_holds,
        },
    ];
    Ok(RegimeReport { checks })
}

/// Fake axioms: clauses with exactly `w0` super-heavy pigeons, built from
/// per-pigeon negative literals (each of which forces a clause degree of
/// `deg - 1`).
pub fn make_fake_axiom(
    g: &BipartiteGraph,
    vars: &VarMap,
    profile: &WeightProfile,
    pigeons: &[usize],
) -> Result<Clause> {
    if pigeons.len() != profile.w0 {
        return Err(Error::param("need exactly w0 pigeons"));
    }
    let mut lits = Vec::new();
    for &i in pigeons {
        if profile.d[i - 1] + 1 > g.degree(i) {
            return Err(Error::param(format!(
                "pigeon {} threshold too tight for a negative-literal axiom",
                i
            )));
        }
        let j = g.neighbours(i)[0];
        lits.push(-(vars.id(g, i, j).unwrap() as i64));
    }
    Ok(Clause::new(lits))
}

/// Convenience bundle: everything the transformation needs for one formula
/// and proof, derived deterministically from a seed.
pub struct DerivedProfile {
    pub profile: WeightProfile,
    pub filter_vector: Vec<usize>,
    pub transcript: FilterTranscript,
}

/// Builds slacks from the upper constructor, samples a filter vector over
/// the proof's capacity vectors, and turns it into thresholds. Fails when a
/// pigeon's slack leaves no valid threshold.
pub fn derive_profile(
    f: &GraphCnf,
    proof: &ResolutionProof,
    alpha: usize,
    w0: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<DerivedProfile> {
    let g = &f.graph;
    let delta = delta_default(g, alpha, DeltaVariant::Upper, None)?;
    let rvecs: Vec<Vec<usize>> = proof
        .lines
        .iter()
        .map(|l| clause_r_vector(g, &f.vars, &l.clause, &delta))
        .collect();
    let sampled = sample_filter_vector(&rvecs, g.left_count(), w0, alpha, seed, max_attempts)?;
    let (filter_vector, transcript) = sampled.map_err(|fail| {
        Error::precondition(format!(
            "no filter vector accepted after {} attempts (worst input {})",
            fail.attempts, fail.worst_input
        ))
    })?;
    let d = thresholds_from_filter(g, &filter_vector, &delta);
    let profile = WeightProfile::new(g, d, delta, alpha, w0)?;
    Ok(DerivedProfile { profile, filter_vector, transcript })
}
