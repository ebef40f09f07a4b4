//! Vertex-side machinery for perfect matching formulas: clause degrees over
//! global vertices (left ids 1..=m, right ids m+1..=m+n), partition sampling
//! with post-checked properties, deviation sets, the residual graph, the
//! lazy matching-extension procedure, and the exact-rational span suite on
//! the vertex spaces.

use crate::closure::{closure, ClosureParams, ClosureResult, Snapshot};
use crate::formula::{
    clause_status, matching_to_assignment_pm, Clause, ClauseSource, ClauseStatus, Matching, VarMap,
};
use crate::graph::{BipartiteGraph, Subgraph};
use crate::numeric::{rat_int, rat_pow, rat_usize};
use crate::rng::SplitMix64;
use crate::subspace::{kron, Subspace};
use crate::{Error, Rat, Result};
use num::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::io::{BufRead, Write};

/// Vertex partition: `v_p` holds the pigeon-side vertices of the simulation,
/// everything else is hole-side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub v_p: BTreeSet<usize>,
    pub seed: u64,
    pub retries: u64,
}

impl Partition {
    pub fn in_p(&self, v: usize) -> bool {
        self.v_p.contains(&v)
    }

    pub fn in_h(&self, v: usize) -> bool {
        !self.in_p(v)
    }
}

/// Per-vertex thresholds and slacks over all m + n vertices.
#[derive(Debug, Clone)]
pub struct VertexProfile {
    pub d: Vec<usize>,
    pub delta: Vec<Rat>,
}

impl VertexProfile {
    pub fn new(g: &BipartiteGraph, d: Vec<usize>, delta: Vec<Rat>) -> Result<Self> {
        let total = g.left_count() + g.right_count();
        if d.len() != total || delta.len() != total {
            return Err(Error::param("profile vectors must cover all vertices"));
        }
        let rdeg = g.right_degrees();
        for v in 1..=total {
            let deg = if v <= g.left_count() { g.degree(v) } else { rdeg[v - g.left_count()] };
            if d[v - 1] < 1 || d[v - 1] > deg {
                return Err(Error::param(format!(
                    "threshold {} for vertex {} outside 1..=deg {}",
                    d[v - 1],
                    v,
                    deg
                )));
            }
            if !delta[v - 1].is_positive() || delta[v - 1] >= rat_usize(d[v - 1]) {
                return Err(Error::param(format!("slack for vertex {} must lie in (0, d)", v)));
            }
        }
        Ok(VertexProfile { d, delta })
    }

    pub fn threshold(&self, v: usize) -> usize {
        self.d[v - 1]
    }

    pub fn slack(&self, v: usize) -> &Rat {
        &self.delta[v - 1]
    }
}

/// Slack rule `delta_v = 64 deg_G(v) xi` over all vertices.
pub fn delta_pm_default(g: &BipartiteGraph, xi: &Rat) -> Vec<Rat> {
    let rdeg = g.right_degrees();
    (1..=g.left_count() + g.right_count())
        .map(|v| {
            let deg =
                if v <= g.left_count() { g.degree(v) } else { rdeg[v - g.left_count()] };
            rat_int(64) * xi * rat_usize(deg)
        })
        .collect()
}

pub fn vertex_degree(g: &BipartiteGraph, v: usize) -> usize {
    if v <= g.left_count() {
        g.degree(v)
    } else {
        g.right_degrees()[v - g.left_count()]
    }
}

/// Neighbours of `v` as global ids.
pub fn vertex_neighbours(g: &BipartiteGraph, v: usize) -> Vec<usize> {
    if v <= g.left_count() {
        g.neighbours(v).iter().map(|&j| g.left_count() + j).collect()
    } else {
        g.right_neighbours(v - g.left_count())
    }
}

fn edge_of(g: &BipartiteGraph, v: usize, u: usize) -> (usize, usize) {
    if v <= g.left_count() {
        (v, u - g.left_count())
    } else {
        (u, v - g.left_count())
    }
}

/// Partners `u` such that assigning the single edge `{v, u}` (true, with all
/// other edges at either endpoint false) satisfies the clause.
pub fn vertex_clause_neighbourhood(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    v: usize,
) -> Vec<usize> {
    let lit_edges: Vec<(bool, usize, usize)> = c
        .lits()
        .iter()
        .map(|&l| {
            let (i, j) = vars.pair(l.unsigned_abs() as usize);
            (l > 0, i, j)
        })
        .collect();
    vertex_neighbours(g, v)
        .into_iter()
        .filter(|&u| {
            let (ei, ej) = edge_of(g, v, u);
            lit_edges.iter().any(|&(positive, fi, fj)| {
                if positive {
                    (fi, fj) == (ei, ej)
                } else {
                    (fi, fj) != (ei, ej) && (fi == ei || fj == ej)
                }
            })
        })
        .collect()
}

pub fn vertex_clause_degree(g: &BipartiteGraph, vars: &VarMap, c: &Clause, v: usize) -> usize {
    vertex_clause_neighbourhood(g, vars, c, v).len()
}

/// Vertices whose clause degree reaches the threshold (fat) or comes within
/// the slack of it (thick).
pub fn vertex_heavy_sets(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    profile: &VertexProfile,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let total = g.left_count() + g.right_count();
    let mut fat = BTreeSet::new();
    let mut thick = BTreeSet::new();
    for v in 1..=total {
        let deg = vertex_clause_degree(g, vars, c, v);
        if deg >= profile.threshold(v) {
            fat.insert(v);
        }
        if rat_usize(deg) >= rat_usize(profile.threshold(v)) - profile.slack(v) {
            thick.insert(v);
        }
    }
    (fat, thick)
}

/// Left vertices whose clause-neighbourhood splits across the partition with
/// deviation above `4 xi delta_max`.
pub fn compute_vbad(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    partition: &Partition,
    xi: &Rat,
) -> BTreeSet<usize> {
    let slack = rat_int(8) * xi * rat_usize(g.delta_max());
    (1..=g.left_count())
        .filter(|&v| {
            let nc = vertex_clause_neighbourhood(g, vars, c, v);
            let in_h = nc.iter().filter(|&&u| partition.in_h(u)).count();
            // |2 |N_C(v) cap V_H| - |N_C(v)|| > 8 xi delta
            let dev = rat_usize(2 * in_h) - rat_usize(nc.len());
            let dev = if dev.is_negative() { -dev } else { dev };
            dev > slack
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct VbadStarReport {
    pub subset: Vec<usize>,
    pub side_positive: bool,
    pub holds: bool,
}

/// When the deviation set is larger than `w0/8`, some subset of one-sided
/// deviators of size `max(1, w0/16)` must deviate in aggregate by more than
/// `2 xi delta |S|`; checks the greedy choice (lowest ids on the larger
/// side).
pub fn vbad_star(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    partition: &Partition,
    xi: &Rat,
    w0: usize,
) -> Option<VbadStarReport> {
    let vbad = compute_vbad(g, vars, c, partition, xi);
    if rat_usize(8 * vbad.len()) <= rat_usize(w0) {
        return None;
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &v in &vbad {
        let nc = vertex_clause_neighbourhood(g, vars, c, v);
        let in_h = nc.iter().filter(|&&u| partition.in_h(u)).count();
        if 2 * in_h > nc.len() {
            plus.push(v);
        } else {
            minus.push(v);
        }
    }
    let (side, side_positive) = if plus.len() >= minus.len() { (plus, true) } else { (minus, false) };
    let k = (w0 / 16).max(1).min(side.len());
    let subset: Vec<usize> = side.into_iter().take(k).collect();
    let mut union_h = BTreeSet::new();
    let mut union_all = BTreeSet::new();
    for &v in &subset {
        for u in vertex_clause_neighbourhood(g, vars, c, v) {
            if partition.in_h(u) {
                union_h.insert(u);
            }
            union_all.insert(u);
        }
    }
    let dev = rat_usize(2 * union_h.len()) - rat_usize(union_all.len());
    let dev = if dev.is_negative() { -dev } else { dev };
    let holds = dev > rat_int(4) * xi * rat_usize(g.delta_max() * subset.len());
    Some(VbadStarReport { subset, side_positive, holds })
}

#[derive(Debug, Clone, Default)]
pub struct PropertyViolations {
    /// Fake-axiom indices failing the fat-coverage bound.
    pub p1: Vec<usize>,
    /// Vertices whose graph neighbourhood splits too unevenly.
    pub p2: Vec<usize>,
    /// (clause index, right vertex) with uneven clause split.
    pub p3: Vec<(usize, usize)>,
    /// Clause indices whose deviation set is too large.
    pub p4: Vec<usize>,
}

impl PropertyViolations {
    pub fn is_clean(&self) -> bool {
        self.p1.is_empty() && self.p2.is_empty() && self.p3.is_empty() && self.p4.is_empty()
    }
}

/// Checks the four partition properties for a clause list and fake-axiom set.
#[allow(clippy::too_many_arguments)]
pub fn check_partition_properties(
    g: &BipartiteGraph,
    vars: &VarMap,
    clauses: &[Clause],
    fake_axioms: &[Clause],
    profile: &VertexProfile,
    partition: &Partition,
    w0: usize,
    xi: &Rat,
) -> PropertyViolations {
    let mut out = PropertyViolations::default();
    // 1: every fake axiom keeps at least w0/4 fat vertices on the pigeon side
    for (idx, a) in fake_axioms.iter().enumerate() {
        let (fat, _) = vertex_heavy_sets(g, vars, a, profile);
        let covered = fat.iter().filter(|&&v| partition.in_p(v)).count();
        if rat_usize(4 * covered) < rat_usize(w0) {
            out.p1.push(idx);
        }
    }
    // 2: every vertex splits its graph neighbourhood near evenly
    let total = g.left_count() + g.right_count();
    for v in 1..=total {
        let nb = vertex_neighbours(g, v);
        let in_h = nb.iter().filter(|&&u| partition.in_h(u)).count();
        let dev = rat_usize(2 * in_h) - rat_usize(nb.len());
        let dev = if dev.is_negative() { -dev } else { dev };
        if dev > rat_int(8) * xi * rat_usize(nb.len()) {
            out.p2.push(v);
        }
    }
    // 3: right vertices split every clause neighbourhood near evenly
    for (ci, c) in clauses.iter().enumerate() {
        for j in 1..=g.right_count() {
            let v = g.left_count() + j;
            let nc = vertex_clause_neighbourhood(g, vars, c, v);
            let in_h = nc.iter().filter(|&&u| partition.in_h(u)).count();
            let dev = rat_usize(2 * in_h) - rat_usize(nc.len());
            let dev = if dev.is_negative() { -dev } else { dev };
            if dev > rat_int(8) * xi * rat_usize(vertex_degree(g, v)) {
                out.p3.push((ci, v));
            }
        }
    }
    // 4: small deviation sets on the left
    for (ci, c) in clauses.iter().enumerate() {
        let vbad = compute_vbad(g, vars, c, partition, xi);
        if rat_usize(8 * vbad.len()) > rat_usize(w0) {
            out.p4.push(ci);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct PartitionFailure {
    pub retries: u64,
    /// Violation counts per property across all trials.
    pub p1_total: u64,
    pub p2_total: u64,
    pub p3_total: u64,
    pub p4_total: u64,
}

#[derive(Debug, Clone)]
pub struct SampledPartition {
    pub partition: Partition,
    /// Hypothesis evaluations; failures downgrade the run to exploratory.
    pub hypotheses: Vec<(String, bool)>,
}

/// Samples uniform partitions (each vertex joins the pigeon side with
/// probability 1/2) until one passes all four properties.
#[allow(clippy::too_many_arguments)]
pub fn sample_partition(
    g: &BipartiteGraph,
    vars: &VarMap,
    clauses: &[Clause],
    fake_axioms: &[Clause],
    profile: &VertexProfile,
    w0: usize,
    xi: &Rat,
    seed: u64,
    max_retries: u64,
) -> Result<std::result::Result<SampledPartition, PartitionFailure>> {
    if max_retries == 0 {
        return Err(Error::param("need at least one retry"));
    }
    let total = g.left_count() + g.right_count();
    let hypotheses = partition_hypotheses(g, clauses.len(), fake_axioms.len(), w0, xi);
    let mut fail =
        PartitionFailure { retries: 0, p1_total: 0, p2_total: 0, p3_total: 0, p4_total: 0 };
    for trial in 0..max_retries {
        let mut rng = SplitMix64::substream(seed, trial);
        let v_p: BTreeSet<usize> = (1..=total).filter(|_| rng.coin()).collect();
        let partition = Partition { v_p, seed, retries: trial };
        let violations =
            check_partition_properties(g, vars, clauses, fake_axioms, profile, &partition, w0, xi);
        if violations.is_clean() {
            return Ok(Ok(SampledPartition { partition, hypotheses }));
        }
        fail.retries = trial + 1;
        fail.p1_total += violations.p1.len() as u64;
        fail.p2_total += violations.p2.len() as u64;
        fail.p3_total += violations.p3.len() as u64;
        fail.p4_total += violations.p4.len() as u64;
    }
    Ok(Err(fail))
}

/// The sampling lemma's hypotheses, evaluated exactly and reported.
fn partition_hypotheses(
    g: &BipartiteGraph,
    proof_len: usize,
    fake_count: usize,
    w0: usize,
    xi: &Rat,
) -> Vec<(String, bool)> {
    use crate::numeric::cmp_lnsum;
    use std::cmp::Ordering;
    let m = g.left_count();
    let rdeg = g.right_degrees();
    let min_right = (1..=g.right_count()).map(|j| rdeg[j]).min().unwrap_or(0);
    // delta_max xi^2 >= log2 m  <=>  delta_max xi^2 ln 2 - ln m >= 0
    let h1 = (
        "delta_max >= log(left count) / xi^2".to_string(),
        cmp_lnsum(
            &[(rat_usize(g.delta_max()) * xi * xi, rat_int(2)), (rat_int(-1), rat_usize(m))],
            &Rat::zero(),
        ) != Ordering::Less,
    );
    // min right degree xi^2 >= log2 n + w0
    //   <=>  (min_right xi^2 - w0) ln 2 - ln n >= 0
    let h2 = (
        "min right degree >= (log(right count) + w0) / xi^2".to_string(),
        cmp_lnsum(
            &[
                (rat_usize(min_right) * xi * xi - rat_usize(w0), rat_int(2)),
                (rat_int(-1), rat_usize(g.right_count())),
            ],
            &Rat::zero(),
        ) != Ordering::Less,
    );
    // counts bounded by e^(w0/32)
    let bound = |count: usize| {
        cmp_lnsum(&[(rat_int(1), rat_usize(count.max(1)))], &(rat_usize(w0) / rat_int(32)))
            != Ordering::Greater
    };
    let h3 = ("fake-axiom count <= e^(w0/32)".to_string(), bound(fake_count));
    let h4 = ("clause count <= e^(w0/32)".to_string(), bound(proof_len));
    vec![h1, h2, h3, h4]
}

/// Residual graph: the pigeon-side right vertices removed.
pub fn residual_graph<'a>(g: &'a BipartiteGraph, partition: &Partition) -> Subgraph<'a> {
    let removed: Vec<usize> = (1..=g.right_count())
        .map(|j| g.left_count() + j)
        .filter(|&v| partition.in_p(v))
        .collect();
    g.remove_vertices(&removed).expect("right ids in range")
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub degree_cap: Rat,
    pub degree_cap_ok: bool,
    pub expansion_target: Rat,
    pub worst_ratio: Option<Rat>,
    pub expansion_ok: bool,
}

/// Exhaustively validates the residual graph as an
/// `(r, (1+8 xi) delta/2, (1-12 xi) delta/2)`-boundary expander.
pub fn validate_residual_expansion(
    g: &BipartiteGraph,
    partition: &Partition,
    xi: &Rat,
    r: usize,
) -> ResidualReport {
    let sub = residual_graph(g, partition);
    let delta = rat_usize(g.delta_max());
    let degree_cap = (rat_int(1) + rat_int(8) * xi) * &delta / rat_int(2);
    let degree_cap_ok =
        sub.left_ids().iter().all(|&i| rat_usize(sub.degree(i)) <= degree_cap);
    let expansion_target = (rat_int(1) - rat_int(12) * xi) * &delta / rat_int(2);
    let worst = sub.worst_boundary_ratio(r);
    let expansion_ok = match &worst {
        Some((ratio, _)) => *ratio >= expansion_target,
        None => true,
    };
    ResidualReport {
        degree_cap,
        degree_cap_ok,
        expansion_target,
        worst_ratio: worst.map(|(r, _)| r),
        expansion_ok,
    }
}

/// Lazy matching extension: processes the lowest-indexed unmatched vertex of
/// `t`, matching it to each entry of its list in order; an edge already at
/// the chosen partner is removed only at that moment. Lists must be pairwise
/// disjoint.
pub fn extend_matching(
    g: &BipartiteGraph,
    t: &[usize],
    psi: &Matching,
    v_lists: &[(usize, Vec<usize>)],
) -> Result<Vec<Matching>> {
    check_lists(t, v_lists)?;
    let mut out = Vec::new();
    extend_rec(g, t, psi.clone(), v_lists, &mut out)?;
    Ok(out)
}

fn check_lists(t: &[usize], v_lists: &[(usize, Vec<usize>)]) -> Result<()> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for (v, list) in v_lists {
        if !t.contains(v) {
            return Err(Error::param(format!("list given for vertex {} outside t", v)));
        }
        for &w in list {
            if !seen.insert(w) {
                return Err(Error::precondition(format!(
                    "partner {} appears in two lists; termination not guaranteed",
                    w
                )));
            }
        }
    }
    Ok(())
}

fn extend_rec(
    g: &BipartiteGraph,
    t: &[usize],
    psi: Matching,
    v_lists: &[(usize, Vec<usize>)],
    out: &mut Vec<Matching>,
) -> Result<()> {
    let next = t.iter().copied().filter(|&v| psi.hole_of(v).is_none()).min();
    let v = match next {
        None => {
            if !out.contains(&psi) {
                out.push(psi);
            }
            return Ok(());
        }
        Some(v) => v,
    };
    let list = v_lists
        .iter()
        .find(|(u, _)| *u == v)
        .map(|(_, l)| l.as_slice())
        .ok_or_else(|| Error::param(format!("no list for vertex {}", v)))?;
    for &w in list {
        let mut next_psi = psi.clone();
        // lazy removal: drop w's existing edge only now
        next_psi.remove_hole(w);
        next_psi.insert(g, v, w)?;
        extend_rec(g, t, next_psi, v_lists, out)?;
    }
    Ok(())
}

/// Eager variant used as a mutation control: removes every edge touching any
/// list upfront. Violates the matched-rights-stay-matched law.
pub fn extend_matching_eager(
    g: &BipartiteGraph,
    t: &[usize],
    psi: &Matching,
    v_lists: &[(usize, Vec<usize>)],
) -> Result<Vec<Matching>> {
    check_lists(t, v_lists)?;
    let mut stripped = psi.clone();
    for (_, list) in v_lists {
        for &w in list {
            stripped.remove_hole(w);
        }
    }
    let mut out = Vec::new();
    extend_rec(g, t, stripped, v_lists, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ExtendClaimsReport {
    pub covers_required: bool,
    pub vpvr_edges_preserved: bool,
    pub matched_rights_stay_matched: bool,
}

impl ExtendClaimsReport {
    pub fn all_hold(&self) -> bool {
        self.covers_required && self.vpvr_edges_preserved && self.matched_rights_stay_matched
    }
}

/// Validates the extension outputs: they cover `must_cover`, they contain an
/// edge of `V_L x (V_P cap V_R)` iff the input did, and every right vertex
/// matched in the input stays matched.
pub fn validate_extend_claims(
    g: &BipartiteGraph,
    partition: &Partition,
    psi: &Matching,
    must_cover: &[usize],
    outputs: &[Matching],
) -> ExtendClaimsReport {
    let vpvr = |m: &Matching| -> BTreeSet<(usize, usize)> {
        m.pairs().filter(|&(_, j)| partition.in_p(g.left_count() + j)).collect()
    };
    let base = vpvr(psi);
    let covers_required = outputs
        .iter()
        .all(|m| must_cover.iter().all(|&v| m.hole_of(v).is_some()));
    let vpvr_edges_preserved = outputs.iter().all(|m| vpvr(m) == base);
    let matched_rights_stay_matched = outputs.iter().all(|m| {
        psi.pairs().all(|(_, j)| m.pigeon_of(j).is_some())
    });
    ExtendClaimsReport { covers_required, vpvr_edges_preserved, matched_rights_stay_matched }
}

/// Partition file: line 1 `seed retries`, line 2 the pigeon-side ids.
pub fn write_partition<W: Write>(p: &Partition, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", p.seed, p.retries)?;
    let ids: Vec<String> = p.v_p.iter().map(|v| v.to_string()).collect();
    writeln!(w, "{}", ids.join(" "))?;
    Ok(())
}

pub fn partition_to_string(p: &Partition) -> String {
    let mut buf = Vec::new();
    write_partition(p, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("partition text is ASCII")
}

pub fn read_partition<R: BufRead>(r: R) -> Result<Partition> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "missing header".into() })??;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Parse { line: 1, msg: "expected `seed retries`".into() });
    }
    let seed = toks[0]
        .parse::<u64>()
        .map_err(|_| Error::Parse { line: 1, msg: "bad seed".into() })?;
    let retries = toks[1]
        .parse::<u64>()
        .map_err(|_| Error::Parse { line: 1, msg: "bad retry count".into() })?;
    let body = lines.next().transpose()?.unwrap_or_default();
    let mut v_p = BTreeSet::new();
    for tok in body.split_whitespace() {
        let v = tok
            .parse::<usize>()
            .map_err(|_| Error::Parse { line: 2, msg: format!("bad id `{}`", tok) })?;
        v_p.insert(v);
    }
    Ok(Partition { v_p, seed, retries })
}

/// Per-vertex tensor factors over the pigeon side of a partition, with
/// dimensions `floor((deg_G(v) - d_v + delta_v/2) / 2)`.
#[derive(Debug, Clone)]
pub struct VertexSpaces {
    /// Pigeon-side vertices, ascending; factor order of the tensor space.
    pub vp: Vec<usize>,
    pub dims: Vec<usize>,
}

impl VertexSpaces {
    pub fn new(g: &BipartiteGraph, profile: &VertexProfile, partition: &Partition) -> Result<Self> {
        let vp: Vec<usize> = partition.v_p.iter().copied().collect();
        let mut dims = Vec::with_capacity(vp.len());
        for &v in &vp {
            let deg = vertex_degree(g, v);
            let expr = rat_usize(deg) - rat_usize(profile.threshold(v)) + profile.slack(v) / rat_int(2);
            let dim = (expr / rat_int(2)).floor().to_integer();
            use num::ToPrimitive;
            let dim = dim.to_isize().unwrap_or(0).max(0) as usize;
            if dim < 1 {
                return Err(Error::precondition(format!(
                    "vertex {} space has dimension {}; need at least 1",
                    v, dim
                )));
            }
            dims.push(dim);
        }
        Ok(VertexSpaces { vp, dims })
    }

    pub fn ambient(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn lambda(&self, v: usize, partner: usize) -> Vec<Rat> {
        let idx = self.vp.binary_search(&v).expect("vertex on the pigeon side");
        crate::spanlab::make_lambda(self.dims[idx], partner)
    }
}

/// Global partner of `v` under a matching, if covered.
fn partner_of(g: &BipartiteGraph, phi: &Matching, v: usize) -> Option<usize> {
    if v <= g.left_count() {
        phi.hole_of(v).map(|j| g.left_count() + j)
    } else {
        phi.pigeon_of(v - g.left_count())
    }
}

/// Tensor image of a matching: the single partner vector for covered
/// pigeon-side vertices, the full factor for uncovered ones.
pub fn pm_lambda_of_matching(
    g: &BipartiteGraph,
    spaces: &VertexSpaces,
    phi: &Matching,
) -> Subspace {
    let k = spaces.vp.len();
    let mut factor_bases: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(k);
    for (idx, &v) in spaces.vp.iter().enumerate() {
        match partner_of(g, phi, v) {
            Some(u) => factor_bases.push(vec![spaces.lambda(v, u)]),
            None => {
                let dim = spaces.dims[idx];
                let mut basis = Vec::with_capacity(dim);
                for t in 0..dim {
                    let mut e = vec![Rat::zero(); dim];
                    e[t] = Rat::one();
                    basis.push(e);
                }
                factor_bases.push(basis);
            }
        }
    }
    let mut rows = Vec::new();
    let mut pick = vec![0usize; k];
    loop {
        let factors: Vec<Vec<Rat>> = (0..k).map(|i| factor_bases[i][pick[i]].clone()).collect();
        rows.push(kron(&factors));
        let mut pos = k;
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

/// Matchings that cover `required`, contain no pigeon-side/pigeon-side edge,
/// have every edge touching `required`, and fail to satisfy the clause.
/// Extensions of these span the same subspace, so the enumeration is
/// restricted to them.
pub fn pm_zero_space(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    required: &BTreeSet<usize>,
    partition: &Partition,
    budget: u64,
) -> Result<Vec<Matching>> {
    let targets: Vec<usize> = required.iter().copied().collect();
    let mut out = Vec::new();
    let mut visited = 0u64;
    pm_enumerate(
        g,
        &targets,
        0,
        &mut Matching::empty(),
        partition,
        &mut visited,
        budget,
        &mut |phi| {
            let rho = matching_to_assignment_pm(g, vars, phi);
            if clause_status(c, &rho) != ClauseStatus::Satisfied {
                out.push(phi.clone());
            }
        },
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn pm_enumerate(
    g: &BipartiteGraph,
    targets: &[usize],
    depth: usize,
    phi: &mut Matching,
    partition: &Partition,
    visited: &mut u64,
    budget: u64,
    emit: &mut impl FnMut(&Matching),
) -> Result<()> {
    // every search node counts against the budget, not just completions
    *visited += 1;
    if *visited > budget {
        return Err(Error::Budget { required: *visited as u128, cap: budget as u128 });
    }
    if depth == targets.len() {
        emit(phi);
        return Ok(());
    }
    let v = targets[depth];
    if partner_of(g, phi, v).is_some() {
        return pm_enumerate(g, targets, depth + 1, phi, partition, visited, budget, emit);
    }
    for u in vertex_neighbours(g, v) {
        if partner_of(g, phi, u).is_some() {
            continue;
        }
        if partition.in_p(v) && partition.in_p(u) {
            continue;
        }
        let (i, j) = edge_of(g, v, u);
        phi.insert(g, i, j).expect("both endpoints free");
        pm_enumerate(g, targets, depth + 1, phi, partition, visited, budget, emit)?;
        let removed = phi.remove_hole(j);
        debug_assert!(removed.is_some());
    }
    Ok(())
}

/// Relevant vertices of a clause: the closure (on the residual graph, seeded
/// by thick-or-deviating left vertices) united with the thick set.
pub struct PmClauseAnalysis {
    pub thick: BTreeSet<usize>,
    pub vbad: BTreeSet<usize>,
    pub closure: ClosureResult,
    /// Closure set united with the thick vertices.
    pub relevant: BTreeSet<usize>,
}

#[allow(clippy::too_many_arguments)]
pub fn pm_clause_analysis(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    profile: &VertexProfile,
    partition: &Partition,
    params: &ClosureParams,
    xi: &Rat,
) -> Result<PmClauseAnalysis> {
    let (_, thick) = vertex_heavy_sets(g, vars, c, profile);
    let vbad = compute_vbad(g, vars, c, partition, xi);
    let seed: BTreeSet<usize> = thick
        .iter()
        .copied()
        .filter(|&v| v <= g.left_count())
        .chain(vbad.iter().copied())
        .collect();
    let sub = residual_graph(g, partition);
    let snap = Snapshot::from_subgraph(&sub);
    let cl = closure(&snap, &seed, params)?;
    let mut relevant = cl.closure_set.clone();
    relevant.extend(thick.iter().copied());
    Ok(PmClauseAnalysis { thick, vbad, closure: cl, relevant })
}

/// `lambda` of a clause in the vertex setting.
#[allow(clippy::too_many_arguments)]
pub fn pm_lambda_of_clause(
    g: &BipartiteGraph,
    vars: &VarMap,
    c: &Clause,
    profile: &VertexProfile,
    spaces: &VertexSpaces,
    partition: &Partition,
    params: &ClosureParams,
    xi: &Rat,
    budget: u64,
) -> Result<Subspace> {
    let analysis = pm_clause_analysis(g, vars, c, profile, partition, params, xi)?;
    let zs = pm_zero_space(g, vars, c, &analysis.relevant, partition, budget)?;
    let mut acc = Subspace::zero(spaces.ambient());
    for phi in &zs {
        acc = acc.union(&pm_lambda_of_matching(g, spaces, phi));
        if acc.is_full() {
            break;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Skip(String),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
    pub fn failed(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

#[derive(Debug, Clone)]
pub struct PmSuiteReport {
    /// One outcome per formula axiom: its image must be empty.
    pub axiom_checks: Vec<CheckOutcome>,
    /// One outcome per fake axiom: fraction bounded by `(1-16 xi)^(w0/8)`.
    pub fake_checks: Vec<CheckOutcome>,
    /// One outcome per derivation step: containment in the premise span.
    pub step_checks: Vec<CheckOutcome>,
    pub step_rows: Vec<(usize, crate::spanlab::SpanStepReport)>,
}

impl PmSuiteReport {
    pub fn violations(&self) -> usize {
        self.axiom_checks
            .iter()
            .chain(&self.fake_checks)
            .chain(&self.step_checks)
            .filter(|c| c.failed())
            .count()
    }
}

/// Derivation steps to validate: (premise 0, premise 1, conclusion).
pub type DerivationStep = (Clause, Clause, Clause);

/// Runs the three vertex-side span checks. Preconditions (factor dimensions,
/// relevant-set sizes) turn into per-check skips with a reason.
#[allow(clippy::too_many_arguments)]
pub fn pm_span_suite(
    g: &BipartiteGraph,
    vars: &VarMap,
    formula_clauses: &[(Clause, ClauseSource)],
    fake_axioms: &[Clause],
    profile: &VertexProfile,
    partition: &Partition,
    params: &ClosureParams,
    xi: &Rat,
    w0: usize,
    steps: &[DerivationStep],
    budget: u64,
) -> Result<PmSuiteReport> {
    let spaces = VertexSpaces::new(g, profile, partition)?;
    let mut axiom_checks = Vec::new();
    for (c, source) in formula_clauses {
        let lam = pm_lambda_of_clause(g, vars, c, profile, &spaces, partition, params, xi, budget)?;
        if lam.dim() == 0 {
            axiom_checks.push(CheckOutcome::Pass);
        } else {
            axiom_checks.push(CheckOutcome::Fail(format!(
                "axiom {:?} has image of dimension {}",
                source,
                lam.dim()
            )));
        }
    }
    // fraction bound compared as frac^8 <= (1 - 16 xi)^w0, exact in rationals
    let base = rat_int(1) - rat_int(16) * xi;
    let mut fake_checks = Vec::new();
    for c in fake_axioms {
        if !base.is_positive() {
            fake_checks.push(CheckOutcome::Skip("bound nonpositive: xi >= 1/16".into()));
            continue;
        }
        let lam = pm_lambda_of_clause(g, vars, c, profile, &spaces, partition, params, xi, budget)?;
        let frac = lam.dim_fraction();
        let ok = rat_pow(&frac, 8) <= rat_pow(&base, w0 as i64);
        if ok {
            fake_checks.push(CheckOutcome::Pass);
        } else {
            fake_checks.push(CheckOutcome::Fail(format!(
                "fraction {}/{} exceeds the bound",
                lam.dim(),
                spaces.ambient()
            )));
        }
    }
    let mut step_checks = Vec::new();
    let mut step_rows = Vec::new();
    let mut analysis_cache: std::collections::HashMap<Clause, (bool, usize)> = Default::default();
    let mut lambda_cache: std::collections::HashMap<Clause, Subspace> = Default::default();
    for (idx, (c0, c1, c)) in steps.iter().enumerate() {
        let mut skip = None;
        for clause in [c0, c1, c] {
            let (maximal, relevant) = match analysis_cache.get(clause) {
                Some(entry) => *entry,
                None => {
                    let analysis =
                        pm_clause_analysis(g, vars, clause, profile, partition, params, xi)?;
                    let entry = (analysis.closure.maximal_verified, analysis.relevant.len());
                    analysis_cache.insert(clause.clone(), entry);
                    entry
                }
            };
            if !maximal {
                skip = Some("closure not maximality-verified".to_string());
                break;
            }
            if 4 * relevant > params.r {
                skip = Some(format!("relevant set of size {} exceeds r/4", relevant));
                break;
            }
        }
        if let Some(reason) = skip {
            step_checks.push(CheckOutcome::Skip(reason));
            continue;
        }
        let mut lambda = |clause: &Clause| -> Result<Subspace> {
            if let Some(s) = lambda_cache.get(clause) {
                return Ok(s.clone());
            }
            let s =
                pm_lambda_of_clause(g, vars, clause, profile, &spaces, partition, params, xi, budget)?;
            lambda_cache.insert(clause.clone(), s.clone());
            Ok(s)
        };
        let l0 = lambda(c0)?;
        let l1 = lambda(c1)?;
        let lc = lambda(c)?;
        let span01 = l0.union(&l1);
        let contained = span01.contains(&lc);
        step_rows.push((
            idx + 1,
            crate::spanlab::SpanStepReport {
                dim_c: lc.dim(),
                dim_span01: span01.dim(),
                contained,
            },
        ));
        if contained {
            step_checks.push(CheckOutcome::Pass);
        } else {
            step_checks.push(CheckOutcome::Fail(format!("step {} not contained", idx + 1)));
        }
    }
    Ok(PmSuiteReport { axiom_checks, fake_checks, step_checks, step_rows })
}

/// Validation instance for the vertex-side span checks: a 6 + 6 graph of
/// degree 5 whose designated edge endpoints get two-dimensional factors,
/// slack scale `xi = 1/32`, and a partition that (a) puts the designated
/// left endpoint on the pigeon side and (b) admits a left-covering matching
/// without pigeon-side/pigeon-side edges.
#[derive(Debug, Clone)]
pub struct PmPreset {
    pub graph: BipartiteGraph,
    pub profile: VertexProfile,
    pub partition: Partition,
    pub params: ClosureParams,
    pub xi: Rat,
    /// Designated edge (left id, global right id); its negative literal is
    /// the canonical fake axiom with exactly two fat vertices.
    pub designated: (usize, usize),
    pub graph_seed: u64,
}

impl PmPreset {
    pub fn fake_axiom(&self, vars: &VarMap) -> Clause {
        let (u, v) = self.designated;
        let hole = v - self.graph.left_count();
        Clause::new(vec![-(vars.id(&self.graph, u, hole).unwrap() as i64)])
    }
}

pub fn find_pm_preset(seed_from: u64, seed_to: u64, partition_seed: u64) -> Result<PmPreset> {
    let xi = crate::numeric::rat(1, 32);
    for seed in seed_from..seed_to {
        let g = crate::graph::sample_random(6, 6, 5, seed)?;
        let rdeg = g.right_degrees();
        if (1..=6).any(|j| rdeg[j] < 4) {
            continue;
        }
        let j_star = match g.neighbours(1).iter().copied().find(|&j| rdeg[j] >= 5) {
            Some(j) => j,
            None => continue,
        };
        let designated = (1usize, g.left_count() + j_star);
        let total = g.left_count() + g.right_count();
        let mut d = Vec::new();
        let mut delta = Vec::new();
        for v in 1..=total {
            let deg = vertex_degree(&g, v);
            if v == designated.0 || v == designated.1 {
                d.push(1);
                delta.push(crate::numeric::rat(1, 2));
            } else {
                d.push(deg - 1);
                delta.push(if deg >= 4 { rat_int(2) } else { crate::numeric::rat(1, 2) });
            }
        }
        let profile = VertexProfile::new(&g, d, delta)?;
        let nu = (rat_int(1) - rat_int(20) * &xi) * rat_usize(g.delta_max()) / rat_int(2);
        let params = ClosureParams::new(4 * total, nu, None)?;
        let partition = match find_preset_partition(&g, designated.0, partition_seed) {
            Some(p) => p,
            None => continue,
        };
        // the designated endpoints need factor dimension 2 when they land on
        // the pigeon side; degree 5 gives floor((5 - 1 + 1/4)/2) = 2
        if VertexSpaces::new(&g, &profile, &partition).is_err() {
            continue;
        }
        return Ok(PmPreset { graph: g, profile, partition, params, xi, designated, graph_seed: seed });
    }
    Err(Error::param(format!("no preset instance in seeds {}..{}", seed_from, seed_to)))
}

fn find_preset_partition(g: &BipartiteGraph, u_star: usize, seed: u64) -> Option<Partition> {
    let vars = VarMap::new(g);
    let total = g.left_count() + g.right_count();
    for trial in 0..4000u64 {
        let mut rng = SplitMix64::substream(seed, trial);
        let v_p: BTreeSet<usize> = (1..=total).filter(|_| rng.coin()).collect();
        if !v_p.contains(&u_star) {
            continue;
        }
        let partition = Partition { v_p, seed, retries: trial };
        let all_left: BTreeSet<usize> = (1..=g.left_count()).collect();
        if let Ok(zs) = pm_zero_space(g, &vars, &Clause::empty(), &all_left, &partition, 1 << 22) {
            if !zs.is_empty() {
                return Some(partition);
            }
        }
    }
    None
}

#[derive(Debug, Clone, Default)]
pub struct PmSweepSummary {
    pub axiom_passes: usize,
    pub fake_passes: usize,
    pub steps_checked: usize,
    pub steps_skipped: usize,
    pub violations: usize,
    pub rows: Vec<(usize, crate::spanlab::SpanStepReport)>,
}

/// Runs the full vertex-side suite on a preset: axiom images, the
/// fake-axiom fraction, and span containment over random derivations.
pub fn run_pm_sweep(
    preset: &PmPreset,
    derivations: usize,
    steps_per: usize,
    seed: u64,
    budget: u64,
) -> Result<PmSweepSummary> {
    let f = crate::formula::encode_pm(&preset.graph);
    let fake = preset.fake_axiom(&f.vars);
    let steps = crate::spanlab::random_derivations(&f.clauses, derivations, steps_per, seed);
    let formula: Vec<(Clause, ClauseSource)> =
        f.clauses.iter().cloned().zip(f.sources.iter().copied()).collect();
    let report = pm_span_suite(
        &preset.graph,
        &f.vars,
        &formula,
        &[fake],
        &preset.profile,
        &preset.partition,
        &preset.params,
        &preset.xi,
        2,
        &steps,
        budget,
    )?;
    let mut summary = PmSweepSummary {
        axiom_passes: report.axiom_checks.iter().filter(|c| c.passed()).count(),
        fake_passes: report.fake_checks.iter().filter(|c| c.passed()).count(),
        steps_checked: report.step_checks.iter().filter(|c| !matches!(c, CheckOutcome::Skip(_))).count(),
        steps_skipped: report
            .step_checks
            .iter()
            .filter(|c| matches!(c, CheckOutcome::Skip(_)))
            .count(),
        violations: report.violations(),
        rows: report.step_rows.clone(),
    };
    summary.rows.sort_by_key(|(id, _)| *id);
    Ok(summary)
}
