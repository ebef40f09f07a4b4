//! Bipartite graphs with left vertices ("pigeons") 1..=m and right vertices
//! ("holes") 1..=n, random sampling with reproducible seeds, neighbourhood and
//! boundary computation, exhaustive and Monte Carlo boundary-expansion
//! certification, and the text file format.

use crate::numeric::{ge_ln, rat_int, rat_usize};
use crate::rng::SplitMix64;
use crate::{Error, Rat, Result};
use num::bigint::BigUint;
use num::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    m: usize,
    n: usize,
    adj: Vec<Vec<usize>>,
    delta_max: usize,
}

impl BipartiteGraph {
    pub fn new(m: usize, n: usize, adj: Vec<Vec<usize>>) -> Result<Self> {
        if m == 0 || adj.len() != m {
            return Err(Error::param("adjacency list count must equal m >= 1"));
        }
        let mut delta_max = 0;
        for (i, list) in adj.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::param(format!("left vertex {} has degree 0", i + 1)));
            }
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::param(format!(
                        "adjacency of left vertex {} not strictly ascending",
                        i + 1
                    )));
                }
            }
            let &last = list.last().unwrap();
            if list[0] < 1 || last > n {
                return Err(Error::param(format!(
                    "adjacency of left vertex {} out of range 1..={}",
                    i + 1,
                    n
                )));
            }
            delta_max = delta_max.max(list.len());
        }
        Ok(BipartiteGraph { m, n, adj, delta_max })
    }

    pub fn left_count(&self) -> usize {
        self.m
    }

    pub fn right_count(&self) -> usize {
        self.n
    }

    pub fn delta_max(&self) -> usize {
        self.delta_max
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i - 1].len()
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adj[i - 1]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i - 1].binary_search(&j).is_ok()
    }

    /// Right-vertex degrees (indexed by hole, 1-based slot 0 unused).
    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n + 1];
        for list in &self.adj {
            for &j in list {
                deg[j] += 1;
            }
        }
        deg
    }

    pub fn right_neighbours(&self, j: usize) -> Vec<usize> {
        (1..=self.m).filter(|&i| self.has_edge(i, j)).collect()
    }

    /// Edges in lexicographic (pigeon, hole) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&j| (i + 1, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum()
    }

    fn check_left_set(&self, s: &[usize]) -> Result<Vec<usize>> {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        if let Some(&v) = set.iter().find(|&&v| v < 1 || v > self.m) {
            return Err(Error::param(format!("left vertex {} out of range 1..={}", v, self.m)));
        }
        Ok(set.into_iter().collect())
    }

    /// Right vertices with exactly one neighbour in `s`.
    pub fn boundary(&self, s: &[usize]) -> Result<Vec<usize>> {
        let s = self.check_left_set(s)?;
        let mut count = vec![0u32; self.n + 1];
        for &i in &s {
            for &j in self.neighbours(i) {
                count[j] += 1;
            }
        }
        Ok((1..=self.n).filter(|&j| count[j] == 1).collect())
    }

    /// Union of the adjacency lists of `s`.
    pub fn neighbourhood(&self, s: &[usize]) -> Result<Vec<usize>> {
        let s = self.check_left_set(s)?;
        let mut seen = vec![false; self.n + 1];
        for &i in &s {
            for &j in self.neighbours(i) {
                seen[j] = true;
            }
        }
        Ok((1..=self.n).filter(|&j| seen[j]).collect())
    }

    /// Masked view with the listed global vertices removed (left ids 1..=m,
    /// right ids m+1..=m+n). The original graph is untouched.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<Subgraph<'_>> {
        let mut left = vec![false; self.m + 1];
        let mut right = vec![false; self.n + 1];
        for &v in removed {
            if v >= 1 && v <= self.m {
                left[v] = true;
            } else if v > self.m && v <= self.m + self.n {
                right[v - self.m] = true;
            } else {
                return Err(Error::param(format!("vertex {} out of range", v)));
            }
        }
        Ok(Subgraph { graph: self, left_removed: left, right_removed: right })
    }

    pub fn subgraph(&self) -> Subgraph<'_> {
        Subgraph {
            graph: self,
            left_removed: vec![false; self.m + 1],
            right_removed: vec![false; self.n + 1],
        }
    }

    /// True iff a matching covers all of both sides (requires m = n).
    pub fn exists_perfect_matching(&self) -> bool {
        self.m == self.n && self.maximum_matching_size() == self.m
    }

    /// Size of a maximum matching (augmenting paths).
    pub fn maximum_matching_size(&self) -> usize {
        let mut match_right = vec![0usize; self.n + 1]; // 0 = free
        let mut size = 0;
        for i in 1..=self.m {
            let mut visited = vec![false; self.n + 1];
            if self.augment(i, &mut visited, &mut match_right) {
                size += 1;
            }
        }
        size
    }

    fn augment(&self, i: usize, visited: &mut [bool], match_right: &mut [usize]) -> bool {
        for &j in self.neighbours(i) {
            if visited[j] {
                continue;
            }
            visited[j] = true;
            if match_right[j] == 0 || self.augment(match_right[j], visited, match_right) {
                match_right[j] = i;
                return true;
            }
        }
        false
    }
}

/// Deterministic sample from the per-pigeon uniform `delta`-subset model.
/// Pigeon `i` draws from substream `i` of `seed`, so the graph is identical
/// for identical `(m, n, delta, seed)` on every platform.
pub fn sample_random(m: usize, n: usize, delta: usize, seed: u64) -> Result<BipartiteGraph> {
    if m < 1 {
        return Err(Error::param("m must be at least 1"));
    }
    if delta < 1 || delta > n {
        return Err(Error::param(format!("delta {} must lie in 1..={}", delta, n)));
    }
    let adj = (1..=m)
        .map(|i| {
            let mut rng = SplitMix64::substream(seed, i as u64);
            rng.subset(n, delta)
        })
        .collect();
    BipartiteGraph::new(m, n, adj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub r: usize,
    pub c: Rat,
    pub certified: bool,
    pub worst_set: Vec<usize>,
    pub worst_ratio: Rat,
    pub mode: CertMode,
    pub trials: Option<u64>,
}

pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

fn subset_count(m: usize, r: usize) -> u128 {
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    for s in 1..=r.min(m) {
        binom = binom * BigUint::from(m - s + 1) / BigUint::from(s);
        total += &binom;
    }
    use num::ToPrimitive;
    total.to_u128().unwrap_or(u128::MAX)
}

/// Boundary (`unique`) or plain neighbourhood expansion, shared enumerator.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    Boundary,
    Vertex,
}

/// Exhaustive scan of all nonempty left sets of size <= r over the filtered
/// adjacency `adj` (entries for `left_ids`); returns (worst ratio as
/// (boundary, size), lexicographically smallest witness).
fn worst_set_scan(
    left_ids: &[usize],
    adj: &[Vec<usize>],
    n: usize,
    r: usize,
    kind: ExpansionKind,
) -> Option<(u64, u64, Vec<usize>)> {
    struct Scan<'a> {
        left_ids: &'a [usize],
        adj: &'a [Vec<usize>],
        kind: ExpansionKind,
        count: Vec<u32>,
        measure: i64, // |boundary| or |neighbourhood| of the current set
        set: Vec<usize>,
        best: Option<(u64, u64, Vec<usize>)>,
        r: usize,
    }
    impl Scan<'_> {
        fn push(&mut self, idx: usize) {
            for &j in &self.adj[idx] {
                let c = self.count[j];
                self.count[j] = c + 1;
                match self.kind {
                    ExpansionKind::Boundary => {
                        if c == 0 {
                            self.measure += 1;
                        } else if c == 1 {
                            self.measure -= 1;
                        }
                    }
                    ExpansionKind::Vertex => {
                        if c == 0 {
                            self.measure += 1;
                        }
                    }
                }
            }
            self.set.push(self.left_ids[idx]);
        }
        fn pop(&mut self, idx: usize) {
            for &j in &self.adj[idx] {
                let c = self.count[j];
                self.count[j] = c - 1;
                match self.kind {
                    ExpansionKind::Boundary => {
                        if c == 1 {
                            self.measure -= 1;
                        } else if c == 2 {
                            self.measure += 1;
                        }
                    }
                    ExpansionKind::Vertex => {
                        if c == 1 {
                            self.measure -= 1;
                        }
                    }
                }
            }
            self.set.pop();
        }
        fn consider(&mut self) {
            let b = self.measure as u64;
            let s = self.set.len() as u64;
            let better = match &self.best {
                None => true,
                Some((bb, bs, bset)) => {
                    // compare b/s < bb/bs, ties by lexicographically smaller set
                    match (b * bs).cmp(&(bb * s)) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => self.set < *bset,
                    }
                }
            };
            if better {
                self.best = Some((b, s, self.set.clone()));
            }
        }
        fn recurse(&mut self, from: usize) {
            if self.set.len() == self.r {
                return;
            }
            for idx in from..self.adj.len() {
                self.push(idx);
                self.consider();
                self.recurse(idx + 1);
                self.pop(idx);
            }
        }
    }
    let mut scan = Scan {
        left_ids,
        adj,
        kind,
        count: vec![0; n + 1],
        measure: 0,
        set: Vec::new(),
        best: None,
        r,
    };
    scan.recurse(0);
    scan.best
}

fn ratio(b: u64, s: u64) -> Rat {
    Rat::new(b.into(), s.into())
}

/// Exhaustive certificate that every nonempty left set of size <= r has at
/// least `c * |S|` unique neighbours. Refuses when the enumeration would
/// exceed `budget` subsets.
pub fn certify_boundary_expansion(
    g: &BipartiteGraph,
    r: usize,
    c: &Rat,
    budget: u128,
) -> Result<ExpansionReport> {
    certify_expansion(g, r, c, budget, ExpansionKind::Boundary)
}

/// Same scan for plain neighbourhood expansion `|N(S)| >= c |S|`.
pub fn certify_vertex_expansion(
    g: &BipartiteGraph,
    r: usize,
    c: &Rat,
    budget: u128,
) -> Result<ExpansionReport> {
    certify_expansion(g, r, c, budget, ExpansionKind::Vertex)
}

fn certify_expansion(
    g: &BipartiteGraph,
    r: usize,
    c: &Rat,
    budget: u128,
    kind: ExpansionKind,
) -> Result<ExpansionReport> {
    if r < 1 || r > g.left_count() {
        return Err(Error::param(format!("r {} must lie in 1..=m", r)));
    }
    let required = subset_count(g.left_count(), r);
    if required > budget {
        return Err(Error::Budget { required, cap: budget });
    }
    let left_ids: Vec<usize> = (1..=g.left_count()).collect();
    let adj: Vec<Vec<usize>> = (1..=g.left_count()).map(|i| g.neighbours(i).to_vec()).collect();
    let (b, s, set) =
        worst_set_scan(&left_ids, &adj, g.right_count(), r, kind).expect("m >= 1, r >= 1");
    let worst_ratio = ratio(b, s);
    Ok(ExpansionReport {
        r,
        c: c.clone(),
        certified: worst_ratio >= *c,
        worst_set: set,
        worst_ratio,
        mode: CertMode::Exhaustive,
        trials: None,
    })
}

/// Statistical fallback: samples `trials` uniformly random nonempty sets (size
/// uniform in 1..=r, then a uniform set of that size) and reports the worst
/// ratio seen. Never certifies.
pub fn estimate_expansion_monte_carlo(
    g: &BipartiteGraph,
    r: usize,
    c: &Rat,
    trials: u64,
    seed: u64,
) -> Result<ExpansionReport> {
    if r < 1 || r > g.left_count() {
        return Err(Error::param("r must lie in 1..=m"));
    }
    if trials < 1 {
        return Err(Error::param("trials must be at least 1"));
    }
    let mut rng = SplitMix64::substream(seed, 0xEC0);
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    for _ in 0..trials {
        let size = rng.below(r as u64) as usize + 1;
        let set = rng.subset(g.left_count(), size);
        let b = g.boundary(&set)?.len() as u64;
        let s = set.len() as u64;
        let better = match &best {
            None => true,
            Some((bb, bs, bset)) => match (b * bs).cmp(&(bb * s)) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => set < *bset,
            },
        };
        if better {
            best = Some((b, s, set));
        }
    }
    let (b, s, set) = best.unwrap();
    Ok(ExpansionReport {
        r,
        c: c.clone(),
        certified: false,
        worst_set: set,
        worst_ratio: ratio(b, s),
        mode: CertMode::MonteCarlo,
        trials: Some(trials),
    })
}

/// `|N(S)| <= (delta_max |S| + |boundary(S)|) / 2` for nonempty `s`; every
/// non-unique neighbour has at least two incident edges, so this holds for
/// correct boundary and neighbourhood implementations.
pub fn check_unique_neighbour_inequality(g: &BipartiteGraph, s: &[usize]) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::param("set must be nonempty"));
    }
    let nb = g.neighbourhood(s)?.len() as u64;
    let bd = g.boundary(s)?.len() as u64;
    let distinct: BTreeSet<usize> = s.iter().copied().collect();
    Ok(2 * nb <= g.delta_max() as u64 * distinct.len() as u64 + bd)
}

#[derive(Debug, Clone)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct ExpanderExperiment {
    pub fraction: Option<Rat>,
    pub passed: u64,
    pub skipped: u64,
    pub trials: u64,
    pub r: usize,
    pub r_clamped: bool,
    pub c: Rat,
    pub hypotheses: Vec<HypothesisCheck>,
    pub note: Option<String>,
}

/// Samples `trials` graphs and exhaustively certifies each as an
/// `(r, delta, (1-2 xi) delta)`-boundary expander with `r = floor(n/(delta
/// chi))` clamped to at least 1. Hypothesis violations are reported, not
/// fatal. Budget-exceeded trials are counted as skipped.
#[allow(clippy::too_many_arguments)]
pub fn expander_probability_experiment(
    m: usize,
    n: usize,
    delta: usize,
    xi: &Rat,
    chi: &Rat,
    trials: u64,
    seed: u64,
    budget: u128,
) -> Result<ExpanderExperiment> {
    if delta < 1 || delta > n || m < 1 {
        return Err(Error::param("need 1 <= delta <= n and m >= 1"));
    }
    if !chi.is_positive() || !xi.is_positive() {
        return Err(Error::param("xi and chi must be positive"));
    }
    let hypotheses = vec![
        HypothesisCheck { name: "xi < 1/2".into(), holds: *xi < Rat::new(1.into(), 2.into()) },
        HypothesisCheck {
            name: "xi ln chi >= 2".into(),
            holds: ge_ln(xi, chi, &rat_int(2)),
        },
        HypothesisCheck {
            name: "xi delta ln chi >= 4 ln m".into(),
            holds: crate::numeric::cmp_lnsum(
                &[(xi * rat_usize(delta), chi.clone()), (rat_int(-4), rat_usize(m))],
                &Rat::zero(),
            ) != std::cmp::Ordering::Less,
        },
    ];
    // r = floor(n / (delta * chi)), clamped to 1
    let raw = (rat_usize(n) / (rat_usize(delta) * chi)).floor();
    let raw = raw.to_integer();
    use num::ToPrimitive;
    let r0 = raw.to_isize().unwrap_or(0).max(0) as usize;
    let r = r0.clamp(1, m);
    let r_clamped = r0 < 1;
    let c = (rat_int(1) - rat_int(2) * xi) * rat_usize(delta);
    if trials == 0 {
        return Ok(ExpanderExperiment {
            fraction: None,
            passed: 0,
            skipped: 0,
            trials,
            r,
            r_clamped,
            c,
            hypotheses,
            note: Some("zero trials: fraction undefined".into()),
        });
    }
    let mut passed = 0;
    let mut skipped = 0;
    for t in 0..trials {
        let g = sample_random(m, n, delta, SplitMix64::substream(seed, t).next_u64())?;
        match certify_boundary_expansion(&g, r, &c, budget) {
            Ok(rep) => {
                if rep.certified {
                    passed += 1;
                }
            }
            Err(Error::Budget { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let completed = trials - skipped;
    let fraction = if completed > 0 {
        Some(Rat::new(passed.into(), completed.into()))
    } else {
        None
    };
    Ok(ExpanderExperiment {
        fraction,
        passed,
        skipped,
        trials,
        r,
        r_clamped,
        c,
        hypotheses,
        note: if completed == 0 { Some("all trials skipped".into()) } else { None },
    })
}

/// Masked view of a graph with some vertices removed.
#[derive(Debug, Clone)]
pub struct Subgraph<'a> {
    graph: &'a BipartiteGraph,
    left_removed: Vec<bool>,
    right_removed: Vec<bool>,
}

impl Subgraph<'_> {
    pub fn base(&self) -> &BipartiteGraph {
        self.graph
    }

    pub fn left_alive(&self, i: usize) -> bool {
        !self.left_removed[i]
    }

    pub fn right_alive(&self, j: usize) -> bool {
        !self.right_removed[j]
    }

    pub fn left_ids(&self) -> Vec<usize> {
        (1..=self.graph.left_count()).filter(|&i| self.left_alive(i)).collect()
    }

    pub fn right_ids(&self) -> Vec<usize> {
        (1..=self.graph.right_count()).filter(|&j| self.right_alive(j)).collect()
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        assert!(self.left_alive(i), "left vertex {} is masked", i);
        self.graph
            .neighbours(i)
            .iter()
            .copied()
            .filter(|&j| self.right_alive(j))
            .collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbours(i).len()
    }

    pub fn boundary(&self, s: &[usize]) -> Result<Vec<usize>> {
        let mut count = vec![0u32; self.graph.right_count() + 1];
        for &i in s.iter().collect::<BTreeSet<_>>() {
            if i < 1 || i > self.graph.left_count() || !self.left_alive(i) {
                return Err(Error::param(format!("left vertex {} not in subgraph", i)));
            }
            for j in self.neighbours(i) {
                count[j] += 1;
            }
        }
        Ok((1..=self.graph.right_count())
            .filter(|&j| self.right_alive(j) && count[j] == 1)
            .collect())
    }

    pub fn neighbourhood(&self, s: &[usize]) -> Result<Vec<usize>> {
        let mut seen = vec![false; self.graph.right_count() + 1];
        for &i in s.iter().collect::<BTreeSet<_>>() {
            if i < 1 || i > self.graph.left_count() || !self.left_alive(i) {
                return Err(Error::param(format!("left vertex {} not in subgraph", i)));
            }
            for j in self.neighbours(i) {
                seen[j] = true;
            }
        }
        Ok((1..=self.graph.right_count()).filter(|&j| seen[j]).collect())
    }

    /// Worst boundary ratio over nonempty alive-left sets of size <= r.
    /// Returns `None` when the alive left side is empty.
    pub fn worst_boundary_ratio(&self, r: usize) -> Option<(Rat, Vec<usize>)> {
        let left_ids = self.left_ids();
        if left_ids.is_empty() || r == 0 {
            return None;
        }
        let adj: Vec<Vec<usize>> = left_ids.iter().map(|&i| self.neighbours(i)).collect();
        worst_set_scan(&left_ids, &adj, self.graph.right_count(), r.min(left_ids.len()), ExpansionKind::Boundary)
            .map(|(b, s, set)| (ratio(b, s), set))
    }
}

const GRAPH_FORMAT_NOTE: &str = "line 1: m n delta_max; then one ascending \
neighbour list per left vertex";

/// Canonical text format: `m n delta_max` on line 1, then one line of
/// ascending hole indices per pigeon. `#` lines are comments.
pub fn write_graph<W: Write>(g: &BipartiteGraph, mut w: W) -> Result<()> {
    writeln!(w, "{} {} {}", g.left_count(), g.right_count(), g.delta_max())?;
    for i in 1..=g.left_count() {
        let line: Vec<String> = g.neighbours(i).iter().map(|j| j.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn graph_to_string(g: &BipartiteGraph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("graph text is ASCII")
}

/// SHA-256 of the canonical graph file bytes, lowercase hex.
pub fn graph_sha256(g: &BipartiteGraph) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(graph_to_string(g).as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{:02x}", b)).collect()
}

pub fn read_graph<R: BufRead>(r: R) -> Result<BipartiteGraph> {
    let mut data_lines: Vec<(usize, String)> = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        data_lines.push((no + 1, trimmed.to_string()));
    }
    if data_lines.is_empty() {
        return Err(Error::Parse { line: 1, msg: format!("empty graph file; {}", GRAPH_FORMAT_NOTE) });
    }
    let (hline, header) = &data_lines[0];
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::Parse { line: *hline, msg: format!("expected `m n delta_max`; {}", GRAPH_FORMAT_NOTE) });
    }
    let parse = |s: &str, line: usize| -> Result<usize> {
        s.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad integer `{}`", s) })
    };
    let m = parse(head[0], *hline)?;
    let n = parse(head[1], *hline)?;
    let delta_max = parse(head[2], *hline)?;
    if data_lines.len() != m + 1 {
        return Err(Error::Parse {
            line: data_lines.last().map(|x| x.0).unwrap_or(1),
            msg: format!("expected {} adjacency lines, found {}", m, data_lines.len() - 1),
        });
    }
    let mut adj = Vec::with_capacity(m);
    for (lineno, text) in &data_lines[1..] {
        let mut list = Vec::new();
        for tok in text.split_whitespace() {
            list.push(parse(tok, *lineno)?);
        }
        adj.push(list);
    }
    let g = BipartiteGraph::new(m, n, adj).map_err(|e| Error::Parse {
        line: data_lines[1].0,
        msg: e.to_string(),
    })?;
    if g.delta_max() != delta_max {
        return Err(Error::Parse {
            line: *hline,
            msg: format!("header delta_max {} but true maximum degree is {}", delta_max, g.delta_max()),
        });
    }
    Ok(g)
}

pub fn read_graph_file(path: &std::path::Path) -> Result<BipartiteGraph> {
    let f = std::fs::File::open(path)?;
    read_graph(std::io::BufReader::new(f))
}

pub fn write_graph_file(g: &BipartiteGraph, path: &std::path::Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_graph(g, std::io::BufWriter::new(f))
}

/// `K_{m,n}`: every pigeon adjacent to every hole.
pub fn complete_graph(m: usize, n: usize) -> BipartiteGraph {
    BipartiteGraph::new(m, n, vec![(1..=n).collect(); m]).expect("complete graph is valid")
}
