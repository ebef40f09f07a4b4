//! CNF encodings of pigeonhole and perfect matching principles over a
//! bipartite graph: edge variables, clauses with provenance, partial
//! matchings and assignments, restriction, and DIMACS text I/O.

use crate::graph::{graph_sha256, BipartiteGraph};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

/// Bijection between graph edges and DIMACS variable ids: variable `id` is
/// the 1-based rank of its edge in lexicographic (pigeon, hole) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    offsets: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl VarMap {
    pub fn new(g: &BipartiteGraph) -> Self {
        let mut offsets = Vec::with_capacity(g.left_count() + 1);
        let mut pairs = Vec::with_capacity(g.edge_count());
        let mut acc = 0;
        offsets.push(0);
        for i in 1..=g.left_count() {
            acc += g.degree(i);
            offsets.push(acc);
            for &j in g.neighbours(i) {
                pairs.push((i, j));
            }
        }
        VarMap { offsets, pairs }
    }

    pub fn count(&self) -> usize {
        self.pairs.len()
    }

    /// Variable id of edge (i, j), if present.
    pub fn id(&self, g: &BipartiteGraph, i: usize, j: usize) -> Option<usize> {
        let pos = g.neighbours(i).binary_search(&j).ok()?;
        Some(self.offsets[i - 1] + pos + 1)
    }

    /// Edge (pigeon, hole) of variable `id`.
    pub fn pair(&self, id: usize) -> (usize, usize) {
        self.pairs[id - 1]
    }
}

/// Disjunction of literals over edge variables; literals are DIMACS-style
/// signed ids stored in ascending (variable, sign) order without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<i64>,
    taut: bool,
}

impl Clause {
    pub fn new(mut lits: Vec<i64>) -> Self {
        assert!(lits.iter().all(|&l| l != 0), "literal 0 is reserved");
        lits.sort_by_key(|&l| (l.unsigned_abs(), l > 0));
        lits.dedup();
        let taut = lits.windows(2).any(|w| w[0] == -w[1]);
        Clause { lits, taut }
    }

    pub fn empty() -> Self {
        Clause { lits: Vec::new(), taut: false }
    }

    pub fn lits(&self) -> &[i64] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.taut
    }

    pub fn contains(&self, lit: i64) -> bool {
        self.lits
            .binary_search_by_key(&(lit.unsigned_abs(), lit > 0), |&l| (l.unsigned_abs(), l > 0))
            .is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        let mut last = 0;
        self.lits.iter().filter_map(move |&l| {
            let v = l.unsigned_abs() as usize;
            if v == last {
                None
            } else {
                last = v;
                Some(v)
            }
        })
    }

    pub fn subset_of(&self, other: &Clause) -> bool {
        self.lits.iter().all(|&l| other.contains(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseSource {
    /// Pigeon i must fly somewhere.
    Pigeon(usize),
    /// Hole j cannot host pigeons i1 < i2 simultaneously.
    Hole { hole: usize, i1: usize, i2: usize },
    /// Pigeon i cannot fly to holes j1 < j2 simultaneously.
    Functionality { pigeon: usize, j1: usize, j2: usize },
    /// Hole j must receive a pigeon.
    Onto(usize),
    /// Every-vertex-covered axiom for global vertex v.
    Vertex(usize),
    Fake,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Php,
    Fphp,
    Pm,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Php => "php",
            Variant::Fphp => "fphp",
            Variant::Pm => "pm",
        }
    }
    pub fn parse(s: &str) -> Result<Variant> {
        match s {
            "php" => Ok(Variant::Php),
            "fphp" => Ok(Variant::Fphp),
            "pm" => Ok(Variant::Pm),
            other => Err(Error::param(format!("unknown variant `{}`", other))),
        }
    }
}

/// A CNF formula still attached to the graph that generated it.
#[derive(Debug, Clone)]
pub struct GraphCnf {
    pub graph: BipartiteGraph,
    pub vars: VarMap,
    pub clauses: Vec<Clause>,
    pub sources: Vec<ClauseSource>,
    pub variant: Variant,
    pub seed: Option<u64>,
}

impl GraphCnf {
    pub fn num_vars(&self) -> usize {
        self.vars.count()
    }
}

fn pigeon_axiom(g: &BipartiteGraph, vars: &VarMap, i: usize) -> Clause {
    Clause::new(g.neighbours(i).iter().map(|&j| vars.id(g, i, j).unwrap() as i64).collect())
}

fn onto_axiom(g: &BipartiteGraph, vars: &VarMap, j: usize) -> Clause {
    Clause::new(
        g.right_neighbours(j).iter().map(|&i| vars.id(g, i, j).unwrap() as i64).collect(),
    )
}

/// Pigeon axioms in ascending pigeon order, then hole axioms ascending by
/// (hole, pigeon, pigeon).
pub fn encode_php(g: &BipartiteGraph) -> GraphCnf {
    let vars = VarMap::new(g);
    let mut clauses = Vec::new();
    let mut sources = Vec::new();
    for i in 1..=g.left_count() {
        clauses.push(pigeon_axiom(g, &vars, i));
        sources.push(ClauseSource::Pigeon(i));
    }
    for j in 1..=g.right_count() {
        let hosts = g.right_neighbours(j);
        for a in 0..hosts.len() {
            for b in a + 1..hosts.len() {
                let (i1, i2) = (hosts[a], hosts[b]);
                clauses.push(Clause::new(vec![
                    -(vars.id(g, i1, j).unwrap() as i64),
                    -(vars.id(g, i2, j).unwrap() as i64),
                ]));
                sources.push(ClauseSource::Hole { hole: j, i1, i2 });
            }
        }
    }
    GraphCnf { graph: g.clone(), vars, clauses, sources, variant: Variant::Php, seed: None }
}

/// PHP plus one functionality axiom per pigeon and unordered hole pair,
/// ascending by (pigeon, hole, hole).
pub fn encode_fphp(g: &BipartiteGraph) -> GraphCnf {
    let mut f = encode_php(g);
    for i in 1..=g.left_count() {
        let holes = g.neighbours(i).to_vec();
        for a in 0..holes.len() {
            for b in a + 1..holes.len() {
                let (j1, j2) = (holes[a], holes[b]);
                f.clauses.push(Clause::new(vec![
                    -(f.vars.id(g, i, j1).unwrap() as i64),
                    -(f.vars.id(g, i, j2).unwrap() as i64),
                ]));
                f.sources.push(ClauseSource::Functionality { pigeon: i, j1, j2 });
            }
        }
    }
    f.variant = Variant::Fphp;
    f
}

/// Perfect matching formula: one vertex axiom per vertex of either side
/// (left ascending, then right ascending), then pairwise exclusion axioms for
/// edges sharing a vertex (left vertices first, then right).
pub fn encode_pm(g: &BipartiteGraph) -> GraphCnf {
    let vars = VarMap::new(g);
    let mut clauses = Vec::new();
    let mut sources = Vec::new();
    for i in 1..=g.left_count() {
        clauses.push(pigeon_axiom(g, &vars, i));
        sources.push(ClauseSource::Vertex(i));
    }
    for j in 1..=g.right_count() {
        clauses.push(onto_axiom(g, &vars, j));
        sources.push(ClauseSource::Vertex(g.left_count() + j));
    }
    for i in 1..=g.left_count() {
        let holes = g.neighbours(i);
        for a in 0..holes.len() {
            for b in a + 1..holes.len() {
                let (j1, j2) = (holes[a], holes[b]);
                clauses.push(Clause::new(vec![
                    -(vars.id(g, i, j1).unwrap() as i64),
                    -(vars.id(g, i, j2).unwrap() as i64),
                ]));
                sources.push(ClauseSource::Functionality { pigeon: i, j1, j2 });
            }
        }
    }
    for j in 1..=g.right_count() {
        let hosts = g.right_neighbours(j);
        for a in 0..hosts.len() {
            for b in a + 1..hosts.len() {
                let (i1, i2) = (hosts[a], hosts[b]);
                clauses.push(Clause::new(vec![
                    -(vars.id(g, i1, j).unwrap() as i64),
                    -(vars.id(g, i2, j).unwrap() as i64),
                ]));
                sources.push(ClauseSource::Hole { hole: j, i1, i2 });
            }
        }
    }
    GraphCnf { graph: g.clone(), vars, clauses, sources, variant: Variant::Pm, seed: None }
}

pub fn encode(g: &BipartiteGraph, variant: Variant) -> GraphCnf {
    match variant {
        Variant::Php => encode_php(g),
        Variant::Fphp => encode_fphp(g),
        Variant::Pm => encode_pm(g),
    }
}

/// Partial matching, viewed as a partial injective map pigeon -> hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    fwd: BTreeMap<usize, usize>,
    bwd: BTreeMap<usize, usize>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { fwd: BTreeMap::new(), bwd: BTreeMap::new() }
    }

    pub fn new(g: &BipartiteGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty();
        for &(i, j) in pairs {
            m.insert(g, i, j)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, g: &BipartiteGraph, i: usize, j: usize) -> Result<()> {
        if !g.has_edge(i, j) {
            return Err(Error::param(format!("({}, {}) is not an edge", i, j)));
        }
        if self.fwd.contains_key(&i) || self.bwd.contains_key(&j) {
            return Err(Error::param(format!("({}, {}) collides with the matching", i, j)));
        }
        self.fwd.insert(i, j);
        self.bwd.insert(j, i);
        Ok(())
    }

    /// Removes the edge at hole `j`, if any.
    pub fn remove_hole(&mut self, j: usize) -> Option<(usize, usize)> {
        let i = self.bwd.remove(&j)?;
        self.fwd.remove(&i);
        Some((i, j))
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn hole_of(&self, i: usize) -> Option<usize> {
        self.fwd.get(&i).copied()
    }

    pub fn pigeon_of(&self, j: usize) -> Option<usize> {
        self.bwd.get(&j).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.fwd.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.fwd.iter().map(|(&i, &j)| (i, j))
    }

    pub fn domain_set(&self) -> BTreeSet<usize> {
        self.fwd.keys().copied().collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    vals: BTreeMap<usize, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.vals.insert(var, value);
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.vals.get(&var).copied()
    }

    pub fn lit_value(&self, lit: i64) -> Option<bool> {
        self.get(lit.unsigned_abs() as usize).map(|v| if lit > 0 { v } else { !v })
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.vals.iter().map(|(&k, &v)| (k, v))
    }
}

/// Assignment induced by a matching: a matched pigeon sets its chosen edge
/// true and its other edges false; unmatched pigeons leave everything
/// undefined.
pub fn matching_to_assignment(g: &BipartiteGraph, vars: &VarMap, phi: &Matching) -> PartialAssignment {
    let mut rho = PartialAssignment::new();
    for (i, j) in phi.pairs() {
        for &j2 in g.neighbours(i) {
            rho.set(vars.id(g, i, j2).unwrap(), j2 == j);
        }
    }
    rho
}

/// Matching semantics on both endpoints: additionally zeroes every edge at a
/// matched hole.
pub fn matching_to_assignment_pm(
    g: &BipartiteGraph,
    vars: &VarMap,
    phi: &Matching,
) -> PartialAssignment {
    let mut rho = matching_to_assignment(g, vars, phi);
    for (i, j) in phi.pairs() {
        for &i2 in &g.right_neighbours(j) {
            rho.set(vars.id(g, i2, j).unwrap(), i2 == i);
        }
    }
    rho
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Falsified,
    Undetermined,
}

pub fn clause_status(c: &Clause, rho: &PartialAssignment) -> ClauseStatus {
    let mut all_false = true;
    for &l in c.lits() {
        match rho.lit_value(l) {
            Some(true) => return ClauseStatus::Satisfied,
            Some(false) => {}
            None => all_false = false,
        }
    }
    if all_false {
        ClauseStatus::Falsified
    } else {
        ClauseStatus::Undetermined
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restricted {
    Satisfied,
    Clause(Clause),
}

/// Drops falsified literals; a clause with a satisfied literal becomes the
/// trivial marker.
pub fn restrict_clause(c: &Clause, rho: &PartialAssignment) -> Restricted {
    let mut kept = Vec::with_capacity(c.len());
    for &l in c.lits() {
        match rho.lit_value(l) {
            Some(true) => return Restricted::Satisfied,
            Some(false) => {}
            None => kept.push(l),
        }
    }
    Restricted::Clause(Clause::new(kept))
}

/// Restricts every clause, dropping satisfied ones.
pub fn restrict_clauses(clauses: &[Clause], rho: &PartialAssignment) -> Vec<Clause> {
    clauses
        .iter()
        .filter_map(|c| match restrict_clause(c, rho) {
            Restricted::Satisfied => None,
            Restricted::Clause(c) => Some(c),
        })
        .collect()
}

/// A DIMACS-level formula: comment lines kept verbatim for byte-stable
/// round-trips, then the clause list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub comments: Vec<String>,
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl GraphCnf {
    pub fn to_dimacs(&self) -> Dimacs {
        let mut comments = vec![
            format!("c graph-sha256 {}", graph_sha256(&self.graph)),
            format!("c variant {}", self.variant.as_str()),
        ];
        if let Some(seed) = self.seed {
            comments.push(format!("c seed {}", seed));
        }
        Dimacs { comments, num_vars: self.num_vars(), clauses: self.clauses.clone() }
    }
}

pub fn write_dimacs<W: Write>(f: &Dimacs, mut w: W) -> Result<()> {
    for c in &f.comments {
        writeln!(w, "{}", c)?;
    }
    writeln!(w, "p cnf {} {}", f.num_vars, f.clauses.len())?;
    for c in &f.clauses {
        let mut line = String::new();
        for &l in c.lits() {
            line.push_str(&l.to_string());
            line.push(' ');
        }
        line.push('0');
        writeln!(w, "{}", line)?;
    }
    Ok(())
}

pub fn dimacs_to_string(f: &Dimacs) -> String {
    let mut buf = Vec::new();
    write_dimacs(f, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("dimacs text is ASCII")
}

pub fn read_dimacs<R: BufRead>(r: R) -> Result<Dimacs> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (no, line) in r.lines().enumerate() {
        let lineno = no + 1;
        let line = line?;
        let text = line.trim_end();
        if text.starts_with('c') {
            comments.push(text.to_string());
            continue;
        }
        if text.trim().is_empty() {
            continue;
        }
        if text.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate header".into() });
            }
            let toks: Vec<&str> = text.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let nv = toks[2].parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad var count `{}`", toks[2]),
            })?;
            let nc = toks[3].parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad clause count `{}`", toks[3]),
            })?;
            header = Some((nv, nc));
            continue;
        }
        let (nv, _) =
            header.ok_or_else(|| Error::Parse { line: lineno, msg: "clause before header".into() })?;
        let mut lits = Vec::new();
        let mut terminated = false;
        for tok in text.split_whitespace() {
            if terminated {
                return Err(Error::Parse { line: lineno, msg: "tokens after terminating 0".into() });
            }
            let l = tok.parse::<i64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad literal `{}`", tok),
            })?;
            if l == 0 {
                terminated = true;
            } else {
                if l.unsigned_abs() as usize > nv {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("literal {} out of range", l),
                    });
                }
                lits.push(l);
            }
        }
        if !terminated {
            return Err(Error::Parse { line: lineno, msg: "clause missing terminating 0".into() });
        }
        clauses.push(Clause::new(lits));
    }
    let (nv, nc) = header.ok_or_else(|| Error::Parse { line: 1, msg: "missing header".into() })?;
    if clauses.len() != nc {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {} clauses, found {}", nc, clauses.len()),
        });
    }
    Ok(Dimacs { comments, num_vars: nv, clauses })
}

pub fn read_dimacs_file(path: &std::path::Path) -> Result<Dimacs> {
    let f = std::fs::File::open(path)?;
    read_dimacs(std::io::BufReader::new(f))
}

pub fn write_dimacs_file(f: &Dimacs, path: &std::path::Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_dimacs(f, std::io::BufWriter::new(file))
}
