//! Resolution proofs: the resolution and weakening rules, a proof checker,
//! a DPLL prover that extracts tree-like refutations from its search tree,
//! an ordered-elimination prover, weakening removal, and the trace text
//! format (`<id> <lit>* 0 <antecedent>* 0` per line).

use crate::formula::{Clause, PartialAssignment};
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Axiom,
    Resolve { a: usize, b: usize, pivot: usize },
    Weaken { parent: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub id: usize,
    pub clause: Clause,
    pub rule: Rule,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolutionProof {
    pub lines: Vec<ProofLine>,
}

impl ResolutionProof {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn is_refutation(&self) -> bool {
        self.lines.last().map(|l| l.clause.is_empty()).unwrap_or(false)
    }

    pub fn line(&self, id: usize) -> Option<&ProofLine> {
        self.lines
            .binary_search_by_key(&id, |l| l.id)
            .ok()
            .map(|idx| &self.lines[idx])
    }

    /// Ids of the axiom lines reachable from `id` through rule parents.
    pub fn axiom_cone(&self, id: usize) -> Vec<usize> {
        let mut stack = vec![id];
        let mut seen = HashSet::new();
        let mut axioms = Vec::new();
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur) {
                continue;
            }
            match self.line(cur).map(|l| &l.rule) {
                Some(Rule::Axiom) => axioms.push(cur),
                Some(Rule::Resolve { a, b, .. }) => {
                    stack.push(*a);
                    stack.push(*b);
                }
                Some(Rule::Weaken { parent }) => stack.push(*parent),
                None => {}
            }
        }
        axioms.sort_unstable();
        axioms
    }
}

/// Resolvent of `b` (which must contain the positive pivot) and `c` (which
/// must contain the negative pivot); may be tautological.
pub fn resolve(b: &Clause, c: &Clause, pivot: usize) -> Result<Clause> {
    let pos = pivot as i64;
    if !b.contains(pos) {
        return Err(Error::rule(format!("pivot {} not positive in first parent", pivot)));
    }
    if !c.contains(-pos) {
        return Err(Error::rule(format!("pivot {} not negative in second parent", pivot)));
    }
    let lits: Vec<i64> = b
        .lits()
        .iter()
        .chain(c.lits())
        .copied()
        .filter(|&l| l != pos && l != -pos)
        .collect();
    Ok(Clause::new(lits))
}

/// Weakening: any superclause of `c`.
pub fn weaken(c: &Clause, d: &Clause) -> Result<Clause> {
    if !c.subset_of(d) {
        return Err(Error::rule("weakening target is not a superclause"));
    }
    Ok(d.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected { line_id: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Validates every line's rule, axiom membership in `formula` or `extra`,
/// ascending ids, and (optionally) that the final clause is empty.
pub fn check_proof(
    formula: &[Clause],
    extra: &[Clause],
    proof: &ResolutionProof,
    require_refutation: bool,
) -> Verdict {
    let axiom_set: HashSet<&Clause> = formula.iter().chain(extra).collect();
    let mut derived: BTreeMap<usize, &Clause> = BTreeMap::new();
    let mut prev_id = 0;
    for line in &proof.lines {
        if line.id <= prev_id {
            return Verdict::Rejected {
                line_id: line.id,
                reason: format!("id {} not strictly increasing", line.id),
            };
        }
        prev_id = line.id;
        let reject = |reason: String| Verdict::Rejected { line_id: line.id, reason };
        match &line.rule {
            Rule::Axiom => {
                if !axiom_set.contains(&line.clause) {
                    return reject("axiom not in formula or extra set".into());
                }
            }
            Rule::Resolve { a, b, pivot } => {
                let (pa, pb) = match (derived.get(a), derived.get(b)) {
                    (Some(pa), Some(pb)) => (*pa, *pb),
                    _ => return reject(format!("parents {} {} not earlier lines", a, b)),
                };
                match resolve(pa, pb, *pivot) {
                    Ok(r) => {
                        if r != line.clause {
                            return reject("clause is not the resolvent of its parents".into());
                        }
                    }
                    Err(e) => return reject(e.to_string()),
                }
            }
            Rule::Weaken { parent } => {
                let p = match derived.get(parent) {
                    Some(p) => *p,
                    None => return reject(format!("parent {} not an earlier line", parent)),
                };
                if !p.subset_of(&line.clause) {
                    return reject("weakening source is not a subclause".into());
                }
            }
        }
        derived.insert(line.id, &line.clause);
    }
    if require_refutation && !proof.is_refutation() {
        let line_id = proof.lines.last().map(|l| l.id).unwrap_or(0);
        return Verdict::Rejected { line_id, reason: "final clause is not empty".into() };
    }
    Verdict::Accepted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    FixedOrder,
    MaxOccurrence,
}

impl Branching {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fixed-order" => Ok(Branching::FixedOrder),
            "max-occurrence" => Ok(Branching::MaxOccurrence),
            other => Err(Error::param(format!("unknown branching `{}`", other))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ProverOutcome {
    Sat(PartialAssignment),
    Unsat(ResolutionProof),
}

struct ProofBuilder {
    lines: Vec<ProofLine>,
    cache: HashMap<Vec<i64>, usize>,
}

impl ProofBuilder {
    fn new() -> Self {
        ProofBuilder { lines: Vec::new(), cache: HashMap::new() }
    }

    fn axiom(&mut self, c: &Clause) -> usize {
        if let Some(&id) = self.cache.get(c.lits()) {
            return id;
        }
        let id = self.lines.len() + 1;
        self.lines.push(ProofLine { id, clause: c.clone(), rule: Rule::Axiom });
        self.cache.insert(c.lits().to_vec(), id);
        id
    }

    fn resolve_step(&mut self, a: usize, b: usize, pivot: usize, clause: Clause) -> usize {
        if let Some(&id) = self.cache.get(clause.lits()) {
            return id;
        }
        let id = self.lines.len() + 1;
        self.cache.insert(clause.lits().to_vec(), id);
        self.lines.push(ProofLine { id, clause, rule: Rule::Resolve { a, b, pivot } });
        id
    }
}

struct Dpll<'a> {
    clauses: &'a [Clause],
    branching: Branching,
    assignment: Vec<Option<bool>>, // 1-based
    trail: Vec<(usize, Option<usize>)>, // (var, reason clause index); None = decision
    builder: ProofBuilder,
    nodes: u64,
    budget: u64,
}

enum SearchResult {
    Sat,
    /// Derived line id; its clause is falsified by the decisions on the trail.
    Conflict(usize),
}

impl Dpll<'_> {
    fn lit_value(&self, lit: i64) -> Option<bool> {
        self.assignment[lit.unsigned_abs() as usize].map(|v| if lit > 0 { v } else { !v })
    }

    fn assign(&mut self, var: usize, value: bool, reason: Option<usize>) {
        self.assignment[var] = Some(value);
        self.trail.push((var, reason));
    }

    fn pop_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, _) = self.trail.pop().unwrap();
            self.assignment[var] = None;
        }
    }

    /// Unit propagation; on conflict returns the index of a falsified clause.
    fn propagate(&mut self) -> Option<usize> {
        loop {
            let mut changed = false;
            for (idx, clause) in self.clauses.iter().enumerate() {
                let mut unassigned = None;
                let mut satisfied = false;
                let mut count = 0;
                for &l in clause.lits() {
                    match self.lit_value(l) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            count += 1;
                            if count == 1 {
                                unassigned = Some(l);
                            } else {
                                break;
                            }
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (count, unassigned) {
                    (0, _) => return Some(idx),
                    (1, Some(l)) => {
                        self.assign(l.unsigned_abs() as usize, l > 0, Some(idx));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return None;
            }
        }
    }

    /// Resolves the falsified clause against the reasons of propagated
    /// literals, newest first, leaving only negations of decision literals.
    fn conflict_clause(&mut self, conflict_idx: usize) -> usize {
        let mut cur = self.clauses[conflict_idx].clone();
        let mut cur_id = self.builder.axiom(&self.clauses[conflict_idx]);
        for t in (0..self.trail.len()).rev() {
            let (var, reason) = self.trail[t];
            let reason_idx = match reason {
                Some(r) => r,
                None => continue,
            };
            let value = self.assignment[var].expect("trail var is assigned");
            // literal made true by the propagation
            let lit = if value { var as i64 } else { -(var as i64) };
            if !cur.contains(-lit) {
                continue;
            }
            let reason_clause = self.clauses[reason_idx].clone();
            let reason_id = self.builder.axiom(&reason_clause);
            let (pa, pb, pa_id, pb_id) = if lit > 0 {
                (&reason_clause, &cur, reason_id, cur_id)
            } else {
                (&cur, &reason_clause, cur_id, reason_id)
            };
            let resolvent = resolve(pa, pb, var).expect("reason contains the propagated literal");
            cur_id = self.builder.resolve_step(pa_id, pb_id, var, resolvent.clone());
            cur = resolvent;
        }
        cur_id
    }

    fn all_satisfied(&self) -> bool {
        self.clauses.iter().all(|c| c.lits().iter().any(|&l| self.lit_value(l) == Some(true)))
    }

    fn pick_branch_var(&self) -> usize {
        match self.branching {
            Branching::FixedOrder => {
                for v in 1..self.assignment.len() {
                    if self.assignment[v].is_none() {
                        return v;
                    }
                }
                unreachable!("no unassigned variable")
            }
            Branching::MaxOccurrence => {
                let mut counts = vec![0u32; self.assignment.len()];
                for clause in self.clauses {
                    if clause.lits().iter().any(|&l| self.lit_value(l) == Some(true)) {
                        continue;
                    }
                    for &l in clause.lits() {
                        let v = l.unsigned_abs() as usize;
                        if self.assignment[v].is_none() {
                            counts[v] += 1;
                        }
                    }
                }
                let mut best = 0;
                for v in 1..counts.len() {
                    if counts[v] > counts[best] {
                        best = v;
                    }
                }
                debug_assert!(best > 0);
                best
            }
        }
    }

    fn search(&mut self) -> Result<SearchResult> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { required: self.nodes as u128, cap: self.budget as u128 });
        }
        let mark = self.trail.len();
        if let Some(conflict) = self.propagate() {
            let line = self.conflict_clause(conflict);
            self.pop_to(mark);
            return Ok(SearchResult::Conflict(line));
        }
        if self.all_satisfied() {
            return Ok(SearchResult::Sat);
        }
        let var = self.pick_branch_var();
        // false branch: falsifies the positive literal
        self.assign(var, false, None);
        let r0 = self.search()?;
        let c0 = match r0 {
            SearchResult::Sat => return Ok(SearchResult::Sat),
            SearchResult::Conflict(line) => line,
        };
        self.pop_to(mark);
        let c0_clause = self.builder.lines[c0 - 1].clause.clone();
        if !c0_clause.contains(var as i64) {
            return Ok(SearchResult::Conflict(c0));
        }
        self.assign(var, true, None);
        let r1 = self.search()?;
        let c1 = match r1 {
            SearchResult::Sat => return Ok(SearchResult::Sat),
            SearchResult::Conflict(line) => line,
        };
        self.pop_to(mark);
        let c1_clause = self.builder.lines[c1 - 1].clause.clone();
        if !c1_clause.contains(-(var as i64)) {
            return Ok(SearchResult::Conflict(c1));
        }
        let resolvent = resolve(&c0_clause, &c1_clause, var).expect("checked polarities");
        let id = self.builder.resolve_step(c0, c1, var, resolvent);
        Ok(SearchResult::Conflict(id))
    }
}

/// DPLL with unit propagation. On unsatisfiable input extracts a tree-like
/// refutation from the search tree; on satisfiable input returns a total
/// assignment (branch choices completed with `false`). The `_seed` parameter
/// is kept for interface stability; both branching policies are
/// deterministic.
pub fn prove_dpll(
    num_vars: usize,
    clauses: &[Clause],
    branching: Branching,
    _seed: u64,
    node_budget: u64,
) -> Result<ProverOutcome> {
    if let Some(c) = clauses.iter().find(|c| c.is_empty()) {
        let mut builder = ProofBuilder::new();
        builder.axiom(c);
        return Ok(ProverOutcome::Unsat(ResolutionProof { lines: builder.lines }));
    }
    let mut dpll = Dpll {
        clauses,
        branching,
        assignment: vec![None; num_vars + 1],
        trail: Vec::new(),
        builder: ProofBuilder::new(),
        nodes: 0,
        budget: node_budget,
    };
    match dpll.search()? {
        SearchResult::Sat => {
            let mut rho = PartialAssignment::new();
            for v in 1..=num_vars {
                rho.set(v, dpll.assignment[v].unwrap_or(false));
            }
            Ok(ProverOutcome::Sat(rho))
        }
        SearchResult::Conflict(root) => {
            let root_clause = &dpll.builder.lines[root - 1].clause;
            debug_assert!(root_clause.is_empty(), "root conflict clause must be empty");
            Ok(prune_to_cone(ResolutionProof { lines: dpll.builder.lines }, root))
        }
    }
}

/// Drops lines outside the derivation cone of `root` and renumbers.
fn prune_to_cone(proof: ResolutionProof, root: usize) -> ProverOutcome {
    let mut needed = HashSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if !needed.insert(id) {
            continue;
        }
        match &proof.lines[id - 1].rule {
            Rule::Axiom => {}
            Rule::Resolve { a, b, .. } => {
                stack.push(*a);
                stack.push(*b);
            }
            Rule::Weaken { parent } => stack.push(*parent),
        }
    }
    let mut remap = HashMap::new();
    let mut lines = Vec::new();
    for line in proof.lines.into_iter().filter(|l| needed.contains(&l.id)) {
        let new_id = lines.len() + 1;
        remap.insert(line.id, new_id);
        let rule = match line.rule {
            Rule::Axiom => Rule::Axiom,
            Rule::Resolve { a, b, pivot } => Rule::Resolve { a: remap[&a], b: remap[&b], pivot },
            Rule::Weaken { parent } => Rule::Weaken { parent: remap[&parent] },
        };
        lines.push(ProofLine { id: new_id, clause: line.clause, rule });
    }
    ProverOutcome::Unsat(ResolutionProof { lines })
}

#[derive(Debug, Clone)]
pub enum DpOutcome {
    Sat,
    Unsat(ResolutionProof),
}

/// Ordered variable elimination: resolves every clash on each variable in
/// order, recording all resolvents (generally not tree-like).
pub fn prove_dp(
    num_vars: usize,
    clauses: &[Clause],
    order: Option<&[usize]>,
    clause_budget: u64,
) -> Result<DpOutcome> {
    let default_order: Vec<usize>;
    let order = match order {
        Some(o) => o,
        None => {
            default_order = (1..=num_vars).collect();
            &default_order
        }
    };
    let mut builder = ProofBuilder::new();
    let mut active: Vec<(usize, Clause)> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for c in clauses {
        if c.is_tautology() {
            continue;
        }
        let id = builder.axiom(c);
        if seen.insert(c.lits().to_vec()) {
            if c.is_empty() {
                return Ok(DpOutcome::Unsat(ResolutionProof { lines: builder.lines }));
            }
            active.push((id, c.clone()));
        }
    }
    for &var in order {
        let lit = var as i64;
        let (pos, rest): (Vec<_>, Vec<_>) = active.into_iter().partition(|(_, c)| c.contains(lit));
        let (neg, rest): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(_, c)| c.contains(-lit));
        active = rest;
        for (aid, ac) in &pos {
            for (bid, bc) in &neg {
                let r = resolve(ac, bc, var).expect("partitioned by polarity");
                if r.is_tautology() || seen.contains(r.lits()) {
                    continue;
                }
                if builder.lines.len() as u64 >= clause_budget {
                    return Err(Error::Budget {
                        required: builder.lines.len() as u128 + 1,
                        cap: clause_budget as u128,
                    });
                }
                let id = builder.resolve_step(*aid, *bid, var, r.clone());
                seen.insert(r.lits().to_vec());
                if r.is_empty() {
                    return Ok(DpOutcome::Unsat(ResolutionProof { lines: builder.lines }));
                }
                active.push((id, r));
            }
        }
        if active.is_empty() {
            return Ok(DpOutcome::Sat);
        }
    }
    Ok(DpOutcome::Sat)
}

/// Replaces weakened clauses by their strong ancestors; the output is
/// weakening-free, no longer than the input, and checker-valid against the
/// same axioms. Every output clause is a subclause of the line it replaces.
pub fn strip_weakenings(proof: &ResolutionProof) -> ResolutionProof {
    // old id -> (replacement clause, new id)
    let mut repl: HashMap<usize, (Clause, usize)> = HashMap::new();
    let mut lines: Vec<ProofLine> = Vec::new();
    for line in &proof.lines {
        let entry = match &line.rule {
            Rule::Axiom => {
                let new_id = lines.len() + 1;
                lines.push(ProofLine { id: new_id, clause: line.clause.clone(), rule: Rule::Axiom });
                (line.clause.clone(), new_id)
            }
            Rule::Weaken { parent } => repl[parent].clone(),
            Rule::Resolve { a, b, pivot } => {
                let (ca, ida) = repl[a].clone();
                let (cb, idb) = repl[b].clone();
                let pos = *pivot as i64;
                if !ca.contains(pos) {
                    (ca, ida)
                } else if !cb.contains(-pos) {
                    (cb, idb)
                } else {
                    let r = resolve(&ca, &cb, *pivot).expect("polarities checked");
                    let new_id = lines.len() + 1;
                    lines.push(ProofLine {
                        id: new_id,
                        clause: r.clone(),
                        rule: Rule::Resolve { a: ida, b: idb, pivot: *pivot },
                    });
                    (r, new_id)
                }
            }
        };
        repl.insert(line.id, entry);
    }
    ResolutionProof { lines }
}

/// One line per derived clause: `<id> <lit>* 0 <antecedent>* 0`.
pub fn write_trace<W: Write>(proof: &ResolutionProof, mut w: W) -> Result<()> {
    for line in &proof.lines {
        let mut text = line.id.to_string();
        for &l in line.clause.lits() {
            text.push(' ');
            text.push_str(&l.to_string());
        }
        text.push_str(" 0");
        match &line.rule {
            Rule::Axiom => {}
            Rule::Resolve { a, b, .. } => {
                text.push_str(&format!(" {} {}", a, b));
            }
            Rule::Weaken { parent } => {
                text.push_str(&format!(" {}", parent));
            }
        }
        text.push_str(" 0");
        writeln!(w, "{}", text)?;
    }
    Ok(())
}

pub fn trace_to_string(proof: &ResolutionProof) -> String {
    let mut buf = Vec::new();
    write_trace(proof, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("trace text is ASCII")
}

/// Reads a trace, recovering rules from the antecedent counts: none = axiom,
/// one = weakening, two = resolution with the pivot re-derived (the unique
/// variable whose polarities clash and whose resolvent equals the clause).
pub fn read_trace<R: BufRead>(r: R) -> Result<ResolutionProof> {
    let mut lines = Vec::new();
    let mut by_id: BTreeMap<usize, Clause> = BTreeMap::new();
    for (no, raw) in r.lines().enumerate() {
        let lineno = no + 1;
        let raw = raw?;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('c') || text.starts_with('#') {
            continue;
        }
        let toks: std::result::Result<Vec<i64>, _> =
            text.split_whitespace().map(|t| t.parse::<i64>()).collect();
        let toks =
            toks.map_err(|_| Error::Parse { line: lineno, msg: "bad integer token".into() })?;
        if toks.len() < 3 {
            return Err(Error::Parse { line: lineno, msg: "too few tokens".into() });
        }
        let id = toks[0];
        if id <= 0 {
            return Err(Error::Parse { line: lineno, msg: "ids must be positive".into() });
        }
        let id = id as usize;
        let mut rest = &toks[1..];
        let zero1 = rest.iter().position(|&t| t == 0).ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing literal terminator".into(),
        })?;
        let lits = rest[..zero1].to_vec();
        rest = &rest[zero1 + 1..];
        let zero2 = rest.iter().position(|&t| t == 0).ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "missing antecedent terminator".into(),
        })?;
        if zero2 != rest.len() - 1 {
            return Err(Error::Parse { line: lineno, msg: "tokens after final terminator".into() });
        }
        let ants = &rest[..zero2];
        let clause = Clause::new(lits);
        let rule = match ants.len() {
            0 => Rule::Axiom,
            1 => {
                let parent = ants[0] as usize;
                if !by_id.contains_key(&parent) {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("antecedent {} not defined yet", parent),
                    });
                }
                Rule::Weaken { parent }
            }
            2 => {
                let a = ants[0] as usize;
                let b = ants[1] as usize;
                let (ca, cb) = match (by_id.get(&a), by_id.get(&b)) {
                    (Some(ca), Some(cb)) => (ca, cb),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "antecedent not defined yet".into(),
                        })
                    }
                };
                let mut found = None;
                for v in ca.vars() {
                    let (pa, pb, swapped) = if ca.contains(v as i64) && cb.contains(-(v as i64)) {
                        (ca, cb, false)
                    } else if cb.contains(v as i64) && ca.contains(-(v as i64)) {
                        (cb, ca, true)
                    } else {
                        continue;
                    };
                    if let Ok(r) = resolve(pa, pb, v) {
                        if r == clause {
                            found = Some(if swapped {
                                Rule::Resolve { a: b, b: a, pivot: v }
                            } else {
                                Rule::Resolve { a, b, pivot: v }
                            });
                            break;
                        }
                    }
                }
                found.ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "no pivot derives this resolvent".into(),
                })?
            }
            n => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("{} antecedents unsupported", n),
                })
            }
        };
        by_id.insert(id, clause.clone());
        lines.push(ProofLine { id, clause, rule });
    }
    let proof = ResolutionProof { lines };
    for w in proof.lines.windows(2) {
        if w[0].id >= w[1].id {
            return Err(Error::Parse { line: 1, msg: "ids must be ascending".into() });
        }
    }
    Ok(proof)
}

pub fn read_trace_file(path: &std::path::Path) -> Result<ResolutionProof> {
    let f = std::fs::File::open(path)?;
    read_trace(std::io::BufReader::new(f))
}

pub fn write_trace_file(proof: &ResolutionProof, path: &std::path::Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_trace(proof, std::io::BufWriter::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{clause_status, encode_fphp, encode_php, encode_pm, ClauseStatus};
    use crate::graph::complete_graph;

    fn c(lits: &[i64]) -> Clause {
        Clause::new(lits.to_vec())
    }

    #[test]
    fn resolve_rule() {
        assert_eq!(resolve(&c(&[1, 2]), &c(&[-1, 3]), 1).unwrap(), c(&[2, 3]));
        assert_eq!(resolve(&c(&[1]), &c(&[-1]), 1).unwrap(), Clause::empty());
        let t = resolve(&c(&[1, 2]), &c(&[-1, -2]), 1).unwrap();
        assert!(t.is_tautology());
        assert!(resolve(&c(&[2]), &c(&[-1]), 1).is_err());
        assert!(resolve(&c(&[-1]), &c(&[1]), 1).is_err());
    }

    #[test]
    fn weaken_rule() {
        assert_eq!(weaken(&c(&[1]), &c(&[1, 2])).unwrap(), c(&[1, 2]));
        assert_eq!(weaken(&c(&[1, 2]), &c(&[1, 2])).unwrap(), c(&[1, 2]));
        assert!(weaken(&c(&[1, 2]), &c(&[1])).is_err());
    }

    fn php21_proof() -> (Vec<Clause>, ResolutionProof) {
        let axioms = vec![c(&[1]), c(&[2]), c(&[-1, -2])];
        let proof = ResolutionProof {
            lines: vec![
                ProofLine { id: 1, clause: c(&[1]), rule: Rule::Axiom },
                ProofLine { id: 2, clause: c(&[2]), rule: Rule::Axiom },
                ProofLine { id: 3, clause: c(&[-1, -2]), rule: Rule::Axiom },
                ProofLine { id: 4, clause: c(&[-2]), rule: Rule::Resolve { a: 1, b: 3, pivot: 1 } },
                ProofLine {
                    id: 5,
                    clause: Clause::empty(),
                    rule: Rule::Resolve { a: 2, b: 4, pivot: 2 },
                },
            ],
        };
        (axioms, proof)
    }

    #[test]
    fn checker_accepts_php21() {
        let (axioms, proof) = php21_proof();
        assert!(check_proof(&axioms, &[], &proof, true).is_accepted());
    }

    #[test]
    fn checker_rejects_bad_pivot() {
        let (axioms, mut proof) = php21_proof();
        proof.lines[3].rule = Rule::Resolve { a: 1, b: 3, pivot: 2 };
        match check_proof(&axioms, &[], &proof, true) {
            Verdict::Rejected { line_id, .. } => assert_eq!(line_id, 4),
            Verdict::Accepted => panic!("should reject"),
        }
    }

    #[test]
    fn dpll_php21() {
        let f = encode_php(&complete_graph(2, 1));
        match prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 1 << 20).unwrap() {
            ProverOutcome::Unsat(proof) => {
                assert!(proof.len() <= 5);
                assert!(check_proof(&f.clauses, &[], &proof, true).is_accepted());
            }
            ProverOutcome::Sat(_) => panic!("must be unsat"),
        }
    }

    #[test]
    fn dpll_pm_k22_sat() {
        let f = encode_pm(&complete_graph(2, 2));
        match prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 1 << 20).unwrap() {
            ProverOutcome::Sat(rho) => {
                for clause in &f.clauses {
                    assert_eq!(clause_status(clause, &rho), ClauseStatus::Satisfied);
                }
            }
            ProverOutcome::Unsat(_) => panic!("must be sat"),
        }
    }

    #[test]
    fn dpll_sweep_small_php() {
        for m in 2..=6 {
            for n in 1..m {
                for variant in [encode_php, encode_fphp] {
                    let f = variant(&complete_graph(m, n));
                    match prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 1 << 24)
                        .unwrap()
                    {
                        ProverOutcome::Unsat(proof) => {
                            assert!(check_proof(&f.clauses, &[], &proof, true).is_accepted());
                        }
                        ProverOutcome::Sat(_) => panic!("php with m > n must be unsat"),
                    }
                }
            }
        }
    }

    #[test]
    fn dpll_budget_error() {
        let f = encode_php(&complete_graph(7, 6));
        assert!(matches!(
            prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 3),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn dp_agrees_with_dpll() {
        for (m, n) in [(2, 1), (3, 2), (4, 3)] {
            let f = encode_php(&complete_graph(m, n));
            match prove_dp(f.num_vars(), &f.clauses, None, 1 << 20).unwrap() {
                DpOutcome::Unsat(proof) => {
                    assert!(check_proof(&f.clauses, &[], &proof, true).is_accepted());
                }
                DpOutcome::Sat => panic!("must be unsat"),
            }
        }
        // the two provers and the matching oracle agree on matching formulas
        for seed in 0..5u64 {
            let g = crate::graph::sample_random(4, 4, 1 + (seed % 3) as usize, seed).unwrap();
            let f = encode_pm(&g);
            let dpll_sat = matches!(
                prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 1 << 22)
                    .unwrap(),
                ProverOutcome::Sat(_)
            );
            let dp_sat =
                matches!(prove_dp(f.num_vars(), &f.clauses, None, 1 << 20).unwrap(), DpOutcome::Sat);
            assert_eq!(dpll_sat, dp_sat);
            assert_eq!(dpll_sat, g.exists_perfect_matching());
        }
    }

    #[test]
    fn strip_weakenings_examples() {
        let (axioms, proof) = php21_proof();
        // identity on weakening-free proofs
        let stripped = strip_weakenings(&proof);
        assert_eq!(stripped.len(), proof.len());
        assert!(check_proof(&axioms, &[], &stripped, true).is_accepted());

        let weakened = ResolutionProof {
            lines: vec![
                ProofLine { id: 1, clause: c(&[1]), rule: Rule::Axiom },
                ProofLine { id: 2, clause: c(&[2]), rule: Rule::Axiom },
                ProofLine { id: 3, clause: c(&[-1, -2]), rule: Rule::Axiom },
                ProofLine { id: 4, clause: c(&[1, 5]), rule: Rule::Weaken { parent: 1 } },
                ProofLine {
                    id: 5,
                    clause: c(&[-2, 5]),
                    rule: Rule::Resolve { a: 4, b: 3, pivot: 1 },
                },
                ProofLine { id: 6, clause: c(&[5]), rule: Rule::Resolve { a: 2, b: 5, pivot: 2 } },
            ],
        };
        assert!(check_proof(&axioms, &[], &weakened, false).is_accepted());
        let stripped = strip_weakenings(&weakened);
        assert!(stripped.len() <= weakened.len());
        assert!(stripped.lines.iter().all(|l| !matches!(l.rule, Rule::Weaken { .. })));
        assert!(check_proof(&axioms, &[], &stripped, false).is_accepted());
        assert!(stripped.lines.last().unwrap().clause.subset_of(&c(&[5])));
    }

    #[test]
    fn trace_roundtrip() {
        let (axioms, proof) = php21_proof();
        let text = trace_to_string(&proof);
        let back = read_trace(text.as_bytes()).unwrap();
        assert_eq!(trace_to_string(&back), text);
        assert!(check_proof(&axioms, &[], &back, true).is_accepted());
        assert_eq!(back, proof);
    }

    #[test]
    fn trace_parse_errors() {
        // missing second terminator
        assert!(read_trace("1 5 0\n".as_bytes()).is_err());
        // junk after final 0
        assert!(read_trace("1 5 0 0 7\n".as_bytes()).is_err());
        // resolution that no pivot derives
        let bad = "1 1 0 0\n2 2 0 0\n3 -9 0 1 2\n";
        assert!(read_trace(bad.as_bytes()).is_err());
    }

    #[test]
    fn axiom_cone_soundness_spot_check() {
        use crate::rng::SplitMix64;
        let f = encode_php(&complete_graph(3, 2));
        let proof =
            match prove_dpll(f.num_vars(), &f.clauses, Branching::MaxOccurrence, 0, 1 << 20)
                .unwrap()
            {
                ProverOutcome::Unsat(p) => p,
                _ => unreachable!(),
            };
        let mut rng = SplitMix64::new(77);
        for line in &proof.lines {
            let cone = proof.axiom_cone(line.id);
            for _ in 0..50 {
                let mut rho = PartialAssignment::new();
                for v in 1..=f.num_vars() {
                    rho.set(v, rng.coin());
                }
                if clause_status(&line.clause, &rho) == ClauseStatus::Falsified {
                    let some_axiom_falsified = cone.iter().any(|&id| {
                        clause_status(&proof.line(id).unwrap().clause, &rho)
                            == ClauseStatus::Falsified
                    });
                    assert!(some_axiom_falsified, "line {} unsound", line.id);
                }
            }
        }
    }
}
