//! Exact-rational subspaces of a finite-dimensional space, stored as a
//! canonical reduced row-echelon basis so that equality of subspaces is plain
//! representation equality. Elimination is carried out on gcd-normalized
//! integer rows to keep coefficient growth in check; rows are rescaled to
//! leading coefficient 1 only when the canonical form is assembled.

use crate::Rat;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Rows in canonical reduced echelon form, pivots strictly increasing.
    basis: Vec<Vec<Rat>>,
}

/// Integer row with its pivot column, scaled so entries are coprime and the
/// pivot is positive.
#[derive(Debug, Clone)]
struct IntRow {
    pivot: usize,
    entries: Vec<BigInt>,
}

fn normalize(mut entries: Vec<BigInt>) -> Option<IntRow> {
    let pivot = entries.iter().position(|e| !e.is_zero())?;
    let mut g = BigInt::zero();
    for e in &entries {
        g = g.gcd(e);
    }
    if entries[pivot].is_negative() {
        g = -g;
    }
    for e in &mut entries {
        *e = &*e / &g;
    }
    Some(IntRow { pivot, entries })
}

fn to_int_row(row: &[Rat]) -> Option<IntRow> {
    let mut lcm = BigInt::one();
    for r in row {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    normalize(ints)
}

/// Eliminate `row` against `rows` (sorted by pivot); returns the reduced row
/// if it is independent.
fn reduce(rows: &[IntRow], row: IntRow) -> Option<IntRow> {
    let mut cur = row;
    loop {
        match rows.binary_search_by(|r| r.pivot.cmp(&cur.pivot)) {
            Err(_) => return Some(cur),
            Ok(idx) => {
                let basis = &rows[idx];
                let a = basis.entries[cur.pivot].clone();
                let b = cur.entries[cur.pivot].clone();
                let combined: Vec<BigInt> = cur
                    .entries
                    .iter()
                    .zip(&basis.entries)
                    .map(|(c, d)| c * &a - d * &b)
                    .collect();
                {
                    let next = normalize(combined)?;
                    cur = next
                }
            }
        }
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let mut basis = Vec::with_capacity(ambient);
        for i in 0..ambient {
            let mut row = vec![Rat::zero(); ambient];
            row[i] = Rat::one();
            basis.push(row);
        }
        Subspace { ambient, basis }
    }

    pub fn from_rows(ambient: usize, rows: &[Vec<Rat>]) -> Self {
        let mut echelon: Vec<IntRow> = Vec::new();
        for row in rows {
            assert_eq!(row.len(), ambient, "row length mismatch");
            if let Some(int_row) = to_int_row(row) {
                if let Some(reduced) = reduce(&echelon, int_row) {
                    let pos = echelon
                        .binary_search_by(|r| r.pivot.cmp(&reduced.pivot))
                        .unwrap_err();
                    echelon.insert(pos, reduced);
                }
            }
        }
        // back-substitute to the reduced form
        for i in (0..echelon.len()).rev() {
            for j in 0..i {
                let p = echelon[i].pivot;
                if echelon[j].entries[p].is_zero() {
                    continue;
                }
                let a = echelon[i].entries[p].clone();
                let b = echelon[j].entries[p].clone();
                let upper = echelon[i].entries.clone();
                let combined: Vec<BigInt> = echelon[j]
                    .entries
                    .iter()
                    .zip(&upper)
                    .map(|(c, d)| c * &a - d * &b)
                    .collect();
                echelon[j] = normalize(combined).expect("row vanished in back-substitution");
            }
        }
        let basis = echelon
            .into_iter()
            .map(|r| {
                let lead = Rat::from_integer(r.entries[r.pivot].clone());
                r.entries
                    .into_iter()
                    .map(|e| Rat::from_integer(e) / lead.clone())
                    .collect()
            })
            .collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let int_row = match to_int_row(v) {
            None => return true, // zero vector
            Some(r) => r,
        };
        let echelon: Vec<IntRow> = self
            .basis
            .iter()
            .map(|r| to_int_row(r).expect("basis row cannot be zero"))
            .collect();
        reduce(&echelon, int_row).is_none()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        other.basis.iter().all(|r| self.contains_vector(r))
    }

    pub fn union(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(self.ambient, &rows)
    }

    pub fn dim_fraction(&self) -> Rat {
        Rat::new(BigInt::from(self.dim()), BigInt::from(self.ambient))
    }
}

/// Kronecker product of a list of vectors; the first factor is the most
/// significant index.
pub fn kron(factors: &[Vec<Rat>]) -> Vec<Rat> {
    let mut acc = vec![Rat::one()];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for a in &acc {
            for b in f {
                next.push(a * b);
            }
        }
        acc = next;
    }
    acc
}

/// Nonzero determinant test for a square rational matrix.
pub fn is_nonsingular(rows: &[Vec<Rat>]) -> bool {
    let n = rows.len();
    Subspace::from_rows(n, rows).dim() == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_int};

    fn v(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn canonical_equality() {
        let a = Subspace::from_rows(3, &[v(&[1, 1, 0]), v(&[0, 0, 2])]);
        let b = Subspace::from_rows(3, &[v(&[2, 2, 2]), v(&[0, 0, 5]), v(&[4, 4, 1])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn containment_partial_order() {
        let small = Subspace::from_rows(3, &[v(&[1, 0, 0])]);
        let big = Subspace::from_rows(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert!(big.contains(&small));
        assert!(!small.contains(&big));
        assert!(big.contains(&big));
    }

    #[test]
    fn union_commutes() {
        let a = Subspace::from_rows(4, &[v(&[1, 2, 3, 4])]);
        let b = Subspace::from_rows(4, &[v(&[0, 1, 0, 1]), v(&[1, 0, 1, 0])]);
        assert_eq!(a.union(&b), b.union(&a));
        assert!(a.union(&b).contains(&a));
    }

    #[test]
    fn rational_rows() {
        let a = Subspace::from_rows(2, &[vec![rat(1, 2), rat(1, 3)]]);
        assert!(a.contains_vector(&[rat_int(3), rat_int(2)]));
        assert!(!a.contains_vector(&[rat_int(1), rat_int(1)]));
    }

    #[test]
    fn kron_order() {
        let k = kron(&[v(&[1, 2]), v(&[3, 4])]);
        assert_eq!(k, v(&[3, 4, 6, 8]));
    }

    #[test]
    fn full_and_zero() {
        assert!(Subspace::full(4).is_full());
        assert_eq!(Subspace::zero(4).dim(), 0);
        assert!(Subspace::full(4).contains(&Subspace::zero(4)));
    }
}
