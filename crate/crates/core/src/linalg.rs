//! Sparse exact Gaussian elimination over a [`Field`].
//!
//! Rows are inserted one at a time and reduced against the pivots found so
//! far. A pivot row only ever contains its own pivot column, free columns and
//! pivot columns of pivots inserted after it, which gives back substitution in
//! reverse insertion order.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

pub type SparseRow = BTreeMap<usize, Scalar>;

#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    pivots: Vec<(usize, SparseRow)>,
    rank_of_col: Vec<Option<usize>>,
    /// Whether an inconsistent row (only the augmented column nonzero) was seen.
    inconsistent: bool,
    augmented: Option<usize>,
}

impl Echelon {
    /// `ncols` unknowns; when `augmented` is true, column `ncols` holds the
    /// right-hand side.
    pub fn new(field: Field, ncols: usize, augmented: bool) -> Self {
        let width = if augmented { ncols + 1 } else { ncols };
        Echelon {
            field,
            ncols,
            pivots: Vec::new(),
            rank_of_col: vec![None; width],
            inconsistent: false,
            augmented: augmented.then_some(ncols),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn insert(&mut self, mut row: SparseRow) {
        row.retain(|_, v| !v.is_zero());
        loop {
            let next = row
                .keys()
                .filter_map(|c| self.rank_of_col[*c].map(|r| (r, *c)))
                .min();
            let Some((rank, col)) = next else { break };
            let factor = row[&col].clone();
            let pivot = &self.pivots[rank].1;
            for (c, v) in pivot {
                let e = row.entry(*c).or_insert_with(|| self.field.zero());
                let prod = &factor * v;
                *e = &*e - &prod;
                if e.is_zero() {
                    row.remove(c);
                }
            }
        }
        let lead = row.keys().copied().find(|c| Some(*c) != self.augmented);
        match lead {
            None => {
                if !row.is_empty() {
                    self.inconsistent = true;
                }
            }
            Some(col) => {
                let inv = row[&col].inv().expect("nonzero pivot");
                for v in row.values_mut() {
                    *v = &*v * &inv;
                }
                self.rank_of_col[col] = Some(self.pivots.len());
                self.pivots.push((col, row));
            }
        }
    }

    /// Unique solution of an augmented system, `None` if singular or inconsistent.
    pub fn unique_solution(&self) -> Option<Vec<Scalar>> {
        let rhs = self.augmented?;
        if self.inconsistent || self.rank() != self.ncols {
            return None;
        }
        let mut x = vec![self.field.zero(); self.ncols];
        for (col, row) in self.pivots.iter().rev() {
            let mut val = row.get(&rhs).cloned().unwrap_or_else(|| self.field.zero());
            for (c, v) in row {
                if *c != *col && *c != rhs {
                    let prod = v * &x[*c];
                    val = &val - &prod;
                }
            }
            x[*col] = val;
        }
        Some(x)
    }

    /// Basis of the null space of a homogeneous system, one vector per free
    /// column in increasing column order.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| self.rank_of_col[*c].is_none()).collect();
        let mut basis = Vec::with_capacity(free.len());
        for f in free {
            let mut x = vec![self.field.zero(); self.ncols];
            x[f] = self.field.one();
            for (col, row) in self.pivots.iter().rev() {
                let mut val = self.field.zero();
                for (c, v) in row {
                    if *c != *col && Some(*c) != self.augmented {
                        let prod = v * &x[*c];
                        val = &val - &prod;
                    }
                }
                x[*col] = val;
            }
            basis.push(x);
        }
        basis
    }
}

/// Solves `A x = b` for square `A` given by sparse rows.
pub fn solve(field: Field, rows: Vec<SparseRow>, rhs: Vec<Scalar>, ncols: usize) -> Option<Vec<Scalar>> {
    let mut ech = Echelon::new(field, ncols, true);
    for (mut row, b) in rows.into_iter().zip(rhs) {
        if !b.is_zero() {
            row.insert(ncols, b);
        }
        ech.insert(row);
        if ech.is_inconsistent() {
            return None;
        }
    }
    ech.unique_solution()
}

/// Null space of the system with the given sparse rows.
pub fn null_space(field: Field, rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(field, ncols, false);
    for row in rows {
        ech.insert(row);
    }
    ech.null_space()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: Field, vals: &[i64]) -> SparseRow {
        vals.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (i, f.from_i64(*v)))
            .collect()
    }

    #[test]
    fn solves_small_rational_system() {
        let q = Field::Rational;
        let rows = vec![row(q, &[2, 1]), row(q, &[1, 3])];
        let x = solve(q, rows, vec![q.from_i64(3), q.from_i64(5)], 2).unwrap();
        assert_eq!(x, vec![q.parse("4/5").unwrap(), q.parse("7/5").unwrap()]);
    }

    #[test]
    fn singular_is_none() {
        let f = Field::prime(7).unwrap();
        let rows = vec![row(f, &[1, 2]), row(f, &[2, 4])];
        assert!(solve(f, rows, vec![f.one(), f.zero()], 2).is_none());
    }

    #[test]
    fn null_space_dimension() {
        let q = Field::Rational;
        let rows = vec![row(q, &[1, 1, 0]), row(q, &[0, 0, 0]), row(q, &[2, 2, 0])];
        let ns = null_space(q, rows.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let mut acc = q.zero();
                for (c, a) in r {
                    acc.add_mul(a, &v[*c]);
                }
                assert!(acc.is_zero());
            }
        }
    }
}
