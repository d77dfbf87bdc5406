//! Sparse exact linear systems.
//!
//! The tangency systems assembled by the solver are large (hundreds to a few
//! thousand unknowns) but very sparse, and in the common case they have full
//! column rank (the component being computed is zero). The pipeline here is:
//!
//! 1. presolve: rows with a single nonzero force their unknown to zero;
//!    propagate until stable. This is exact and usually shrinks the system a
//!    lot.
//! 2. modular certificate: eliminate the residual system over F_p
//!    (p = 998244353, with a square root of -1 standing in for the imaginary
//!    unit). Because reduction mod p can only lower rank, full column rank
//!    mod p *proves* full column rank over the exact field, so a trivial
//!    nullspace is certified without any big-integer work. A deficient
//!    modular rank proves nothing and merely falls through.
//! 3. exact sparse elimination (minimum-fill pivoting) to find the row space,
//!    then a dense RREF of the surviving pivot rows to produce the canonical
//!    nullspace basis. The RREF of the row space is unique, so the basis does
//!    not depend on the pivot order used in step 3.
//!
//! No step ever reports a result that is not exactly certified.

use std::collections::{BTreeMap, BTreeSet};

use super::matrix::{invmod, mulmod, powmod, Field, Matrix};

const MODP: u64 = 998_244_353;

fn sqrt_m1_modp() -> u64 {
    // 3 generates the multiplicative group of F_p for p = 998244353.
    let r = powmod(3, (MODP - 1) / 4, MODP);
    debug_assert_eq!(mulmod(r, r, MODP), MODP - 1);
    r
}

/// A sparse linear system `M x = 0` assembled row by row.
#[derive(Clone)]
pub struct SparseSystem<F> {
    cols: usize,
    rows: Vec<Vec<(u32, F)>>,
}

impl<F: Field> SparseSystem<F> {
    pub fn new(cols: usize) -> Self {
        SparseSystem { cols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Add a row given as (column, coefficient) pairs. Entries are merged,
    /// zeros dropped, empty rows ignored.
    pub fn add_row(&mut self, mut entries: Vec<(u32, F)>) {
        entries.sort_by_key(|&(c, _)| c);
        let mut merged: Vec<(u32, F)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            debug_assert!((c as usize) < self.cols);
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        if !merged.is_empty() {
            self.rows.push(merged);
        }
    }

    /// Rank of the system matrix.
    pub fn rank(&self) -> usize {
        self.solve_internal(false).0
    }

    /// Rank and the canonical nullspace basis (the basis the dense RREF of
    /// the full matrix would produce): one vector per free column in
    /// ascending column order.
    pub fn nullspace(&self) -> (usize, Vec<Vec<F>>) {
        self.solve_internal(true)
    }

    fn solve_internal(&self, want_basis: bool) -> (usize, Vec<Vec<F>>) {
        let mut rows = self.rows.clone();
        let forced = presolve(&mut rows);
        let forced_set: BTreeSet<u32> = forced.iter().copied().collect();

        // Columns of the reduced problem, in ascending order.
        let core_cols: Vec<u32> =
            (0..self.cols as u32).filter(|c| !forced_set.contains(c)).collect();
        let col_map: BTreeMap<u32, u32> =
            core_cols.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();

        // Quick exit: every column forced to zero.
        if core_cols.is_empty() {
            return (forced.len(), Vec::new());
        }

        // A column with no remaining entry is free; the modular certificate
        // can only succeed when every core column is hit.
        let mut touched = vec![false; core_cols.len()];
        for row in &rows {
            for (c, _) in row {
                touched[col_map[c] as usize] = true;
            }
        }
        if touched.iter().all(|&t| t) {
            if let Some(rank_p) = modp_rank(&rows, &col_map) {
                if rank_p == core_cols.len() {
                    // Full column rank certified: trivial nullspace.
                    return (forced.len() + core_cols.len(), Vec::new());
                }
            }
        }

        // Exact sparse elimination on the reduced system.
        let remapped: Vec<Vec<(u32, F)>> = rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| (col_map[c], v.clone())).collect())
            .collect();
        let pivot_rows = eliminate(remapped, core_cols.len());
        let rank = forced.len() + pivot_rows.len();
        if !want_basis {
            return (rank, Vec::new());
        }

        // Canonical basis via dense RREF of the row space (rank x core
        // columns), then re-embedding the forced zero columns.
        let mut dense = Matrix::zero(pivot_rows.len(), core_cols.len());
        for (i, row) in pivot_rows.iter().enumerate() {
            for (c, v) in row {
                *dense.at_mut(i, *c as usize) = v.clone();
            }
        }
        let reduced_basis = dense.nullspace();
        let basis = reduced_basis
            .into_iter()
            .map(|v| {
                let mut full = vec![F::zero(); self.cols];
                for (i, val) in v.into_iter().enumerate() {
                    full[core_cols[i] as usize] = val;
                }
                full
            })
            .collect();
        (rank, basis)
    }
}

/// Repeatedly strike out singleton rows; their unknowns are forced to zero.
/// Returns the forced columns. `rows` is left with those columns removed and
/// empty rows dropped.
fn presolve<F: Field>(rows: &mut Vec<Vec<(u32, F)>>) -> Vec<u32> {
    let mut forced: BTreeSet<u32> = BTreeSet::new();
    loop {
        let mut new_forced: BTreeSet<u32> = BTreeSet::new();
        for row in rows.iter() {
            if row.len() == 1 && !forced.contains(&row[0].0) {
                new_forced.insert(row[0].0);
            }
        }
        if new_forced.is_empty() {
            break;
        }
        forced.extend(new_forced.iter().copied());
        for row in rows.iter_mut() {
            row.retain(|(c, _)| !forced.contains(c));
        }
        rows.retain(|row| !row.is_empty());
    }
    forced.into_iter().collect()
}

/// Sparse elimination over F_p. Returns `None` when a coefficient has no
/// image mod p (denominator divisible by p), in which case the certificate
/// is simply skipped.
fn modp_rank<F: Field>(rows: &[Vec<(u32, F)>], col_map: &BTreeMap<u32, u32>) -> Option<usize> {
    let sqrt_m1 = sqrt_m1_modp();
    let mut mrows: Vec<Vec<(u32, u64)>> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut mrow = Vec::with_capacity(row.len());
        for (c, v) in row {
            let img = v.to_modp(MODP, sqrt_m1)?;
            if img != 0 {
                mrow.push((col_map[c], img));
            }
        }
        if !mrow.is_empty() {
            mrows.push(mrow);
        }
    }
    let mut work = Work::new(mrows);
    let mut rank = 0;
    while let Some((prow, pcol)) = work.pick_pivot() {
        rank += 1;
        let pivot_row = work.take_row(prow);
        let pivot_val = pivot_row.iter().find(|&&(c, _)| c == pcol).unwrap().1;
        let pinv = invmod(pivot_val, MODP);
        let targets = work.rows_with_col(pcol);
        for t in targets {
            let row = work.take_row(t);
            let head = row.iter().find(|&&(c, _)| c == pcol).unwrap().1;
            let factor = mulmod(head, pinv, MODP);
            let new_row = combine_modp(&row, &pivot_row, factor);
            work.put_row(t, new_row);
        }
    }
    Some(rank)
}

fn combine_modp(row: &[(u32, u64)], pivot: &[(u32, u64)], factor: u64) -> Vec<(u32, u64)> {
    // row - factor * pivot, both sorted by column.
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
            out.push(row[i]);
            i += 1;
        } else if i >= row.len() || pivot[j].0 < row[i].0 {
            let v = (MODP - mulmod(factor, pivot[j].1, MODP)) % MODP;
            if v != 0 {
                out.push((pivot[j].0, v));
            }
            j += 1;
        } else {
            let v = (row[i].1 + MODP - mulmod(factor, pivot[j].1, MODP)) % MODP;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact sparse forward elimination with minimum-fill pivoting. Consumes the
/// rows and returns the pivot rows (a basis of the row space).
fn eliminate<F: Field>(rows: Vec<Vec<(u32, F)>>, _cols: usize) -> Vec<Vec<(u32, F)>> {
    let mut work = Work::new(rows);
    let mut pivot_rows = Vec::new();
    while let Some((prow, pcol)) = work.pick_pivot() {
        let pivot_row = work.take_row(prow);
        let pivot_val =
            pivot_row.iter().find(|(c, _)| *c == pcol).map(|(_, v)| v.clone()).unwrap();
        let targets = work.rows_with_col(pcol);
        for t in targets {
            let row = work.take_row(t);
            let head = row.iter().find(|(c, _)| *c == pcol).map(|(_, v)| v.clone()).unwrap();
            let factor = head.div(&pivot_val);
            let new_row = combine(&row, &pivot_row, &factor);
            work.put_row(t, new_row);
        }
        pivot_rows.push(pivot_row);
    }
    pivot_rows
}

fn combine<F: Field>(row: &[(u32, F)], pivot: &[(u32, F)], factor: &F) -> Vec<(u32, F)> {
    // row - factor * pivot, both sorted by column.
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || pivot[j].0 < row[i].0 {
            let v = factor.mul(&pivot[j].1).neg();
            if !v.is_zero() {
                out.push((pivot[j].0, v));
            }
            j += 1;
        } else {
            let v = row[i].1.sub(&factor.mul(&pivot[j].1));
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Bookkeeping for sparse elimination: active rows plus a column occupancy
/// index. All tie-breaks are by smallest index, so elimination order is
/// deterministic (the final answers do not depend on it anyway).
struct Work<V> {
    rows: Vec<Option<Vec<(u32, V)>>>,
    col_rows: BTreeMap<u32, BTreeSet<usize>>,
}

impl<V> Work<V> {
    fn new(input: Vec<Vec<(u32, V)>>) -> Self {
        let mut col_rows: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
        for (i, row) in input.iter().enumerate() {
            for (c, _) in row {
                col_rows.entry(*c).or_default().insert(i);
            }
        }
        Work { rows: input.into_iter().map(Some).collect(), col_rows }
    }

    /// Cheapest pivot: the column held by the fewest active rows, then the
    /// shortest row in that column.
    fn pick_pivot(&self) -> Option<(usize, u32)> {
        let (&col, rows) = self.col_rows.iter().min_by_key(|(c, rows)| (rows.len(), **c))?;
        let row = rows
            .iter()
            .copied()
            .min_by_key(|&i| (self.rows[i].as_ref().map_or(usize::MAX, Vec::len), i))?;
        Some((row, col))
    }

    fn take_row(&mut self, idx: usize) -> Vec<(u32, V)> {
        let row = self.rows[idx].take().expect("row is active");
        for (c, _) in &row {
            if let Some(set) = self.col_rows.get_mut(c) {
                set.remove(&idx);
                if set.is_empty() {
                    self.col_rows.remove(c);
                }
            }
        }
        row
    }

    fn put_row(&mut self, idx: usize, row: Vec<(u32, V)>) {
        if row.is_empty() {
            return;
        }
        for (c, _) in &row {
            self.col_rows.entry(*c).or_default().insert(idx);
        }
        self.rows[idx] = Some(row);
    }

    fn rows_with_col(&self, col: u32) -> Vec<usize> {
        self.col_rows.get(&col).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{rat, GaussianRational, Rational};

    fn sys(cols: usize, rows: &[&[(u32, i64)]]) -> SparseSystem<Rational> {
        let mut s = SparseSystem::new(cols);
        for r in rows {
            s.add_row(r.iter().map(|&(c, v)| (c, rat(v))).collect());
        }
        s
    }

    #[test]
    fn rank_and_nullspace_match_dense() {
        let s = sys(4, &[&[(0, 1), (1, 2)], &[(1, 1), (2, -1)], &[(0, 1), (1, 1), (2, 1)]]);
        let dense = Matrix::from_fn(3, 4, |i, j| {
            s.rows[i]
                .iter()
                .find(|(c, _)| *c as usize == j)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rational::zero)
        });
        let (rank, basis) = s.nullspace();
        assert_eq!(rank, dense.rank());
        assert_eq!(basis, dense.nullspace());
    }

    #[test]
    fn presolve_forces_singletons() {
        // x0 = 0 forces x1 = 0 via the second row.
        let s = sys(3, &[&[(0, 3)], &[(0, 1), (1, 1)], &[(2, 0)]]);
        let (rank, basis) = s.nullspace();
        assert_eq!(rank, 2);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn full_rank_certificate_path() {
        let s = sys(2, &[&[(0, 1), (1, 1)], &[(0, 1), (1, -1)], &[(0, 2), (1, 7)]]);
        let (rank, basis) = s.nullspace();
        assert_eq!(rank, 2);
        assert!(basis.is_empty());
    }

    #[test]
    fn complex_system() {
        let mut s: SparseSystem<GaussianRational> = SparseSystem::new(2);
        // i*x0 + x1 = 0  => x1 = -i*x0
        s.add_row(vec![(0, GaussianRational::i()), (1, GaussianRational::one())]);
        let (rank, basis) = s.nullspace();
        assert_eq!(rank, 1);
        assert_eq!(basis.len(), 1);
        // Canonical: free column 1 carries 1 (column 0 is the pivot).
        assert_eq!(basis[0][1], GaussianRational::one());
        let check = &basis[0][0] * &GaussianRational::i();
        assert_eq!(&check + &basis[0][1], GaussianRational::zero());
    }
}
