//! Dense exact matrices over the rationals and Gaussian rationals.
//!
//! Elimination is fraction-free in the Bareiss style (every intermediate
//! entry is a minor of the scaled input, which keeps coefficient growth
//! polynomial), with a final normalization pass that produces the reduced
//! row echelon form. Pivot columns are always the leftmost possible, so the
//! RREF — and everything derived from it: rank, canonical nullspace bases,
//! canonical solutions — is a deterministic function of the input.

use num_traits::{One, Zero};

use super::scalar::{GaussianRational, Rational};

/// The scalar operations elimination needs. Implemented by `Rational` and
/// `GaussianRational`.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv().expect("division by zero"))
    }

    /// Image in F_p, with `sqrt_m1` standing in for the imaginary unit.
    /// `None` when a denominator vanishes mod p.
    fn to_modp(&self, p: u64, sqrt_m1: u64) -> Option<u64>;
}

fn bigint_modp(n: &num_bigint::BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = n % num_bigint::BigInt::from(p);
    let m = m.to_i64().expect("residue fits in i64");
    m.rem_euclid(p as i64) as u64
}

fn rational_modp(r: &Rational, p: u64) -> Option<u64> {
    let den = bigint_modp(r.denom(), p);
    if den == 0 {
        return None;
    }
    let num = bigint_modp(r.numer(), p);
    Some(mulmod(num, invmod(den, p), p))
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    // p < 2^31, so the product fits in u64.
    (a * b) % p
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl Field for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn to_modp(&self, p: u64, _sqrt_m1: u64) -> Option<u64> {
        rational_modp(self, p)
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self)
    }
    fn to_modp(&self, p: u64, sqrt_m1: u64) -> Option<u64> {
        let re = rational_modp(&self.re, p)?;
        let im = rational_modp(&self.im, p)?;
        Some((re + mulmod(im, sqrt_m1, p)) % p)
    }
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Matrix over the Gaussian rationals.
pub type ExactMatrix = Matrix<GaussianRational>;
/// Real-restricted variant with rational entries.
pub type RealMatrix = Matrix<Rational>;

impl<F: Field> Matrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = F::zero();
            for t in 0..self.cols {
                acc = acc.add(&self.at(i, t).mul(rhs.at(t, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.at(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Fraction-free (Bareiss) forward elimination followed by normalization
    /// and back-substitution. Returns the reduced row echelon form together
    /// with the pivot columns (leftmost-first, hence canonical).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = F::one();
        let mut r = 0;
        for c in 0..a.cols {
            if r >= a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, pr);
            let pivot = a.at(r, c).clone();
            for i in r + 1..a.rows {
                let head = a.at(i, c).clone();
                for j in c..a.cols {
                    // Bareiss two-term update: the division by the previous
                    // pivot is exact (the result is again a minor).
                    let num = pivot.mul(a.at(i, j)).sub(&head.mul(a.at(r, j)));
                    *a.at_mut(i, j) = num.div(&prev);
                }
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        // Final normalization: unit pivots, then clear above.
        for (r, &c) in pivots.iter().enumerate() {
            let inv = a.at(r, c).inv().expect("pivot is nonzero");
            for j in c..a.cols {
                *a.at_mut(r, j) = a.at(r, j).mul(&inv);
            }
        }
        for (r, &c) in pivots.iter().enumerate().rev() {
            for i in 0..r {
                let factor = a.at(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = a.at(i, j).sub(&factor.mul(a.at(r, j)));
                    *a.at_mut(i, j) = v;
                }
            }
        }
        (a, pivots)
    }

    /// Rank over the fraction field. Deterministic.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut prev = F::one();
        let mut r = 0;
        for c in 0..a.cols {
            if r >= a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, pr);
            let pivot = a.at(r, c).clone();
            for i in r + 1..a.rows {
                let head = a.at(i, c).clone();
                if head.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let num = pivot.mul(a.at(i, j)).sub(&head.mul(a.at(r, j)));
                    *a.at_mut(i, j) = num.div(&prev);
                }
            }
            prev = pivot;
            r += 1;
        }
        r
    }

    /// Canonical nullspace basis derived from the RREF: one vector per free
    /// column, in ascending column order, with a unit entry at the free
    /// column. `M v = 0` exactly for every returned `v`, and the number of
    /// vectors is `cols - rank`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (rr, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for fc in 0..self.cols {
            if is_pivot[fc] {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = rr.at(r, fc).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `M x = b` exactly. Returns `None` when the system is
    /// inconsistent; otherwise the canonical particular solution with all
    /// free variables set to zero (the unique solution when the nullspace is
    /// trivial).
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch in solve");
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let (rr, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // a pivot in the augmented column: inconsistent
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rr.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl ExactMatrix {
    pub fn conj(&self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if *self.at(i, j) != self.at(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Lift a real matrix entrywise.
    pub fn from_real(m: &RealMatrix) -> Self {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| GaussianRational::from_re(m.at(i, j).clone()))
    }
}

impl RealMatrix {
    /// All entries of a rational matrix from small integers.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| super::scalar::rat(x)).collect()).collect(),
        )
    }
}

impl<F: Field + std::fmt::Debug> std::fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::ratio;

    fn gm(rows: &[&[i64]]) -> ExactMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussianRational::from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_identity_zero_proportional() {
        assert_eq!(ExactMatrix::identity(2).rank(), 2);
        assert_eq!(ExactMatrix::zero(2, 2).rank(), 0);
        assert_eq!(gm(&[&[1, 1], &[2, 2]]).rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(ExactMatrix::identity(3).nullspace().is_empty());

        let ns = gm(&[&[1, 1]]).nullspace();
        assert_eq!(ns.len(), 1);
        // Canonical basis: free column 1, pivot column 0 carries -1.
        assert_eq!(ns[0], vec![GaussianRational::from_i64(-1), GaussianRational::from_i64(1)]);

        assert_eq!(ExactMatrix::zero(2, 2).nullspace().len(), 2);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = gm(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        for v in m.nullspace() {
            assert!(m.mul_vec(&v).iter().all(GaussianRational::is_zero));
        }
        assert_eq!(m.rank() + m.nullspace().len(), m.ncols());
    }

    #[test]
    fn solve_examples() {
        let b = vec![GaussianRational::from_i64(3), GaussianRational::from_i64(-2)];
        assert_eq!(ExactMatrix::identity(2).solve(&b), Some(b.clone()));

        let m = gm(&[&[1, 0], &[0, 0]]);
        let b = vec![GaussianRational::zero(), GaussianRational::one()];
        assert_eq!(m.solve(&b), None);

        let m = gm(&[&[2]]);
        let x = m.solve(&[GaussianRational::one()]).unwrap();
        assert_eq!(x[0], GaussianRational::from_re(ratio(1, 2)));
    }

    #[test]
    fn solve_none_iff_augmented_rank_grows() {
        let m = gm(&[&[1, 2], &[2, 4]]);
        let consistent = vec![GaussianRational::from_i64(1), GaussianRational::from_i64(2)];
        let inconsistent = vec![GaussianRational::from_i64(1), GaussianRational::from_i64(3)];
        assert!(m.solve(&consistent).is_some());
        assert!(m.solve(&inconsistent).is_none());
    }

    #[test]
    fn rref_with_fractional_result() {
        let m = gm(&[&[2, 1], &[4, 3]]);
        let (rr, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rr, ExactMatrix::identity(2));
    }

    #[test]
    fn complex_entries() {
        // [[i, 1], [1, -i]] has rank 1: row2 = -i * row1.
        let i = GaussianRational::i();
        let m = Matrix::from_rows(vec![
            vec![i.clone(), GaussianRational::one()],
            vec![GaussianRational::one(), i.conj()],
        ]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(GaussianRational::is_zero));
    }

    #[test]
    fn modp_roundtrip() {
        let p: u64 = 998_244_353;
        let r = ratio(3, 7);
        let v = <Rational as Field>::to_modp(&r, p, 0).unwrap();
        assert_eq!(mulmod(v, 7, p), 3);
    }
}
