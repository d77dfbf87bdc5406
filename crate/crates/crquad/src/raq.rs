//! Real commutative associative unital algebras and their quadrics.
//!
//! A finite-dimensional real commutative associative algebra `A` with unit
//! gives the quadric `{ Im W = Z . conj(Z) }` of type `(n, n)` over the
//! complexification `A^c`, with coordinate forms `<z,zb>_l = sum c_ijl z_i
//! zb_j`. Nondegeneracy of the quadric corresponds exactly to the existence
//! of the unit. The positive-weight automorphisms are the explicit Poincare
//! fractional maps with parameters `a in A^c`, `r in A`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{
    parse_rational, render_rational, ExactMatrix, GaussianRational, Matrix, Rational, RealMatrix,
};
use crate::quadric::Quadric;
use crate::{Error, Result};

/// Verdict of the table validation.
#[derive(Debug)]
pub enum AlgebraCheck {
    Ok(CommAlgebra),
    NotCommutative { i: usize, j: usize },
    NotAssociative { i: usize, j: usize, l: usize },
    NoUnit,
}

/// A validated commutative associative unital algebra, stored by its
/// structure constants `E_i . E_j = sum_l c[i][j][l] E_l` and its unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommAlgebra {
    n: usize,
    c: Vec<Rational>,
    unit: Vec<Rational>,
}

/// Validate a raw structure-constant table: commutativity, associativity,
/// and existence of a unit (found by solving `e . E_j = E_j` for all `j`).
pub fn validate_algebra(n: usize, table: &[Rational]) -> Result<AlgebraCheck> {
    if n == 0 || table.len() != n * n * n {
        return Err(Error::InvalidInput(format!(
            "structure table must have n^3 = {} entries, found {}",
            n * n * n,
            table.len()
        )));
    }
    let c = |i: usize, j: usize, l: usize| &table[(i * n + j) * n + l];
    for i in 0..n {
        for j in 0..i {
            if (0..n).any(|l| c(i, j, l) != c(j, i, l)) {
                return Ok(AlgebraCheck::NotCommutative { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for p in 0..n {
                    let lhs: Rational = (0..n).map(|m| c(i, j, m) * c(m, l, p)).sum();
                    let rhs: Rational = (0..n).map(|m| c(j, l, m) * c(i, m, p)).sum();
                    if lhs != rhs {
                        return Ok(AlgebraCheck::NotAssociative { i, j, l });
                    }
                }
            }
        }
    }
    // e . E_j = E_j for all j: rows indexed by (j, p), unknowns e_i.
    let mat = RealMatrix::from_fn(n * n, n, |row, i| {
        let (j, p) = (row / n, row % n);
        c(i, j, p).clone()
    });
    let rhs: Vec<Rational> = (0..n * n)
        .map(|row| {
            let (j, p) = (row / n, row % n);
            if j == p {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        })
        .collect();
    match mat.solve(&rhs) {
        None => Ok(AlgebraCheck::NoUnit),
        Some(unit) => Ok(AlgebraCheck::Ok(CommAlgebra { n, c: table.to_vec(), unit })),
    }
}

impl CommAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    fn c(&self, i: usize, j: usize, l: usize) -> &Rational {
        &self.c[(i * self.n + j) * self.n + l]
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn unit_c(&self) -> Vec<GaussianRational> {
        self.unit.iter().map(|r| GaussianRational::from_re(r.clone())).collect()
    }

    /// Product in the complexification (coordinates in the `E` basis).
    pub fn mul(&self, x: &[GaussianRational], y: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let mut out = vec![GaussianRational::zero(); self.n];
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if y[j].is_zero() {
                    continue;
                }
                let prod = &x[i] * &y[j];
                for (l, o) in out.iter_mut().enumerate() {
                    let cc = self.c(i, j, l);
                    if !cc.is_zero() {
                        *o += &prod.scale(cc);
                    }
                }
            }
        }
        out
    }

    /// Canonical conjugation of `A^c`: fixes the basis, conjugates
    /// coordinates.
    pub fn conj(&self, x: &[GaussianRational]) -> Vec<GaussianRational> {
        x.iter().map(GaussianRational::conj).collect()
    }

    /// Multiplicative inverse in `A^c`: `y` with `x . y = unit`, when the
    /// multiplication-by-`x` operator is invertible.
    pub fn inverse(&self, x: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        // L_x[p, j] = sum_i c[i][j][p] x_i.
        let lx = ExactMatrix::from_fn(self.n, self.n, |p, j| {
            let mut acc = GaussianRational::zero();
            for i in 0..self.n {
                let cc = self.c(i, j, p);
                if !cc.is_zero() {
                    acc += &x[i].scale(cc);
                }
            }
            acc
        });
        if lx.rank() < self.n {
            return None;
        }
        lx.solve(&self.unit_c())
    }

    /// The quadric `Im W = Z . conj(Z)`: `<z,zb>_l = sum_ij c[i][j][l] z_i zb_j`,
    /// Hermitian because the constants are real and symmetric in `(i,j)`.
    pub fn raq_quadric(&self) -> Result<Quadric> {
        let mats: Vec<ExactMatrix> = (0..self.n)
            .map(|l| {
                Matrix::from_fn(self.n, self.n, |row, col| {
                    // coefficient of z_col zb_row
                    GaussianRational::from_re(self.c(col, row, l).clone())
                })
            })
            .collect();
        Quadric::from_matrices(mats)
    }

    /// `Im W - Z . conj(Z)` at a concrete point (all coordinates real iff
    /// the point data is consistent; returned as rationals).
    pub fn quadric_defect(&self, z: &[GaussianRational], w: &[GaussianRational]) -> Vec<Rational> {
        let zzb = self.mul(z, &self.conj(z));
        (0..self.n).map(|l| w[l].im.clone() - zzb[l].re.clone()).collect()
    }

    /// Does the point satisfy `Im W = Z . conj(Z)` exactly?
    pub fn on_quadric(&self, z: &[GaussianRational], w: &[GaussianRational]) -> bool {
        self.quadric_defect(z, w).iter().all(Zero::is_zero)
    }

    /// The Poincare fractional automorphism with parameters `a in A^c`,
    /// `r in A`:
    ///
    /// ```text
    /// Z* = (Z + a.W) D^-1,  W* = W D^-1,
    /// D  = 1 - 2i conj(a).Z - (r + i a.conj(a)).W
    /// ```
    ///
    /// Returns `None` when `D` is not invertible. For on-quadric input the
    /// output is on the quadric exactly.
    pub fn poincare_map(
        &self,
        a: &[GaussianRational],
        r: &[Rational],
        z: &[GaussianRational],
        w: &[GaussianRational],
    ) -> Option<(Vec<GaussianRational>, Vec<GaussianRational>)> {
        assert_eq!(a.len(), self.n);
        assert_eq!(r.len(), self.n);
        let abar = self.conj(a);
        let minus_2i = GaussianRational::from_parts(0, -2);
        let t1: Vec<GaussianRational> =
            self.mul(&abar, z).iter().map(|v| v * &minus_2i).collect();
        let a_abar = self.mul(a, &abar);
        let s: Vec<GaussianRational> = (0..self.n)
            .map(|l| {
                &GaussianRational::from_re(r[l].clone())
                    + &(&a_abar[l] * &GaussianRational::i())
            })
            .collect();
        let t2 = self.mul(&s, w);
        let delta: Vec<GaussianRational> = (0..self.n)
            .map(|l| &(&self.unit_c()[l] + &t1[l]) - &t2[l])
            .collect();
        let delta_inv = self.inverse(&delta)?;
        let zw = self.mul(a, w);
        let z_shift: Vec<GaussianRational> = (0..self.n).map(|l| &z[l] + &zw[l]).collect();
        Some((self.mul(&z_shift, &delta_inv), self.mul(w, &delta_inv)))
    }
}

/// Constructions used to generate guaranteed-valid test algebras.
impl CommAlgebra {
    /// The reals as a 1-dimensional algebra.
    pub fn real() -> Self {
        let one = Rational::from_integer(1.into());
        CommAlgebra { n: 1, c: vec![one.clone()], unit: vec![one] }
    }

    /// Truncated polynomials `R[t]/(t^m)` in the basis `1, t, ..., t^{m-1}`.
    /// `truncated_poly(2)` is the dual numbers.
    pub fn truncated_poly(m: usize) -> Self {
        assert!(m >= 1);
        let mut c = vec![Rational::zero(); m * m * m];
        for i in 0..m {
            for j in 0..m {
                if i + j < m {
                    c[(i * m + j) * m + (i + j)] = Rational::from_integer(1.into());
                }
            }
        }
        let mut unit = vec![Rational::zero(); m];
        unit[0] = Rational::from_integer(1.into());
        CommAlgebra { n: m, c, unit }
    }

    pub fn dual() -> Self {
        Self::truncated_poly(2)
    }

    /// Direct product of two algebras (componentwise operations; the unit is
    /// the pair of units).
    pub fn product(a: &CommAlgebra, b: &CommAlgebra) -> Self {
        let n = a.n + b.n;
        let mut c = vec![Rational::zero(); n * n * n];
        for i in 0..a.n {
            for j in 0..a.n {
                for l in 0..a.n {
                    c[(i * n + j) * n + l] = a.c(i, j, l).clone();
                }
            }
        }
        for i in 0..b.n {
            for j in 0..b.n {
                for l in 0..b.n {
                    c[((a.n + i) * n + (a.n + j)) * n + (a.n + l)] = b.c(i, j, l).clone();
                }
            }
        }
        let unit = a.unit.iter().chain(b.unit.iter()).cloned().collect();
        CommAlgebra { n, c, unit }
    }

    /// `R x R` in the product basis, then rotated to the `1, e` basis with
    /// `e^2 = 1` (the split algebra as usually written).
    pub fn split() -> Self {
        // basis 1 = (1,1), e = (1,-1): e^2 = 1, 1.e = e.
        let one = Rational::from_integer(1.into());
        let mut c = vec![Rational::zero(); 8];
        let mut set = |i: usize, j: usize, l: usize| c[(i * 2 + j) * 2 + l] = one.clone();
        set(0, 0, 0);
        set(0, 1, 1);
        set(1, 0, 1);
        set(1, 1, 0);
        CommAlgebra { n: 2, c, unit: vec![one, Rational::zero()] }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    n: usize,
    table: Vec<Vec<Vec<String>>>,
}

impl CommAlgebra {
    pub fn to_json(&self) -> String {
        let file = AlgebraFile {
            n: self.n,
            table: (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| (0..self.n).map(|l| render_rational(self.c(i, j, l))).collect())
                        .collect()
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    /// Parse and fully validate an algebra file.
    pub fn from_json(text: &str) -> Result<CommAlgebra> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
        let n = file.n;
        if n == 0 {
            return Err(Error::InvalidInput("algebra file: need n >= 1".into()));
        }
        if file.table.len() != n
            || file.table.iter().any(|t| t.len() != n || t.iter().any(|r| r.len() != n))
        {
            return Err(Error::InvalidInput(format!(
                "algebra file: table must be {n}x{n}x{n}"
            )));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for (i, plane) in file.table.iter().enumerate() {
            for (j, row) in plane.iter().enumerate() {
                for (l, s) in row.iter().enumerate() {
                    flat.push(parse_rational(s).map_err(|e| {
                        Error::Parse(format!("table entry ({},{},{}): {e}", i + 1, j + 1, l + 1))
                    })?);
                }
            }
        }
        match validate_algebra(n, &flat)? {
            AlgebraCheck::Ok(a) => Ok(a),
            AlgebraCheck::NotCommutative { i, j } => Err(Error::InvalidInput(format!(
                "algebra is not commutative at basis pair ({},{})",
                i + 1,
                j + 1
            ))),
            AlgebraCheck::NotAssociative { i, j, l } => Err(Error::InvalidInput(format!(
                "algebra is not associative at basis triple ({},{},{})",
                i + 1,
                j + 1,
                l + 1
            ))),
            AlgebraCheck::NoUnit => {
                Err(Error::InvalidInput("algebra has no unit element".into()))
            }
        }
    }

    pub fn load(path: &std::path::Path) -> Result<CommAlgebra> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::quadric::catalog;

    fn g(x: i64, y: i64) -> GaussianRational {
        GaussianRational::from_parts(x, y)
    }

    #[test]
    fn validate_examples() {
        // Dual numbers validate with unit (1, 0).
        let dual = CommAlgebra::dual();
        match validate_algebra(2, &dual.c).unwrap() {
            AlgebraCheck::Ok(a) => assert_eq!(a.unit(), &[rat(1), rat(0)]),
            v => panic!("expected ok, got {v:?}"),
        }
        // n = 1 with E1 . E1 = 0 has no unit.
        match validate_algebra(1, &[rat(0)]).unwrap() {
            AlgebraCheck::NoUnit => {}
            v => panic!("expected no-unit, got {v:?}"),
        }
        // A non-commutative table is rejected as such.
        let mut c = vec![rat(0); 8];
        c[(0 * 2 + 1) * 2 + 0] = rat(1); // E1.E2 = E1
        match validate_algebra(2, &c).unwrap() {
            AlgebraCheck::NotCommutative { .. } => {}
            v => panic!("expected not-commutative, got {v:?}"),
        }
        // An associativity violation: E2 E2 = E3, E3 E3 = E2, E2 E3 = 0,
        // so (E2 E2) E3 = E2 but E2 (E2 E3) = 0.
        let mut c = vec![rat(0); 27];
        let mut set = |i: usize, j: usize, l: usize, v: i64| c[(i * 3 + j) * 3 + l] = rat(v);
        for t in 0..3 {
            set(0, t, t, 1);
            set(t, 0, t, 1);
        }
        set(1, 1, 2, 1);
        set(2, 2, 1, 1);
        match validate_algebra(3, &c).unwrap() {
            AlgebraCheck::NotAssociative { .. } => {}
            v => panic!("expected not-associative, got {v:?}"),
        }
    }

    #[test]
    fn raq_quadric_examples() {
        assert_eq!(CommAlgebra::real().raq_quadric().unwrap(), catalog::heisenberg(1));
        assert_eq!(CommAlgebra::dual().raq_quadric().unwrap(), catalog::raq_dual());
        assert_eq!(CommAlgebra::split().raq_quadric().unwrap(), catalog::raq_split());
        for a in [
            CommAlgebra::truncated_poly(3),
            CommAlgebra::product(&CommAlgebra::real(), &CommAlgebra::dual()),
        ] {
            assert!(a.raq_quadric().unwrap().validate().nondegenerate());
        }
    }

    #[test]
    fn inverse_examples() {
        let dual = CommAlgebra::dual();
        let unit = dual.unit_c();
        assert_eq!(dual.inverse(&unit), Some(unit.clone()));
        // (1 + t)^-1 = 1 - t.
        let x = vec![g(1, 0), g(1, 0)];
        assert_eq!(dual.inverse(&x), Some(vec![g(1, 0), g(-1, 0)]));
        // t is nilpotent.
        let t = vec![g(0, 0), g(1, 0)];
        assert_eq!(dual.inverse(&t), None);
    }

    #[test]
    fn poincare_examples() {
        // a = 0, r = 0 is the identity.
        let dual = CommAlgebra::dual();
        let z = vec![g(1, 1), g(2, 0)];
        let zzb = dual.mul(&z, &dual.conj(&z));
        let w: Vec<GaussianRational> = (0..2)
            .map(|l| GaussianRational::new(rat(3), zzb[l].re.clone()))
            .collect();
        let (z2, w2) = dual
            .poincare_map(&[g(0, 0), g(0, 0)], &[rat(0), rat(0)], &z, &w)
            .unwrap();
        assert_eq!(z2, z);
        assert_eq!(w2, w);

        // A = R, a = 0, r = 1 at (Z, W) = (1, i).
        let re = CommAlgebra::real();
        let (zs, ws) = re
            .poincare_map(&[g(0, 0)], &[rat(1)], &[g(1, 0)], &[g(0, 1)])
            .unwrap();
        assert_eq!(zs, vec![GaussianRational::new(crate::exact::ratio(1, 2), crate::exact::ratio(1, 2))]);
        assert_eq!(ws, vec![GaussianRational::new(crate::exact::ratio(-1, 2), crate::exact::ratio(1, 2))]);
        // Im W* = 1/2 = |Z*|^2.
        assert!(re.quadric_defect(&zs, &ws).iter().all(Rational::is_zero));
    }

    #[test]
    fn poincare_preserves_quadric_on_random_points() {
        let algs = [CommAlgebra::dual(), CommAlgebra::split(), CommAlgebra::truncated_poly(3)];
        for (ai, alg) in algs.iter().enumerate() {
            let n = alg.n();
            let mut counter = 0i64;
            let mut draw = || {
                counter += 1;
                ((counter * 7 + ai as i64 * 13) % 5) - 2
            };
            for _trial in 0..5 {
                let z: Vec<GaussianRational> = (0..n).map(|_| g(draw(), draw())).collect();
                let u: Vec<Rational> = (0..n).map(|_| rat(draw())).collect();
                let zzb = alg.mul(&z, &alg.conj(&z));
                let w: Vec<GaussianRational> = (0..n)
                    .map(|l| GaussianRational::new(u[l].clone(), zzb[l].re.clone()))
                    .collect();
                assert!(alg.quadric_defect(&z, &w).iter().all(Rational::is_zero));
                let a: Vec<GaussianRational> = (0..n).map(|_| g(draw(), draw())).collect();
                let r: Vec<Rational> = (0..n).map(|_| rat(draw())).collect();
                if let Some((zs, ws)) = alg.poincare_map(&a, &r, &z, &w) {
                    assert!(
                        alg.quadric_defect(&zs, &ws).iter().all(Rational::is_zero),
                        "Poincare image left the quadric"
                    );
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let a = CommAlgebra::truncated_poly(3);
        let text = a.to_json();
        let back = CommAlgebra::from_json(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json(), text);
        // A unit-less table is a load error.
        let bad = r#"{"n": 1, "table": [[["0"]]]}"#;
        assert!(CommAlgebra::from_json(bad).is_err());
    }
}
