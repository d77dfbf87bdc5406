//! The quadric data model: tuples of Hermitian forms on C^n, nondegeneracy
//! validation, the stacked-system solvability test, linear equivalence, a
//! catalog of named quadrics, seeded random generation, and the JSON file
//! format.

use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::exact::{ExactMatrix, GaussianRational, Matrix, RealMatrix};
use crate::poly::{VarSpec, WPoly};
use crate::{Error, Result};

/// A Hermitian form `(Hz . zb)` given by its Hermitian matrix.
/// Hermiticity (`H = H*`, which makes the form real-valued) is enforced at
/// construction; a violating matrix is an error, never silently symmetrized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermitianForm {
    mat: ExactMatrix,
}

impl HermitianForm {
    pub fn new(mat: ExactMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidInput(format!(
                "Hermitian form matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !mat.is_hermitian() {
            return Err(Error::InvalidInput(
                "matrix is not Hermitian (H must equal its conjugate transpose)".into(),
            ));
        }
        Ok(HermitianForm { mat })
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.mat
    }

    /// `H z` for a concrete vector.
    pub fn apply(&self, z: &[GaussianRational]) -> Vec<GaussianRational> {
        self.mat.mul_vec(z)
    }

    /// The form value `(Hz . zb)` at a concrete point.
    pub fn value(&self, z: &[GaussianRational]) -> GaussianRational {
        let hz = self.apply(z);
        let mut acc = GaussianRational::zero();
        for (a, b) in hz.iter().zip(z) {
            acc += &(a * &b.conj());
        }
        acc
    }
}

/// Nondegeneracy verdict: absence of a common kernel together with real
/// linear independence of the forms.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct NondegeneracyReport {
    /// The stacked `kn x n` matrix `[H_1; ...; H_k]` has rank `n`.
    pub common_kernel_trivial: bool,
    /// The `k` matrices are linearly independent over the reals inside the
    /// real space of Hermitian matrices.
    pub forms_independent: bool,
}

impl NondegeneracyReport {
    pub fn nondegenerate(&self) -> bool {
        self.common_kernel_trivial && self.forms_independent
    }
}

/// A model quadric `{ Im w = <z,zb> }` of CR type `(n, k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quadric {
    n: usize,
    k: usize,
    forms: Vec<HermitianForm>,
}

impl Quadric {
    pub fn new(forms: Vec<HermitianForm>) -> Result<Self> {
        let k = forms.len();
        if k == 0 {
            return Err(Error::InvalidInput("a quadric needs at least one form".into()));
        }
        let n = forms[0].n();
        if n == 0 {
            return Err(Error::InvalidInput("CR dimension must be at least 1".into()));
        }
        if forms.iter().any(|f| f.n() != n) {
            return Err(Error::DimensionMismatch("all forms must share the same n".into()));
        }
        Ok(Quadric { n, k, forms })
    }

    pub fn from_matrices(mats: Vec<ExactMatrix>) -> Result<Self> {
        Self::new(mats.into_iter().map(HermitianForm::new).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn forms(&self) -> &[HermitianForm] {
        &self.forms
    }

    pub fn form(&self, j: usize) -> &HermitianForm {
        &self.forms[j]
    }

    /// The form `<z,zb>_j` as a restricted-ring polynomial of weight 2.
    pub fn form_poly(&self, j: usize) -> WPoly {
        let rs = VarSpec::restricted(self.n, self.k);
        let mut p = WPoly::zero(rs);
        let h = self.forms[j].matrix();
        for l in 0..self.n {
            for r in 0..self.n {
                let c = h.at(l, r);
                if c.is_zero() {
                    continue;
                }
                let term = WPoly::z(rs, r).mul(&WPoly::zbar(rs, l)).scale(c);
                p = p.add(&term);
            }
        }
        p
    }

    /// Exact nondegeneracy check per the two defining conditions.
    pub fn validate(&self) -> NondegeneracyReport {
        // (1) common kernel: rank of the stacked kn x n matrix equals n.
        let stacked = Matrix::from_fn(self.k * self.n, self.n, |i, j| {
            self.forms[i / self.n].matrix().at(i % self.n, j).clone()
        });
        let common_kernel_trivial = stacked.rank() == self.n;
        // (2) real independence: realify each Hermitian matrix into a real
        // vector of length 2n^2 and check the k of them have rank k.
        let realified = Matrix::from_fn(self.k, 2 * self.n * self.n, |j, t| {
            let (idx, im_part) = (t / 2, t % 2 == 1);
            let e = self.forms[j].matrix().at(idx / self.n, idx % self.n);
            if im_part {
                e.im.clone()
            } else {
                e.re.clone()
            }
        });
        let forms_independent = realified.rank() == self.k;
        NondegeneracyReport { common_kernel_trivial, forms_independent }
    }

    pub fn ensure_nondegenerate(&self) -> Result<()> {
        let rep = self.validate();
        if rep.nondegenerate() {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "common_kernel_trivial={}, forms_independent={}",
                rep.common_kernel_trivial, rep.forms_independent
            )))
        }
    }

    /// Solve `<x,zb> = B(zb)`, i.e. the stacked system `H_j x = B_j` for all
    /// `j`. Returns `None` exactly when the stacked system is inconsistent
    /// (the projection criterion); the solution is unique for nondegenerate
    /// quadrics. Degenerate quadrics are rejected.
    pub fn hermitian_solve(
        &self,
        b: &[Vec<GaussianRational>],
    ) -> Result<Option<Vec<GaussianRational>>> {
        self.ensure_nondegenerate()?;
        if b.len() != self.k || b.iter().any(|v| v.len() != self.n) {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side must be {} vectors of length {}",
                self.k, self.n
            )));
        }
        let stacked = Matrix::from_fn(self.k * self.n, self.n, |i, j| {
            self.forms[i / self.n].matrix().at(i % self.n, j).clone()
        });
        let rhs: Vec<GaussianRational> = b.iter().flatten().cloned().collect();
        Ok(stacked.solve(&rhs))
    }

    /// The standard linear action on form tuples: `H'_j = sum_l rho_{jl} S* H_l S`
    /// for an invertible complex `S` and an invertible real `rho`.
    /// Nondegeneracy is preserved.
    pub fn equivalent_transform(&self, s: &ExactMatrix, rho: &RealMatrix) -> Result<Quadric> {
        if s.nrows() != self.n || s.ncols() != self.n {
            return Err(Error::DimensionMismatch("S must be n x n".into()));
        }
        if rho.nrows() != self.k || rho.ncols() != self.k {
            return Err(Error::DimensionMismatch("rho must be k x k".into()));
        }
        if !s.is_invertible() {
            return Err(Error::InvalidInput("S is singular".into()));
        }
        if !rho.is_invertible() {
            return Err(Error::InvalidInput("rho is singular".into()));
        }
        let s_adj = s.adjoint();
        let conjugated: Vec<ExactMatrix> =
            self.forms.iter().map(|f| s_adj.mul(f.matrix()).mul(s)).collect();
        let mut new_forms = Vec::with_capacity(self.k);
        for j in 0..self.k {
            let mut acc = ExactMatrix::zero(self.n, self.n);
            for (l, m) in conjugated.iter().enumerate() {
                let coef = GaussianRational::from_re(rho.at(j, l).clone());
                for r in 0..self.n {
                    for c in 0..self.n {
                        let v = m.at(r, c) * &coef;
                        *acc.at_mut(r, c) = &*acc.at(r, c) + &v;
                    }
                }
            }
            new_forms.push(HermitianForm::new(acc)?);
        }
        Quadric::new(new_forms)
    }
}

/// Seeded random nondegenerate quadric: each form is `N + N*` for an `n x n`
/// matrix `N` with Gaussian-integer entries in `[-3,3] + [-3,3]i`, retried
/// until the tuple validates (at most 100 attempts; failure is statistically
/// negligible for `k <= n^2`).
pub fn random_nondegenerate(n: usize, k: usize, seed: u64) -> Result<Quadric> {
    if n < 1 || k < 1 || k > n * n {
        return Err(Error::InvalidInput(format!(
            "CR type ({n},{k}) out of range: need n >= 1 and 1 <= k <= n^2"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut rand_chacha::ChaCha8Rng| (rng.next_u64() % 7) as i64 - 3;
    for _ in 0..100 {
        let mut mats = Vec::with_capacity(k);
        for _ in 0..k {
            let raw = ExactMatrix::from_fn(n, n, |_, _| {
                GaussianRational::from_parts(small(&mut rng), small(&mut rng))
            });
            let mut h = raw.adjoint();
            for i in 0..n {
                for j in 0..n {
                    *h.at_mut(i, j) = &*h.at(i, j) + raw.at(i, j);
                }
            }
            mats.push(h);
        }
        let q = Quadric::from_matrices(mats)?;
        if q.validate().nondegenerate() {
            return Ok(q);
        }
    }
    Err(Error::InvalidInput(format!(
        "random generation retry budget exhausted for type ({n},{k})"
    )))
}

/// Named quadrics used throughout the tests and the CLI.
pub mod catalog {
    use super::*;

    /// `v = |z|^2` family: k = 1, H = identity. `heisenberg(1)` is the
    /// 3-dimensional Heisenberg quadric, `heisenberg(n)` the sphere quadric.
    pub fn heisenberg(n: usize) -> Quadric {
        Quadric::from_matrices(vec![ExactMatrix::identity(n)]).expect("identity is Hermitian")
    }

    /// The quadric of maximal codimension `k = n^2`, given by the coordinate
    /// basis of the space of Hermitian forms: `z_a zb_a` for each `a`, then
    /// `2 Re z_a zb_b` and `2 Im z_a zb_b` for each pair `b < a`.
    pub fn last(n: usize) -> Quadric {
        let mut mats = Vec::with_capacity(n * n);
        for a in 0..n {
            let mut m = ExactMatrix::zero(n, n);
            *m.at_mut(a, a) = GaussianRational::one();
            mats.push(m);
        }
        for a in 1..n {
            for b in 0..a {
                // 2 Re z_a zb_b: coefficient of z_a zb_b and z_b zb_a is 1.
                let mut m = ExactMatrix::zero(n, n);
                *m.at_mut(b, a) = GaussianRational::one();
                *m.at_mut(a, b) = GaussianRational::one();
                mats.push(m);
                // 2 Im z_a zb_b: coefficient of z_a zb_b is -i.
                let mut m = ExactMatrix::zero(n, n);
                *m.at_mut(b, a) = -GaussianRational::i();
                *m.at_mut(a, b) = GaussianRational::i();
                mats.push(m);
            }
        }
        Quadric::from_matrices(mats).expect("basis forms are Hermitian")
    }

    /// The type (3,3) quadric with forms `2 Re z1 zb3`, `2 Re z2 zb3`,
    /// `2 Im z1 zb3`, stored exactly as printed in its source.
    pub fn palinchak_q5() -> Quadric {
        let mut h1 = ExactMatrix::zero(3, 3);
        *h1.at_mut(0, 2) = GaussianRational::one();
        *h1.at_mut(2, 0) = GaussianRational::one();
        let mut h2 = ExactMatrix::zero(3, 3);
        *h2.at_mut(1, 2) = GaussianRational::one();
        *h2.at_mut(2, 1) = GaussianRational::one();
        let mut h3 = ExactMatrix::zero(3, 3);
        *h3.at_mut(0, 2) = GaussianRational::i();
        *h3.at_mut(2, 0) = -GaussianRational::i();
        Quadric::from_matrices(vec![h1, h2, h3]).expect("printed forms are Hermitian")
    }

    /// RAQ quadric of the dual numbers `R[t]/(t^2)`: forms `|z1|^2` and
    /// `2 Re z1 zb2`.
    pub fn raq_dual() -> Quadric {
        let mut h1 = ExactMatrix::zero(2, 2);
        *h1.at_mut(0, 0) = GaussianRational::one();
        let mut h2 = ExactMatrix::zero(2, 2);
        *h2.at_mut(0, 1) = GaussianRational::one();
        *h2.at_mut(1, 0) = GaussianRational::one();
        Quadric::from_matrices(vec![h1, h2]).expect("Hermitian by construction")
    }

    /// RAQ quadric of the split algebra `R x R`: forms `|z1|^2 + |z2|^2` and
    /// `2 Re z1 zb2`.
    pub fn raq_split() -> Quadric {
        let h1 = ExactMatrix::identity(2);
        let mut h2 = ExactMatrix::zero(2, 2);
        *h2.at_mut(0, 1) = GaussianRational::one();
        *h2.at_mut(1, 0) = GaussianRational::one();
        Quadric::from_matrices(vec![h1, h2]).expect("Hermitian by construction")
    }

    /// Dispatch by name, e.g. `heisenberg:1`, `last:2`, `palinchak-q5`,
    /// `raq-dual`, `raq-split`.
    pub fn by_name(spec: &str) -> Result<Quadric> {
        let (name, param) = match spec.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec, None),
        };
        let need_n = |p: Option<&str>| -> Result<usize> {
            let p = p.ok_or_else(|| {
                Error::InvalidInput(format!("catalog name {name:?} needs a dimension, e.g. {name}:2"))
            })?;
            let n: usize = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad dimension parameter {p:?}")))?;
            if n < 1 || n > 8 {
                return Err(Error::InvalidInput("dimension parameter out of range 1..=8".into()));
            }
            Ok(n)
        };
        match name {
            "heisenberg" => Ok(heisenberg(need_n(param)?)),
            "last" => Ok(last(need_n(param)?)),
            "palinchak-q5" => Ok(palinchak_q5()),
            "raq-dual" => Ok(raq_dual()),
            "raq-split" => Ok(raq_split()),
            _ => Err(Error::InvalidInput(format!(
                "unknown catalog quadric {spec:?} (known: heisenberg:<n>, last:<n>, palinchak-q5, raq-dual, raq-split)"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadricFile {
    n: usize,
    k: usize,
    forms: Vec<Vec<Vec<String>>>,
}

impl Quadric {
    /// Canonical JSON rendering with COMPLEX-grammar entries.
    pub fn to_json(&self) -> String {
        let file = QuadricFile {
            n: self.n,
            k: self.k,
            forms: self
                .forms
                .iter()
                .map(|f| {
                    (0..self.n)
                        .map(|i| (0..self.n).map(|j| f.matrix().at(i, j).render()).collect())
                        .collect()
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    /// Parse and fully validate shape, grammar and Hermiticity.
    pub fn from_json(text: &str) -> Result<Quadric> {
        let file: QuadricFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("quadric file: {e}")))?;
        if file.n < 1 || file.k < 1 {
            return Err(Error::InvalidInput("quadric file: need n >= 1 and k >= 1".into()));
        }
        if file.forms.len() != file.k {
            return Err(Error::InvalidInput(format!(
                "quadric file: expected {} forms, found {}",
                file.k,
                file.forms.len()
            )));
        }
        let mut mats = Vec::with_capacity(file.k);
        for (fi, rows) in file.forms.iter().enumerate() {
            if rows.len() != file.n || rows.iter().any(|r| r.len() != file.n) {
                return Err(Error::InvalidInput(format!(
                    "quadric file: form {} is not an {}x{} matrix",
                    fi + 1,
                    file.n,
                    file.n
                )));
            }
            let mut m = ExactMatrix::zero(file.n, file.n);
            for (i, row) in rows.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    *m.at_mut(i, j) = GaussianRational::parse(s).map_err(|e| {
                        Error::Parse(format!("form {} entry ({},{}): {e}", fi + 1, i + 1, j + 1))
                    })?;
                }
            }
            mats.push(m);
        }
        let q = Quadric::from_matrices(mats)?;
        if q.n != file.n {
            return Err(Error::InvalidInput("quadric file: n does not match matrices".into()));
        }
        Ok(q)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Quadric> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn diag(entries: &[i64]) -> ExactMatrix {
        let n = entries.len();
        let mut m = ExactMatrix::zero(n, n);
        for (i, &e) in entries.iter().enumerate() {
            *m.at_mut(i, i) = GaussianRational::from_i64(e);
        }
        m
    }

    #[test]
    fn validate_examples() {
        assert!(catalog::heisenberg(1).validate().nondegenerate());

        let degenerate = Quadric::from_matrices(vec![diag(&[1, 0])]).unwrap();
        let rep = degenerate.validate();
        assert!(!rep.common_kernel_trivial);
        assert!(!rep.nondegenerate());

        // Two proportional forms: independent fails (and k = 2 > n^2 = 1).
        let dep = Quadric::from_matrices(vec![diag(&[1]), diag(&[2])]).unwrap();
        let rep = dep.validate();
        assert!(rep.common_kernel_trivial);
        assert!(!rep.forms_independent);
    }

    #[test]
    fn hermiticity_is_enforced() {
        let mut m = ExactMatrix::zero(2, 2);
        *m.at_mut(0, 1) = GaussianRational::i(); // H* would need -i at (1,0)
        assert!(HermitianForm::new(m).is_err());
    }

    #[test]
    fn catalog_last_forms() {
        let q = catalog::last(2);
        assert_eq!(q.k(), 4);
        assert!(q.validate().nondegenerate());
        // The form values at z = (1, i): |z1|^2 = 1, |z2|^2 = 1,
        // 2 Re z2 zb1 = 0, 2 Im z2 zb1 = 2.
        let z = vec![GaussianRational::one(), GaussianRational::i()];
        let values: Vec<GaussianRational> = q.forms().iter().map(|f| f.value(&z)).collect();
        assert_eq!(
            values,
            vec![
                GaussianRational::one(),
                GaussianRational::one(),
                GaussianRational::zero(),
                GaussianRational::from_i64(2),
            ]
        );
        for n in 1..=3 {
            assert!(catalog::last(n).validate().nondegenerate());
        }
    }

    #[test]
    fn catalog_palinchak_q5_matrices() {
        let q = catalog::palinchak_q5();
        // H1 = e13 + e31, H2 = e23 + e32, H3 = i e13 - i e31.
        assert_eq!(*q.form(0).matrix().at(0, 2), GaussianRational::one());
        assert_eq!(*q.form(0).matrix().at(2, 0), GaussianRational::one());
        assert_eq!(*q.form(1).matrix().at(1, 2), GaussianRational::one());
        assert_eq!(*q.form(2).matrix().at(0, 2), GaussianRational::i());
        assert_eq!(*q.form(2).matrix().at(2, 0), -GaussianRational::i());
        assert!(q.validate().nondegenerate());
        // Spot-check the printed forms: at z = (1, 2, 1+i) the form values
        // are 2 Re z1 zb3 = 2, 2 Re z2 zb3 = 4, 2 Im z1 zb3 = -2.
        let z = vec![
            GaussianRational::one(),
            GaussianRational::from_i64(2),
            GaussianRational::from_parts(1, 1),
        ];
        let values: Vec<GaussianRational> = q.forms().iter().map(|f| f.value(&z)).collect();
        assert_eq!(
            values,
            vec![
                GaussianRational::from_i64(2),
                GaussianRational::from_i64(4),
                GaussianRational::from_i64(-2),
            ]
        );
    }

    #[test]
    fn random_is_deterministic_and_nondegenerate() {
        let a = random_nondegenerate(2, 2, 7).unwrap();
        let b = random_nondegenerate(2, 2, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().nondegenerate());
        assert!(random_nondegenerate(1, 2, 1).is_err()); // k > n^2
        for seed in 0..10 {
            assert!(random_nondegenerate(3, 2, seed).unwrap().validate().nondegenerate());
        }
    }

    #[test]
    fn equivalent_transform_examples() {
        let q = catalog::heisenberg(1);
        let id_s = ExactMatrix::identity(1);
        let id_rho = RealMatrix::identity(1);
        assert_eq!(q.equivalent_transform(&id_s, &id_rho).unwrap(), q);

        let mut s2 = ExactMatrix::zero(1, 1);
        *s2.at_mut(0, 0) = GaussianRational::from_i64(2);
        let t = q.equivalent_transform(&s2, &id_rho).unwrap();
        assert_eq!(*t.form(0).matrix().at(0, 0), GaussianRational::from_i64(4));

        // Singular inputs rejected.
        assert!(q.equivalent_transform(&ExactMatrix::zero(1, 1), &id_rho).is_err());

        // validate() is invariant under random invertible transforms.
        let q = random_nondegenerate(2, 3, 5).unwrap();
        let s = ExactMatrix::from_rows(vec![
            vec![GaussianRational::from_parts(1, 1), GaussianRational::from_i64(2)],
            vec![GaussianRational::zero(), GaussianRational::from_parts(0, -1)],
        ]);
        let rho = RealMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let t = q.equivalent_transform(&s, &rho).unwrap();
        assert_eq!(t.validate(), q.validate());
    }

    #[test]
    fn hermitian_solve_examples() {
        let q = catalog::heisenberg(1);
        let b = vec![vec![GaussianRational::from_parts(2, -1)]];
        assert_eq!(q.hermitian_solve(&b).unwrap(), Some(vec![GaussianRational::from_parts(2, -1)]));

        // Stacked inconsistency: H1 = diag(1,0), H2 = offdiag(1,1).
        let h1 = diag(&[1, 0]);
        let mut h2 = ExactMatrix::zero(2, 2);
        *h2.at_mut(0, 1) = GaussianRational::one();
        *h2.at_mut(1, 0) = GaussianRational::one();
        let q2 = Quadric::from_matrices(vec![h1, h2]).unwrap();
        assert!(q2.validate().nondegenerate());
        let b = vec![
            vec![GaussianRational::zero(), GaussianRational::one()],
            vec![GaussianRational::zero(), GaussianRational::zero()],
        ];
        assert_eq!(q2.hermitian_solve(&b).unwrap(), None);

        // Constructed consistent case on last(2): B_j = H_j x0 recovers x0.
        let q3 = catalog::last(2);
        let x0 = vec![GaussianRational::one(), GaussianRational::i()];
        let b: Vec<Vec<GaussianRational>> =
            q3.forms().iter().map(|f| f.apply(&x0)).collect();
        assert_eq!(q3.hermitian_solve(&b).unwrap(), Some(x0));

        // Degenerate quadric rejected.
        let dq = Quadric::from_matrices(vec![diag(&[1, 0])]).unwrap();
        assert!(dq.hermitian_solve(&[vec![GaussianRational::zero(); 2]]).is_err());
    }

    #[test]
    fn file_round_trip_and_validation() {
        let q = catalog::palinchak_q5();
        let text = q.to_json();
        let back = Quadric::from_json(&text).unwrap();
        assert_eq!(back, q);
        // Canonical form: load . save is the identity on bytes.
        assert_eq!(back.to_json(), text);

        // Non-Hermitian file is a load error.
        let bad = text.replace("\"-i\"", "\"i\"");
        assert!(Quadric::from_json(&bad).is_err());

        // Shape mismatch is a load error.
        let bad = r#"{"n": 2, "k": 1, "forms": [[["1"]]]}"#;
        assert!(Quadric::from_json(bad).is_err());

        // Grammar violations carry position info.
        let bad = r#"{"n": 1, "k": 1, "forms": [[["1+i"]]]}"#;
        let err = Quadric::from_json(bad).unwrap_err();
        assert!(format!("{err}").contains("entry (1,1)"));
    }

    #[test]
    fn rational_entry_quadrics_load() {
        let text = r#"{"n": 2, "k": 1, "forms": [[["1", "1/2-1i"], ["1/2+1i", "3"]]]}"#;
        let q = Quadric::from_json(text).unwrap();
        assert_eq!(*q.form(0).matrix().at(0, 1), GaussianRational::new(crate::exact::ratio(1, 2), rat(-1)));
        assert!(q.validate().nondegenerate());
    }
}
