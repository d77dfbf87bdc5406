//! Weighted sparse polynomials in the two rings the tangency identity lives
//! in: the field ring `C[z_1..z_n, w_1..w_k]` of holomorphic coefficients and
//! the restricted ring `C[z_1..z_n, zb_1..zb_n, u_1..u_k]` obtained on the
//! quadric, where `zb` is the formal conjugate of `z`.
//!
//! Weights: `[z] = [zb] = 1`, `[w] = [u] = 2`. Restriction substitutes
//! `w_j = u_j + i <z,zb>_j` and is a weight-preserving ring homomorphism.
//!
//! Monomial order (canonical everywhere): ascending weight, then descending
//! lexicographic exponent vectors with variable order
//! `z_1 < ... < z_n < zb_1 < ... < zb_n < u_1 < ... < u_k`
//! (field ring: `z_1 < ... < z_n < w_1 < ... < w_k`). Exponents are machine
//! integers; total degree stays below 64 for every in-scope computation.

mod mpoly;

pub use mpoly::{mono_mul, mono_zero, poly_matrix_rank, MPoly, Mono};

use crate::exact::GaussianRational;
use crate::quadric::Quadric;
use crate::{Error, Result};

/// Which of the two rings a polynomial lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RingKind {
    /// `(z, w)`: holomorphic coefficients of vector fields.
    Field,
    /// `(z, zb, u)`: values on the quadric.
    Restricted,
}

/// Ring descriptor: CR dimension, codimension, ring kind.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VarSpec {
    pub n: usize,
    pub k: usize,
    pub kind: RingKind,
}

impl VarSpec {
    pub fn field(n: usize, k: usize) -> Self {
        assert!(n >= 1 && k >= 1);
        VarSpec { n, k, kind: RingKind::Field }
    }

    pub fn restricted(n: usize, k: usize) -> Self {
        assert!(n >= 1 && k >= 1);
        VarSpec { n, k, kind: RingKind::Restricted }
    }

    pub fn nvars(&self) -> usize {
        match self.kind {
            RingKind::Field => self.n + self.k,
            RingKind::Restricted => 2 * self.n + self.k,
        }
    }

    /// Index of `z_i` (0-based `i`).
    pub fn z(&self, i: usize) -> usize {
        assert!(i < self.n);
        i
    }

    /// Index of `w_j` (field ring only).
    pub fn w(&self, j: usize) -> usize {
        assert!(self.kind == RingKind::Field && j < self.k);
        self.n + j
    }

    /// Index of `zb_i` (restricted ring only).
    pub fn zbar(&self, i: usize) -> usize {
        assert!(self.kind == RingKind::Restricted && i < self.n);
        self.n + i
    }

    /// Index of `u_j` (restricted ring only).
    pub fn u(&self, j: usize) -> usize {
        assert!(self.kind == RingKind::Restricted && j < self.k);
        2 * self.n + j
    }

    /// Per-variable weights.
    pub fn weights(&self) -> Vec<i64> {
        let mut w = vec![1i64; self.nvars()];
        match self.kind {
            RingKind::Field => w[self.n..].iter_mut().for_each(|x| *x = 2),
            RingKind::Restricted => w[2 * self.n..].iter_mut().for_each(|x| *x = 2),
        }
        w
    }

    pub fn var_name(&self, idx: usize) -> String {
        match self.kind {
            RingKind::Field => {
                if idx < self.n {
                    format!("z{}", idx + 1)
                } else {
                    format!("w{}", idx - self.n + 1)
                }
            }
            RingKind::Restricted => {
                if idx < self.n {
                    format!("z{}", idx + 1)
                } else if idx < 2 * self.n {
                    format!("zb{}", idx - self.n + 1)
                } else {
                    format!("u{}", idx - 2 * self.n + 1)
                }
            }
        }
    }
}

/// Weighted sparse polynomial over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct WPoly {
    spec: VarSpec,
    poly: MPoly,
}

impl WPoly {
    pub fn zero(spec: VarSpec) -> Self {
        WPoly { spec, poly: MPoly::zero(spec.nvars()) }
    }

    pub fn constant(spec: VarSpec, c: GaussianRational) -> Self {
        WPoly { spec, poly: MPoly::constant(spec.nvars(), c) }
    }

    pub fn one(spec: VarSpec) -> Self {
        Self::constant(spec, GaussianRational::one())
    }

    pub fn var(spec: VarSpec, idx: usize) -> Self {
        WPoly { spec, poly: MPoly::var(spec.nvars(), idx) }
    }

    pub fn z(spec: VarSpec, i: usize) -> Self {
        Self::var(spec, spec.z(i))
    }

    pub fn w(spec: VarSpec, j: usize) -> Self {
        Self::var(spec, spec.w(j))
    }

    pub fn zbar(spec: VarSpec, i: usize) -> Self {
        Self::var(spec, spec.zbar(i))
    }

    pub fn u(spec: VarSpec, j: usize) -> Self {
        Self::var(spec, spec.u(j))
    }

    pub fn monomial(spec: VarSpec, mono: Mono, c: GaussianRational) -> Self {
        WPoly { spec, poly: MPoly::monomial(spec.nvars(), mono, c) }
    }

    pub fn from_mpoly(spec: VarSpec, poly: MPoly) -> Self {
        assert_eq!(poly.nvars(), spec.nvars());
        WPoly { spec, poly }
    }

    pub fn spec(&self) -> VarSpec {
        self.spec
    }

    pub fn mpoly(&self) -> &MPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn same_spec(&self, o: &WPoly) {
        assert_eq!(self.spec, o.spec, "ring mismatch");
    }

    pub fn add(&self, o: &WPoly) -> WPoly {
        self.same_spec(o);
        WPoly { spec: self.spec, poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &WPoly) -> WPoly {
        self.same_spec(o);
        WPoly { spec: self.spec, poly: self.poly.sub(&o.poly) }
    }

    pub fn neg(&self) -> WPoly {
        WPoly { spec: self.spec, poly: self.poly.neg() }
    }

    pub fn mul(&self, o: &WPoly) -> WPoly {
        self.same_spec(o);
        WPoly { spec: self.spec, poly: self.poly.mul(&o.poly) }
    }

    pub fn scale(&self, c: &GaussianRational) -> WPoly {
        WPoly { spec: self.spec, poly: self.poly.scale(c) }
    }

    pub fn pow(&self, e: u32) -> WPoly {
        WPoly { spec: self.spec, poly: self.poly.pow(e) }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussianRational)> {
        self.poly.terms()
    }

    pub fn coeff(&self, mono: &Mono) -> GaussianRational {
        self.poly.coeff(mono)
    }

    pub fn derivative(&self, var: usize) -> WPoly {
        WPoly { spec: self.spec, poly: self.poly.derivative(var) }
    }

    pub fn total_degree(&self) -> u32 {
        self.poly.total_degree()
    }

    /// Degree in the `z` block (max over terms of the summed z-exponents).
    pub fn z_degree(&self) -> u32 {
        self.poly.degree_over(0..self.spec.n)
    }

    /// Degree in the `w` (or `u`) block.
    pub fn last_block_degree(&self) -> u32 {
        match self.spec.kind {
            RingKind::Field => self.poly.degree_over(self.spec.n..self.spec.nvars()),
            RingKind::Restricted => self.poly.degree_over(2 * self.spec.n..self.spec.nvars()),
        }
    }

    /// The common weight of a weighted-homogeneous polynomial, `None` for a
    /// mixed-weight polynomial. The zero polynomial is rejected.
    pub fn weight_of(&self) -> Result<Option<i64>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("weight of the zero polynomial is undefined".into()));
        }
        Ok(self.poly.homogeneous_weight(&self.spec.weights()))
    }

    pub fn is_homogeneous_of_weight(&self, w: i64) -> bool {
        self.is_zero() || self.poly.homogeneous_weight(&self.spec.weights()) == Some(w)
    }

    /// Formal conjugation in the restricted ring: swaps `z` with `zb`, fixes
    /// `u`, conjugates coefficients. Rejects field-ring input (`w` has no
    /// conjugate inside that ring).
    pub fn conj(&self) -> Result<WPoly> {
        if self.spec.kind != RingKind::Restricted {
            return Err(Error::InvalidInput(
                "conjugation is defined on the restricted ring only".into(),
            ));
        }
        let n = self.spec.n;
        let mut src: Vec<usize> = (0..self.spec.nvars()).collect();
        for i in 0..n {
            src.swap(i, n + i);
        }
        Ok(WPoly { spec: self.spec, poly: self.poly.conj_coeffs().permute_vars(&src) })
    }

    /// `self + conj(self)`; restricted ring only.
    pub fn plus_conj(&self) -> Result<WPoly> {
        Ok(self.add(&self.conj()?))
    }

    /// Restriction to the quadric: the ring homomorphism from the field ring
    /// to the restricted ring with `z_i -> z_i` and
    /// `w_j -> u_j + i <z,zb>_j`. Weight-preserving.
    pub fn restrict(&self, q: &Quadric) -> Result<WPoly> {
        if self.spec.kind != RingKind::Field {
            return Err(Error::InvalidInput("restrict expects a field-ring polynomial".into()));
        }
        if self.spec.n != q.n() || self.spec.k != q.k() {
            return Err(Error::DimensionMismatch(format!(
                "polynomial ring is ({},{}), quadric is ({},{})",
                self.spec.n,
                self.spec.k,
                q.n(),
                q.k()
            )));
        }
        let rspec = VarSpec::restricted(self.spec.n, self.spec.k);
        // w_j image and its powers, built on demand.
        let images: Vec<WPoly> = (0..self.spec.k)
            .map(|j| WPoly::u(rspec, j).add(&q.form_poly(j).scale(&GaussianRational::i())))
            .collect();
        let mut max_pow = vec![0u16; self.spec.k];
        for (m, _) in self.poly.terms() {
            for j in 0..self.spec.k {
                max_pow[j] = max_pow[j].max(m[self.spec.n + j]);
            }
        }
        let mut powers: Vec<Vec<WPoly>> = Vec::with_capacity(self.spec.k);
        for j in 0..self.spec.k {
            let mut p = vec![WPoly::one(rspec)];
            for e in 1..=max_pow[j] {
                let next = p[(e - 1) as usize].mul(&images[j]);
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = WPoly::zero(rspec);
        for (m, c) in self.poly.terms() {
            let mut zmono = mono_zero(rspec.nvars());
            zmono[..self.spec.n].copy_from_slice(&m[..self.spec.n]);
            let mut term = WPoly::monomial(rspec, zmono, c.clone());
            for j in 0..self.spec.k {
                let e = m[self.spec.n + j];
                if e > 0 {
                    term = term.mul(&powers[j][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Terms in the canonical display order: descending lexicographic
    /// exponent vectors (within the usual homogeneous slices this matches the
    /// fixed monomial order).
    fn display_terms(&self) -> Vec<(&Mono, &GaussianRational)> {
        let mut ts: Vec<_> = self.poly.terms().collect();
        ts.sort_by(|(a, _), (b, _)| b.cmp(a));
        ts
    }
}

impl std::fmt::Display for WPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.display_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        self.spec.var_name(v)
                    } else {
                        format!("{}^{}", self.spec.var_name(v), e)
                    }
                })
                .collect();
            let coeff = c.render();
            if vars.is_empty() {
                write!(f, "{}", wrap(&coeff))?;
            } else if c == &GaussianRational::one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", wrap(&coeff), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for WPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

fn wrap(coeff: &str) -> String {
    // Compound coefficients ("1+2i", "3-1i") get parentheses; a leading sign
    // alone does not need them.
    if coeff.chars().skip(1).any(|ch| ch == '-' || ch == '+') {
        format!("({coeff})")
    } else {
        coeff.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational as G;
    use crate::quadric::Quadric;

    fn heis1() -> Quadric {
        crate::quadric::catalog::heisenberg(1)
    }

    #[test]
    fn weight_of_examples() {
        let fs = VarSpec::field(1, 1);
        assert_eq!(WPoly::z(fs, 0).weight_of().unwrap(), Some(1));
        assert_eq!(WPoly::w(fs, 0).weight_of().unwrap(), Some(2));
        let mixed = WPoly::z(fs, 0).add(&WPoly::w(fs, 0));
        assert_eq!(mixed.weight_of().unwrap(), None);
        assert!(WPoly::zero(fs).weight_of().is_err());
    }

    #[test]
    fn conj_examples() {
        let rs = VarSpec::restricted(2, 1);
        // i*z1 -> -i*zb1
        let p = WPoly::z(rs, 0).scale(&G::i());
        assert_eq!(p.conj().unwrap(), WPoly::zbar(rs, 0).scale(&-G::i()));
        // u1 is real
        let u = WPoly::u(rs, 0);
        assert_eq!(u.conj().unwrap(), u);
        // z1*zb2 -> zb1*z2
        let p = WPoly::z(rs, 0).mul(&WPoly::zbar(rs, 1));
        assert_eq!(p.conj().unwrap(), WPoly::zbar(rs, 0).mul(&WPoly::z(rs, 1)));
        // involution
        let q = p.scale(&G::from_parts(2, 5)).add(&u);
        assert_eq!(q.conj().unwrap().conj().unwrap(), q);
        // field-ring input rejected
        assert!(WPoly::z(VarSpec::field(2, 1), 0).conj().is_err());
    }

    #[test]
    fn restrict_examples() {
        let q = heis1();
        let fs = VarSpec::field(1, 1);
        let rs = VarSpec::restricted(1, 1);
        // w -> u + i z zb
        let w = WPoly::w(fs, 0);
        let expected =
            WPoly::u(rs, 0).add(&WPoly::z(rs, 0).mul(&WPoly::zbar(rs, 0)).scale(&G::i()));
        assert_eq!(w.restrict(&q).unwrap(), expected);
        // z untouched, constants untouched
        assert_eq!(WPoly::z(fs, 0).restrict(&q).unwrap(), WPoly::z(rs, 0));
        let c = WPoly::constant(fs, G::from_parts(3, -2));
        assert_eq!(c.restrict(&q).unwrap(), WPoly::constant(rs, G::from_parts(3, -2)));
        // dimension mismatch rejected
        let fs21 = VarSpec::field(2, 1);
        assert!(WPoly::z(fs21, 0).restrict(&q).is_err());
    }

    #[test]
    fn restrict_is_ring_homomorphism_and_weight_preserving() {
        let q = crate::quadric::catalog::heisenberg(2);
        let fs = VarSpec::field(2, 1);
        let p1 = WPoly::z(fs, 0).mul(&WPoly::w(fs, 0)).add(&WPoly::z(fs, 1).pow(3));
        let p2 = WPoly::w(fs, 0).sub(&WPoly::z(fs, 0).mul(&WPoly::z(fs, 1)));
        let r = |p: &WPoly| p.restrict(&q).unwrap();
        assert_eq!(r(&p1.mul(&p2)), r(&p1).mul(&r(&p2)));
        assert_eq!(r(&p1.add(&p2)), r(&p1).add(&r(&p2)));
        // weight preservation on the homogeneous p2 (weight 2)
        assert_eq!(p2.weight_of().unwrap(), Some(2));
        assert_eq!(r(&p2).weight_of().unwrap(), Some(2));
    }

    #[test]
    fn display_reads_naturally() {
        let fs = VarSpec::field(2, 2);
        let p = WPoly::z(fs, 0).pow(2).mul(&WPoly::w(fs, 1)).scale(&G::from_parts(0, 2));
        assert_eq!(p.to_string(), "2i*z1^2*w2");
    }
}
