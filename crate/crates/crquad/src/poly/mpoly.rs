//! Generic sparse multivariate polynomials over the Gaussian rationals.
//!
//! This is the shared engine under the weighted rings of [`crate::poly`],
//! the symbolic rank certificates of [`crate::conditions`], and the
//! characteristic-module arithmetic of [`crate::charmod`]. Exponents are
//! small machine integers; every in-scope computation stays far below the
//! documented total-degree bound of 64.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::exact::GaussianRational;

/// Exponent vector, one entry per variable.
pub type Mono = SmallVec<[u16; 16]>;

pub fn mono_zero(nvars: usize) -> Mono {
    SmallVec::from_elem(0u16, nvars)
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn mono_total_degree(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Graded-lex comparison used for leading terms in exact division.
fn grlex(a: &Mono, b: &Mono) -> std::cmp::Ordering {
    mono_total_degree(a).cmp(&mono_total_degree(b)).then_with(|| a.cmp(b))
}

/// Sparse polynomial: map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Mono, GaussianRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        p.accumulate(mono_zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars);
        let mut m = mono_zero(nvars);
        m[idx] = 1;
        Self::monomial(nvars, m, GaussianRational::one())
    }

    pub fn monomial(nvars: usize, mono: Mono, c: GaussianRational) -> Self {
        debug_assert_eq!(mono.len(), nvars);
        let mut p = Self::zero(nvars);
        p.accumulate(mono, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Mono) -> GaussianRational {
        self.terms.get(mono).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Add `c * mono`, dropping the term if it cancels to zero.
    pub fn accumulate(&mut self, mono: Mono, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.accumulate(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, mono: &Mono, c: &GaussianRational) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(mono_mul(m, mono), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] = e - 1;
            out.accumulate(m2, c.scale(&crate::exact::rat(e as i64)));
        }
        out
    }

    /// Coefficient-wise complex conjugation (exponents untouched).
    pub fn conj_coeffs(&self) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.conj());
        }
        out
    }

    /// Re-index variables: entry `j` of each new exponent vector is taken
    /// from position `src[j]` of the old one. `src` must be a permutation.
    pub fn permute_vars(&self, src: &[usize]) -> MPoly {
        assert_eq!(src.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let m2: Mono = src.iter().map(|&s| m[s]).collect();
            out.terms.insert(m2, c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[v];
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(mono_total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Maximum over terms of the degree summed over `vars`.
    pub fn degree_over(&self, vars: std::ops::Range<usize>) -> u32 {
        self.terms
            .keys()
            .map(|m| m[vars.clone()].iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Common weighted degree if homogeneous, `None` otherwise.
    /// The zero polynomial reports `None` as well; callers that must reject
    /// it do so explicitly.
    pub fn homogeneous_weight(&self, weights: &[i64]) -> Option<i64> {
        debug_assert_eq!(weights.len(), self.nvars);
        let mut seen: Option<i64> = None;
        for m in self.terms.keys() {
            let w: i64 = m.iter().zip(weights).map(|(&e, &wt)| e as i64 * wt).sum();
            match seen {
                None => seen = Some(w),
                Some(prev) if prev != w => return None,
                _ => {}
            }
        }
        seen
    }

    fn leading(&self) -> Option<(&Mono, &GaussianRational)> {
        self.terms.iter().max_by(|(a, _), (b, _)| grlex(a, b))
    }

    /// Exact division: `Some(q)` with `self == q * d` when the quotient
    /// exists in the ring, `None` otherwise.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.leading().expect("nonzero divisor");
        let (dm, dc) = (dm.clone(), dc.clone());
        let dc_inv = dc.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero remainder");
            let mut qm = mono_zero(self.nvars);
            for v in 0..self.nvars {
                let (a, b) = (rm[v], dm[v]);
                if a < b {
                    return None;
                }
                qm[v] = a - b;
            }
            let qc = rc * &dc_inv;
            quot.accumulate(qm.clone(), qc.clone());
            rem = rem.sub(&d.mul_term(&qm, &qc));
        }
        Some(quot)
    }
}

impl std::fmt::Debug for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})*{:?}", c, m.as_slice())?;
        }
        Ok(())
    }
}

/// Rank of a polynomial matrix over the rational function field, by
/// fraction-free (Bareiss) elimination with exact polynomial division and
/// full pivoting on the sparsest entry. This equals the maximal rank attained
/// on a Zariski-dense set of evaluation points, so `rank < t` proves that
/// every `t x t` minor vanishes identically.
pub fn poly_matrix_rank(mut m: Vec<Vec<MPoly>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut prev: Option<MPoly> = None;
    let mut t = 0;
    while t < rows.min(cols) {
        // Sparsest nonzero pivot in the remaining block.
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() {
                    let sz = m[i][j].num_terms();
                    if best.map_or(true, |(bs, _, _)| sz < bs) {
                        best = Some((sz, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            break;
        };
        m.swap(t, pi);
        if pj != t {
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
        }
        let pivot = m[t][t].clone();
        for i in t + 1..rows {
            for j in t + 1..cols {
                let num = pivot.mul(&m[i][j]).sub(&m[i][t].mul(&m[t][j]));
                m[i][j] = match &prev {
                    None => num,
                    Some(p) => num.div_exact(p).expect("Bareiss division is exact"),
                };
            }
            m[i][t] = MPoly::zero(pivot.nvars());
        }
        prev = Some(pivot);
        t += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational as G;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn ring_identities() {
        let a = x(2, 0).add(&MPoly::constant(2, G::from_i64(3)));
        let b = x(2, 1).sub(&x(2, 0));
        let c = x(2, 0).mul(&x(2, 1));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        // d/dx (x^2 y) = 2 x y; value at (2, 3) is 12.
        let p = x(2, 0).pow(2).mul(&x(2, 1));
        let d = p.derivative(0);
        let v = d.eval(&[G::from_i64(2), G::from_i64(3)]);
        assert_eq!(v, G::from_i64(12));
    }

    #[test]
    fn exact_division() {
        let p = x(2, 0).add(&x(2, 1)); // x + y
        let q = x(2, 0).sub(&x(2, 1)); // x - y
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&p), Some(q.clone()));
        assert_eq!(prod.div_exact(&q), Some(p.clone()));
        assert_eq!(x(2, 0).div_exact(&x(2, 1)), None);
    }

    #[test]
    fn homogeneous_weight_detection() {
        let w = [1i64, 2];
        let p = x(2, 0).pow(2); // weight 2
        let q = x(2, 1); // weight 2
        assert_eq!(p.add(&q).homogeneous_weight(&w), Some(2));
        assert_eq!(p.add(&x(2, 0)).homogeneous_weight(&w), None);
    }

    #[test]
    fn poly_rank_detects_identically_singular() {
        // [[x, y], [x, y]] has symbolic rank 1.
        let m = vec![vec![x(2, 0), x(2, 1)], vec![x(2, 0), x(2, 1)]];
        assert_eq!(poly_matrix_rank(m), 1);
        // [[x, y], [y, x]] has symbolic rank 2 (det = x^2 - y^2 != 0).
        let m = vec![vec![x(2, 0), x(2, 1)], vec![x(2, 1), x(2, 0)]];
        assert_eq!(poly_matrix_rank(m), 2);
    }
}
