//! The characteristic submodule of a quadric and its graded quotient.
//!
//! `M(Q)` is the submodule of `(C[s])^k` generated by the coefficient
//! vectors of `(s_1 <z,zb>_1 + ... + s_k <z,zb>_k)^2 <phi, zb>` as `phi`
//! runs over the constant basis vectors of `C^n` (polynomial `phi` is
//! absorbed by module multiplication). The generators are homogeneous of
//! degree 2, so the degree-`d` slice of `M` is the span of (degree `d-2`
//! monomials) x (generators) and graded quotient dimensions come from plain
//! exact ranks — no Groebner machinery.
//!
//! Alongside `M`, `a_solution_space` computes the polynomial solution space
//! of `Delta^2 <a(u), zb> = 0` directly; the two sides control each other's
//! degree bounds (both are expected to live in total degree <= k). Dimensions
//! here are complex dimensions (both problems are C-linear), unlike the real
//! dimensions of the solver's weight components.

use std::collections::BTreeMap;

use crate::exact::{GaussianRational, SparseSystem};
use crate::poly::{mono_zero, MPoly, Mono, VarSpec, WPoly};
use crate::quadric::Quadric;
use crate::Result;

/// Element of `(C[s])^k`, homogeneous of a recorded degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    pub degree: usize,
    /// `k` polynomials in `s_1..s_k`.
    pub comps: Vec<MPoly>,
}

/// Graded dimensions of the quotient `(C[s])^k / M` per degree `0..=D`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedDims {
    pub dims: Vec<usize>,
}

impl GradedDims {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// All degree-`d` exponent vectors in `v` variables, descending
/// lexicographic.
fn monomials_of_degree(v: usize, d: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = mono_zero(v);
    fn rec(var: usize, rem: usize, v: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
        if var == v {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if var == v - 1 {
            cur[var] = rem as u16;
            out.push(cur.clone());
            cur[var] = 0;
            return;
        }
        for e in (0..=rem).rev() {
            cur[var] = e as u16;
            rec(var + 1, rem - e, v, cur, out);
        }
        cur[var] = 0;
    }
    rec(0, d, v, &mut cur, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for t in 0..k.min(n - k) {
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

/// The degree-2 generators of `M(Q)`: expand the generating polynomial in
/// mixed variables `(z, zb, s)` and collect the `(z^alpha zb^beta)`-
/// coefficient vectors with `|alpha| = 2`, `|beta| = 3`.
pub fn charmod_generators(q: &Quadric) -> Result<Vec<ModuleElement>> {
    q.ensure_nondegenerate()?;
    let (n, k) = (q.n(), q.k());
    let nv = 2 * n + k; // z: 0..n, zb: n..2n, s: 2n..2n+k
    // sigma = sum_a s_a <z,zb>_a.
    let mut sigma = MPoly::zero(nv);
    for a in 0..k {
        for l in 0..n {
            for r in 0..n {
                let c = q.form(a).matrix().at(l, r);
                if c.is_zero() {
                    continue;
                }
                let mut m = mono_zero(nv);
                m[r] += 1;
                m[n + l] += 1;
                m[2 * n + a] += 1;
                sigma = sigma.add(&MPoly::monomial(nv, m, c.clone()));
            }
        }
    }
    let sigma2 = sigma.mul(&sigma);
    let mut out: Vec<ModuleElement> = Vec::new();
    for phi in 0..n {
        // <e_phi, zb>_j = sum_r (H_j)_{r,phi} zb_r; generator component j is
        // sigma^2 times that.
        let mut grouped: BTreeMap<Mono, Vec<MPoly>> = BTreeMap::new();
        for j in 0..k {
            let mut pair = MPoly::zero(nv);
            for r in 0..n {
                let c = q.form(j).matrix().at(r, phi);
                if c.is_zero() {
                    continue;
                }
                let mut m = mono_zero(nv);
                m[n + r] += 1;
                pair = pair.add(&MPoly::monomial(nv, m, c.clone()));
            }
            let full = sigma2.mul(&pair);
            for (mono, c) in full.terms() {
                let mut zpart: Mono = mono.clone();
                let mut spart = mono_zero(k);
                for a in 0..k {
                    spart[a] = mono[2 * n + a];
                    zpart[2 * n + a] = 0;
                }
                let entry = grouped
                    .entry(zpart)
                    .or_insert_with(|| vec![MPoly::zero(k); k]);
                entry[j] = entry[j].add(&MPoly::monomial(k, spart, c.clone()));
            }
        }
        for (_, comps) in grouped {
            if comps.iter().all(MPoly::is_zero) {
                continue;
            }
            let el = ModuleElement { degree: 2, comps };
            if !out.contains(&el) {
                out.push(el);
            }
        }
    }
    Ok(out)
}

/// Graded dimensions of `(C[s])^k / M` for degrees `0..=max_degree`, by
/// exact rank of the degree slices.
pub fn quotient_graded_dims(q: &Quadric, max_degree: usize) -> Result<GradedDims> {
    let k = q.k();
    let gens = charmod_generators(q)?;
    let mut dims = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let smons = monomials_of_degree(k, d);
        let total = k * smons.len();
        if d < 2 {
            dims.push(total);
            continue;
        }
        let index: BTreeMap<Mono, usize> =
            smons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let shift_mons = monomials_of_degree(k, d - 2);
        let mut sys: SparseSystem<GaussianRational> = SparseSystem::new(total);
        for shift in &shift_mons {
            for gen in &gens {
                let mut row = Vec::new();
                for (j, comp) in gen.comps.iter().enumerate() {
                    for (mono, c) in comp.terms() {
                        let shifted: Mono =
                            mono.iter().zip(shift.iter()).map(|(a, b)| a + b).collect();
                        let col = j * smons.len() + index[&shifted];
                        row.push((col as u32, c.clone()));
                    }
                }
                sys.add_row(row);
            }
        }
        // The slice span is the transpose picture: rows are elements, so
        // rank(rows) is the slice dimension.
        let rank = sys.rank();
        dims.push(total - rank);
    }
    Ok(GradedDims { dims })
}

/// Solution space of `Delta^2 <a(u), zb> = 0` over polynomial vectors `a(u)`
/// of total degree <= `max_degree`: complex dimension and canonical basis.
pub struct ASolutionSpace {
    pub dim: usize,
    /// Each basis vector: `n` polynomials in `u_1..u_k`.
    pub basis: Vec<Vec<MPoly>>,
}

pub fn a_solution_space(q: &Quadric, max_degree: usize) -> Result<ASolutionSpace> {
    q.ensure_nondegenerate()?;
    let (n, k) = (q.n(), q.k());
    let rs = VarSpec::restricted(n, k);
    let h: Vec<WPoly> = (0..k).map(|j| q.form_poly(j)).collect();
    let h_prod: Vec<Vec<WPoly>> =
        (0..k).map(|a| (0..k).map(|b| h[a].mul(&h[b])).collect()).collect();
    let zbp: Vec<Vec<WPoly>> = (0..k)
        .map(|j| (0..n).map(|l| zbar_pairing(q, j, l)).collect())
        .collect();

    // u-monomials of degree 0..=max_degree, in a fixed order.
    let mut umons: Vec<Mono> = Vec::new();
    for d in 0..=max_degree {
        umons.extend(monomials_of_degree(k, d));
    }
    let cols = umons.len() * n;
    let col = |mi: usize, l: usize| (mi * n + l) as u32;

    // Delta^2(u^mu) = sum_{a,b} d2(u^mu)/du_a du_b h_a h_b as a restricted
    // polynomial per u-monomial.
    let delta2: Vec<WPoly> = umons
        .iter()
        .map(|mu| {
            let mut acc = WPoly::zero(rs);
            for a in 0..k {
                let ea = mu[a] as i64;
                if ea == 0 {
                    continue;
                }
                for b in 0..k {
                    // d2(u^mu)/du_a du_b, ordered pairs counted separately.
                    let coef: i64 =
                        if a == b { ea * (ea - 1) } else { ea * (mu[b] as i64) };
                    if coef == 0 {
                        continue;
                    }
                    let mut m2 = mu.clone();
                    m2[a] -= 1;
                    if a == b {
                        m2[a] -= 1;
                    } else {
                        m2[b] -= 1;
                    }
                    let mut umono = mono_zero(rs.nvars());
                    for t in 0..k {
                        umono[2 * n + t] = m2[t];
                    }
                    let term = h_prod[a][b]
                        .mul(&WPoly::monomial(rs, umono, GaussianRational::from_i64(coef)));
                    acc = acc.add(&term);
                }
            }
            acc
        })
        .collect();

    let mut rows: BTreeMap<(usize, Mono), Vec<(u32, GaussianRational)>> = BTreeMap::new();
    for (mi, d2) in delta2.iter().enumerate() {
        if d2.is_zero() {
            continue;
        }
        for l in 0..n {
            for j in 0..k {
                if zbp[j][l].is_zero() {
                    continue;
                }
                let p = d2.mul(&zbp[j][l]);
                for (mono, c) in p.terms() {
                    rows.entry((j, mono.clone())).or_default().push((col(mi, l), c.clone()));
                }
            }
        }
    }
    let mut sys: SparseSystem<GaussianRational> = SparseSystem::new(cols);
    for (_, row) in rows {
        sys.add_row(row);
    }
    let (_rank, vectors) = sys.nullspace();
    let basis = vectors
        .into_iter()
        .map(|v| {
            (0..n)
                .map(|l| {
                    let mut p = MPoly::zero(k);
                    for (mi, mu) in umons.iter().enumerate() {
                        let c = v[col(mi, l) as usize].clone();
                        if !c.is_zero() {
                            p = p.add(&MPoly::monomial(k, mu.clone(), c));
                        }
                    }
                    p
                })
                .collect()
        })
        .collect::<Vec<_>>();
    Ok(ASolutionSpace { dim: basis.len(), basis })
}

fn zbar_pairing(q: &Quadric, j: usize, l: usize) -> WPoly {
    let rs = VarSpec::restricted(q.n(), q.k());
    let mut p = WPoly::zero(rs);
    for r in 0..q.n() {
        let c = q.form(j).matrix().at(r, l);
        if !c.is_zero() {
            p = p.add(&WPoly::zbar(rs, r).scale(c));
        }
    }
    p
}

/// `k * C(d + k - 1, k - 1)`: dimension of the full degree-`d` slice of
/// `(C[s])^k`.
pub fn full_slice_dim(k: usize, d: usize) -> usize {
    k * binomial(d + k - 1, k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::{catalog, random_nondegenerate};

    #[test]
    fn heisenberg_generators_are_s_squared() {
        let q = catalog::heisenberg(1);
        let gens = charmod_generators(&q).unwrap();
        assert_eq!(gens.len(), 1);
        let mut s2 = mono_zero(1);
        s2[0] = 2;
        assert_eq!(gens[0].comps[0], MPoly::monomial(1, s2, GaussianRational::one()));
    }

    #[test]
    fn heisenberg_quotient_dims() {
        let q = catalog::heisenberg(1);
        let d = quotient_graded_dims(&q, 3).unwrap();
        assert_eq!(d.dims, vec![1, 1, 0, 0]);
        assert_eq!(d.total(), 2);
    }

    #[test]
    fn sphere_quotient_dims() {
        // n = 2, k = 1, H = I: all coefficient vectors are multiples of s^2,
        // so the quotient is again C[s]/(s^2).
        let q = catalog::heisenberg(2);
        let d = quotient_graded_dims(&q, 3).unwrap();
        assert_eq!(d.dims, vec![1, 1, 0, 0]);
    }

    #[test]
    fn a_solution_space_examples() {
        // heisenberg(1): a = a0 + a1 u, the u^2 coefficient is forced to 0.
        let q = catalog::heisenberg(1);
        let s = a_solution_space(&q, 2).unwrap();
        assert_eq!(s.dim, 2);
        // sphere n=2: two free vector coefficients.
        let q = catalog::heisenberg(2);
        let s = a_solution_space(&q, 2).unwrap();
        assert_eq!(s.dim, 4);
    }

    #[test]
    fn quotient_vanishes_above_k_and_a_dims_stabilize() {
        for (n, k, seed) in [(2usize, 1usize, 1u64), (2, 2, 2), (2, 3, 3)] {
            let q = random_nondegenerate(n, k, seed).unwrap();
            let dims = quotient_graded_dims(&q, k + 2).unwrap();
            for d in (k + 1)..=(k + 2) {
                assert_eq!(dims.dims[d], 0, "({n},{k}) quotient dim at degree {d}");
            }
            let at_k = a_solution_space(&q, k).unwrap().dim;
            let at_k2 = a_solution_space(&q, k + 2).unwrap().dim;
            assert_eq!(at_k, at_k2, "({n},{k}) a-dims stabilize");
            // Nondecreasing in D.
            let lower = a_solution_space(&q, k.saturating_sub(1)).unwrap().dim;
            assert!(lower <= at_k);
        }
    }

    #[test]
    fn a_solutions_annihilate_exactly() {
        let q = random_nondegenerate(2, 2, 77).unwrap();
        let sol = a_solution_space(&q, 2).unwrap();
        // Re-substitute each basis vector into Delta^2 <a, zb> and check it
        // vanishes identically (independent of the assembled system).
        let rs = VarSpec::restricted(2, 2);
        let h: Vec<WPoly> = (0..2).map(|j| q.form_poly(j)).collect();
        for a in &sol.basis {
            for j in 0..2 {
                let mut acc = WPoly::zero(rs);
                for l in 0..2 {
                    // Delta^2 a_l = sum_{ab} d2 a_l/du_a du_b h_a h_b
                    for va in 0..2usize {
                        for vb in 0..2usize {
                            let second = a[l].derivative(va).derivative(vb);
                            if second.is_zero() {
                                continue;
                            }
                            // lift the u-polynomial into the restricted ring
                            let mut lifted = WPoly::zero(rs);
                            for (mu, c) in second.terms() {
                                let mut m = mono_zero(rs.nvars());
                                for t in 0..2 {
                                    m[2 * 2 + t] = mu[t];
                                }
                                lifted = lifted.add(&WPoly::monomial(rs, m, c.clone()));
                            }
                            acc = acc.add(
                                &lifted.mul(&h[va]).mul(&h[vb]).mul(&zbar_pairing(&q, j, l)),
                            );
                        }
                    }
                }
                assert!(acc.is_zero(), "basis vector does not solve the equation");
            }
        }
    }
}
