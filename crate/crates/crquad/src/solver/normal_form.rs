//! Normal forms of the low-weight components of `aut Q`.
//!
//! Every weight from -2 to 3 has a rigid parameter shape:
//!
//! ```text
//! X_-2 = (0, q),                          q real
//! X_-1 = (p, 2i<z, pb>),                  p complex
//! X_0  = (C z, rho w),                    2 Re <Cz,zb> = rho <z,zb>, rho real
//! X_1  = (a w + A(z,z), 2i<z, ab w>),     <A(z,z),zb> = 2i<z, ab <z,zb>>
//! X_2  = (B(w) z, r(w,w)),                Re <B(u)z,zb> = r(<z,zb>,u),
//!                                         Im <B(<z,zb>)z,zb> = 0, r real
//! X_3  = (d(w,w) + D(w)(z,z), 2i<z, db(w,w)>),
//!        <D(u)(z,z),zb> = 4i<z, db(<z,zb>,u)>, <D(<z,zb>)(z,z),zb> = 0
//! ```
//!
//! `normal_form` extracts the parameters from a zero-residual homogeneous
//! field and re-verifies every constraint exactly; a shape deviation would
//! falsify the classification and is reported as an internal inconsistency.

use num_traits::Zero;

use crate::exact::{ExactMatrix, GaussianRational, Matrix, Rational, RealMatrix};
use crate::poly::{mono_zero, VarSpec, WPoly};
use crate::quadric::Quadric;
use crate::solver::{tangency_residual, VectorField};
use crate::{Error, Result};

/// Tagged union over the weight with the extracted parameters.
#[derive(Clone, Debug)]
pub enum NormalForm {
    /// Weight -2: real translations along Re w.
    MinusTwo { q: Vec<Rational> },
    /// Weight -1: parabolic translations parametrized by `p` in C^n.
    MinusOne { p: Vec<GaussianRational> },
    /// Weight 0: linear fields `(Cz, rho w)`.
    Zero { c: ExactMatrix, rho: RealMatrix },
    /// Weight 1: `a` as an n x k matrix (column `j` multiplies `w_j`) and the
    /// symmetric quadratic form `A` (one symmetric n x n matrix per output
    /// coordinate).
    One { a: ExactMatrix, a_quad: Vec<ExactMatrix> },
    /// Weight 2: `B(w) = sum_a B_a w_a` and the real symmetric `r` (one
    /// symmetric k x k matrix per output coordinate).
    Two { b: Vec<ExactMatrix>, r: Vec<RealMatrix> },
    /// Weight 3: `d` (one symmetric complex k x k matrix per output
    /// coordinate) and `D` (per w-variable, one symmetric n x n matrix per
    /// output coordinate).
    Three { d: Vec<ExactMatrix>, d_quad: Vec<Vec<ExactMatrix>> },
}

impl NormalForm {
    pub fn weight(&self) -> i32 {
        match self {
            NormalForm::MinusTwo { .. } => -2,
            NormalForm::MinusOne { .. } => -1,
            NormalForm::Zero { .. } => 0,
            NormalForm::One { .. } => 1,
            NormalForm::Two { .. } => 2,
            NormalForm::Three { .. } => 3,
        }
    }
}

fn shape_err(msg: impl Into<String>) -> Error {
    Error::InternalInconsistency(msg.into())
}

/// `(H_j x . zb)`-style pairing of a matrix: `sum_{l,r} M_{l,r} z_r zb_l`.
fn pair_poly(rs: VarSpec, m: &ExactMatrix) -> WPoly {
    let mut p = WPoly::zero(rs);
    for l in 0..m.nrows() {
        for r in 0..m.ncols() {
            let c = m.at(l, r);
            if !c.is_zero() {
                p = p.add(&WPoly::z(rs, r).mul(&WPoly::zbar(rs, l)).scale(c));
            }
        }
    }
    p
}

/// Split a field-ring polynomial into (z-monomial, w-part coefficient poly)
/// pieces is avoided; extraction below reads concrete exponents directly.
fn coeff_of(p: &WPoly, mono_exps: &[(usize, u16)]) -> GaussianRational {
    let spec = p.spec();
    let mut m = mono_zero(spec.nvars());
    for &(v, e) in mono_exps {
        m[v] += e;
    }
    p.coeff(&m)
}

/// Verify the field is weighted-homogeneous of weight `m` with zero residual.
fn check_preconditions(q: &Quadric, x: &VectorField, m: i32) -> Result<()> {
    if x.n() != q.n() || x.k() != q.k() {
        return Err(Error::DimensionMismatch("field/quadric type mismatch".into()));
    }
    if !(-2..=3).contains(&m) {
        return Err(Error::InvalidInput(format!("normal forms cover weights -2..=3, got {m}")));
    }
    for p in x.f.iter().chain(x.g.iter()) {
        if !p.is_homogeneous_of_weight(if x.f.iter().any(|f| std::ptr::eq(f, p)) {
            (m + 1) as i64
        } else {
            (m + 2) as i64
        }) {
            return Err(Error::InvalidInput(format!(
                "field is not weighted-homogeneous of weight {m}"
            )));
        }
    }
    let res = tangency_residual(q, x)?;
    if res.iter().any(|p| !p.is_zero()) {
        return Err(Error::InvalidInput("field has nonzero tangency residual".into()));
    }
    Ok(())
}

/// Extract the Proposition-style normal form of a zero-residual
/// weighted-homogeneous field of weight `m` and verify its defining
/// constraints exactly.
pub fn normal_form(q: &Quadric, x: &VectorField, m: i32) -> Result<NormalForm> {
    check_preconditions(q, x, m)?;
    let (n, k) = (q.n(), q.k());
    let fs = VarSpec::field(n, k);
    let rs = VarSpec::restricted(n, k);
    let h: Vec<WPoly> = (0..k).map(|j| q.form_poly(j)).collect();

    match m {
        -2 => {
            if x.f.iter().any(|p| !p.is_zero()) {
                return Err(shape_err("weight -2 field must have f = 0"));
            }
            let mut qv = Vec::with_capacity(k);
            for gj in &x.g {
                let c = coeff_of(gj, &[]);
                if !c.im.is_zero() {
                    return Err(shape_err("weight -2 parameter q must be real"));
                }
                qv.push(c.re);
            }
            Ok(NormalForm::MinusTwo { q: qv })
        }
        -1 => {
            let p: Vec<GaussianRational> = x.f.iter().map(|fl| coeff_of(fl, &[])).collect();
            for (j, gj) in x.g.iter().enumerate() {
                let mut expected = WPoly::zero(fs);
                for (l, pl) in p.iter().enumerate() {
                    if pl.is_zero() {
                        continue;
                    }
                    expected = expected.add(&field_z_linear(q, j, l, fs).scale(&pl.conj()));
                }
                let expected = expected.scale(&GaussianRational::from_parts(0, 2));
                if *gj != expected {
                    return Err(shape_err("weight -1 field must have g = 2i<z, pb>"));
                }
            }
            Ok(NormalForm::MinusOne { p })
        }
        0 => {
            let c = Matrix::from_fn(n, n, |l, r| coeff_of(&x.f[l], &[(fs.z(r), 1)]));
            let mut rho = RealMatrix::zero(k, k);
            for (j, gj) in x.g.iter().enumerate() {
                if gj.z_degree() > 0 {
                    return Err(shape_err("weight 0 field must have z-free g"));
                }
                for l in 0..k {
                    let v = coeff_of(gj, &[(fs.w(l), 1)]);
                    if !v.im.is_zero() {
                        return Err(shape_err("weight 0 parameter rho must be real"));
                    }
                    *rho.at_mut(j, l) = v.re;
                }
            }
            // 2 Re <Cz, zb> = rho <z, zb> as restricted-ring identity.
            for j in 0..k {
                let lhs = pair_poly(rs, &q.form(j).matrix().mul(&c)).plus_conj()?;
                let mut rhs = WPoly::zero(rs);
                for l in 0..k {
                    rhs = rhs.add(&h[l].scale(&GaussianRational::from_re(rho.at(j, l).clone())));
                }
                if lhs != rhs {
                    return Err(shape_err("weight 0 constraint 2Re<Cz,zb> = rho<z,zb> fails"));
                }
            }
            Ok(NormalForm::Zero { c, rho })
        }
        1 => {
            let a = Matrix::from_fn(n, k, |l, j| coeff_of(&x.f[l], &[(fs.w(j), 1)]));
            let a_quad = extract_sym_quadratic(&x.f, |i| fs.z(i), n)?;
            // g must be exactly 2i<z, ab w>.
            for (j, gj) in x.g.iter().enumerate() {
                let mut expected = WPoly::zero(fs);
                for l in 0..n {
                    let mut abar_w = WPoly::zero(fs);
                    for alpha in 0..k {
                        let c = a.at(l, alpha).conj();
                        if !c.is_zero() {
                            abar_w = abar_w.add(&WPoly::w(fs, alpha).scale(&c));
                        }
                    }
                    if !abar_w.is_zero() {
                        expected = expected.add(&field_z_linear(q, j, l, fs).mul(&abar_w));
                    }
                }
                let expected = expected.scale(&GaussianRational::from_parts(0, 2));
                if *gj != expected {
                    return Err(shape_err("weight 1 field must have g = 2i<z, ab w>"));
                }
            }
            // <A(z,z), zb> = 2i <z, ab <z,zb>>.
            for j in 0..k {
                let mut lhs = WPoly::zero(rs);
                for l in 0..n {
                    lhs = lhs.add(&sym_to_poly(rs, &a_quad[l]).mul(&zbar_pairing_rs(q, j, l)));
                }
                let mut rhs = WPoly::zero(rs);
                for l in 0..n {
                    let mut abar_h = WPoly::zero(rs);
                    for alpha in 0..k {
                        let c = a.at(l, alpha).conj();
                        if !c.is_zero() {
                            abar_h = abar_h.add(&h[alpha].scale(&c));
                        }
                    }
                    rhs = rhs.add(&z_linear_rs(q, j, l).mul(&abar_h));
                }
                let rhs = rhs.scale(&GaussianRational::from_parts(0, 2));
                if lhs != rhs {
                    return Err(shape_err("weight 1 constraint <A(z,z),zb> = 2i<z,ab<z,zb>> fails"));
                }
            }
            Ok(NormalForm::One { a, a_quad })
        }
        2 => {
            // f = B(w) z: extract B_alpha[l][r] from z_r w_alpha.
            let b: Vec<ExactMatrix> = (0..k)
                .map(|alpha| {
                    Matrix::from_fn(n, n, |l, r| {
                        coeff_of(&x.f[l], &[(fs.z(r), 1), (fs.w(alpha), 1)])
                    })
                })
                .collect();
            for fl in &x.f {
                if fl.z_degree() != 1 && !fl.is_zero() {
                    return Err(shape_err("weight 2 field must have f = B(w) z"));
                }
            }
            // g = r(w,w), real symmetric coefficients.
            let mut r_mats = Vec::with_capacity(k);
            for gj in &x.g {
                if gj.z_degree() > 0 {
                    return Err(shape_err("weight 2 field must have z-free g"));
                }
                let mut rm = RealMatrix::zero(k, k);
                for alpha in 0..k {
                    for beta in alpha..k {
                        let c = if alpha == beta {
                            coeff_of(gj, &[(fs.w(alpha), 2)])
                        } else {
                            coeff_of(gj, &[(fs.w(alpha), 1), (fs.w(beta), 1)])
                        };
                        if !c.im.is_zero() {
                            return Err(shape_err("weight 2 parameter r must be real"));
                        }
                        let half = if alpha == beta {
                            c.re.clone()
                        } else {
                            c.re.clone() / crate::exact::rat(2)
                        };
                        *rm.at_mut(alpha, beta) = half.clone();
                        *rm.at_mut(beta, alpha) = half;
                    }
                }
                r_mats.push(rm);
            }
            // Re <B(u)z, zb> = r(<z,zb>, u) and Im <B(<z,zb>)z, zb> = 0.
            for j in 0..k {
                let mut p_u = WPoly::zero(rs);
                let mut p_h = WPoly::zero(rs);
                for alpha in 0..k {
                    let pp = pair_poly(rs, &q.form(j).matrix().mul(&b[alpha]));
                    p_u = p_u.add(&pp.mul(&WPoly::u(rs, alpha)));
                    p_h = p_h.add(&pp.mul(&h[alpha]));
                }
                let mut rhs = WPoly::zero(rs);
                for alpha in 0..k {
                    for beta in 0..k {
                        let c = GaussianRational::from_re(r_mats[j].at(alpha, beta).clone());
                        if !c.is_zero() {
                            rhs = rhs.add(&h[alpha].mul(&WPoly::u(rs, beta)).scale(&c));
                        }
                    }
                }
                if p_u.plus_conj()? != rhs.scale(&GaussianRational::from_i64(2)) {
                    return Err(shape_err("weight 2 constraint Re<B(u)z,zb> = r(<z,zb>,u) fails"));
                }
                if p_h.sub(&p_h.conj()?) != WPoly::zero(rs) {
                    return Err(shape_err("weight 2 constraint Im<B(<z,zb>)z,zb> = 0 fails"));
                }
            }
            Ok(NormalForm::Two { b, r: r_mats })
        }
        3 => {
            // f = d(w,w) + D(w)(z,z).
            let mut d = Vec::with_capacity(n);
            for fl in &x.f {
                let mut dm = ExactMatrix::zero(k, k);
                for alpha in 0..k {
                    for beta in alpha..k {
                        let c = if alpha == beta {
                            coeff_of(fl, &[(fs.w(alpha), 2)])
                        } else {
                            coeff_of(fl, &[(fs.w(alpha), 1), (fs.w(beta), 1)])
                        };
                        let half = if alpha == beta {
                            c
                        } else {
                            c.scale(&crate::exact::ratio(1, 2))
                        };
                        *dm.at_mut(alpha, beta) = half.clone();
                        *dm.at_mut(beta, alpha) = half;
                    }
                }
                d.push(dm);
            }
            let mut d_quad = Vec::with_capacity(k);
            for alpha in 0..k {
                let mut per_out = Vec::with_capacity(n);
                for fl in &x.f {
                    let mut m = ExactMatrix::zero(n, n);
                    for i in 0..n {
                        for jj in i..n {
                            let c = if i == jj {
                                coeff_of(fl, &[(fs.z(i), 2), (fs.w(alpha), 1)])
                            } else {
                                coeff_of(fl, &[(fs.z(i), 1), (fs.z(jj), 1), (fs.w(alpha), 1)])
                            };
                            let half = if i == jj {
                                c
                            } else {
                                c.scale(&crate::exact::ratio(1, 2))
                            };
                            *m.at_mut(i, jj) = half.clone();
                            *m.at_mut(jj, i) = half;
                        }
                    }
                    per_out.push(m);
                }
                d_quad.push(per_out);
            }
            // No z^4 part is allowed.
            for fl in &x.f {
                if fl.z_degree() > 2 {
                    return Err(shape_err("weight 3 field must have f = d(w,w) + D(w)(z,z)"));
                }
            }
            // g = 2i<z, db(w,w)>.
            for (j, gj) in x.g.iter().enumerate() {
                let mut expected = WPoly::zero(fs);
                for l in 0..n {
                    let mut dbar_ww = WPoly::zero(fs);
                    for alpha in 0..k {
                        for beta in 0..k {
                            let c = d[l].at(alpha, beta).conj();
                            if !c.is_zero() {
                                dbar_ww = dbar_ww
                                    .add(&WPoly::w(fs, alpha).mul(&WPoly::w(fs, beta)).scale(&c));
                            }
                        }
                    }
                    if !dbar_ww.is_zero() {
                        expected = expected.add(&field_z_linear(q, j, l, fs).mul(&dbar_ww));
                    }
                }
                let expected = expected.scale(&GaussianRational::from_parts(0, 2));
                if *gj != expected {
                    return Err(shape_err("weight 3 field must have g = 2i<z, db(w,w)>"));
                }
            }
            // <D(u)(z,z), zb> = 4i<z, db(<z,zb>,u)> and <D(<z,zb>)(z,z), zb> = 0.
            for j in 0..k {
                let mut lhs_u = WPoly::zero(rs);
                let mut lhs_h = WPoly::zero(rs);
                for alpha in 0..k {
                    for l in 0..n {
                        let dq = sym_to_poly(rs, &d_quad[alpha][l]);
                        if dq.is_zero() {
                            continue;
                        }
                        let paired = dq.mul(&zbar_pairing_rs(q, j, l));
                        lhs_u = lhs_u.add(&paired.mul(&WPoly::u(rs, alpha)));
                        lhs_h = lhs_h.add(&paired.mul(&h[alpha]));
                    }
                }
                let mut rhs = WPoly::zero(rs);
                for l in 0..n {
                    let mut db_hu = WPoly::zero(rs);
                    for alpha in 0..k {
                        for beta in 0..k {
                            let c = d[l].at(alpha, beta).conj();
                            if !c.is_zero() {
                                db_hu = db_hu.add(&h[alpha].mul(&WPoly::u(rs, beta)).scale(&c));
                            }
                        }
                    }
                    rhs = rhs.add(&z_linear_rs(q, j, l).mul(&db_hu));
                }
                let rhs = rhs.scale(&GaussianRational::from_parts(0, 4));
                if lhs_u != rhs {
                    return Err(shape_err(
                        "weight 3 constraint <D(u)(z,z),zb> = 4i<z,db(<z,zb>,u)> fails",
                    ));
                }
                if !lhs_h.is_zero() {
                    return Err(shape_err("weight 3 constraint <D(<z,zb>)(z,z),zb> = 0 fails"));
                }
            }
            Ok(NormalForm::Three { d, d_quad })
        }
        _ => unreachable!(),
    }
}

/// `(H_j z)_l` in the field ring.
fn field_z_linear(q: &Quadric, j: usize, l: usize, fs: VarSpec) -> WPoly {
    let mut p = WPoly::zero(fs);
    for r in 0..q.n() {
        let c = q.form(j).matrix().at(l, r);
        if !c.is_zero() {
            p = p.add(&WPoly::z(fs, r).scale(c));
        }
    }
    p
}

fn z_linear_rs(q: &Quadric, j: usize, l: usize) -> WPoly {
    super::z_linear(q, j, l)
}

fn zbar_pairing_rs(q: &Quadric, j: usize, l: usize) -> WPoly {
    super::zbar_pairing(q, j, l)
}

/// `sum_{i,j} M_{ij} z_i z_j` for a symmetric matrix, in the restricted ring.
fn sym_to_poly(rs: VarSpec, m: &ExactMatrix) -> WPoly {
    let mut p = WPoly::zero(rs);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let c = m.at(i, j);
            if !c.is_zero() {
                p = p.add(&WPoly::z(rs, i).mul(&WPoly::z(rs, j)).scale(c));
            }
        }
    }
    p
}

/// Extract the symmetric quadratic z-form of each f-component: output `l`
/// gets the symmetric matrix `M` with `sum_{ij} M_{ij} z_i z_j` matching the
/// z-quadratic part of `f_l`.
fn extract_sym_quadratic(
    f: &[WPoly],
    zvar: impl Fn(usize) -> usize,
    n: usize,
) -> Result<Vec<ExactMatrix>> {
    let mut out = Vec::with_capacity(f.len());
    for fl in f {
        let mut m = ExactMatrix::zero(n, n);
        for i in 0..n {
            for j in i..n {
                let c = if i == j {
                    coeff_of(fl, &[(zvar(i), 2)])
                } else {
                    coeff_of(fl, &[(zvar(i), 1), (zvar(j), 1)])
                };
                let half = if i == j { c } else { c.scale(&crate::exact::ratio(1, 2)) };
                *m.at_mut(i, j) = half.clone();
                *m.at_mut(j, i) = half;
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::catalog;
    use crate::solver::graded_component;

    #[test]
    fn extract_minus_one() {
        // X = (p, 2i<z,pb>) with p = e1 on heisenberg(2).
        let q = catalog::heisenberg(2);
        let fs = VarSpec::field(2, 1);
        let p_field = VectorField::new(
            2,
            1,
            vec![WPoly::one(fs), WPoly::zero(fs)],
            vec![WPoly::z(fs, 0).scale(&GaussianRational::from_parts(0, 2))],
        )
        .unwrap();
        match normal_form(&q, &p_field, -1).unwrap() {
            NormalForm::MinusOne { p } => {
                assert_eq!(p, vec![GaussianRational::one(), GaussianRational::zero()]);
            }
            other => panic!("wrong variant {other:?}"),
        }
    }

    #[test]
    fn extract_euler_field() {
        let q = catalog::heisenberg(1);
        let fs = VarSpec::field(1, 1);
        let euler = VectorField::new(
            1,
            1,
            vec![WPoly::z(fs, 0)],
            vec![WPoly::w(fs, 0).scale(&GaussianRational::from_i64(2))],
        )
        .unwrap();
        match normal_form(&q, &euler, 0).unwrap() {
            NormalForm::Zero { c, rho } => {
                assert_eq!(*c.at(0, 0), GaussianRational::one());
                assert_eq!(*rho.at(0, 0), crate::exact::rat(2));
            }
            other => panic!("wrong variant {other:?}"),
        }
    }

    #[test]
    fn extract_weight_one() {
        // X = (w + 2i z^2, 2i z w) on heisenberg(1): a = 1, A = 2i.
        let q = catalog::heisenberg(1);
        let fs = VarSpec::field(1, 1);
        let f = WPoly::w(fs, 0)
            .add(&WPoly::z(fs, 0).pow(2).scale(&GaussianRational::from_parts(0, 2)));
        let g = WPoly::z(fs, 0).mul(&WPoly::w(fs, 0)).scale(&GaussianRational::from_parts(0, 2));
        let x = VectorField::new(1, 1, vec![f], vec![g]).unwrap();
        match normal_form(&q, &x, 1).unwrap() {
            NormalForm::One { a, a_quad } => {
                assert_eq!(*a.at(0, 0), GaussianRational::one());
                assert_eq!(*a_quad[0].at(0, 0), GaussianRational::from_parts(0, 2));
            }
            other => panic!("wrong variant {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_weight_and_nontangent() {
        let q = catalog::heisenberg(1);
        let fs = VarSpec::field(1, 1);
        let euler = VectorField::new(
            1,
            1,
            vec![WPoly::z(fs, 0)],
            vec![WPoly::w(fs, 0).scale(&GaussianRational::from_i64(2))],
        )
        .unwrap();
        assert!(normal_form(&q, &euler, 1).is_err());
        let bad = VectorField::new(
            1,
            1,
            vec![WPoly::zero(fs)],
            vec![WPoly::constant(fs, GaussianRational::i())],
        )
        .unwrap();
        assert!(normal_form(&q, &bad, -2).is_err());
    }

    #[test]
    fn every_computed_basis_field_has_a_normal_form() {
        let q = crate::quadric::random_nondegenerate(2, 2, 42).unwrap();
        for m in -2..=2 {
            let comp = graded_component(&q, m).unwrap();
            for b in &comp.basis {
                let nf = normal_form(&q, b, m).unwrap();
                assert_eq!(nf.weight(), m);
            }
        }
    }
}
