//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.
//!
//! `Rational` is always stored reduced with a positive denominator.
//! `GaussianRational` is the complex number `re + im*i` with rational parts;
//! it is the coefficient field for every form, polynomial and vector field
//! in this crate.
//!
//! Text grammar shared by all file formats:
//!
//! ```text
//! RATIONAL := '-'? digits ('/' digits)?
//! COMPLEX  := RATIONAL
//!           | RATIONAL ('+'|'-') RATIONAL 'i'
//!           | RATIONAL 'i'
//!           | '-'? 'i'
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision rational number, reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse the RATIONAL grammar exactly: `'-'? digits ('/' digits)?`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = |msg: &str| Error::Parse(format!("invalid rational {s:?}: {msg}"));
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (num_str, den_str) = match rest.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    if num_str.is_empty() || !num_str.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad("expected digits"));
    }
    let mut num: BigInt = num_str.parse().expect("digits parse as BigInt");
    if neg {
        num = -num;
    }
    let den: BigInt = match den_str {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("expected digits after '/'"));
            }
            let den: BigInt = d.parse().expect("digits parse as BigInt");
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            den
        }
    };
    Ok(Rational::new(num, den))
}

/// Render a rational in the RATIONAL grammar (canonical form).
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact complex number `re + im*i` with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_re(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_re(rat(n))
    }

    /// `a + b*i` from small integers.
    pub fn from_parts(a: i64, b: i64) -> Self {
        GaussianRational { re: rat(a), im: rat(b) }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|x|^2 = re^2 + im^2`, a nonnegative rational, zero iff `x == 0`.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussianRational { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// Parse the COMPLEX grammar exactly.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid complex number {s:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        // Standalone imaginary unit: 'i' or '-i'.
        if s == "i" {
            return Ok(Self::i());
        }
        if s == "-i" {
            return Ok(-Self::i());
        }
        match s.strip_suffix('i') {
            None => Ok(Self::from_re(parse_rational(s)?)),
            Some(body) => {
                // Split at the last sign that separates the two RATIONALs.
                // The real part may itself start with '-', so search from
                // index 1 onward.
                let split = body
                    .char_indices()
                    .rev()
                    .find(|&(idx, c)| idx >= 1 && (c == '+' || c == '-'));
                match split {
                    Some((idx, sign)) if !body[..idx].ends_with('/') => {
                        let re = parse_rational(&body[..idx])?;
                        let im_mag = parse_rational(&body[idx + 1..])?;
                        let im = if sign == '-' { -im_mag } else { im_mag };
                        Ok(GaussianRational { re, im })
                    }
                    _ => Ok(GaussianRational {
                        re: Rational::zero(),
                        im: parse_rational(body)?,
                    }),
                }
            }
        }
    }

    /// Render in the COMPLEX grammar (canonical form: pure reals drop the
    /// imaginary term, pure imaginaries drop the real term, standalone unit
    /// imaginaries render as `i`/`-i`). The compound form always spells the
    /// imaginary coefficient as a RATIONAL, e.g. `1+1i`, since the grammar
    /// has no bare `i` inside a sum.
    pub fn render(&self) -> String {
        if self.im.is_zero() {
            return render_rational(&self.re);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return "i".to_string();
            }
            if (-&self.im).is_one() {
                return "-i".to_string();
            }
            return format!("{}i", render_rational(&self.im));
        }
        if self.im.is_negative() {
            format!("{}-{}i", render_rational(&self.re), render_rational(&-&self.im))
        } else {
            format!("{}+{}i", render_rational(&self.re), render_rational(&self.im))
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero GaussianRational");
        self * &inv
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_grammar_round_trip() {
        for s in ["0", "7", "-3", "5/2", "-11/13"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(render_rational(&r), s);
        }
        // Non-canonical inputs parse but re-render reduced.
        assert_eq!(render_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(render_rational(&parse_rational("-0").unwrap()), "0");
    }

    #[test]
    fn rational_grammar_rejects_garbage() {
        for s in ["", "-", "1/", "/2", "1/0", "1.5", "+3", "2/-3", "a"] {
            assert!(parse_rational(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn complex_grammar_round_trip() {
        for s in ["0", "3", "-5/2", "i", "-i", "2i", "-7/3i", "1+2i", "1-2i", "-1/2+1i", "3-1i", "-3-4i"] {
            let z = GaussianRational::parse(s).unwrap();
            assert_eq!(z.render(), s, "round trip of {s:?}");
        }
    }

    #[test]
    fn complex_grammar_rejects_garbage() {
        // "1+i" is not derivable: the compound form requires RATIONAL 'i'.
        for s in ["", "i2", "1+", "1++2i", "2i+1", "1+i2", "--i", "1/ i", "1+i", "3-i"] {
            assert!(GaussianRational::parse(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn conj_is_involution_and_norm_nonnegative() {
        let z = GaussianRational::parse("3/2-5i").unwrap();
        assert_eq!(z.conj().conj(), z);
        assert!(z.norm_sq() > Rational::zero());
        assert!(GaussianRational::zero().norm_sq().is_zero());
    }

    #[test]
    fn field_arithmetic() {
        let z = GaussianRational::from_parts(2, 1);
        let w = GaussianRational::from_parts(0, -3);
        assert_eq!(&z * &w, GaussianRational::from_parts(3, -6));
        let inv = z.inv().unwrap();
        assert_eq!(&z * &inv, GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
        // |zw|^2 = |z|^2 |w|^2
        assert_eq!((&z * &w).norm_sq(), z.norm_sq() * w.norm_sq());
    }
}
