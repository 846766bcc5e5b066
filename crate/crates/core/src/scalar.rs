//! Scalar fields used by the matrix kernels.
//!
//! Two fields are supported: [`GaussianRational`], the exact field Q(i) with
//! arbitrary-precision components, and [`Complex64`], its double-precision
//! mirror. Generic code is written against the [`Scalar`] trait.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// A field element usable as a matrix entry.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for exact fields, where `is_negligible` ignores its tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// The real rational `n / d`.
    fn from_ratio(n: i64, d: i64) -> Self;
    /// The imaginary unit √−1.
    fn imag_unit() -> Self;
    fn to_c64(&self) -> Complex64;
    fn is_zero(&self) -> bool;
    fn to_value(&self) -> ComplexValue;

    /// Zero for exact scalars; modulus at most `tol` for floating scalars.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= tol
        }
    }

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_finite(&self) -> bool {
        true
    }

    /// `re + im·i` with small integer parts; convenience for constants.
    fn complex(re: i64, im: i64) -> Self {
        Self::from_i64(re) + Self::from_i64(im) * Self::imag_unit()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Complex64::new(n as f64 / d as f64, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_value(&self) -> ComplexValue {
        ComplexValue::Float(*self)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// An element `re + im·√−1` of Q(i) with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts reduced with positive denominators after
/// every operation.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `(re_n/re_d) + (im_n/im_d)·i`.
    pub fn from_fracs(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            im: BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        <Self as Scalar>::imag_unit()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Decimal `p/q` strings for the two parts, denominator always present.
    pub fn to_strings(&self) -> (String, String) {
        (rational_string(&self.re), rational_string(&self.im))
    }

    pub fn from_strings(re: &str, im: &str) -> Result<Self> {
        Ok(Self {
            re: parse_rational(re)?,
            im: parse_rational(im)?,
        })
    }

    /// The nearest exact value with denominators at most `max_den`, if both
    /// parts are within `tol` of such a rational.
    pub fn approximate(z: Complex64, max_den: i64, tol: f64) -> Option<Self> {
        Some(Self {
            re: small_rational(z.re, max_den, tol)?,
            im: small_rational(z.im, max_den, tol)?,
        })
    }
}

/// A complex value that is either exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexValue {
    Exact(GaussianRational),
    Float(Complex64),
}

impl ComplexValue {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            Self::Exact(g) => g.to_c64(),
            Self::Float(z) => *z,
        }
    }

    /// Exact equality for two exact values, otherwise `|Δ| < tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => a == b,
            _ => (self.to_c64() - other.to_c64()).norm() < tol,
        }
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(g) => write!(f, "{g}"),
            Self::Float(z) => write!(f, "{z}"),
        }
    }
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let r = match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?),
    };
    Ok(r)
}

fn small_rational(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    for d in 1..=max_den {
        let n = (x * d as f64).round();
        if (x - n / d as f64).abs() < tol && n.abs() < 1e15 {
            return Some(BigRational::new(BigInt::from(n as i64), BigInt::from(d)));
        }
    }
    None
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fallback for components whose parts overflow f64 individually.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn from_i64(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
    fn imag_unit() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::from_integer(BigInt::from(1)),
        }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_value(&self) -> ComplexValue {
        ComplexValue::Exact(self.clone())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like `BigRational`.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * inv
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussianRational {
        GaussianRational::from_fracs(a, b, c, d)
    }

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let x = g(2, -4, 6, 8);
        assert_eq!(x.to_strings(), ("-1/2".to_string(), "3/4".to_string()));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * i, GaussianRational::from_i64(-1));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = g(1, 3, -2, 5);
        let b = g(-7, 2, 1, 9);
        assert_eq!((a.clone() * b.clone()) / b, a);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn string_round_trip() {
        let a = g(-5, 12, 7, 3);
        let (re, im) = a.to_strings();
        assert_eq!(GaussianRational::from_strings(&re, &im).unwrap(), a);
        assert_eq!(
            GaussianRational::from_strings("4", "-2/6").unwrap(),
            g(4, 1, -1, 3)
        );
        assert!(GaussianRational::from_strings("1/0", "0").is_err());
        assert!(GaussianRational::from_strings("x", "0").is_err());
    }

    #[test]
    fn approximate_small_rationals() {
        let z = Complex64::new(-0.5, 1.0 / 3.0 + 1e-12);
        assert_eq!(
            GaussianRational::approximate(z, 16, 1e-9),
            Some(g(-1, 2, 1, 3))
        );
        assert_eq!(
            GaussianRational::approximate(Complex64::new(0.123456789, 0.0), 16, 1e-9),
            None
        );
    }

    #[test]
    fn display() {
        assert_eq!(g(1, 2, -1, 1).to_string(), "1/2-1i");
        assert_eq!(g(0, 1, 3, 2).to_string(), "3/2i");
    }
}
