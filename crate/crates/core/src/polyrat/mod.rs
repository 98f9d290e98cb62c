//! Exact univariate polynomials and rational functions over the rationals,
//! plus numerical root extraction.
//!
//! Everything up to root finding is exact. Coefficients are stored in
//! ascending powers of `s`.

mod modp;
mod poly;
mod ratfunc;
mod roots;

pub use poly::Poly;
pub use ratfunc::{RatEval, RatFunc};
pub use roots::{poly_roots, RootSet, DEFAULT_ROOT_TOL};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used for every exact coefficient.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // only reached for magnitudes beyond f64 range
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Formats an exact rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Rounds `x` to a decimal rational with `sig_digits` significant digits.
///
/// Used where a floating-point design quantity (gain, corner frequency)
/// has to enter the exact algebra.
pub fn rational_from_f64(x: f64, sig_digits: u32) -> Rational {
    if x == 0.0 || !x.is_finite() {
        return Rational::zero();
    }
    let exponent = x.abs().log10().floor() as i32;
    let shift = sig_digits as i32 - 1 - exponent;
    let ten = BigInt::from(10);
    if shift >= 0 {
        let scale = num_traits::pow(ten, shift as usize);
        let scaled = (x * 10f64.powi(shift)).round();
        Rational::new(BigInt::from(scaled as i128), scale)
    } else {
        let scale = num_traits::pow(ten, (-shift) as usize);
        let scaled = (x / 10f64.powi(-shift)).round();
        Rational::from_integer(BigInt::from(scaled as i128) * scale)
    }
}
