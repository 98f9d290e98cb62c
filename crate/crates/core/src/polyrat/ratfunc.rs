use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::horner;
use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Reduced fraction `num / den` of polynomials.
///
/// The denominator is monic and coprime to the numerator, so the overall
/// constant lives in the numerator and equal functions compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = Poly::gcd(&num, &den).expect("den is nonzero");
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides num"),
                den.exact_div(&g).expect("gcd divides den"),
            )
        };
        let lc = den.leading_coeff().expect("den is nonzero").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// `1 / den`.
    pub fn inv_poly(den: &Poly) -> Result<Self> {
        RatFunc::new(Poly::one(), den.clone())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `deg(den) - deg(num)`; `None` for the zero function, which is
    /// treated as proper with unbounded relative degree.
    pub fn relative_degree(&self) -> Option<i64> {
        let n = self.num.degree()?;
        Some(self.den.degree().unwrap_or(0) as i64 - n as i64)
    }

    pub fn is_proper(&self) -> bool {
        self.relative_degree().is_none_or(|r| r >= 0)
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.relative_degree().is_none_or(|r| r >= 1)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(RatFunc::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        self * &RatFunc::from_poly(p.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        RatFunc {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// Value at a rational point, or `None` at a pole.
    pub fn eval_rational(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(x) / d)
        }
    }

    /// `num(s0) / den(s0)` by Horner in double precision.
    pub fn eval(&self, s0: Complex64) -> Result<Complex64> {
        self.evaluator().eval(s0)
    }

    /// Caches double-precision coefficients for repeated evaluation.
    pub fn evaluator(&self) -> RatEval {
        RatEval {
            num: self.num.to_f64(),
            den: self.den.to_f64(),
        }
    }
}

/// Double-precision snapshot of a [`RatFunc`] for frequency sweeps.
#[derive(Clone, Debug)]
pub struct RatEval {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl RatEval {
    pub fn eval(&self, s0: Complex64) -> Result<Complex64> {
        if self.num.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let d = horner(&self.den, s0);
        let scale = self
            .den
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * s0.norm().powi(k as i32))
            .sum::<f64>();
        if d.norm() <= scale * 1e-14 {
            return Err(Error::EvaluationAtPole {
                re: s0.re,
                im: s0.im,
            });
        }
        Ok(horner(&self.num, s0) / d)
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den).expect("nonzero denominators");
        let a_cof = self.den.exact_div(&g).expect("gcd divides");
        let b_cof = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &b_cof) + &(&rhs.num * &a_cof);
        let den = &self.den * &b_cof;
        RatFunc::reduce(num, den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = Poly::gcd(&self.num, &rhs.den).expect("nonzero");
        let g2 = Poly::gcd(&rhs.num, &self.den).expect("nonzero");
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g1).expect("gcd divides");
        let n2 = rhs.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff().expect("nonzero").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc { (&self).$m(rhs) }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn cancels_to_constant() {
        let sum = rf(&[1], &[1, 1]) + rf(&[0, 1], &[1, 1]);
        assert!(sum.is_one());
    }

    #[test]
    fn inverse_pair_with_plant_denominator() {
        let d = p(&[100, 200, 130, 30, 1]);
        let f = RatFunc::inv_poly(&d).unwrap().mul_poly(&d);
        assert!(f.is_one());
    }

    #[test]
    fn division_reduces() {
        let a = rf(&[0, 1], &[-1, 0, 1]);
        let b = rf(&[1], &[-1, 1]);
        assert_eq!(a.checked_div(&b).unwrap(), rf(&[0, 1], &[1, 1]));
        assert_eq!(a.checked_div(&RatFunc::zero()), Err(Error::DivisionByZeroFunction));
    }

    #[test]
    fn canonical_form() {
        let f = rf(&[2, 2], &[4, 6, 2]);
        assert_eq!(f.num(), &p(&[1]));
        assert_eq!(f.den(), &p(&[2, 1]));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(RatFunc::one().eval(Complex64::new(3.0, -2.0)).unwrap(), Complex64::new(1.0, 0.0));
        let p11 = rf(&[10, 10, 1], &[100, 200, 130, 30, 1]);
        assert!((p11.eval(Complex64::new(0.0, 0.0)).unwrap() - 0.1).norm() < 1e-15);
        let v = rf(&[1], &[1, 1]).eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        assert!(matches!(
            rf(&[1], &[1, 1]).eval(Complex64::new(-1.0, 0.0)),
            Err(Error::EvaluationAtPole { .. })
        ));
    }

    #[test]
    fn relative_degree_and_properness() {
        assert_eq!(rf(&[1], &[1, 1]).relative_degree(), Some(1));
        assert!(!rf(&[0, 0, 1], &[1, 1]).is_proper());
        assert!(RatFunc::zero().is_strictly_proper());
    }

    fn small_rf() -> impl Strategy<Value = RatFunc> {
        (
            prop::collection::vec(-4i64..=4, 0..=4),
            prop::collection::vec(-4i64..=4, 1..=4),
        )
            .prop_filter_map("nonzero denominator", |(n, d)| {
                RatFunc::new(Poly::from_i64(&n), Poly::from_i64(&d)).ok()
            })
    }

    proptest! {
        #[test]
        fn field_addition_inverts(a in small_rf(), c in small_rf()) {
            prop_assert_eq!(&(&a + &c) - &c, a);
        }

        #[test]
        fn evaluation_is_multiplicative(f in small_rf(), g in small_rf(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let s0 = Complex64::new(re, im);
            let (Ok(fv), Ok(gv)) = (f.eval(s0), g.eval(s0)) else { return Ok(()) };
            prop_assume!(fv.norm() < 1e6 && gv.norm() < 1e6);
            let fg = (&f * &g).eval(s0).unwrap();
            let expected = fv * gv;
            prop_assert!((fg - expected).norm() <= 1e-12 * expected.norm().max(1e-300) + 1e-300);
        }
    }
}
