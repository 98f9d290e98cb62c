use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{format_rational, int, to_f64, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `s` with exact rational coefficients.
///
/// `coeffs[k]` is the coefficient of `s^k`. The vector is empty for the zero
/// polynomial and otherwise ends in a nonzero coefficient, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The indeterminate `s`.
    pub fn s() -> Self {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly { coeffs: vec![c] }.trim()
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Poly { coeffs }
    }

    /// Builds from ascending coefficients; trailing zeros are dropped.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Poly { coeffs }.trim()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Monic polynomial with the given roots, `prod (s - r)`.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            acc * Poly::from_coeffs(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `None` standing in for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for nonzero constants and for zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, exp: u32) -> Poly {
        (0..exp).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division: returns `(q, r)` with `self = q * divisor + r` and
    /// `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZeroPoly)?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.div_rem(self).is_ok_and(|(_, r)| r.is_zero())
    }

    /// Monic greatest common divisor by Euclid's algorithm over the rationals.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        if a.is_zero() || b.is_zero() {
            return Ok(if a.is_zero() { b.monic() } else { a.monic() });
        }
        if a.is_constant() || b.is_constant() {
            return Ok(Poly::one());
        }
        if let Some(g) = super::modp::gcd(a, b) {
            return Ok(g);
        }
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y)?;
            x = y;
            y = r.monic();
        }
        Ok(x)
    }

    /// Yun's square-free factorisation: returns monic `(factor, multiplicity)`
    /// pairs with pairwise coprime square-free factors, omitting trivial ones.
    pub fn square_free(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = Poly::gcd(&f, &df).expect("f is nonzero");
        let mut b = f.exact_div(&a).expect("gcd divides f");
        let mut c = df.exact_div(&a).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut k = 1;
        while !b.is_constant() {
            a = Poly::gcd(&b, &d).expect("b is nonconstant");
            if !a.is_constant() {
                out.push((a.clone(), k));
            }
            b = b.exact_div(&a).expect("gcd divides b");
            c = d.exact_div(&a).expect("gcd divides d");
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a complex point in double precision.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        horner(&self.to_f64(), s)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Coefficient strings in ascending order, `"p/q"` or integers.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

pub(crate) fn horner(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

fn add_coeffs(a: &[Rational], b: &[Rational], negate_b: bool) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(k).cloned().unwrap_or_else(Rational::zero);
        out.push(if negate_b { x - y } else { x + y });
    }
    Poly::from_coeffs(out)
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "{}s", if show_mag { "*" } else { "" })?,
                _ => write!(f, "{}s^{k}", if show_mag { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p(&[1, 1]) * p(&[-1, 1]), p(&[-1, 0, 1]));
    }

    #[test]
    fn long_division() {
        let (q, r) = p(&[10, 10, 1]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[9, 1]));
        assert_eq!(r, p(&[1]));
    }

    #[test]
    fn additive_identity() {
        let a = p(&[3, 0, -2, 5]);
        assert_eq!(&a + &Poly::zero(), a);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(p(&[1, 2]).div_rem(&Poly::zero()), Err(Error::DivisionByZeroPoly));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(Poly::gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        let example_num = p(&[10, 10, 1]);
        let example_den = p(&[100, 200, 130, 30, 1]);
        assert_eq!(Poly::gcd(&example_num, &example_den).unwrap(), Poly::one());
        let q = p(&[6, -4, 2]);
        assert_eq!(Poly::gcd(&q, &q).unwrap(), q.monic());
        assert_eq!(Poly::gcd(&Poly::zero(), &Poly::zero()), Err(Error::GcdOfZeros));
        assert_eq!(Poly::gcd(&Poly::zero(), &q).unwrap(), q.monic());
    }

    #[test]
    fn zero_degree_is_sentinel() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::one().degree(), Some(0));
        assert!(Poly::from_i64(&[0, 0, 0]).is_zero());
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (s+1)^2 (s-2)^3 s
        let f = p(&[1, 1]).pow(2) * p(&[-2, 1]).pow(3) * p(&[0, 1]);
        let parts = f.square_free();
        assert_eq!(parts.len(), 3);
        let by_mult: Vec<usize> = parts.iter().map(|(_, m)| *m).collect();
        assert_eq!(by_mult, vec![1, 2, 3]);
        assert_eq!(parts[0].0, p(&[0, 1]));
        assert_eq!(parts[1].0, p(&[1, 1]));
        assert_eq!(parts[2].0, p(&[-2, 1]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[10, 10, 1]).to_string(), "s^2 + 10*s + 10");
        assert_eq!(Poly::from_coeffs(vec![rat(-9, 10), rat(-1, 10)]).to_string(), "-(1/10)*s - (9/10)");
        assert_eq!(p(&[0, -1]).to_string(), "-s");
    }

    #[test]
    fn complex_evaluation() {
        let v = p(&[1, 0, 1]).eval(Complex64::new(0.0, 1.0));
        assert!(v.norm() < 1e-15);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-5i64..=5, 0..=9).prop_map(|c| Poly::from_i64(&c))
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly()) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let g = Poly::gcd(&a, &b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(g.divides(&a));
            prop_assert!(g.divides(&b));
        }
    }
}
