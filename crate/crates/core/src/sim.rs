//! Step responses by partial-fraction expansion and analytic inverse
//! Laplace transform.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::format_float;
use crate::polyrat::{poly_roots, Poly, RatFunc, DEFAULT_ROOT_TOL};
use crate::stability::DEFAULT_POLE_TOL;
use crate::tfm::TransferMatrix;

/// Highest pole multiplicity the expansion accepts.
pub const MAX_POLE_ORDER: usize = 3;

/// `coefficient / (s - pole)^order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfTerm {
    pub pole: Complex64,
    pub order: usize,
    pub coefficient: Complex64,
}

impl PfTerm {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coefficient / (s - self.pole).powu(self.order as u32)
    }

    /// Inverse Laplace transform `c t^(k-1) e^(p t) / (k-1)!` at `t >= 0`.
    pub fn time_value(&self, t: f64) -> Complex64 {
        let k = self.order as i32;
        let fact: f64 = (1..k).map(f64::from).product();
        self.coefficient * t.powi(k - 1) * (self.pole * t).exp() / fact
    }
}

/// Power-series coefficients of `p(a + h)` in `h`, up to `h^(order-1)`.
fn taylor(p: &[f64], a: Complex64, order: usize) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut out = Vec::with_capacity(order);
    // repeated synthetic division by (s - a)
    for _ in 0..order {
        if c.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let mut rem = Complex64::new(0.0, 0.0);
        let mut q = vec![Complex64::new(0.0, 0.0); c.len().saturating_sub(1)];
        for k in (0..c.len()).rev() {
            rem = rem * a + c[k];
            if k > 0 {
                q[k - 1] = rem;
            }
        }
        out.push(rem);
        c = q;
    }
    out
}

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Expansion of a strictly proper rational function.
pub fn partial_fractions(f: &RatFunc) -> Result<Vec<PfTerm>> {
    if f.is_zero() {
        return Ok(Vec::new());
    }
    if !f.is_strictly_proper() {
        return Err(Error::NotStrictlyProper);
    }
    let roots = poly_roots(f.den(), DEFAULT_ROOT_TOL)?;
    if let Some(m) = roots.multiplicities().iter().copied().find(|&m| m > MAX_POLE_ORDER) {
        return Err(Error::PoleOrderTooHigh {
            order: m,
            max: MAX_POLE_ORDER,
        });
    }
    let num = f.num().to_f64();
    let mut terms = Vec::new();
    for (k, (p, m)) in roots.iter().enumerate() {
        let mut g = taylor(&num, p, m);
        for (j, (q, mq)) in roots.iter().enumerate() {
            if j == k {
                continue;
            }
            // 1 / (p - q + h) as a series in h
            let d = p - q;
            let inv: Vec<Complex64> = (0..m)
                .map(|i| {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    sign / d.powu(i as u32 + 1)
                })
                .collect();
            for _ in 0..mq {
                g = series_mul(&g, &inv);
            }
        }
        for order in 1..=m {
            terms.push(PfTerm {
                pole: p,
                order,
                coefficient: g[m - order],
            });
        }
    }
    Ok(terms)
}

/// Direct term and strictly proper remainder of a proper rational function.
pub fn split_direct(f: &RatFunc) -> Result<(Poly, RatFunc)> {
    let (q, r) = f.num().div_rem(f.den())?;
    Ok((q, RatFunc::new(r, f.den().clone())?))
}

/// Sampled responses, one column per (output, input) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeResponse {
    pub times: Vec<f64>,
    /// `(output, input)`, zero-based.
    pub channels: Vec<(usize, usize)>,
    pub values: Vec<Vec<f64>>,
}

impl TimeResponse {
    pub fn column(&self, output: usize, input: usize) -> Option<&[f64]> {
        self.channels
            .iter()
            .position(|&c| c == (output, input))
            .map(|k| self.values[k].as_slice())
    }

    /// CSV with `time`, then `y_i_j` per pair (one-based indices).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for (i, j) in &self.channels {
            write!(out, ",y_{}_{}", i + 1, j + 1).unwrap();
        }
        out.push('\n');
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&format_float(*t));
            for col in &self.values {
                write!(out, ",{}", format_float(col[k])).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Uniform time grid `0, dt, ..., t_end`.
pub fn time_grid(t_end: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || samples < 2 {
        return Err(Error::InvalidParameter("time grid needs t_end > 0 and at least 2 samples".into()));
    }
    Ok((0..samples).map(|k| t_end * k as f64 / (samples - 1) as f64).collect())
}

fn entry_step(f: &RatFunc, times: &[f64]) -> Result<Vec<f64>> {
    if f.is_zero() {
        return Ok(vec![0.0; times.len()]);
    }
    if !f.is_proper() {
        return Err(Error::Unstable("improper entry has no step response".into()));
    }
    if f.den().degree().unwrap_or(0) > 0 {
        let poles = poly_roots(f.den(), DEFAULT_ROOT_TOL)?;
        if let Some(m) = poles.max_real_part().filter(|&m| m >= -DEFAULT_POLE_TOL) {
            return Err(Error::Unstable(format!("pole with real part {m}")));
        }
    }
    let over_s = f * &RatFunc::inv_poly(&Poly::s())?;
    let terms = partial_fractions(&over_s)?;
    Ok(times
        .iter()
        .map(|&t| terms.iter().map(|term| term.time_value(t)).sum::<Complex64>().re)
        .collect())
}

/// Unit step applied to input `channel_in` of a stable `T`.
pub fn step_response(t: &TransferMatrix, channel_in: usize, times: &[f64]) -> Result<TimeResponse> {
    if channel_in >= t.cols() {
        return Err(Error::InvalidParameter(format!(
            "input channel {channel_in} out of range for {} inputs",
            t.cols()
        )));
    }
    let mut channels = Vec::new();
    let mut values = Vec::new();
    for i in 0..t.rows() {
        channels.push((i, channel_in));
        values.push(entry_step(t.get(i, channel_in), times)?);
    }
    Ok(TimeResponse {
        times: times.to_vec(),
        channels,
        values,
    })
}

/// Step responses for every input channel.
pub fn step_response_all(t: &TransferMatrix, times: &[f64]) -> Result<TimeResponse> {
    let mut all = TimeResponse {
        times: times.to_vec(),
        channels: Vec::new(),
        values: Vec::new(),
    };
    for j in 0..t.cols() {
        let r = step_response(t, j, times)?;
        all.channels.extend(r.channels);
        all.values.extend(r.values);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d)).unwrap()
    }

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn simple_pole() {
        let t = partial_fractions(&rf(&[1], &[1, 1])).unwrap();
        assert_eq!(t.len(), 1);
        assert!(close(t[0].pole, -1.0) && close(t[0].coefficient, 1.0) && t[0].order == 1);
    }

    #[test]
    fn cover_up() {
        let t = partial_fractions(&rf(&[1], &[2, 3, 1])).unwrap();
        // sorted by real part: -2 first
        assert!(close(t[0].pole, -2.0) && close(t[0].coefficient, -1.0));
        assert!(close(t[1].pole, -1.0) && close(t[1].coefficient, 1.0));
    }

    #[test]
    fn double_pole() {
        let t = partial_fractions(&rf(&[1], &[1, 2, 1])).unwrap();
        assert_eq!(t.len(), 2);
        assert!(close(t[0].coefficient, 0.0) && t[0].order == 1);
        assert!(close(t[1].coefficient, 1.0) && t[1].order == 2);
    }

    #[test]
    fn rejects_high_order_and_improper() {
        let f = RatFunc::inv_poly(&Poly::from_i64(&[1, 1]).pow(4)).unwrap();
        assert_eq!(
            partial_fractions(&f),
            Err(Error::PoleOrderTooHigh { order: 4, max: 3 })
        );
        assert_eq!(partial_fractions(&rf(&[0, 1], &[1, 1])), Err(Error::NotStrictlyProper));
        let (d, r) = split_direct(&rf(&[0, 1], &[1, 1])).unwrap();
        assert_eq!(d, Poly::one());
        assert_eq!(r, rf(&[-1], &[1, 1]));
    }

    #[test]
    fn first_order_step() {
        let times = time_grid(5.0, 11).unwrap();
        let r = step_response(&TransferMatrix::scalar(rf(&[1], &[1, 1])), 0, &times).unwrap();
        for (t, y) in times.iter().zip(&r.values[0]) {
            assert!((y - (1.0 - (-t).exp())).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_step() {
        let times = time_grid(1.0, 5).unwrap();
        let r = step_response(&TransferMatrix::identity(2), 1, &times).unwrap();
        assert!(r.column(0, 1).unwrap().iter().all(|y| *y == 0.0));
        assert!(r.column(1, 1).unwrap().iter().all(|y| (y - 1.0).abs() < 1e-15));
        assert!(r.to_csv().starts_with("time,y_1_2,y_2_2\n"));
    }

    #[test]
    fn unstable_rejected() {
        let times = time_grid(1.0, 5).unwrap();
        assert!(matches!(
            step_response(&TransferMatrix::scalar(rf(&[1], &[0, 1])), 0, &times),
            Err(Error::Unstable(_))
        ));
    }

    fn random_rf() -> impl Strategy<Value = RatFunc> {
        (
            prop::collection::vec(-5i64..=5, 1..=3),
            prop::collection::vec(-4i64..=-1, 1..=3),
            prop::collection::vec((1i64..=3, 1i64..=5), 0..=2),
        )
            .prop_map(|(num, real_roots, pairs)| {
                let mut den = Poly::one();
                for r in real_roots {
                    den = &den * &Poly::from_i64(&[-r, 1]);
                }
                for (a, b) in pairs {
                    den = &den * &Poly::from_i64(&[a * a + b * b, 2 * a, 1]);
                }
                let mut num = Poly::from_i64(&num);
                if num.degree() >= den.degree() {
                    num = Poly::one();
                }
                if num.is_zero() {
                    num = Poly::one();
                }
                RatFunc::new(num, den).unwrap()
            })
    }

    proptest! {
        #[test]
        fn reconstruction(f in random_rf(), pts in prop::collection::vec((-3.0..3.0f64, 0.5..3.0f64), 20)) {
            let terms = partial_fractions(&f).unwrap();
            for (re, im) in pts {
                let s = Complex64::new(re, im);
                let want = f.eval(s).unwrap();
                let got: Complex64 = terms.iter().map(|t| t.eval(s)).sum();
                prop_assert!((got - want).norm() <= 1e-8 * want.norm().max(1e-3));
            }
        }

        #[test]
        fn final_value(f in random_rf()) {
            let r = step_response(&TransferMatrix::scalar(f.clone()), 0, &[200.0]).unwrap();
            let dc = f.eval(Complex64::new(0.0, 0.0)).unwrap().re;
            prop_assert!((r.values[0][0] - dc).abs() <= 1e-6 * dc.abs().max(1.0));
        }
    }
}
