//! Polynomial roots by simultaneous (Aberth-Ehrlich) iteration with Newton
//! polishing.
//!
//! Multiplicities come from an exact square-free factorisation done before
//! any floating-point work, so the iteration only ever sees simple roots.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Poly;
use crate::error::{Error, Result};

/// Default acceptance bound on the normwise backward error of each root.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 800;

/// Roots of a polynomial with their multiplicities.
///
/// `residual` is the largest normwise backward error
/// `|p(r)| / sum_k |p_k| |r|^k` over the reported roots.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootSet {
    roots: Vec<Complex64>,
    multiplicities: Vec<usize>,
    residual: f64,
}

impl RootSet {
    pub fn empty() -> Self {
        RootSet::default()
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Number of roots counted with multiplicity.
    pub fn count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, usize)> + '_ {
        self.roots.iter().copied().zip(self.multiplicities.iter().copied())
    }

    pub fn max_real_part(&self) -> Option<f64> {
        self.roots.iter().map(|r| r.re).reduce(f64::max)
    }

    /// Coefficients (ascending) of `prod (s - r)^m`.
    pub fn expand(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for (r, m) in self.iter() {
            for _ in 0..m {
                let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
                for (k, c) in out.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * r;
                }
                out = next;
            }
        }
        out
    }

    /// Flat list with each root repeated by its multiplicity.
    pub fn flatten(&self) -> Vec<Complex64> {
        self.iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r, m))
            .collect()
    }
}

/// Finds all roots of `p` (degree >= 1).
///
/// Fails with [`Error::RootsNotConverged`] if any root's backward error stays
/// above `tol`.
pub fn poly_roots(p: &Poly, tol: f64) -> Result<RootSet> {
    if p.degree().unwrap_or(0) < 1 {
        return Err(Error::DegreeTooLow);
    }
    let mut pairs: Vec<(Complex64, usize)> = Vec::new();
    let mut worst_iterations = 0;
    for (factor, mult) in p.square_free() {
        let (roots, iterations) = simple_roots(&factor.to_f64());
        worst_iterations = worst_iterations.max(iterations);
        pairs.extend(roots.into_iter().map(|r| (r, mult)));
    }
    pairs.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then(a.0.im.total_cmp(&b.0.im))
    });

    let coeffs = p.to_f64();
    let residual = pairs
        .iter()
        .map(|(r, _)| backward_error(&coeffs, *r))
        .fold(0.0, f64::max);
    if !(residual <= tol) {
        return Err(Error::RootsNotConverged {
            iterations: worst_iterations,
            residual,
        });
    }
    Ok(RootSet {
        roots: pairs.iter().map(|(r, _)| *r).collect(),
        multiplicities: pairs.iter().map(|(_, m)| *m).collect(),
        residual,
    })
}

fn eval_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn abs_eval(c: &[f64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * r + a.abs())
}

fn backward_error(c: &[f64], z: Complex64) -> f64 {
    let (p, _) = eval_with_derivative(c, z);
    let scale = abs_eval(c, z.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Initial guesses from the upper convex hull of `(k, log|c_k|)`.
fn initial_guesses(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0.0)
        .map(|(k, a)| (k, a.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(n);
    // roots at zero when the constant term vanishes
    for _ in 0..hull[0].0 {
        guesses.push(Complex64::new(0.0, 0.0));
    }
    for w in hull.windows(2) {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let m = k2 - k1;
        let radius = ((y1 - y2) / m as f64).exp();
        for j in 0..m {
            // the index term keeps guesses from different segments apart
            let angle = 2.0 * PI * j as f64 / m as f64
                + 2.0 * PI * k1 as f64 / n as f64
                + 0.4
                + 0.3 * guesses.len() as f64 / n as f64;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

/// Roots of a polynomial assumed to have only simple roots.
fn simple_roots(c: &[f64]) -> (Vec<Complex64>, usize) {
    let n = c.len() - 1;
    if n == 1 {
        return (vec![Complex64::new(-c[0] / c[1], 0.0)], 0);
    }
    let mut z = initial_guesses(c);
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(c, z[i]);
            let scale = abs_eval(c, z[i].norm());
            if p.norm() <= 4.0 * f64::EPSILON * scale {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.is_finite() {
                // nudge off a degenerate configuration
                let nudge = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += nudge;
                continue;
            }
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }
    for r in z.iter_mut() {
        *r = newton_polish(c, *r);
        if r.im.abs() <= 1e-14 * r.norm().max(1e-300) {
            r.im = 0.0;
        }
    }
    (z, iterations)
}

fn newton_polish(c: &[f64], mut z: Complex64) -> Complex64 {
    let mut best = backward_error(c, z);
    for _ in 0..3 {
        let (p, dp) = eval_with_derivative(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let err = backward_error(c, candidate);
        if err < best {
            best = err;
            z = candidate;
        } else {
            break;
        }
    }
    z
}
