//! Frequency responses, maximum singular value curves, H-infinity norm
//! estimates and the weighted sensitivity bounds.

mod svd;

pub use svd::{max_singular_value, CMatrix, DEFAULT_SVD_TOL};

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format_float;
use crate::polymat::PolyMatrix;
use crate::polyrat::{RatEval, RatFunc};
use crate::stability::{check_rh_inf, DEFAULT_POLE_TOL};
use crate::tfm::TransferMatrix;

pub const DEFAULT_POINTS_PER_DECADE: usize = 400;

/// Strictly ascending, strictly positive angular frequencies (rad/s).
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    hz_input: bool,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>, hz_input: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("empty grid".into()));
        }
        if points.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidGrid("frequencies must be finite and positive".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("frequencies must be strictly ascending".into()));
        }
        Ok(FrequencyGrid { points, hz_input })
    }

    /// Log-spaced grid between two frequencies in rad/s, endpoints included.
    pub fn log_space(w_min: f64, w_max: f64, points_per_decade: usize) -> Result<Self> {
        FrequencyGrid::log_points(w_min, w_max, points_per_decade).and_then(|p| FrequencyGrid::new(p, false))
    }

    /// Log-spaced grid between two frequencies given in Hz.
    pub fn from_hz(f_min: f64, f_max: f64, points_per_decade: usize) -> Result<Self> {
        let p = FrequencyGrid::log_points(2.0 * PI * f_min, 2.0 * PI * f_max, points_per_decade)?;
        FrequencyGrid::new(p, true)
    }

    fn log_points(lo: f64, hi: f64, ppd: usize) -> Result<Vec<f64>> {
        if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidGrid(format!("invalid range [{lo}, {hi}]")));
        }
        if ppd == 0 {
            return Err(Error::InvalidGrid("points per decade must be positive".into()));
        }
        let decades = (hi / lo).log10();
        let n = ((decades * ppd as f64).ceil() as usize).max(1);
        let (a, b) = (lo.log10(), hi.log10());
        let mut pts: Vec<f64> = (0..=n)
            .map(|k| 10f64.powf(a + (b - a) * k as f64 / n as f64))
            .collect();
        pts[0] = lo;
        pts[n] = hi;
        Ok(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn hz(&self) -> Vec<f64> {
        self.points.iter().map(|w| w / (2.0 * PI)).collect()
    }

    pub fn hz_input(&self) -> bool {
        self.hz_input
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Maximum singular value per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaCurve {
    pub grid: FrequencyGrid,
    pub values: Vec<f64>,
}

impl SigmaCurve {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &v)| if v > best.1 { (k, v) } else { best })
            .0
    }
}

/// Entry-wise evaluator of a transfer matrix.
struct MatrixEval {
    rows: usize,
    cols: usize,
    entries: Vec<RatEval>,
}

impl MatrixEval {
    fn new(m: &TransferMatrix) -> Self {
        MatrixEval {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(RatFunc::evaluator).collect(),
        }
    }

    fn at(&self, w: f64) -> Result<CMatrix> {
        let s = Complex64::new(0.0, w);
        let data = self.entries.iter().map(|e| e.eval(s)).collect::<Result<Vec<_>>>()?;
        CMatrix::new(self.rows, self.cols, data)
    }
}

/// `M(jw)` at every grid point.
pub fn freq_response(m: &TransferMatrix, grid: &FrequencyGrid) -> Result<Vec<CMatrix>> {
    let ev = MatrixEval::new(m);
    grid.points.iter().map(|&w| ev.at(w)).collect()
}

/// Polynomial-matrix variant; never fails on poles.
pub fn freq_response_poly(m: &PolyMatrix, grid: &FrequencyGrid) -> Vec<CMatrix> {
    freq_response(&TransferMatrix::from(m), grid).expect("polynomials have no finite poles")
}

pub fn sigma_curve(m: &TransferMatrix, grid: &FrequencyGrid) -> Result<SigmaCurve> {
    let values = freq_response(m, grid)?
        .iter()
        .map(|a| max_singular_value(a, DEFAULT_SVD_TOL))
        .collect::<Result<Vec<_>>>()?;
    Ok(SigmaCurve {
        grid: grid.clone(),
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// `M` is stable and proper, so the value estimates its H-infinity norm.
    TrueNorm,
    /// Only the supremum over the grid; no claim about the norm.
    GridSupremum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HinfEstimate {
    pub value: f64,
    pub omega: f64,
    pub kind: NormKind,
}

const REFINE_PASSES: usize = 3;

/// Grid supremum of `sigma_max(M(jw))` with a few local bisection passes
/// around the maximiser.
pub fn hinf_norm_estimate(m: &TransferMatrix, grid: &FrequencyGrid) -> Result<HinfEstimate> {
    let kind = if check_rh_inf(m, DEFAULT_POLE_TOL).is_stable() {
        NormKind::TrueNorm
    } else {
        NormKind::GridSupremum
    };
    let ev = MatrixEval::new(m);
    let sigma = |w: f64| ev.at(w).and_then(|a| max_singular_value(&a, DEFAULT_SVD_TOL));
    let curve = sigma_curve(m, grid)?;
    let k = curve.argmax();
    let pts = grid.points();
    let mut best = (curve.values[k], pts[k]);
    let mut lo = pts[k.saturating_sub(1)];
    let mut hi = pts[(k + 1).min(pts.len() - 1)];
    for _ in 0..REFINE_PASSES {
        let centre = best.1;
        for w in [(lo * centre).sqrt(), (centre * hi).sqrt()] {
            if w > pts[0] && w < pts[pts.len() - 1] {
                let v = sigma(w)?;
                if v > best.0 {
                    best = (v, w);
                }
            }
        }
        lo = (lo * best.1).sqrt();
        hi = (hi * best.1).sqrt();
    }
    Ok(HinfEstimate {
        value: best.0,
        omega: best.1,
        kind,
    })
}

/// Result of a pointwise bound check.
#[derive(Clone, Debug, PartialEq)]
pub struct PerformanceCheck {
    pub pass: bool,
    pub curve: SigmaCurve,
    /// `min (1 - value)` over the grid; negative where violated.
    pub worst_margin: f64,
    pub worst_omega: f64,
}

/// `sigma_max(w1(jw) S(jw)) <= 1` at every grid point.
pub fn performance_check_original(
    s: &TransferMatrix,
    w1: &RatFunc,
    grid: &FrequencyGrid,
) -> Result<PerformanceCheck> {
    let curve = sigma_curve(&s.scale(w1), grid)?;
    let (k, worst) = curve
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (k, 1.0 - v))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Ok(PerformanceCheck {
        pass: worst >= 0.0,
        worst_omega: grid.points()[k],
        worst_margin: worst,
        curve,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub pass: bool,
    pub lhs: SigmaCurve,
    pub rhs: SigmaCurve,
}

impl BoundCheck {
    /// Indices where the essential sensitivity exceeds the bound.
    pub fn violations(&self) -> Vec<usize> {
        (0..self.lhs.values.len())
            .filter(|&k| self.lhs.values[k] > self.rhs.values[k])
            .collect()
    }
}

/// Essential-domain sufficient condition
/// `sigma_max(S^SM) <= 1 / (|w1| sigma_max(U^-1) sigma_max(U))`.
pub fn essential_bound_check(
    ssm: &TransferMatrix,
    w1: &RatFunc,
    u: &PolyMatrix,
    grid: &FrequencyGrid,
) -> Result<BoundCheck> {
    let lhs = sigma_curve(ssm, grid)?;
    let rhs = bound_curve(w1, u, grid)?;
    let pass = lhs.values.iter().zip(&rhs.values).all(|(l, r)| l <= r);
    Ok(BoundCheck { pass, lhs, rhs })
}

/// Right-hand side of the essential bound; `+inf` where `w1(jw) = 0`.
pub fn bound_curve(w1: &RatFunc, u: &PolyMatrix, grid: &FrequencyGrid) -> Result<SigmaCurve> {
    let ui = u.unimodular_inverse()?;
    let w_ev = w1.evaluator();
    let mut values = Vec::with_capacity(grid.len());
    for (w, (a, b)) in grid
        .points()
        .iter()
        .zip(freq_response_poly(u, grid).iter().zip(freq_response_poly(&ui, grid).iter()))
    {
        let wm = w_ev.eval(Complex64::new(0.0, *w))?.norm();
        let denom = wm * max_singular_value(a, DEFAULT_SVD_TOL)? * max_singular_value(b, DEFAULT_SVD_TOL)?;
        values.push(if denom == 0.0 { f64::INFINITY } else { 1.0 / denom });
    }
    Ok(SigmaCurve {
        grid: grid.clone(),
        values,
    })
}

/// Continuous phase in degrees: each step is brought within 180 degrees of
/// the previous sample.
fn unwrap_degrees(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    for (k, &p) in raw.iter().enumerate() {
        if k > 0 {
            let prev = raw[k - 1] + offset;
            while p + offset - prev > 180.0 {
                offset -= 360.0;
            }
            while p + offset - prev < -180.0 {
                offset += 360.0;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Magnitude (dB) and unwrapped phase (deg) per entry, row-major.
pub struct Bode {
    pub hz: Vec<f64>,
    pub labels: Vec<String>,
    pub mag_db: Vec<Vec<f64>>,
    pub phase_deg: Vec<Vec<f64>>,
}

pub fn bode(m: &TransferMatrix, grid: &FrequencyGrid) -> Result<Bode> {
    let resp = freq_response(m, grid)?;
    let mut labels = Vec::new();
    let mut mag_db = Vec::new();
    let mut phase_deg = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            labels.push(format!("{}_{}", i + 1, j + 1));
            let vals: Vec<Complex64> = resp.iter().map(|a| a.get(i, j)).collect();
            mag_db.push(vals.iter().map(|z| 20.0 * z.norm().log10()).collect());
            let raw: Vec<f64> = vals.iter().map(|z| z.arg().to_degrees()).collect();
            phase_deg.push(unwrap_degrees(&raw));
        }
    }
    Ok(Bode {
        hz: grid.hz(),
        labels,
        mag_db,
        phase_deg,
    })
}

/// CSV with `freq_hz`, then `mag_db_i_j, phase_deg_i_j` per entry.
pub fn bode_export(m: &TransferMatrix, grid: &FrequencyGrid) -> Result<String> {
    let b = bode(m, grid)?;
    let mut out = String::from("freq_hz");
    for l in &b.labels {
        write!(out, ",mag_db_{l},phase_deg_{l}").unwrap();
    }
    out.push('\n');
    for k in 0..b.hz.len() {
        out.push_str(&format_float(b.hz[k]));
        for e in 0..b.labels.len() {
            write!(out, ",{},{}", format_float(b.mag_db[e][k]), format_float(b.phase_deg[e][k])).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// CSV with `freq_hz` and one column per named curve.
pub fn curves_csv(grid: &FrequencyGrid, columns: &[(&str, &[f64])]) -> String {
    let mut out = String::from("freq_hz");
    for (name, _) in columns {
        write!(out, ",{name}").unwrap();
    }
    out.push('\n');
    for (k, f) in grid.hz().iter().enumerate() {
        out.push_str(&format_float(*f));
        for (_, vals) in columns {
            write!(out, ",{}", format_float(vals[k])).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Frequencies (Hz) where `|f(jw)|` crosses 1, refined by bisection on a log
/// scale.
pub fn crossovers_hz(f: &RatFunc, grid: &FrequencyGrid) -> Result<Vec<f64>> {
    let ev = f.evaluator();
    let g = |w: f64| ev.eval(Complex64::new(0.0, w)).map(|z| z.norm().ln());
    let pts = grid.points();
    let vals = pts.iter().map(|&w| g(w)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for k in 0..pts.len().saturating_sub(1) {
        if vals[k] == 0.0 {
            out.push(pts[k]);
            continue;
        }
        if vals[k] * vals[k + 1] < 0.0 {
            let (mut lo, mut hi) = (pts[k].ln(), pts[k + 1].ln());
            let sign_lo = vals[k].signum();
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if g(mid.exp())?.signum() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push((0.5 * (lo + hi)).exp());
        }
    }
    Ok(out.into_iter().map(|w| w / (2.0 * PI)).collect())
}

/// Phase margin in degrees at the first crossover of a SISO loop.
pub fn phase_margin_deg(l: &RatFunc, grid: &FrequencyGrid) -> Result<Option<f64>> {
    let Some(fc) = crossovers_hz(l, grid)?.first().copied() else {
        return Ok(None);
    };
    let wc = 2.0 * PI * fc;
    // follow the phase continuously from the start of the grid
    let mut pts: Vec<f64> = grid.points().iter().copied().filter(|&w| w < wc).collect();
    pts.push(wc);
    let ev = l.evaluator();
    let raw = pts
        .iter()
        .map(|&w| ev.eval(Complex64::new(0.0, w)).map(|z| z.arg().to_degrees()))
        .collect::<Result<Vec<_>>>()?;
    let phase = *unwrap_degrees(&raw).last().expect("nonempty");
    Ok(Some(180.0 + phase - 360.0 * ((180.0 + phase) / 360.0).floor()))
}
