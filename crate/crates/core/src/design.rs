//! The two-mass example: plant model, the reference unimodular transforms,
//! and loop-shaped SISO controllers for the decoupled channels.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loops::{gang_of_six, ClosedLoopSet};
use crate::polymat::{PolyMatrix, SmDecomposition};
use crate::polyrat::{int, rat, rational_from_f64, to_f64, Poly, RatFunc, Rational};
use crate::stability::{check_internal_stability, DEFAULT_POLE_TOL};
use crate::tfm::{controller_backmap, properness_min_reldeg, TransferMatrix};

/// Significant digits kept when a designed corner frequency becomes exact.
const DESIGN_DIGITS: u32 = 4;
/// Significant digits of the normalising gain.
const GAIN_DIGITS: u32 = 8;

/// Masses (kg), spring stiffnesses (N/m) and damping coefficients (kg/s).
#[derive(Clone, Debug, PartialEq)]
pub struct MechParams {
    pub m1: Rational,
    pub m2: Rational,
    pub k1: Rational,
    pub k2: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl MechParams {
    /// `m1 = m2 = 1`, `k1 = k2 = 10`, `c1 = c2 = 10`.
    pub fn reference() -> Self {
        MechParams {
            m1: int(1),
            m2: int(1),
            k1: int(10),
            k2: int(10),
            c1: int(10),
            c2: int(10),
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [&self.m1, &self.m2, &self.k1, &self.k2, &self.c1, &self.c2];
        if all.iter().any(|x| **x <= int(0)) {
            return Err(Error::InvalidParameter("mechanical parameters must be positive".into()));
        }
        Ok(())
    }
}

/// `X(s) = P(s) F(s)` for the two-mass chain, with forces `F1` on mass 1
/// and `F2` acting between the masses.
pub fn build_example_plant(p: &MechParams) -> Result<TransferMatrix> {
    p.validate()?;
    let c = |x: &Rational| Poly::constant(x.clone());
    let quad = |m: &Rational, c: Rational, k: Rational| Poly::from_coeffs(vec![k, c, m.clone()]);
    // A(s) X = B F from the Laplace-transformed equations of motion
    let a11 = quad(&p.m1, &p.c1 + &p.c2, &p.k1 + &p.k2);
    let a22 = quad(&p.m2, p.c2.clone(), p.k2.clone());
    let coupling = Poly::from_coeffs(vec![p.k2.clone(), p.c2.clone()]);
    let a = PolyMatrix::from_rows(vec![
        vec![a11, -&coupling],
        vec![-&coupling, a22],
    ])?;
    let b = PolyMatrix::from_rows(vec![
        vec![c(&int(1)), c(&int(-1))],
        vec![Poly::zero(), c(&int(1))],
    ])?;
    TransferMatrix::from(&a).inverse()?.mul(&TransferMatrix::from(&b))
}

/// Reference `U` for the example: `[[0, 1], [1, (s^3 + 29 s^2 + 100 s + 90)/10]]`.
pub fn reference_u() -> PolyMatrix {
    let g = Poly::from_i64(&[90, 100, 29, 1]).scale(&rat(1, 10));
    PolyMatrix::from_rows(vec![vec![Poly::zero(), Poly::one()], vec![Poly::one(), g]])
        .expect("2x2")
}

/// Reference `V` for the example: `[[-(s + 9)/10, s^2 + 10 s + 10], [1, -10 s - 10]]`.
pub fn reference_v() -> PolyMatrix {
    PolyMatrix::from_rows(vec![
        vec![Poly::from_i64(&[-9, -1]).scale(&rat(1, 10)), Poly::from_i64(&[10, 10, 1])],
        vec![Poly::one(), Poly::from_i64(&[-10, -10])],
    ])
    .expect("2x2")
}

/// Structure of a loop-shaped SISO controller:
/// `K / s^i * lead^n * rolloff^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopShapeSpec {
    pub crossover_hz: f64,
    /// Minimum controller relative degree; roll-off poles fill the gap left
    /// by the integrators.
    pub min_reldeg: usize,
    pub integrator_order: usize,
    pub lead_count: usize,
    /// Lead zero at `wc / spread`, pole at `wc * spread`.
    pub lead_spread: f64,
    /// Roll-off poles sit at `wc * rolloff_factor`.
    pub rolloff_factor: f64,
}

impl Default for LoopShapeSpec {
    fn default() -> Self {
        LoopShapeSpec {
            crossover_hz: 10.0,
            min_reldeg: 0,
            integrator_order: 1,
            lead_count: 1,
            lead_spread: 3.0,
            rolloff_factor: 10.0,
        }
    }
}

impl LoopShapeSpec {
    /// Channel 1 of design 1: integrator and three leads.
    pub fn design1_channel1(min_reldeg: usize) -> Self {
        LoopShapeSpec {
            min_reldeg,
            integrator_order: 1,
            lead_count: 3,
            lead_spread: 20.0,
            ..LoopShapeSpec::default()
        }
    }

    /// Channel 2 of design 1: double integrator, one lead, roll-off poles.
    pub fn design1_channel2(min_reldeg: usize) -> Self {
        LoopShapeSpec {
            min_reldeg,
            integrator_order: 2,
            lead_count: 1,
            lead_spread: 3.0,
            ..LoopShapeSpec::default()
        }
    }

    pub fn rolloff_count(&self) -> usize {
        self.min_reldeg.saturating_sub(self.integrator_order)
    }

    fn validate(&self) -> Result<()> {
        if !(self.crossover_hz > 0.0 && self.crossover_hz.is_finite()) {
            return Err(Error::InvalidParameter("crossover must be positive".into()));
        }
        if !(self.lead_spread >= 1.0) || !(self.rolloff_factor > 0.0) {
            return Err(Error::InvalidParameter("lead spread must be >= 1 and roll-off factor > 0".into()));
        }
        Ok(())
    }
}

/// `(s / a + 1)` with `a` rounded to an exact rational.
fn first_order(corner: f64) -> Poly {
    Poly::from_coeffs(vec![int(1), rational_from_f64(1.0 / corner, DESIGN_DIGITS)])
}

/// Controller of the given structure with `|P C|` normalised to one at the
/// crossover frequency. Fails if the resulting loop is not internally
/// stable.
pub fn loopshape_siso(plant: &RatFunc, spec: &LoopShapeSpec) -> Result<RatFunc> {
    spec.validate()?;
    if plant.is_zero() {
        return Err(Error::Infeasible("zero plant".into()));
    }
    let wc = 2.0 * PI * spec.crossover_hz;
    let mut num = Poly::one();
    let mut den = Poly::monomial(int(1), spec.integrator_order);
    for _ in 0..spec.lead_count {
        num = &num * &first_order(wc / spec.lead_spread);
        den = &den * &first_order(wc * spec.lead_spread);
    }
    for _ in 0..spec.rolloff_count() {
        den = &den * &first_order(wc * spec.rolloff_factor);
    }
    let shape = RatFunc::new(num, den)?;
    let l0 = (plant * &shape)
        .eval(Complex64::new(0.0, wc))
        .map_err(|_| Error::Infeasible("loop has a pole at the crossover frequency".into()))?;
    if l0.norm() == 0.0 {
        return Err(Error::Infeasible("loop vanishes at the crossover frequency".into()));
    }
    let gain = rational_from_f64(1.0 / l0.norm(), GAIN_DIGITS);
    let c = shape.scale(&gain);
    let report = check_internal_stability(
        &TransferMatrix::scalar(plant.clone()),
        &TransferMatrix::scalar(c.clone()),
        DEFAULT_POLE_TOL,
    )?;
    if !report.is_stable() {
        return Err(Error::Unstable(format!(
            "loop-shaped closed loop not stable (max pole real part {:?})",
            report.max_real_part()
        )));
    }
    Ok(c)
}

/// `C2 = P1 * C1`, so the second essential loop copies the first.
pub fn make_design2(c1: &RatFunc, p1: &RatFunc, min_reldeg: usize) -> Result<RatFunc> {
    let c2 = p1 * c1;
    let actual = c2.relative_degree().unwrap_or(i64::MAX);
    if actual < min_reldeg as i64 {
        return Err(Error::RelativeDegreeShortfall {
            required: min_reldeg as i64,
            actual,
        });
    }
    Ok(c2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Design {
    /// Independently shaped channels.
    One,
    /// Second channel copies the first loop, giving identical
    /// complementary sensitivities.
    Two,
}

/// Everything needed to analyse one controller design on the example.
#[derive(Clone, Debug)]
pub struct ExampleDesign {
    pub design: Design,
    pub plant: TransferMatrix,
    pub decomposition: SmDecomposition,
    pub min_reldeg: Vec<usize>,
    pub csm: TransferMatrix,
    pub controller: TransferMatrix,
}

impl ExampleDesign {
    pub fn u(&self) -> &PolyMatrix {
        self.decomposition.u()
    }

    pub fn v(&self) -> &PolyMatrix {
        self.decomposition.v()
    }

    pub fn psm(&self) -> TransferMatrix {
        self.decomposition.psm()
    }

    pub fn essential_loops(&self) -> Result<ClosedLoopSet> {
        gang_of_six(&self.psm(), &self.csm)
    }

    pub fn original_loops(&self) -> Result<ClosedLoopSet> {
        gang_of_six(&self.plant, &self.controller)
    }

    /// Essential loop gains `P_k^SM C_k^SM`.
    pub fn essential_loop_gains(&self) -> Vec<RatFunc> {
        let psm = self.decomposition.diag();
        let csm = self.csm.diagonal().expect("diagonal controller");
        psm.iter().zip(&csm).map(|(p, c)| p * c).collect()
    }
}

/// Builds the example with the reference `U`, `V` and the chosen design.
pub fn example_design(design: Design) -> Result<ExampleDesign> {
    let plant = build_example_plant(&MechParams::reference())?;
    let decomposition = SmDecomposition::from_transforms(&plant, reference_u(), reference_v())?;
    let min_reldeg = properness_min_reldeg(decomposition.u(), decomposition.v())?;
    let p = decomposition.diag();
    let c1 = loopshape_siso(&p[0], &LoopShapeSpec::design1_channel1(min_reldeg[0]))?;
    let c2 = match design {
        Design::One => loopshape_siso(&p[1], &LoopShapeSpec::design1_channel2(min_reldeg[1]))?,
        Design::Two => {
            // channel 2 has unit plant, so copying L1 means C2 = P1 C1
            if !p[1].is_one() {
                return Err(Error::Infeasible("second channel plant is not unity".into()));
            }
            make_design2(&c1, &p[0], min_reldeg[1])?
        }
    };
    let csm = TransferMatrix::diag(vec![c1, c2]);
    let controller = controller_backmap(&csm, decomposition.u(), decomposition.v())?;
    Ok(ExampleDesign {
        design,
        plant,
        decomposition,
        min_reldeg,
        csm,
        controller,
    })
}

/// Nominal crossover in rad/s used by the designs, for reporting.
pub fn crossover_rad(spec: &LoopShapeSpec) -> f64 {
    to_f64(&rational_from_f64(2.0 * PI * spec.crossover_hz, DESIGN_DIGITS))
}
