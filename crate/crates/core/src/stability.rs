//! Internal stability through the four-block closed-loop matrix, and the
//! essential-implies-original harness.

use serde::Serialize;

use crate::error::Result;
use crate::loops;
use crate::polymat::PolyMatrix;
use crate::polyrat::{poly_roots, RatFunc, RootSet, DEFAULT_ROOT_TOL};
use crate::tfm::{controller_backmap, plant_backmap, TransferMatrix};

/// Default absolute band on pole real parts treated as the imaginary axis.
pub const DEFAULT_POLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Stable,
    Unstable,
    Marginal,
    /// The root finder could not certify the poles.
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InternallyStable,
    NotStable,
    Marginal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryReport {
    pub row: usize,
    pub col: usize,
    pub proper: bool,
    pub poles: RootSet,
    /// `None` when the entry has no poles.
    pub max_real_part: Option<f64>,
    pub status: EntryStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub well_posed: bool,
    pub entries: Vec<EntryReport>,
    pub verdict: Verdict,
}

#[derive(Serialize)]
struct EntryJson {
    row: usize,
    col: usize,
    proper: bool,
    poles: Vec<[f64; 2]>,
    multiplicities: Vec<usize>,
    max_real_part: Option<f64>,
    status: EntryStatus,
}

#[derive(Serialize)]
struct ReportJson {
    well_posed: bool,
    verdict: Verdict,
    entries: Vec<EntryJson>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.verdict == Verdict::InternallyStable
    }

    /// Largest pole real part over all entries.
    pub fn max_real_part(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter_map(|e| e.max_real_part)
            .reduce(f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|e| EntryJson {
                row: e.row,
                col: e.col,
                proper: e.proper,
                poles: e.poles.roots().iter().map(|z| [z.re, z.im]).collect(),
                multiplicities: e.poles.multiplicities().to_vec(),
                max_real_part: e.max_real_part,
                status: e.status,
            })
            .collect();
        serde_json::to_value(ReportJson {
            well_posed: self.well_posed,
            verdict: self.verdict,
            entries,
        })
        .expect("plain data serializes")
    }

    fn ill_posed() -> Self {
        StabilityReport {
            well_posed: false,
            entries: Vec::new(),
            verdict: Verdict::NotStable,
        }
    }
}

fn entry_report(row: usize, col: usize, f: &RatFunc, tol: f64) -> EntryReport {
    let proper = f.is_proper();
    let poles = if f.den().degree().unwrap_or(0) == 0 {
        Ok(RootSet::empty())
    } else {
        poly_roots(f.den(), DEFAULT_ROOT_TOL)
    };
    let (poles, max_re, mut status) = match poles {
        Ok(p) => {
            let max_re = p.max_real_part();
            let status = match max_re {
                Some(m) if m > tol => EntryStatus::Unstable,
                Some(m) if m >= -tol => EntryStatus::Marginal,
                _ => EntryStatus::Stable,
            };
            (p, max_re, status)
        }
        Err(_) => (RootSet::empty(), None, EntryStatus::Unresolved),
    };
    if !proper && status == EntryStatus::Stable {
        status = EntryStatus::Unstable;
    }
    EntryReport {
        row,
        col,
        proper,
        poles,
        max_real_part: max_re,
        status,
    }
}

fn verdict_of(well_posed: bool, entries: &[EntryReport]) -> Verdict {
    if !well_posed
        || entries
            .iter()
            .any(|e| matches!(e.status, EntryStatus::Unstable | EntryStatus::Unresolved))
    {
        Verdict::NotStable
    } else if entries.iter().any(|e| e.status == EntryStatus::Marginal) {
        Verdict::Marginal
    } else {
        Verdict::InternallyStable
    }
}

/// Checks that every entry is proper with all poles left of `-tol`.
pub fn check_rh_inf(m: &TransferMatrix, tol: f64) -> StabilityReport {
    let entries: Vec<EntryReport> = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| entry_report(i, j, m.get(i, j), tol))
        .collect();
    StabilityReport {
        well_posed: true,
        verdict: verdict_of(true, &entries),
        entries,
    }
}

/// `[[(I+CP)^-1, -C(I+PC)^-1], [P(I+CP)^-1, -(I+PC)^-1]]`.
pub fn internal_stability_matrix(p: &TransferMatrix, c: &TransferMatrix) -> Result<TransferMatrix> {
    let set = loops::gang_of_six(p, c)?;
    // S_I = (I+CP)^-1, S_C = C(I+PC)^-1, S_PI = P(I+CP)^-1, S = (I+PC)^-1
    TransferMatrix::block(&[vec![&set.si, &set.sc.neg()], vec![&set.spi, &set.s.neg()]])
}

pub fn check_internal_stability(p: &TransferMatrix, c: &TransferMatrix, tol: f64) -> Result<StabilityReport> {
    let m = match internal_stability_matrix(p, c) {
        Ok(m) => m,
        Err(crate::Error::IllPosed) => return Ok(StabilityReport::ill_posed()),
        Err(e) => return Err(e),
    };
    let mut report = check_rh_inf(&m, tol);
    report.well_posed = report.entries.iter().all(|e| e.proper);
    report.verdict = verdict_of(report.well_posed, &report.entries);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreservationOutcome {
    pub essential: StabilityReport,
    pub original: StabilityReport,
    pub implication_holds: bool,
}

/// Checks the essential loop `(P^SM, C^SM)` and the original loop
/// `(U^-1 P^SM V^-1, V C^SM U)`; the implication fails only when the first
/// is stable and the second is not.
pub fn stability_preservation(
    psm: &TransferMatrix,
    csm: &TransferMatrix,
    u: &PolyMatrix,
    v: &PolyMatrix,
    tol: f64,
) -> Result<PreservationOutcome> {
    let essential = check_internal_stability(psm, csm, tol)?;
    let p = plant_backmap(psm, u, v)?;
    let c = controller_backmap(csm, u, v)?;
    let original = check_internal_stability(&p, &c, tol)?;
    let implication_holds = !(essential.is_stable() && !original.is_stable());
    Ok(PreservationOutcome {
        essential,
        original,
        implication_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::{int, Poly};

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d)).unwrap()
    }

    fn scalar(f: RatFunc) -> TransferMatrix {
        TransferMatrix::scalar(f)
    }

    #[test]
    fn rh_inf_examples() {
        assert!(check_rh_inf(&TransferMatrix::identity(2), DEFAULT_POLE_TOL).is_stable());
        let r = check_rh_inf(&scalar(rf(&[1], &[-1, 1])), DEFAULT_POLE_TOL);
        assert_eq!(r.verdict, Verdict::NotStable);
        assert!((r.entries[0].poles.roots()[0].re - 1.0).abs() < 1e-14);
        assert_eq!(check_rh_inf(&scalar(rf(&[1], &[0, 1])), DEFAULT_POLE_TOL).verdict, Verdict::Marginal);
        let improper = check_rh_inf(&scalar(rf(&[0, 1], &[1])), DEFAULT_POLE_TOL);
        assert_eq!(improper.verdict, Verdict::NotStable);
    }

    #[test]
    fn zero_loop_block_matrix() {
        let z = TransferMatrix::zeros(2, 2);
        let m = internal_stability_matrix(&z, &z).unwrap();
        let i = TransferMatrix::identity(2);
        assert_eq!(m, TransferMatrix::block(&[vec![&i, &z], vec![&z, &i.neg()]]).unwrap());
    }

    #[test]
    fn unstable_plant_with_static_gain() {
        for (k, stable) in [(2, true), (1, false), (0, false)] {
            let p = scalar(rf(&[1], &[-1, 1]));
            let c = scalar(RatFunc::constant(int(k)));
            let m = internal_stability_matrix(&p, &c).unwrap();
            for f in m.entries().iter().filter(|f| !f.is_polynomial()) {
                assert_eq!(f.den(), &Poly::from_i64(&[-1 + k, 1]));
            }
            let r = check_internal_stability(&p, &c, DEFAULT_POLE_TOL).unwrap();
            assert_eq!(r.is_stable(), stable, "k = {k}");
        }
    }

    #[test]
    fn stable_scalar_loop() {
        let r = check_internal_stability(&scalar(rf(&[1], &[1, 1])), &TransferMatrix::identity(1), DEFAULT_POLE_TOL)
            .unwrap();
        assert_eq!(r.verdict, Verdict::InternallyStable);
        assert!(r.well_posed);
    }

    #[test]
    fn unstable_cancellation_detected() {
        let p = scalar(rf(&[1], &[-1, 1]));
        let c = scalar(rf(&[-1, 1], &[1, 1]));
        let r = check_internal_stability(&p, &c, DEFAULT_POLE_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::NotStable);
        // P (I + CP)^-1 sits in the lower-left block
        let e = r.entries.iter().find(|e| e.row == 1 && e.col == 0).unwrap();
        assert_eq!(e.status, EntryStatus::Unstable);
        assert!(e.poles.roots().iter().any(|z| (z.re - 1.0).abs() < 1e-12));
    }

    #[test]
    fn ill_posed_reported() {
        let p = scalar(RatFunc::one());
        let c = scalar(-RatFunc::one());
        let r = check_internal_stability(&p, &c, DEFAULT_POLE_TOL).unwrap();
        assert!(!r.well_posed);
        assert_eq!(r.verdict, Verdict::NotStable);
    }

    #[test]
    fn identity_transforms_give_identical_reports() {
        let psm = TransferMatrix::diag(vec![rf(&[1], &[1, 1]), rf(&[1], &[2, 1])]);
        let csm = TransferMatrix::diag(vec![rf(&[3], &[1]), rf(&[1], &[1])]);
        let i = PolyMatrix::identity(2);
        let out = stability_preservation(&psm, &csm, &i, &i, DEFAULT_POLE_TOL).unwrap();
        assert_eq!(out.essential, out.original);
        assert!(out.implication_holds && out.original.is_stable());
    }

    #[test]
    fn json_shape() {
        let r = check_rh_inf(&scalar(rf(&[1], &[1, 1])), DEFAULT_POLE_TOL);
        let j = r.to_json();
        assert_eq!(j["verdict"], "internally_stable");
        assert_eq!(j["entries"][0]["poles"][0][0], -1.0);
    }
}
