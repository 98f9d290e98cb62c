//! Closed-loop maps of a unity-feedback loop (output and input side) and
//! their transformation between the essential and original domains.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::tfm::TransferMatrix;

/// The ten closed-loop transfer matrices of the loop `(P, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedLoopSet {
    pub l: TransferMatrix,
    pub s: TransferMatrix,
    pub t: TransferMatrix,
    pub sp: TransferMatrix,
    pub sc: TransferMatrix,
    pub li: TransferMatrix,
    pub si: TransferMatrix,
    pub ti: TransferMatrix,
    pub spi: TransferMatrix,
    pub sci: TransferMatrix,
}

pub const IDENTITY_NAMES: [&str; 10] = ["L", "S", "T", "S_P", "S_C", "L_I", "S_I", "T_I", "S_PI", "S_CI"];

impl ClosedLoopSet {
    /// Members in the order of [`IDENTITY_NAMES`].
    pub fn members(&self) -> [&TransferMatrix; 10] {
        [
            &self.l, &self.s, &self.t, &self.sp, &self.sc, &self.li, &self.si, &self.ti, &self.spi,
            &self.sci,
        ]
    }

    pub fn get(&self, name: &str) -> Option<&TransferMatrix> {
        IDENTITY_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|k| self.members()[k])
    }
}

fn inverse_checked(m: &TransferMatrix) -> Result<TransferMatrix> {
    match m.inverse() {
        Err(Error::Singular) => Err(Error::IllPosed),
        other => other,
    }
}

/// Builds all ten maps from `L = P C` and `L_I = C P`.
pub fn gang_of_six(p: &TransferMatrix, c: &TransferMatrix) -> Result<ClosedLoopSet> {
    let l = p.mul(c)?;
    let li = c.mul(p)?;
    let s = inverse_checked(&l.add_identity()?)?;
    let si = inverse_checked(&li.add_identity()?)?;
    let t = l.mul(&s)?;
    let ti = si.mul(&li)?;
    Ok(ClosedLoopSet {
        sp: s.mul(p)?,
        sc: c.mul(&s)?,
        spi: p.mul(&si)?,
        sci: si.mul(c)?,
        l,
        s,
        t,
        li,
        si,
        ti,
    })
}

/// Maps an essential-domain set to the original domain using the
/// unimodular transforms alone.
pub fn transform_to_original(ess: &ClosedLoopSet, u: &PolyMatrix, v: &PolyMatrix) -> Result<ClosedLoopSet> {
    let ut = TransferMatrix::from(u);
    let vt = TransferMatrix::from(v);
    let ui = TransferMatrix::from(&u.unimodular_inverse()?);
    let vi = TransferMatrix::from(&v.unimodular_inverse()?);
    let sandwich = |a: &TransferMatrix, m: &TransferMatrix, b: &TransferMatrix| a.mul(m)?.mul(b);
    Ok(ClosedLoopSet {
        l: sandwich(&ui, &ess.l, &ut)?,
        s: sandwich(&ui, &ess.s, &ut)?,
        t: sandwich(&ui, &ess.t, &ut)?,
        sp: sandwich(&ui, &ess.sp, &vi)?,
        sc: sandwich(&vt, &ess.sc, &ut)?,
        li: sandwich(&vt, &ess.li, &vi)?,
        si: sandwich(&vt, &ess.si, &vi)?,
        ti: sandwich(&vt, &ess.ti, &vi)?,
        spi: sandwich(&ui, &ess.spi, &vi)?,
        sci: sandwich(&vt, &ess.sci, &ut)?,
    })
}

/// Outcome of comparing both sides of each transformation identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub results: BTreeMap<String, String>,
    /// `S_PI` also compared against `U^-1 * P * S_PI^SM * V^-1`.
    pub extra_plant_spi_form: String,
    /// `S + T = I` and `S_I + T_I = I` in both domains.
    pub complementarity: bool,
    /// `L (I+L)^-1 = (I+L)^-1 L` in both domains.
    pub push_through: bool,
}

const EQUAL: &str = "exact-equal";
const MISMATCH: &str = "mismatch";

fn verdict(eq: bool) -> String {
    if eq { EQUAL } else { MISMATCH }.to_string()
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.results.values().all(|v| v == EQUAL) && self.complementarity && self.push_through
    }

    pub fn extra_plant_spi_holds(&self) -> bool {
        self.extra_plant_spi_form == EQUAL
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}

fn complementary(set: &ClosedLoopSet) -> Result<bool> {
    let n = set.s.rows();
    let id = TransferMatrix::identity(n);
    Ok(set.s.add(&set.t)? == id && set.si.add(&set.ti)? == id)
}

fn push_through(set: &ClosedLoopSet) -> Result<bool> {
    Ok(set.s.mul(&set.l)? == set.t && set.li.mul(&set.si)? == set.ti)
}

/// Computes the original-domain loop from first principles with
/// `P = U^-1 P^SM V^-1`, `C = V C^SM U` and compares it with the mapped
/// essential loop, matrix by matrix.
pub fn verify_transform_identities(
    psm: &TransferMatrix,
    csm: &TransferMatrix,
    u: &PolyMatrix,
    v: &PolyMatrix,
) -> Result<IdentityReport> {
    let ui = TransferMatrix::from(&u.unimodular_inverse()?);
    let vi = TransferMatrix::from(&v.unimodular_inverse()?);
    let p = ui.mul(psm)?.mul(&vi)?;
    let c = TransferMatrix::from(v).mul(csm)?.mul(&TransferMatrix::from(u))?;
    let ess = gang_of_six(psm, csm)?;
    let orig = gang_of_six(&p, &c)?;
    let mapped = transform_to_original(&ess, u, v)?;
    let results = IDENTITY_NAMES
        .iter()
        .zip(orig.members().iter().zip(mapped.members()))
        .map(|(name, (a, b))| (name.to_string(), verdict(*a == b)))
        .collect();
    let with_plant = ui.mul(&p)?.mul(&ess.spi)?.mul(&vi)?;
    Ok(IdentityReport {
        results,
        extra_plant_spi_form: verdict(with_plant == orig.spi),
        complementarity: complementary(&ess)? && complementary(&orig)?,
        push_through: push_through(&ess)? && push_through(&orig)?,
    })
}
