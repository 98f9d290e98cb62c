mod common;

use common::*;
use rand::Rng;
use smdecouple::polyrat::{rat, Poly, RatFunc};
use smdecouple::stability::{stability_preservation, DEFAULT_POLE_TOL};
use smdecouple::tfm::{plant_properness_min_reldeg, properness_min_reldeg, TransferMatrix};

/// Essential design whose loops are stable by the small-gain argument:
/// real poles only, so each `|P_k C_k|` peaks at DC, and the DC product is
/// kept below one half.
fn small_gain_instance(rng: &mut TestRng) -> (TransferMatrix, TransferMatrix, smdecouple::polymat::PolyMatrix, smdecouple::polymat::PolyMatrix) {
    let u = unimodular_deg2(rng);
    let v = unimodular_deg2(rng);
    let rp = plant_properness_min_reldeg(&u, &v).unwrap();
    let rc = properness_min_reldeg(&u, &v).unwrap();
    let third = rat(1, 3);
    let psm = TransferMatrix::diag(rp.iter().map(|&r| stable_real_poles(rng, r + 1, 1)).collect());
    let csm = TransferMatrix::diag(rc.iter().map(|&r| stable_real_poles(rng, r + 1, 1).scale(&third)).collect());
    (psm, csm, u, v)
}

#[test]
fn stable_essential_designs_stay_stable() {
    let mut rng = rng(0x7e0_0001);
    for k in 0..40 {
        let (psm, csm, u, v) = small_gain_instance(&mut rng);
        let out = stability_preservation(&psm, &csm, &u, &v, DEFAULT_POLE_TOL).unwrap();
        assert!(out.essential.is_stable(), "instance {k}");
        assert!(out.original.well_posed, "instance {k}");
        assert!(out.implication_holds && out.original.is_stable(), "instance {k}");
    }
}

#[test]
fn unstable_essential_pole_survives_back_mapping() {
    // entry pole sets are unchanged by polynomial unimodular factors, so an
    // unstable essential loop leaves the same unstable pole in the original
    let mut rng = rng(0x7e0_0002);
    for k in 0..20 {
        let u = unimodular_deg2(&mut rng);
        let v = unimodular_deg2(&mut rng);
        let rp = plant_properness_min_reldeg(&u, &v).unwrap();
        let rc = properness_min_reldeg(&u, &v).unwrap();
        let unstable = RatFunc::new(Poly::one(), Poly::from_i64(&[-rng.gen_range(1..=3), 1])).unwrap();
        let p0 = stable_real_poles(&mut rng, rp[0], 1);
        let psm = TransferMatrix::diag(vec![&p0 * &unstable, stable_real_poles(&mut rng, rp[1] + 1, 1)]);
        let csm = TransferMatrix::diag(rc.iter().map(|&r| stable_real_poles(&mut rng, r + 1, 1).scale(&rat(1, 3))).collect());
        let out = stability_preservation(&psm, &csm, &u, &v, DEFAULT_POLE_TOL).unwrap();
        assert!(!out.essential.is_stable(), "instance {k}");
        assert!(!out.original.is_stable(), "instance {k}");
        let (a, b) = (out.essential.max_real_part().unwrap(), out.original.max_real_part().unwrap());
        assert!((a - b).abs() < 1e-6, "instance {k}: {a} vs {b}");
        assert!(out.implication_holds);
    }
}
