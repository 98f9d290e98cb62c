mod common;

use common::*;
use rand::Rng;
use smdecouple::design::{reference_u, reference_v};
use smdecouple::polymat::PolyMatrix;
use smdecouple::polyrat::{int, Poly, RatFunc};
use smdecouple::tfm::{controller_backmap, properness_min_reldeg, TransferMatrix};

/// `s^max(0, -r)` over a stable polynomial of degree `max(0, r)`, giving
/// relative degree exactly `r`.
fn with_reldeg(rng: &mut TestRng, r: i64) -> RatFunc {
    let mut den = Poly::one();
    for _ in 0..r.max(0) {
        den = &den * &Poly::from_i64(&[rng.gen_range(1..=9), 1]);
    }
    let num = Poly::monomial(int(1), (-r).max(0) as usize);
    RatFunc::new(num, den).unwrap()
}

fn check(rng: &mut TestRng, u: &PolyMatrix, v: &PolyMatrix) {
    let r = properness_min_reldeg(u, v).unwrap();
    let n = r.len();
    let csm = TransferMatrix::diag(r.iter().map(|&k| with_reldeg(rng, k as i64)).collect());
    assert!(controller_backmap(&csm, u, v).unwrap().is_proper());
    for short in 0..n {
        let diag = (0..n)
            .map(|k| with_reldeg(rng, r[k] as i64 - i64::from(k == short)))
            .collect();
        let c = controller_backmap(&TransferMatrix::diag(diag), u, v).unwrap();
        assert!(!c.is_proper(), "channel {short} one short still proper");
    }
}

#[test]
fn reference_transforms_give_one_and_five() {
    assert_eq!(properness_min_reldeg(&reference_u(), &reference_v()).unwrap(), vec![1, 5]);
    let scaled = reference_v().scale(&int(-7));
    assert_eq!(properness_min_reldeg(&reference_u(), &scaled).unwrap(), vec![1, 5]);
}

#[test]
fn bound_is_tight_for_random_transforms() {
    let mut rng = rng(0xb0_0001);
    for k in 0..50 {
        if k < 10 {
            check(&mut rng, &reference_u(), &reference_v());
        } else {
            let n = if k % 2 == 0 { 2 } else { 3 };
            let u = random_unimodular(&mut rng, n, 2, 2);
            let v = random_unimodular(&mut rng, n, 2, 2);
            check(&mut rng, &u, &v);
        }
    }
}
