mod common;

use common::*;
use smdecouple::loops::{gang_of_six, transform_to_original, verify_transform_identities};
use smdecouple::tfm::TransferMatrix;
use smdecouple::Error;

#[test]
fn random_instances_satisfy_all_identities() {
    let mut rng = rng(0x5eed_0001);
    let mut checked = 0;
    while checked < 40 {
        let n = if checked % 2 == 0 { 2 } else { 3 };
        let u = random_unimodular(&mut rng, n, 1, 2);
        let v = random_unimodular(&mut rng, n, 1, 2);
        let psm = random_diag(&mut rng, n, 2);
        let csm = random_diag(&mut rng, n, 2);
        match verify_transform_identities(&psm, &csm, &u, &v) {
            Ok(rep) => {
                assert!(rep.all_pass(), "instance {checked}: {rep:?}");
                checked += 1;
            }
            Err(Error::IllPosed) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn mapped_set_equals_direct_computation() {
    let mut rng = rng(7);
    for _ in 0..10 {
        let u = unimodular_deg2(&mut rng);
        let v = unimodular_deg2(&mut rng);
        let psm = TransferMatrix::diag(vec![stable_real_poles(&mut rng, 2, 1), stable_real_poles(&mut rng, 1, 2)]);
        let csm = TransferMatrix::diag(vec![stable_real_poles(&mut rng, 1, 3), stable_real_poles(&mut rng, 1, 1)]);
        let mapped = transform_to_original(&gang_of_six(&psm, &csm).unwrap(), &u, &v).unwrap();
        let p = smdecouple::tfm::plant_backmap(&psm, &u, &v).unwrap();
        let c = smdecouple::tfm::controller_backmap(&csm, &u, &v).unwrap();
        assert_eq!(mapped, gang_of_six(&p, &c).unwrap());
    }
}
