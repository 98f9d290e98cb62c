use smdecouple::design::{example_design, Design};
use smdecouple::sim::{step_response, time_grid};

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn reference_step_on_second_mass() {
    let times = time_grid(10.0, 2001).unwrap();
    let t1 = example_design(Design::One).unwrap().original_loops().unwrap().t;
    let t2 = example_design(Design::Two).unwrap().original_loops().unwrap().t;
    let r1 = step_response(&t1, 1, &times).unwrap();
    let r2 = step_response(&t2, 1, &times).unwrap();
    assert!(max_abs(r1.column(0, 1).unwrap()) > 0.05);
    assert!(max_abs(r2.column(0, 1).unwrap()) < 1e-9);
    // both designs track: x2 settles at one
    for r in [&r1, &r2] {
        let x2 = r.column(1, 1).unwrap();
        assert!((x2[x2.len() - 1] - 1.0).abs() < 1e-3);
    }
}
