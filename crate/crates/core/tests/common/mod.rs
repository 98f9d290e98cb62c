#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use smdecouple::polymat::PolyMatrix;
use smdecouple::polyrat::{int, rat, Poly, RatFunc};
use smdecouple::tfm::TransferMatrix;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer polynomial of exact degree `deg` with nonzero leading coefficient.
pub fn random_poly(rng: &mut TestRng, deg: usize) -> Poly {
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
    if c[deg] == 0 {
        c[deg] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    Poly::from_i64(&c)
}

/// Elementary shear `I + a(s) e_ij` with `deg a <= max_deg`.
fn shear(rng: &mut TestRng, n: usize, max_deg: usize) -> PolyMatrix {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let mut m = PolyMatrix::identity(n);
    let d = rng.gen_range(0..=max_deg);
    m.set(i, j, random_poly(rng, d));
    m
}

/// Product of `count` shears and a constant diagonal scaling.
pub fn random_unimodular(rng: &mut TestRng, n: usize, max_shear_deg: usize, count: usize) -> PolyMatrix {
    let mut m = PolyMatrix::identity(n);
    for _ in 0..count {
        m = m.mul(&shear(rng, n, max_shear_deg)).unwrap();
    }
    let scale: Vec<Poly> = (0..n)
        .map(|_| Poly::constant(rat(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=2))))
        .collect();
    m.mul(&PolyMatrix::diag(scale)).unwrap()
}

/// `U`, `V` with entry degree at most 2: a lower and an upper shear of
/// degree one each, then a random row or column permutation.
pub fn unimodular_deg2(rng: &mut TestRng) -> PolyMatrix {
    let da = rng.gen_range(0..=1);
    let a = random_poly(rng, da);
    let db = rng.gen_range(0..=1);
    let b = random_poly(rng, db);
    let lower = PolyMatrix::from_rows(vec![vec![Poly::one(), Poly::zero()], vec![a, Poly::one()]]).unwrap();
    let upper = PolyMatrix::from_rows(vec![vec![Poly::one(), b], vec![Poly::zero(), Poly::one()]]).unwrap();
    let mut m = lower.mul(&upper).unwrap();
    if rng.gen_bool(0.5) {
        let swap = PolyMatrix::from_rows(vec![vec![Poly::zero(), Poly::one()], vec![Poly::one(), Poly::zero()]]).unwrap();
        m = swap.mul(&m).unwrap();
    }
    m
}

/// `gain / prod (s + a_k)` with `a_k` drawn from `1..=5`.
pub fn stable_real_poles(rng: &mut TestRng, order: usize, gain: i64) -> RatFunc {
    let mut den = Poly::one();
    for _ in 0..order {
        den = &den * &Poly::from_i64(&[rng.gen_range(1..=5), 1]);
    }
    RatFunc::new(Poly::constant(int(gain)), den).unwrap()
}

/// Random proper rational function with numerator degree <= den degree.
pub fn random_ratfunc(rng: &mut TestRng, max_deg: usize) -> RatFunc {
    loop {
        let dd = rng.gen_range(0..=max_deg);
        let nd = rng.gen_range(0..=dd);
        let mut den = random_poly(rng, dd);
        if dd == 0 {
            den = Poly::one();
        }
        let num = random_poly(rng, nd);
        if let Ok(f) = RatFunc::new(num, den) {
            if !f.is_zero() {
                return f;
            }
        }
    }
}

pub fn random_diag(rng: &mut TestRng, n: usize, max_deg: usize) -> TransferMatrix {
    TransferMatrix::diag((0..n).map(|_| random_ratfunc(rng, max_deg)).collect())
}
