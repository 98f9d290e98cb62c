//! Polynomial gcd over the rationals by reduction modulo word-sized primes,
//! Chinese remaindering and rational reconstruction.
//!
//! If a prime `p` divides no coefficient denominator and neither leading
//! coefficient, `deg gcd(a mod p, b mod p) >= deg gcd(a, b)`, with equality
//! for all but finitely many primes. A constant gcd modulo one such prime
//! proves coprimality; otherwise images of equal minimal degree are combined
//! until the reconstructed candidate divides both inputs exactly.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Poly, Rational};

const PRIME_COUNT: usize = 256;

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b, p);
        }
        b = mul(b, b, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let bases = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &bases {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &bases {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending primes below `2^62`.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut n = (1u64 << 62) - 1;
        while out.len() < PRIME_COUNT {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn int_mod(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = n % &m;
    let r = if r.is_negative() { r + m } else { r };
    r.to_u64().expect("reduced below p")
}

fn rat_mod(c: &Rational, p: u64) -> Option<u64> {
    let d = int_mod(c.denom(), p);
    (d != 0).then(|| mul(int_mod(c.numer(), p), inv(d, p), p))
}

/// Coefficients mod `p`, or `None` if the reduction is not usable.
fn reduce(a: &Poly, p: u64) -> Option<Vec<u64>> {
    let v = a.coeffs().iter().map(|c| rat_mod(c, p)).collect::<Option<Vec<_>>>()?;
    (v.last().copied().unwrap_or(0) != 0).then_some(v)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let db = b.len() - 1;
    let lb = inv(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let f = mul(a[top], lb, p);
        if f != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let k = top - db + j;
                a[k] = (a[k] + p - mul(f, bj, p)) % p;
            }
        }
        a.pop();
        trim(a);
    }
}

/// Monic gcd over `F_p` of two nonzero polynomials.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    let li = inv(*a.last().expect("nonzero"), p);
    a.iter().map(|&x| mul(x, li, p)).collect()
}

/// Smallest-height fraction congruent to `u` modulo `m`.
fn reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    let bound = (m / BigInt::from(2)).sqrt();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (!t1.is_zero() && t1.abs() <= bound).then(|| Rational::new(r1, t1))
}

/// Monic gcd of two nonconstant polynomials, or `None` if the prime supply
/// runs out (the caller then falls back to Euclid).
pub(crate) fn gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut best_deg = usize::MAX;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Poly> = None;
    for &p in primes() {
        let (Some(ap), Some(bp)) = (reduce(a, p), reduce(b, p)) else {
            continue;
        };
        let g = gcd_mod(ap, bp, p);
        let deg = g.len() - 1;
        if deg == 0 {
            return Some(Poly::one());
        }
        if deg > best_deg {
            continue;
        }
        if deg < best_deg {
            best_deg = deg;
            residues = vec![BigInt::zero(); deg + 1];
            modulus = BigInt::one();
            last = None;
        }
        // combine: c' = c + M * ((g - c) * M^-1 mod p)
        let m_inv = inv(int_mod(&modulus, p), p);
        for (c, &gi) in residues.iter_mut().zip(&g) {
            let diff = (gi + p - int_mod(c, p)) % p;
            *c += &modulus * BigInt::from(mul(diff, m_inv, p));
        }
        modulus *= BigInt::from(p);
        let candidate = residues
            .iter()
            .map(|c| reconstruct(c, &modulus))
            .collect::<Option<Vec<_>>>()
            .map(Poly::from_coeffs);
        if let Some(cand) = candidate {
            if last.as_ref() == Some(&cand) && cand.divides(a) && cand.divides(b) {
                return Some(cand);
            }
            last = Some(cand);
        }
    }
    None
}
