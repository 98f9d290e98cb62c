//! Largest singular value of a small complex matrix.
//!
//! One-sided (Hestenes) Jacobi on the real embedding `[[Re, -Im], [Im, Re]]`,
//! whose singular values are those of the complex matrix, each repeated twice.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative orthogonality threshold for the Jacobi sweeps.
pub const DEFAULT_SVD_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 60;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "CMatrix::new",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        CMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "cmatrix_mul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..rhs.cols {
                    data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }
}

/// Largest singular value of `a`.
pub fn max_singular_value(a: &CMatrix, tol: f64) -> Result<f64> {
    if a.data.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidParameter("non-finite matrix entry".into()));
    }
    let (m, n) = (a.rows, a.cols);
    // columns of the 2m x 2n real embedding
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut c = Vec::with_capacity(2 * m);
        c.extend((0..m).map(|i| a.get(i, j).re));
        c.extend((0..m).map(|i| a.get(i, j).im));
        cols.push(c);
    }
    for j in 0..n {
        let mut c = Vec::with_capacity(2 * m);
        c.extend((0..m).map(|i| -a.get(i, j).im));
        c.extend((0..m).map(|i| a.get(i, j).re));
        cols.push(c);
    }
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let k = cols.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            return Ok(cols.iter().map(|c| dot(c, c).sqrt()).fold(0.0, f64::max));
        }
    }
    Err(Error::SvdNotConverged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Closed form for 2x2: largest eigenvalue of the Hermitian `A^H A`.
    pub(crate) fn sigma_2x2(a: [Complex64; 4]) -> f64 {
        let fro2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let det = (a[0] * a[3] - a[1] * a[2]).norm();
        ((fro2 + (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
    }

    #[test]
    fn identity_and_diag() {
        assert!((max_singular_value(&CMatrix::identity(3), DEFAULT_SVD_TOL).unwrap() - 1.0).abs() < 1e-15);
        let d = CMatrix::new(2, 2, vec![c(0.0, 3.0), c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)]).unwrap();
        assert!((max_singular_value(&d, DEFAULT_SVD_TOL).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn unimodular_at_dc() {
        let u0 = CMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(9.0, 0.0)]).unwrap();
        let expected = ((83.0 + 6885f64.sqrt()) / 2.0).sqrt();
        let got = max_singular_value(&u0, DEFAULT_SVD_TOL).unwrap();
        assert!((got - expected).abs() < 1e-12 * expected);
        assert!((got - 9.1098).abs() < 1e-4);
    }

    #[test]
    fn zero_and_rectangular() {
        let z = CMatrix::new(2, 3, vec![c(0.0, 0.0); 6]).unwrap();
        assert_eq!(max_singular_value(&z, DEFAULT_SVD_TOL).unwrap(), 0.0);
        let row = CMatrix::new(1, 2, vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((max_singular_value(&row, DEFAULT_SVD_TOL).unwrap() - 5.0).abs() < 1e-14);
    }

    fn entry() -> impl Strategy<Value = Complex64> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #[test]
        fn matches_closed_form(a in prop::array::uniform4(entry())) {
            let m = CMatrix::new(2, 2, a.to_vec()).unwrap();
            let got = max_singular_value(&m, DEFAULT_SVD_TOL).unwrap();
            let want = sigma_2x2(a);
            prop_assert!((got - want).abs() <= 1e-9 * want.max(1e-300));
        }

        #[test]
        fn submultiplicative(a in prop::collection::vec(entry(), 9), b in prop::collection::vec(entry(), 9)) {
            let a = CMatrix::new(3, 3, a).unwrap();
            let b = CMatrix::new(3, 3, b).unwrap();
            let ab = max_singular_value(&a.mul(&b).unwrap(), DEFAULT_SVD_TOL).unwrap();
            let sa = max_singular_value(&a, DEFAULT_SVD_TOL).unwrap();
            let sb = max_singular_value(&b, DEFAULT_SVD_TOL).unwrap();
            prop_assert!(ab <= sa * sb * (1.0 + 1e-12) + 1e-9);
        }
    }
}
