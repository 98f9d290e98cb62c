//! Transfer-matrix algebra over the field of rational functions, controller
//! back-mapping, the properness relative-degree bound and transmission
//! poles/zeros.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polymat::{PolyMatrix, SmDecomposition};
use crate::polyrat::{poly_roots, Poly, RatFunc, Rational, RootSet};

/// Row-major matrix of reduced rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransferMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl TransferMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFunc>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "TransferMatrix::new",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        Ok(TransferMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                op: "TransferMatrix::from_rows",
                left: (r, c),
                right: (r, rows.iter().map(Vec::len).max().unwrap_or(0)),
            });
        }
        TransferMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TransferMatrix {
            rows,
            cols,
            entries: vec![RatFunc::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        TransferMatrix::diag(vec![RatFunc::one(); n])
    }

    pub fn diag(d: Vec<RatFunc>) -> Self {
        let n = d.len();
        let mut m = TransferMatrix::zeros(n, n);
        for (i, f) in d.into_iter().enumerate() {
            m.entries[i * n + i] = f;
        }
        m
    }

    /// Scalar 1x1 matrix.
    pub fn scalar(f: RatFunc) -> Self {
        TransferMatrix::diag(vec![f])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: RatFunc) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<RatFunc>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFunc::is_zero)
    }

    pub fn is_proper(&self) -> bool {
        self.entries.iter().all(RatFunc::is_proper)
    }

    /// Diagonal entries if every off-diagonal entry is zero.
    pub fn diagonal(&self) -> Option<Vec<RatFunc>> {
        if !self.is_square() {
            return None;
        }
        let off_zero = (0..self.rows)
            .all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()));
        off_zero.then(|| (0..self.rows).map(|i| self.get(i, i).clone()).collect())
    }

    /// Monic least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> Poly {
        self.entries.iter().fold(Poly::one(), |acc, f| {
            let g = Poly::gcd(&acc, f.den()).expect("denominators are nonzero");
            (&acc * &f.den().exact_div(&g).expect("gcd divides")).monic()
        })
    }

    fn check_same_shape(&self, rhs: &TransferMatrix, op: &'static str) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &TransferMatrix) -> Result<TransferMatrix> {
        self.check_same_shape(rhs, "tfm_add")?;
        Ok(TransferMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &TransferMatrix) -> Result<TransferMatrix> {
        self.check_same_shape(rhs, "tfm_sub")?;
        Ok(TransferMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> TransferMatrix {
        TransferMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|f| -f).collect(),
        }
    }

    pub fn scale(&self, f: &RatFunc) -> TransferMatrix {
        TransferMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * f).collect(),
        }
    }

    pub fn mul(&self, rhs: &TransferMatrix) -> Result<TransferMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "tfm_mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = TransferMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = RatFunc::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `I + self`.
    pub fn add_identity(&self) -> Result<TransferMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "add_identity",
                rows: self.rows,
                cols: self.cols,
            });
        }
        self.add(&TransferMatrix::identity(self.rows))
    }

    /// Writes `self = N / d` with `d` the common denominator.
    fn clear_denominators(&self) -> (PolyMatrix, Poly) {
        let d = self.common_denominator();
        let n = self
            .entries
            .iter()
            .map(|f| f.num() * &d.exact_div(f.den()).expect("lcm is a multiple"))
            .collect();
        (
            PolyMatrix::new(self.rows, self.cols, n).expect("shape preserved"),
            d,
        )
    }

    pub fn determinant(&self) -> Result<RatFunc> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "determinant",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (n, d) = self.clear_denominators();
        RatFunc::new(n.determinant()?, d.pow(self.rows as u32))
    }

    /// Exact inverse via the adjugate of the denominator-cleared matrix.
    pub fn inverse(&self) -> Result<TransferMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "tfm_inverse",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (n, d) = self.clear_denominators();
        let det = n.determinant()?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let adj = n.adjugate()?;
        let entries = adj
            .entries()
            .iter()
            .map(|a| RatFunc::new(a * &d, det.clone()))
            .collect::<Result<Vec<_>>>()?;
        TransferMatrix::new(self.rows, self.cols, entries)
    }

    pub fn transpose(&self) -> TransferMatrix {
        let mut out = TransferMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Entrywise value at a complex point, row-major.
    pub fn eval(&self, s0: Complex64) -> Result<Vec<Complex64>> {
        self.entries.iter().map(|f| f.eval(s0)).collect()
    }

    /// Assembles a block matrix from a grid of equally shaped blocks.
    pub fn block(blocks: &[Vec<&TransferMatrix>]) -> Result<TransferMatrix> {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, Vec::len);
        let (r, c) = blocks[0][0].shape();
        let mut out = TransferMatrix::zeros(br * r, bc * c);
        for (bi, brow) in blocks.iter().enumerate() {
            for (bj, b) in brow.iter().enumerate() {
                if b.shape() != (r, c) {
                    return Err(Error::DimensionMismatch {
                        op: "block",
                        left: (r, c),
                        right: b.shape(),
                    });
                }
                for i in 0..r {
                    for j in 0..c {
                        out.set(bi * r + i, bj * c + j, b.get(i, j).clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

impl From<&PolyMatrix> for TransferMatrix {
    fn from(m: &PolyMatrix) -> Self {
        TransferMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().cloned().map(RatFunc::from_poly).collect(),
        }
    }
}

impl fmt::Display for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[ {} ]", cells.join(" , "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TransferMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

/// `C = V * C^SM * U`.
pub fn controller_backmap(csm: &TransferMatrix, u: &PolyMatrix, v: &PolyMatrix) -> Result<TransferMatrix> {
    TransferMatrix::from(v).mul(csm)?.mul(&TransferMatrix::from(u))
}

/// `P = U^-1 * P^SM * V^-1`.
pub fn plant_backmap(psm: &TransferMatrix, u: &PolyMatrix, v: &PolyMatrix) -> Result<TransferMatrix> {
    TransferMatrix::from(&u.unimodular_inverse()?)
        .mul(psm)?
        .mul(&TransferMatrix::from(&v.unimodular_inverse()?))
}

/// Per-channel minimum relative degree `r_k` of a diagonal `C^SM` that keeps
/// `C = V * C^SM * U` proper.
///
/// Entry `(i, j)` of `C` is `sum_k V_ik * C_k * U_kj`, so each term is proper
/// once `reldeg(C_k) >= deg V_ik + deg U_kj`. The bound is sufficient; it
/// ignores cancellations between terms.
pub fn properness_min_reldeg(u: &PolyMatrix, v: &PolyMatrix) -> Result<Vec<usize>> {
    let n = u.rows();
    if !u.is_square() || v.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "properness_min_reldeg",
            left: u.shape(),
            right: v.shape(),
        });
    }
    Ok((0..n)
        .map(|k| {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter_map(|(i, j)| Some(v.get(i, k).degree()? + u.get(k, j).degree()?))
                .max()
                .unwrap_or(0)
        })
        .collect())
}

/// Same bound for the plant side: `P = U^-1 * P^SM * V^-1` is proper when
/// channel `k` of `P^SM` has relative degree at least the returned value.
pub fn plant_properness_min_reldeg(u: &PolyMatrix, v: &PolyMatrix) -> Result<Vec<usize>> {
    properness_min_reldeg(&v.unimodular_inverse()?, &u.unimodular_inverse()?)
}

/// Transmission poles (roots of `prod psi_i`) and zeros (roots of
/// `prod eps_i`).
#[derive(Clone, Debug, PartialEq)]
pub struct PoleZeroStructure {
    pub transmission_poles: RootSet,
    pub transmission_zeros: RootSet,
}

#[derive(Serialize)]
struct PoleZeroJson {
    transmission_poles: Vec<[f64; 2]>,
    transmission_zeros: Vec<[f64; 2]>,
}

impl PoleZeroStructure {
    pub fn to_json(&self) -> serde_json::Value {
        let flat = |r: &RootSet| r.flatten().iter().map(|z| [z.re, z.im]).collect();
        serde_json::to_value(PoleZeroJson {
            transmission_poles: flat(&self.transmission_poles),
            transmission_zeros: flat(&self.transmission_zeros),
        })
        .expect("plain data serializes")
    }
}

fn roots_or_empty(p: &Poly, tol: f64) -> Result<RootSet> {
    if p.degree().unwrap_or(0) == 0 {
        Ok(RootSet::empty())
    } else {
        poly_roots(p, tol)
    }
}

pub fn transmission_structure(dec: &SmDecomposition, tol: f64) -> Result<PoleZeroStructure> {
    let pole_poly = dec.psis().iter().fold(Poly::one(), |a, b| &a * b);
    let zero_poly = dec.epsilons().iter().fold(Poly::one(), |a, b| &a * b);
    Ok(PoleZeroStructure {
        transmission_poles: roots_or_empty(&pole_poly, tol)?,
        transmission_zeros: roots_or_empty(&zero_poly, tol)?,
    })
}

/// Rational scalar times a transfer matrix.
pub fn scale_rational(m: &TransferMatrix, c: &Rational) -> TransferMatrix {
    m.scale(&RatFunc::constant(c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::{int, DEFAULT_ROOT_TOL};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = TransferMatrix::from_rows(vec![
            vec![rf(&[1], &[1, 1]), rf(&[0, 1], &[2, 1])],
            vec![RatFunc::zero(), rf(&[3], &[1])],
        ])
        .unwrap();
        assert_eq!(a.mul(&TransferMatrix::identity(2)).unwrap(), a);
        assert_eq!(TransferMatrix::identity(2).mul(&a).unwrap(), a);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(TransferMatrix::identity(3).inverse().unwrap(), TransferMatrix::identity(3));
        let a = rf(&[1], &[1, 1]);
        let b = rf(&[0, 1], &[3, 1]);
        let d = TransferMatrix::diag(vec![a.clone(), b.clone()]);
        assert_eq!(
            d.inverse().unwrap(),
            TransferMatrix::diag(vec![a.recip().unwrap(), b.recip().unwrap()])
        );
        let m = TransferMatrix::diag(vec![rf(&[1], &[1, 1]), RatFunc::zero()]).add_identity().unwrap();
        assert_eq!(
            m.inverse().unwrap(),
            TransferMatrix::diag(vec![rf(&[1, 1], &[2, 1]), RatFunc::one()])
        );
        let sing = TransferMatrix::from_rows(vec![
            vec![rf(&[1], &[1, 1]), rf(&[1], &[1, 1])],
            vec![rf(&[1], &[1, 1]), rf(&[1], &[1, 1])],
        ])
        .unwrap();
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn dimension_mismatch() {
        let a = TransferMatrix::identity(2);
        let b = TransferMatrix::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_controller_maps_to_zero() {
        let u = PolyMatrix::from_rows(vec![vec![p(&[0]), p(&[1])], vec![p(&[1]), p(&[2, 1])]]).unwrap();
        let c = controller_backmap(&TransferMatrix::zeros(2, 2), &u, &u).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn identity_transforms_need_no_extra_reldeg() {
        let i = PolyMatrix::identity(3);
        assert_eq!(properness_min_reldeg(&i, &i).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn transmission_examples() {
        let dec = SmDecomposition::from_transforms(
            &TransferMatrix::diag(vec![rf(&[1], &[1, 1]), RatFunc::one()]),
            PolyMatrix::identity(2),
            PolyMatrix::identity(2),
        )
        .unwrap();
        let pz = transmission_structure(&dec, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(pz.transmission_poles.count(), 1);
        assert!((pz.transmission_poles.roots()[0] + 1.0).norm() < 1e-14);
        assert!(pz.transmission_zeros.is_empty());

        let dec = SmDecomposition::from_transforms(
            &TransferMatrix::diag(vec![rf(&[0, 1], &[1, 1]), RatFunc::from_poly(p(&[0, 1]))]),
            PolyMatrix::identity(2),
            PolyMatrix::identity(2),
        )
        .unwrap();
        let pz = transmission_structure(&dec, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(pz.transmission_zeros.multiplicities(), &[2]);
        assert!(pz.transmission_zeros.roots()[0].norm() < 1e-15);
        assert_eq!(pz.transmission_poles.count(), 1);
    }

    #[test]
    fn determinant_of_diag() {
        let d = TransferMatrix::diag(vec![rf(&[1], &[1, 1]), rf(&[2], &[0, 1])]);
        assert_eq!(d.determinant().unwrap(), rf(&[2], &[0, 1, 1]));
        assert_eq!(scale_rational(&d, &int(0)), TransferMatrix::zeros(2, 2));
    }
}
