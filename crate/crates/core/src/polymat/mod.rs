//! Polynomial matrices: products, determinants, unimodularity and the
//! Smith / Smith-McMillan forms.

mod smith;

pub use smith::{smith_form, smith_mcmillan, Certificate, SmDecomposition, SmithForm};

use std::fmt;
use std::ops::Neg;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyrat::{Poly, Rational};

/// Row-major matrix of exact polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "PolyMatrix::new",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                op: "PolyMatrix::from_rows",
                left: (r, c),
                right: (r, rows.iter().map(Vec::len).max().unwrap_or(0)),
            });
        }
        PolyMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::diag(vec![Poly::one(); n])
    }

    pub fn diag(d: Vec<Poly>) -> Self {
        let n = d.len();
        let mut m = PolyMatrix::zeros(n, n);
        for (i, p) in d.into_iter().enumerate() {
            m.entries[i * n + i] = p;
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Largest entry degree, `None` for the zero matrix.
    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "polymat_mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = PolyMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op: "polymat_add",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "determinant",
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(bareiss_det(self.to_rows()))
    }

    /// True iff square with a nonzero constant determinant.
    pub fn is_unimodular(&self) -> bool {
        self.determinant()
            .is_ok_and(|d| d.degree() == Some(0))
    }

    /// Adjugate (transposed cofactor matrix).
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "adjugate",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(PolyMatrix::identity(1));
        }
        let mut adj = PolyMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<Poly>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| self.get(r, c).clone())
                            .collect()
                    })
                    .collect();
                let d = bareiss_det(minor);
                adj.set(j, i, if (i + j) % 2 == 0 { d } else { -d });
            }
        }
        Ok(adj)
    }

    /// Polynomial inverse of a unimodular matrix: adjugate over the constant
    /// determinant.
    pub fn unimodular_inverse(&self) -> Result<PolyMatrix> {
        let det = self.determinant()?;
        if det.degree() != Some(0) {
            return Err(Error::NotUnimodular);
        }
        let inv_c = det.coeff(0).recip();
        Ok(self.adjugate()?.scale(&inv_c))
    }
}

fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| -p).collect(),
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[ {} ]", row.join(" , "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

impl PolyMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}
