//! Smith form of a polynomial matrix by elementary row/column operations,
//! and the Smith-McMillan form of a rational transfer matrix built on it.

use serde::Serialize;

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::polyrat::{format_rational, Poly, RatFunc};
use crate::tfm::TransferMatrix;

/// `U * N * V = S` with `U`, `V` unimodular and `S` diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: PolyMatrix,
    pub s: PolyMatrix,
    pub v: PolyMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `S`.
    pub fn invariant_factors(&self) -> Vec<Poly> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .filter(|p| !p.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Reducer {
    a: Vec<Vec<Poly>>,
    u: Vec<Vec<Poly>>,
    v: Vec<Vec<Poly>>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.a.iter_mut().chain(self.v.iter_mut()) {
                row.swap(i, j);
            }
        }
    }

    /// `row[target] += factor * row[source]`
    fn add_row(&mut self, target: usize, source: usize, factor: &Poly) {
        for m in [&mut self.a, &mut self.u] {
            for k in 0..m[0].len() {
                if !m[source][k].is_zero() {
                    let delta = factor * &m[source][k];
                    m[target][k] = &m[target][k] + &delta;
                }
            }
        }
    }

    /// `col[target] += factor * col[source]`
    fn add_col(&mut self, target: usize, source: usize, factor: &Poly) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                if !row[source].is_zero() {
                    let delta = factor * &row[source];
                    row[target] = &row[target] + &delta;
                }
            }
        }
    }

    /// Lowest-degree nonzero entry of the trailing block, ties broken by row
    /// then column.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, p) in row.iter().enumerate().skip(t) {
                if let Some(d) = p.degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clears row and column `t` outside the pivot. Returns false when some
    /// remainder survived and a new pivot must be chosen.
    fn eliminate(&mut self, t: usize) -> Result<bool> {
        let (rows, cols) = (self.a.len(), self.a[0].len());
        let mut clean = true;
        for i in t + 1..rows {
            if self.a[i][t].is_zero() {
                continue;
            }
            let (q, r) = self.a[i][t].div_rem(&self.a[t][t])?;
            self.add_row(i, t, &-q);
            clean &= r.is_zero();
        }
        for j in t + 1..cols {
            if self.a[t][j].is_zero() {
                continue;
            }
            let (q, r) = self.a[t][j].div_rem(&self.a[t][t])?;
            self.add_col(j, t, &-q);
            clean &= r.is_zero();
        }
        Ok(clean)
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.a[t][t];
        (t + 1..self.a.len()).find(|&i| {
            self.a[i]
                .iter()
                .skip(t + 1)
                .any(|x| !x.is_zero() && !p.divides(x))
        })
    }
}

/// Smith form over `Q[s]`.
///
/// The diagonal of `S` is monic and satisfies `d_i | d_{i+1}`; zero entries
/// (rank deficiency) trail at the end.
pub fn smith_form(n: &PolyMatrix) -> Result<SmithForm> {
    let (rows, cols) = n.shape();
    let mut r = Reducer {
        a: n.to_rows(),
        u: PolyMatrix::identity(rows).to_rows(),
        v: PolyMatrix::identity(cols).to_rows(),
    };
    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = r.pivot(t) {
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            if !r.eliminate(t)? {
                continue;
            }
            match r.non_divisible(t) {
                Some(i) => r.add_row(t, i, &Poly::one()),
                None => break,
            }
        }
        if let Some(lc) = r.a[t][t].leading_coeff().cloned() {
            if !num_traits::One::is_one(&lc) {
                let inv = lc.recip();
                for m in [&mut r.a, &mut r.u] {
                    m[t] = m[t].iter().map(|p| p.scale(&inv)).collect();
                }
            }
        }
    }
    let s = PolyMatrix::from_rows(r.a)?;
    debug_assert!(s.is_diagonal());
    Ok(SmithForm {
        u: PolyMatrix::from_rows(r.u)?,
        s,
        v: PolyMatrix::from_rows(r.v)?,
    })
}

/// Smith-McMillan decomposition `U * P * V = diag(eps_i / psi_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmDecomposition {
    u: PolyMatrix,
    v: PolyMatrix,
    diag: Vec<RatFunc>,
}

/// Checks that make a decomposition trustworthy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub u_unimodular: bool,
    pub v_unimodular: bool,
    pub det_u: String,
    pub det_v: String,
    pub relation_exact: bool,
    pub divisibility_chain: bool,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.u_unimodular && self.v_unimodular && self.relation_exact && self.divisibility_chain
    }
}

impl SmDecomposition {
    /// Wraps externally supplied transformation matrices, computing the
    /// diagonal as `U * P * V`. Fails if the product is not diagonal or the
    /// matrices are not unimodular.
    pub fn from_transforms(p: &TransferMatrix, u: PolyMatrix, v: PolyMatrix) -> Result<Self> {
        if !u.is_unimodular() || !v.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let product = TransferMatrix::from(&u).mul(p)?.mul(&TransferMatrix::from(&v))?;
        let diag = product
            .diagonal()
            .ok_or_else(|| Error::InvalidParameter("U * P * V is not diagonal".into()))?;
        Ok(SmDecomposition { u, v, diag })
    }

    pub fn u(&self) -> &PolyMatrix {
        &self.u
    }

    pub fn v(&self) -> &PolyMatrix {
        &self.v
    }

    pub fn diag(&self) -> &[RatFunc] {
        &self.diag
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// The diagonal plant `P^SM` as a transfer matrix.
    pub fn psm(&self) -> TransferMatrix {
        TransferMatrix::diag(self.diag.clone())
    }

    /// Numerators `eps_i`.
    pub fn epsilons(&self) -> Vec<Poly> {
        self.diag.iter().map(|f| f.num().clone()).collect()
    }

    /// Monic denominators `psi_i`.
    pub fn psis(&self) -> Vec<Poly> {
        self.diag.iter().map(|f| f.den().clone()).collect()
    }

    pub fn u_inverse(&self) -> Result<PolyMatrix> {
        self.u.unimodular_inverse()
    }

    pub fn v_inverse(&self) -> Result<PolyMatrix> {
        self.v.unimodular_inverse()
    }

    /// `U^-1 * P^SM * V^-1`.
    pub fn reconstruct(&self) -> Result<TransferMatrix> {
        TransferMatrix::from(&self.u_inverse()?)
            .mul(&self.psm())?
            .mul(&TransferMatrix::from(&self.v_inverse()?))
    }

    /// True when `eps_i | eps_{i+1}` and `psi_{i+1} | psi_i` for all `i`.
    pub fn divisibility_chain(&self) -> bool {
        let eps = self.epsilons();
        let psi = self.psis();
        eps.windows(2).all(|w| w[0].divides(&w[1]))
            && psi.windows(2).all(|w| w[1].divides(&w[0]))
    }

    pub fn certify(&self, p: &TransferMatrix) -> Result<Certificate> {
        let det_u = self.u.determinant()?;
        let det_v = self.v.determinant()?;
        let product = TransferMatrix::from(&self.u)
            .mul(p)?
            .mul(&TransferMatrix::from(&self.v))?;
        Ok(Certificate {
            u_unimodular: det_u.degree() == Some(0),
            v_unimodular: det_v.degree() == Some(0),
            det_u: constant_string(&det_u),
            det_v: constant_string(&det_v),
            relation_exact: product == self.psm(),
            divisibility_chain: self.divisibility_chain(),
        })
    }
}

fn constant_string(p: &Poly) -> String {
    if p.is_constant() {
        format_rational(&p.coeff(0))
    } else {
        p.to_string()
    }
}

/// Smith-McMillan form of a square transfer matrix of full normal rank.
pub fn smith_mcmillan(p: &TransferMatrix) -> Result<SmDecomposition> {
    let n = p.rows();
    if !p.is_square() {
        return Err(Error::NotSquare {
            op: "smith_mcmillan",
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let d = p.common_denominator();
    let cleared = PolyMatrix::new(
        n,
        n,
        p.entries()
            .iter()
            .map(|f| f.num() * &d.exact_div(f.den()).expect("lcm is a multiple"))
            .collect(),
    )?;
    let sf = smith_form(&cleared)?;
    let rank = sf.rank();
    if rank < n {
        return Err(Error::RankDeficient { rank, dim: n });
    }
    let diag = (0..n)
        .map(|i| RatFunc::new(sf.s.get(i, i).clone(), d.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SmDecomposition {
        u: sf.u,
        v: sf.v,
        diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::int;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn check(n: &PolyMatrix) -> SmithForm {
        let sf = smith_form(n).unwrap();
        assert_eq!(sf.u.mul(n).unwrap().mul(&sf.v).unwrap(), sf.s);
        assert!(sf.u.is_unimodular() && sf.v.is_unimodular());
        assert!(sf.s.is_diagonal());
        let d: Vec<Poly> = (0..n.rows().min(n.cols())).map(|i| sf.s.get(i, i).clone()).collect();
        for w in d.windows(2) {
            assert!(w[1].is_zero() || w[0].divides(&w[1]));
        }
        for x in d.iter().filter(|x| !x.is_zero()) {
            assert!(x.is_monic());
        }
        sf
    }

    #[test]
    fn reorders_for_divisibility() {
        let sf = check(&PolyMatrix::diag(vec![p(&[0, 0, 1]), p(&[0, 1])]));
        assert_eq!(sf.s, PolyMatrix::diag(vec![p(&[0, 1]), p(&[0, 0, 1])]));
    }

    #[test]
    fn coprime_diagonal_becomes_one_and_product() {
        let sf = check(&PolyMatrix::diag(vec![p(&[1, 1]), p(&[2, 1])]));
        assert_eq!(sf.s, PolyMatrix::diag(vec![Poly::one(), p(&[2, 3, 1])]));
    }

    #[test]
    fn rank_deficient() {
        let sf = check(&PolyMatrix::diag(vec![p(&[0, 1]), Poly::zero()]));
        assert_eq!(sf.s, PolyMatrix::diag(vec![p(&[0, 1]), Poly::zero()]));
        assert_eq!(sf.rank(), 1);
    }

    #[test]
    fn scaled_constant_entries() {
        let n = PolyMatrix::from_rows(vec![
            vec![Poly::constant(int(2)), Poly::constant(int(4))],
            vec![Poly::constant(int(6)), Poly::constant(int(3))],
        ])
        .unwrap();
        let sf = check(&n);
        assert_eq!(sf.s, PolyMatrix::identity(2));
    }

    fn small_matrix() -> impl Strategy<Value = PolyMatrix> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, 0..=4), r * c).prop_map(
                move |cs| PolyMatrix::new(r, c, cs.iter().map(|x| Poly::from_i64(x)).collect()).unwrap(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn smith_relation_holds(n in small_matrix()) {
            check(&n);
        }
    }
}
