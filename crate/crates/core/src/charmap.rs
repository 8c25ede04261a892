//! Characteristic matrices and the nonsingularity (unimodularity) test.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::{FaceSet, NerveComplex};
pub use crate::linalg::smith_diagonal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharMapError {
    #[error("row {row} has length {len}, expected {n}")]
    RowLength { row: usize, len: usize, n: usize },
    #[error("facet index {j} out of range 1..={m}")]
    IndexOutOfRange { j: usize, m: usize },
    #[error("covector has length {len}, expected {n}")]
    CovectorLength { len: usize, n: usize },
    #[error("characteristic matrix is {m}x{n} but the complex has {vertices} vertices and facet size {facet_size}")]
    DimensionMismatch {
        m: usize,
        n: usize,
        vertices: usize,
        facet_size: usize,
    },
}

/// Rows `a_1, .., a_m` of the characteristic map, each in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl CharMatrix {
    pub fn new(n: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, CharMapError> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(CharMapError::RowLength {
                row: i + 1,
                len: r.len(),
                n,
            });
        }
        Ok(CharMatrix { n, rows })
    }

    pub fn from_i64(n: usize, rows: &[Vec<i64>]) -> Result<Self, CharMapError> {
        Self::new(n, crate::linalg::to_big(rows))
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Row `a_j`, 1-based.
    pub fn row(&self, j: usize) -> Result<&[BigInt], CharMapError> {
        if j == 0 || j > self.rows.len() {
            return Err(CharMapError::IndexOutOfRange {
                j,
                m: self.rows.len(),
            });
        }
        Ok(&self.rows[j - 1])
    }

    /// `<t, a_j>`.
    pub fn pairing(&self, t: &[BigInt], j: usize) -> Result<BigInt, CharMapError> {
        if t.len() != self.n {
            return Err(CharMapError::CovectorLength { len: t.len(), n: self.n });
        }
        Ok(self.row(j)?.iter().zip(t).map(|(a, b)| a * b).sum())
    }

    /// `<t, a_j>` for all `j`.
    pub fn pairings(&self, t: &[BigInt]) -> Result<Vec<BigInt>, CharMapError> {
        (1..=self.rows.len()).map(|j| self.pairing(t, j)).collect()
    }

    pub fn check_dimensions(&self, complex: &NerveComplex) -> Result<(), CharMapError> {
        if self.rows.len() != complex.vertex_count() || self.n != complex.facet_size() {
            return Err(CharMapError::DimensionMismatch {
                m: self.rows.len(),
                n: self.n,
                vertices: complex.vertex_count(),
                facet_size: complex.facet_size(),
            });
        }
        Ok(())
    }

    /// True when the rows indexed by `face` extend to a Z-basis of `Z^n`.
    pub fn is_unimodular(&self, face: FaceSet) -> bool {
        let sub: Vec<Vec<BigInt>> = face.iter().map(|v| self.rows[v - 1].clone()).collect();
        if sub.is_empty() {
            return true;
        }
        let diag = smith_diagonal(&sub);
        diag.len() == sub.len() && diag.iter().all(|d| d.is_one())
    }

    /// All nonempty faces of `complex` whose rows fail to be unimodular,
    /// in face order. An empty list means the map is nonsingular.
    pub fn validate_nonsingular(&self, complex: &NerveComplex) -> Result<Vec<FaceSet>, CharMapError> {
        self.check_dimensions(complex)?;
        Ok(complex
            .all_faces()
            .into_iter()
            .filter(|f| !f.is_empty() && !self.is_unimodular(*f))
            .collect())
    }

    /// Same matrix with row `j` negated.
    pub fn flip_row(&self, j: usize) -> Result<CharMatrix, CharMapError> {
        self.row(j)?;
        let mut rows = self.rows.clone();
        for x in rows[j - 1].iter_mut() {
            *x = -x.clone();
        }
        Ok(CharMatrix { n: self.n, rows })
    }

    /// Rows multiplied on the right by `basis` (an `n×n` integer matrix).
    pub fn transform(&self, basis: &[Vec<BigInt>]) -> CharMatrix {
        CharMatrix {
            n: self.n,
            rows: crate::linalg::mat_mul(&self.rows, basis),
        }
    }

    /// `e_i` as a covector of length `n`.
    pub fn unit_covector(&self, i: usize) -> Vec<BigInt> {
        (0..self.n)
            .map(|k| if k == i { BigInt::one() } else { BigInt::zero() })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn face(v: &[usize]) -> FaceSet {
        FaceSet::from_vertices(v).unwrap()
    }

    fn triangle() -> NerveComplex {
        NerveComplex::from_lists(3, &[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap()
    }

    fn cp2() -> CharMatrix {
        CharMatrix::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let l = cp2();
        assert_eq!(l.pairing(&big(&[1, 0]), 3), Ok(BigInt::from(-1)));
        assert_eq!(l.pairing(&big(&[0, 1]), 1), Ok(BigInt::from(0)));
        let single = CharMatrix::from_i64(2, &[vec![1, -1]]).unwrap();
        assert_eq!(single.pairing(&big(&[2, 3]), 1), Ok(BigInt::from(-1)));
        assert_eq!(
            l.pairing(&big(&[1]), 1),
            Err(CharMapError::CovectorLength { len: 1, n: 2 })
        );
        assert_eq!(l.pairing(&big(&[1, 0]), 4), Err(CharMapError::IndexOutOfRange { j: 4, m: 3 }));
        assert_eq!(l.pairing(&big(&[1, 0]), 0), Err(CharMapError::IndexOutOfRange { j: 0, m: 3 }));
    }

    #[test]
    fn nonsingular_examples() {
        assert_eq!(cp2().validate_nonsingular(&triangle()), Ok(vec![]));

        let bad = CharMatrix::from_i64(2, &[vec![2, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        let v = bad.validate_nonsingular(&triangle()).unwrap();
        assert!(v.contains(&face(&[1])));

        let segment = NerveComplex::from_lists(2, &[vec![1, 2]]).unwrap();
        let dup = CharMatrix::from_i64(2, &[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(dup.validate_nonsingular(&segment), Ok(vec![face(&[1, 2])]));

        let wrong = CharMatrix::from_i64(3, &vec![vec![1, 0, 0]; 3]).unwrap();
        assert!(matches!(
            wrong.validate_nonsingular(&triangle()),
            Err(CharMapError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn row_length_checked() {
        assert_eq!(
            CharMatrix::from_i64(2, &[vec![1, 0], vec![1]]),
            Err(CharMapError::RowLength { row: 2, len: 1, n: 2 })
        );
    }

    mod props {
        use super::*;
        use crate::linalg::{determinant, mat_mul, to_big};
        use num_traits::Signed;
        use proptest::prelude::*;

        fn square() -> NerveComplex {
            NerveComplex::from_lists(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 1]]).unwrap()
        }

        fn arb_lambda() -> impl Strategy<Value = CharMatrix> {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 4)
                .prop_map(|rows| CharMatrix::from_i64(2, &rows).unwrap())
        }

        /// Products of elementary matrices, so determinant ±1 by construction.
        fn arb_unimodular() -> impl Strategy<Value = Vec<Vec<BigInt>>> {
            proptest::collection::vec((0usize..2, -3i64..=3, any::<bool>()), 0..6).prop_map(|ops| {
                let mut u = to_big(&[vec![1, 0], vec![0, 1]]);
                for (i, c, neg) in ops {
                    let mut e = to_big(&[vec![1, 0], vec![0, 1]]);
                    e[i][1 - i] = BigInt::from(c);
                    if neg {
                        e[i][i] = BigInt::from(-1);
                    }
                    u = mat_mul(&u, &e);
                }
                u
            })
        }

        proptest! {
            #[test]
            fn verdicts_are_monotone(l in arb_lambda()) {
                let k = square();
                let bad = l.validate_nonsingular(&k).unwrap();
                for f in k.all_faces() {
                    if !bad.contains(&f) {
                        for g in f.subsets() {
                            prop_assert!(g.is_empty() || !bad.contains(&g));
                        }
                    }
                }
            }

            #[test]
            fn verdicts_invariant_under_basis_change(l in arb_lambda(), u in arb_unimodular()) {
                prop_assert!(determinant(&u).abs().is_one());
                let k = square();
                prop_assert_eq!(
                    l.validate_nonsingular(&k).unwrap(),
                    l.transform(&u).validate_nonsingular(&k).unwrap()
                );
            }

            #[test]
            fn verdicts_invariant_under_sign_flips(l in arb_lambda(), j in 1usize..=4) {
                let k = square();
                prop_assert_eq!(
                    l.validate_nonsingular(&k).unwrap(),
                    l.flip_row(j).unwrap().validate_nonsingular(&k).unwrap()
                );
            }
        }
    }
}
