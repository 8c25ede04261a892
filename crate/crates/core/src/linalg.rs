//! Dense integer linear algebra: Smith diagonals, determinants, inverses of
//! unimodular matrices.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn shape(mat: &[Vec<BigInt>]) -> (usize, usize) {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    debug_assert!(mat.iter().all(|r| r.len() == cols), "ragged matrix");
    (rows, cols)
}

/// Diagonal of the Smith normal form, of length `min(rows, cols)`.
///
/// Entries are nonnegative, each divides the next, and zeros come last.
pub fn smith_diagonal(mat: &[Vec<BigInt>]) -> Vec<BigInt> {
    smith_form(mat).diagonal
}

/// Smith normal form `U·A·V = D` with the column transform `V` retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    /// Unimodular `cols × cols` matrix `V`.
    pub column_transform: IntMatrix,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

fn swap_columns(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// `col_j -= q · col_t`.
fn sub_column(a: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt, skip: usize) {
    for row in a.iter_mut().skip(skip) {
        let delta = q * &row[t];
        row[j] -= delta;
    }
}

pub fn smith_form(mat: &[Vec<BigInt>]) -> SmithForm {
    let (rows, cols) = shape(mat);
    let mut a = mat.to_vec();
    let mut v: IntMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let size = rows.min(cols);
    for t in 0..size {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        swap_columns(&mut a, t, pj);
        swap_columns(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                sub_column(&mut a, j, t, &q, t);
                sub_column(&mut v, j, t, &q, 0);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Row and column are clear; enforce divisibility of the rest.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let x = a[i][j].clone();
                            a[t][j] += x;
                        }
                    }
                }
            }
            if let Some((pi, pj)) = smallest_entry_in_cross(&a, t) {
                a.swap(t, pi);
                swap_columns(&mut a, t, pj);
                swap_columns(&mut v, t, pj);
            }
        }
        if a[t][t].is_negative() {
            for row in v.iter_mut() {
                row[t] = -&row[t];
            }
            for row in a.iter_mut() {
                row[t] = -&row[t];
            }
        }
    }
    SmithForm {
        diagonal: (0..size).map(|i| a[i][i].clone()).collect(),
        column_transform: v,
    }
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t` of the trailing block.
fn smallest_entry_in_cross(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let cells = (t..a.len())
        .map(|i| (i, t))
        .chain((t + 1..a[t].len()).map(|j| (t, j)));
    let mut best: Option<(usize, usize)> = None;
    for (i, j) in cells {
        if a[i][j].is_zero() {
            continue;
        }
        if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
            best = Some((i, j));
        }
    }
    best
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mat: &[Vec<BigInt>]) -> BigInt {
    let (n, cols) = shape(mat);
    assert_eq!(n, cols, "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut a = mat.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square integer matrix with determinant ±1, else `None`.
///
/// Row-reduces `[A | I]` with unimodular row operations (extended gcd
/// combinations), so the right block tracks the transformation exactly.
pub fn unimodular_inverse(mat: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let (n, cols) = shape(mat);
    assert_eq!(n, cols, "inverse of a non-square matrix");
    let mut a: IntMatrix = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let ext = a[k][k].extended_gcd(&a[i][k]);
            let (g, s, t) = (ext.gcd, ext.x, ext.y);
            let (p, q) = (&a[k][k] / &g, &a[i][k] / &g);
            let (rk, ri) = (a[k].clone(), a[i].clone());
            for j in 0..2 * n {
                a[k][j] = &s * &rk[j] + &t * &ri[j];
                a[i][j] = &p * &ri[j] - &q * &rk[j];
            }
        }
        if !a[k][k].abs().is_one() {
            return None;
        }
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    for k in (0..n).rev() {
        for i in 0..k {
            if a[i][k].is_zero() {
                continue;
            }
            let q = a[i][k].clone();
            for j in 0..2 * n {
                let delta = &q * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let (n, k) = shape(a);
    let (k2, m) = shape(b);
    assert_eq!(k, k2, "shape mismatch");
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}
