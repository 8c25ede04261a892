//! Built-in example families.

use thiserror::Error;

use super::SpecDocument;
use crate::complex::MAX_VERTICES;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn invalid(msg: impl Into<String>) -> GenerateError {
    GenerateError::InvalidParameter(msg.into())
}

/// `∂Δⁿ` with rows `e_1, .., e_n, -(e_1 + .. + e_n)`: projective space `CPⁿ`.
pub fn simplex(n: usize) -> Result<SpecDocument, GenerateError> {
    if n == 0 || n + 1 > MAX_VERTICES {
        return Err(invalid(format!("simplex dimension must be in 1..={}", MAX_VERTICES - 1)));
    }
    let m = n + 1;
    let facets = (1..=m)
        .rev()
        .map(|skip| (1..=m).filter(|&v| v != skip).collect())
        .collect();
    let mut lambda: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| (i == k) as i64).collect()).collect();
    lambda.push(vec![-1; n]);
    Ok(SpecDocument::new(n, m, facets, lambda))
}

/// Square nerve with rows `(1,0), (0,1), (-1,k), (0,-1)`.
pub fn hirzebruch(k: i64) -> SpecDocument {
    SpecDocument::new(
        2,
        4,
        vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 1]],
        vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]],
    )
}

/// Largest Bott tower height accepted (the cube has `2^n` facets).
pub const MAX_BOTT_HEIGHT: usize = 12;

/// Bott tower from an upper-triangular `n×n` matrix `c` with diagonal `±1`.
///
/// The nerve is the boundary of the `n`-dimensional cross-polytope on the
/// vertex pairs `{i, n+i}`; rows are `a_i = e_i` and `a_{n+i} = -c_i`.
pub fn bott(c: &[Vec<i64>]) -> Result<SpecDocument, GenerateError> {
    let n = c.len();
    if n == 0 || n > MAX_BOTT_HEIGHT {
        return Err(invalid(format!("bott matrix size must be in 1..={MAX_BOTT_HEIGHT}")));
    }
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(invalid(format!("bott matrix row {} has {} entries, expected {n}", i + 1, row.len())));
        }
        if row[i].abs() != 1 {
            return Err(invalid(format!("bott matrix diagonal entry {} must be 1 or -1", i + 1)));
        }
        if row[..i].iter().any(|&x| x != 0) {
            return Err(invalid(format!("bott matrix row {} has entries below the diagonal", i + 1)));
        }
    }
    let facets = (0u64..1 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { n + i + 1 } else { i + 1 }).collect())
        .collect();
    let mut lambda: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| (i == k) as i64).collect()).collect();
    lambda.extend(c.iter().map(|row| row.iter().map(|x| -x).collect::<Vec<_>>()));
    Ok(SpecDocument::new(n, 2 * n, facets, lambda))
}

/// Join of the nerves with block-diagonal characteristic matrix.
pub fn product(a: &SpecDocument, b: &SpecDocument) -> Result<SpecDocument, GenerateError> {
    let m = a.m + b.m;
    if m > MAX_VERTICES {
        return Err(invalid(format!("product has {m} vertices, more than {MAX_VERTICES}")));
    }
    let n = a.n + b.n;
    let facets = a
        .facets
        .iter()
        .flat_map(|f| {
            b.facets
                .iter()
                .map(move |g| f.iter().copied().chain(g.iter().map(|v| v + a.m)).collect())
        })
        .collect();
    let lambda = a
        .lambda
        .iter()
        .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, b.n)).collect())
        .chain(b.lambda.iter().map(|r| std::iter::repeat_n(0, a.n).chain(r.iter().copied()).collect()))
        .collect();
    let mut doc = SpecDocument::new(n, m, facets, lambda);
    if let (Some(x), Some(y)) = (&a.names, &b.names) {
        doc.names = Some(x.iter().chain(y).cloned().collect());
    }
    Ok(doc)
}

/// The named examples used by the test suites.
pub fn shipped_examples() -> Vec<(String, SpecDocument)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("cp{n}"), simplex(n).expect("valid dimension")));
    }
    for k in 0..=3 {
        out.push((format!("hirzebruch{k}"), hirzebruch(k)));
    }
    out.push(("bott2".into(), bott(&[vec![1, 2], vec![0, -1]]).expect("valid matrix")));
    out.push((
        "bott3".into(),
        bott(&[vec![1, 1, 2], vec![0, 1, -1], vec![0, 0, 1]]).expect("valid matrix"),
    ));
    let cp1 = simplex(1).expect("valid dimension");
    let cp2 = simplex(2).expect("valid dimension");
    out.push(("cp1xcp2".into(), product(&cp1, &cp2).expect("small product")));
    out.push(("cp1xhirzebruch1".into(), product(&cp1, &hirzebruch(1)).expect("small product")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::NerveComplex;

    #[test]
    fn simplex_one_is_cp1() {
        let d = simplex(1).unwrap();
        assert_eq!(d.lambda, vec![vec![1], vec![-1]]);
        assert_eq!(d.to_manifold().unwrap().d(), 2);
        assert!(simplex(0).is_err());
    }

    #[test]
    fn hirzebruch_two_rows() {
        assert_eq!(hirzebruch(2).lambda, vec![vec![1, 0], vec![0, 1], vec![-1, 2], vec![0, -1]]);
    }

    #[test]
    fn hirzebruch_is_a_height_two_bott_tower() {
        for k in -2..=3 {
            let h = hirzebruch(k);
            let b = bott(&[vec![1, -k], vec![0, 1]]).unwrap();
            assert_eq!(h.lambda, b.lambda);
            assert_eq!(h.complex().unwrap(), b.complex().unwrap());
        }
    }

    #[test]
    fn product_of_lines_has_the_square_nerve() {
        let p = product(&simplex(1).unwrap(), &simplex(1).unwrap()).unwrap();
        // Vertices 1,2 from the first factor and 3,4 from the second; the
        // square 1-3-2-4 relabels to hirzebruch's 1-2-3-4.
        let relabel = |v: usize| [1, 3, 2, 4][v - 1];
        let facets: Vec<Vec<usize>> = p.facets.iter().map(|f| f.iter().map(|&v| relabel(v)).collect()).collect();
        assert_eq!(
            NerveComplex::from_lists(4, &facets).unwrap(),
            hirzebruch(0).complex().unwrap()
        );
        assert_eq!(p.lambda, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]);
    }

    #[test]
    fn bott_rejects_bad_matrices() {
        assert!(bott(&[vec![2]]).is_err());
        assert!(bott(&[vec![1, 0], vec![1, 1]]).is_err());
        assert!(bott(&[vec![1, 0]]).is_err());
        assert!(bott(&[]).is_err());
    }

    #[test]
    fn shipped_examples_validate() {
        for (name, doc) in shipped_examples() {
            doc.check().unwrap_or_else(|e| panic!("{name}: {e}"));
            doc.to_manifold().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
