//! Z-module structure of `Z[v]/I`.
//!
//! With unit leading coefficients the standard monomials of a strong
//! Gröbner basis are a Z-basis. Otherwise, and as an independent check, the
//! quotient is computed from the degree-truncated presentation
//! `Z[v]/(I + (v_1, .., v_m)^(B+1))` by integer elimination and a Smith
//! normal form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GroebnerBasis, IntPoly, Monomial, PolyError, TermOrder};
use crate::linalg::smith_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum QuotientMethod {
    StandardMonomials,
    TruncatedSmith { bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientModule {
    /// Ascending in the basis' term order; empty when computed by truncation.
    pub standard_monomials: Vec<Monomial>,
    pub free: bool,
    /// Rank of the free part.
    pub rank: usize,
    /// Invariant factors `> 1` of the torsion part.
    pub torsion: Vec<BigInt>,
    pub method: QuotientMethod,
    /// Coordinate map of the truncated presentation, when that method was used.
    pub truncated: Option<TruncatedBasis>,
}

/// `Z[v]/(gens + m^(bound+1))` as `Z^rank ⊕ ⨁ Z/torsion_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedQuotient {
    pub bound: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Z-module structure of `Z[v]/I` for the ideal of `gb`.
///
/// `bound` is only used by the truncation fallback, which requires the
/// answers at `bound - 1` and `bound` to agree.
pub fn quotient_module(gb: &GroebnerBasis, bound: usize) -> Result<QuotientModule, PolyError> {
    if bound == 0 {
        return Err(PolyError::BoundTooSmall);
    }
    if gb.leading_terms().all(|(_, c)| c.is_one()) {
        let lms: Vec<&Monomial> = gb.leading_terms().map(|(m, _)| m).collect();
        let standard_monomials = standard_monomials(&lms, gb.nvars(), gb.order())?;
        return Ok(QuotientModule {
            free: true,
            rank: standard_monomials.len(),
            standard_monomials,
            torsion: Vec::new(),
            method: QuotientMethod::StandardMonomials,
            truncated: None,
        });
    }
    let hi = truncated_basis(gb.generators(), gb.nvars(), bound);
    let lo = truncated_quotient(gb.generators(), gb.nvars(), bound - 1);
    if hi.rank != lo.rank || hi.torsion != lo.torsion {
        return Err(PolyError::Indeterminate { bound });
    }
    Ok(QuotientModule {
        standard_monomials: Vec::new(),
        free: hi.torsion.is_empty(),
        rank: hi.rank,
        torsion: hi.torsion.clone(),
        method: QuotientMethod::TruncatedSmith { bound },
        truncated: Some(hi),
    })
}

/// Monomials divisible by none of `lms`, ascending under `order`.
fn standard_monomials(lms: &[&Monomial], nvars: usize, order: TermOrder) -> Result<Vec<Monomial>, PolyError> {
    if lms.iter().any(|m| m.is_one()) {
        return Ok(Vec::new());
    }
    let mut caps = vec![u32::MAX; nvars];
    for m in lms {
        if let Some(j) = m.pure_power_of() {
            caps[j - 1] = caps[j - 1].min(m.degree());
        }
    }
    if let Some(j) = caps.iter().position(|&c| c == u32::MAX) {
        return Err(PolyError::InfiniteQuotient(j + 1));
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn walk(k: usize, cur: &mut Vec<u32>, caps: &[u32], lms: &[&Monomial], out: &mut Vec<Monomial>) {
        let mono = Monomial::new(cur.clone());
        if lms.iter().any(|l| l.divides(&mono)) {
            return;
        }
        if k == cur.len() {
            out.push(mono);
            return;
        }
        for e in 0..caps[k] {
            cur[k] = e;
            walk(k + 1, cur, caps, lms, out);
        }
        cur[k] = 0;
    }
    walk(0, &mut cur, &caps, lms, &mut out);
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(out)
}

type SparseRow = Vec<(usize, BigInt)>;

/// `a·x + b·y` for sparse rows sorted by column.
fn axpy(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, val) = if take_x {
            i += 1;
            (x[i - 1].0, a * &x[i - 1].1)
        } else if take_y {
            j += 1;
            (y[j - 1].0, b * &y[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a * &x[i - 1].1 + b * &y[j - 1].1)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

fn positive_lead(mut row: SparseRow) -> SparseRow {
    if row[0].1.is_negative() {
        for e in row.iter_mut() {
            e.1 = -&e.1;
        }
    }
    row
}

/// Row echelon form over Z, one pivot row per leading column.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    fn insert(&mut self, mut row: SparseRow) {
        let one = BigInt::one();
        while let Some((col, a)) = row.first().cloned() {
            let Some(p) = self.pivots.get_mut(&col) else {
                self.pivots.insert(col, positive_lead(row));
                return;
            };
            let b = p[0].1.clone();
            if a.is_multiple_of(&b) {
                row = axpy(&one, &row, &-(&a / &b), p);
            } else {
                let e = b.extended_gcd(&a);
                let merged = axpy(&e.x, p, &e.y, &row);
                let rest = axpy(&(&a / &e.gcd), p, &-(&b / &e.gcd), &row);
                *p = positive_lead(merged);
                row = rest;
            }
        }
    }
}

/// Monomials of degree `<= bound` not divisible by any of `killed`.
fn truncated_monomials(nvars: usize, bound: u32, killed: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn walk(k: usize, left: u32, cur: &mut Vec<u32>, killed: &[Monomial], out: &mut Vec<Monomial>) {
        if k == cur.len() {
            let m = Monomial::new(cur.clone());
            if !killed.iter().any(|s| s.divides(&m)) {
                out.push(m);
            }
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            let partial = Monomial::new(cur.clone());
            if killed.iter().any(|s| s.divides(&partial)) {
                break;
            }
            walk(k + 1, left - e, cur, killed, out);
        }
        cur[k] = 0;
    }
    walk(0, bound, &mut cur, killed, &mut out);
    out.sort_by(|a, b| TermOrder::DegRevLex.cmp(a, b));
    out
}

/// The degree-truncated quotient `Z[v]/(gens + m^(bound+1))` together with
/// an explicit map onto `Z^rank ⊕ ⨁ Z/torsion_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBasis {
    bound: u32,
    index: HashMap<Monomial, usize>,
    /// Pivot rows with leading coefficient 1, keyed by pivot column.
    unit_rows: HashMap<usize, SparseRow>,
    /// Column to position in the Smith coordinates.
    remaining: HashMap<usize, usize>,
    transform: Vec<Vec<BigInt>>,
    /// Nonzero Smith diagonal entries; free coordinates start here.
    offset: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl TruncatedBasis {
    pub fn bound(&self) -> usize {
        self.bound as usize
    }

    /// Coordinates of the class of `p` in the free part, length `rank`.
    /// Linear in `p`; with no torsion the map is an isomorphism onto `Z^rank`.
    pub fn coordinates(&self, p: &IntPoly) -> Vec<BigInt> {
        let mut row: SparseRow = p
            .terms()
            .filter_map(|(m, c)| self.index.get(m).map(|&i| (i, c.clone())))
            .collect();
        row.sort_by_key(|e| e.0);
        let one = BigInt::one();
        let mut k = 0;
        while k < row.len() {
            match self.unit_rows.get(&row[k].0) {
                Some(pivot) => {
                    let c = row[k].1.clone();
                    row = axpy(&one, &row, &-c, pivot);
                }
                None => k += 1,
            }
        }
        let mut y = vec![BigInt::zero(); self.remaining.len()];
        for (c, x) in row {
            y[self.remaining[&c]] = x;
        }
        (self.offset..self.remaining.len())
            .map(|j| y.iter().zip(&self.transform).map(|(a, vrow)| a * &vrow[j]).sum())
            .collect()
    }

    pub fn summary(&self) -> TruncatedQuotient {
        TruncatedQuotient {
            bound: self.bound(),
            rank: self.rank,
            torsion: self.torsion.clone(),
        }
    }
}

/// Z-module structure of `Z[v]/(gens + m^(bound+1))`.
pub fn truncated_quotient(gens: &[IntPoly], nvars: usize, bound: usize) -> TruncatedQuotient {
    truncated_basis(gens, nvars, bound).summary()
}

/// Builds the truncated quotient from the Smith form of the matrix whose
/// rows are the truncations of `u·g` over all monomials `u` of degree
/// `<= bound` and all generators `g`.
///
/// Unit monomial generators are applied by deleting the columns they kill.
pub fn truncated_basis(gens: &[IntPoly], nvars: usize, bound: usize) -> TruncatedBasis {
    let bound_u32 = u32::try_from(bound).expect("degree bound fits in u32");
    let killed: Vec<Monomial> = gens
        .iter()
        .filter(|g| g.len() == 1)
        .filter_map(|g| g.terms().next().filter(|(_, c)| c.abs().is_one()).map(|(m, _)| m.clone()))
        .collect();
    let columns = truncated_monomials(nvars, bound_u32, &killed);
    let index: HashMap<Monomial, usize> = columns.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let others: Vec<&IntPoly> = gens
        .iter()
        .filter(|g| !g.is_zero() && !(g.len() == 1 && g.terms().all(|(_, c)| c.abs().is_one())))
        .collect();

    let mut ech = Echelon::default();
    for u in &columns {
        for g in &others {
            let mut row: SparseRow = g
                .terms()
                .filter_map(|(m, c)| {
                    let w = m.mul(u);
                    (w.degree() <= bound_u32).then_some(())?;
                    index.get(&w).map(|&i| (i, c.clone()))
                })
                .collect();
            if row.is_empty() {
                continue;
            }
            row.sort_by_key(|e| e.0);
            ech.insert(row);
        }
    }

    let mut unit_rows: HashMap<usize, SparseRow> = HashMap::new();
    let mut hard: Vec<SparseRow> = Vec::new();
    for (c, r) in ech.pivots {
        if r[0].1.is_one() {
            unit_rows.insert(c, r);
        } else {
            hard.push(r);
        }
    }
    hard.sort();
    let one = BigInt::one();
    for row in hard.iter_mut() {
        let mut k = 0;
        while k < row.len() {
            match unit_rows.get(&row[k].0) {
                Some(p) => {
                    let c = row[k].1.clone();
                    *row = axpy(&one, row, &-c, p);
                }
                None => k += 1,
            }
        }
    }
    let remaining: HashMap<usize, usize> = (0..columns.len())
        .filter(|c| !unit_rows.contains_key(c))
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let width = remaining.len();
    let dense: Vec<Vec<BigInt>> = hard
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut d = vec![BigInt::zero(); width];
            for (c, x) in r {
                d[remaining[c]] = x.clone();
            }
            d
        })
        .collect();
    let (diagonal, transform) = if dense.is_empty() || width == 0 {
        let id = (0..width)
            .map(|i| (0..width).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        (Vec::new(), id)
    } else {
        let f = smith_form(&dense);
        (f.diagonal, f.column_transform)
    };
    let offset = diagonal.iter().filter(|d| !d.is_zero()).count();
    TruncatedBasis {
        bound: bound_u32,
        index,
        unit_rows,
        remaining,
        transform,
        offset,
        rank: width - offset,
        torsion: diagonal.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
    }
}
