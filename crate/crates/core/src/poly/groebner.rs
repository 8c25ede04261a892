//! Strong Gröbner bases over Z.
//!
//! A term `c x^d` is reduced by the basis element with the smallest leading
//! coefficient `b` among those whose leading monomial divides `x^d`, leaving
//! the remainder `c mod b` in `[0, b)`. Completion adds both S-polynomials
//! and G-polynomials (gcd combinations of leading coefficients), which makes
//! normal forms unique.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntPoly, Monomial, TermOrder};

type Terms = Vec<(Monomial, BigInt)>;

/// Reduced strong Gröbner basis of an ideal of `Z[v_1, .., v_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: TermOrder,
    generators: Vec<IntPoly>,
    sorted: Vec<Terms>,
    complete: bool,
}

impl GroebnerBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Set once every S- and G-polynomial of the final basis reduced to zero.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn leading_terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.sorted.iter().map(|t| (&t[0].0, &t[0].1))
    }

    /// True if the ideal contains 1.
    pub fn is_unit_ideal(&self) -> bool {
        self.leading_terms().any(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn contains(&self, p: &IntPoly) -> bool {
        normal_form(p, self).is_zero()
    }

    /// Re-runs the S/G-polynomial criterion on the stored basis.
    pub fn certify(&self) -> bool {
        certify(&self.sorted, self.order)
    }
}

fn leading(t: &Terms) -> (&Monomial, &BigInt) {
    (&t[0].0, &t[0].1)
}

/// `a·x^ma·p + b·x^mb·q`, both inputs sorted decreasingly.
fn combine(p: &Terms, a: &BigInt, ma: &Monomial, q: &Terms, b: &BigInt, mb: &Monomial, order: TermOrder) -> Terms {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let (mut i, mut j) = (0, 0);
    let (mut x, mut y) = (None::<(Monomial, BigInt)>, None::<(Monomial, BigInt)>);
    loop {
        if x.is_none() && i < p.len() && !a.is_zero() {
            x = Some((p[i].0.mul(ma), &p[i].1 * a));
            i += 1;
        }
        if y.is_none() && j < q.len() && !b.is_zero() {
            y = Some((q[j].0.mul(mb), &q[j].1 * b));
            j += 1;
        }
        match (x.take(), y.take()) {
            (None, None) => break,
            (Some(t), None) | (None, Some(t)) => out.push(t),
            (Some(s), Some(t)) => match order.cmp(&s.0, &t.0) {
                Ordering::Greater => {
                    out.push(s);
                    y = Some(t);
                }
                Ordering::Less => {
                    out.push(t);
                    x = Some(s);
                }
                Ordering::Equal => {
                    let c = s.1 + t.1;
                    if !c.is_zero() {
                        out.push((s.0, c));
                    }
                }
            },
        }
    }
    out
}

/// Index of the reducer for `m`: leading monomial divides `m`, smallest
/// leading coefficient, first index on ties.
fn reducer<'a>(m: &Monomial, basis: impl Iterator<Item = (usize, &'a Terms)>) -> Option<usize> {
    let mut best: Option<(usize, &BigInt)> = None;
    for (i, g) in basis {
        let (lm, lc) = leading(g);
        if lm.divides(m) && best.is_none_or(|(_, b)| lc < b) {
            best = Some((i, lc));
        }
    }
    best.map(|(i, _)| i)
}

/// Full reduction of `p` (every term, not only the leading one).
fn reduce(p: Terms, basis: &[Option<Terms>], order: TermOrder) -> Terms {
    let live = || basis.iter().enumerate().filter_map(|(i, g)| g.as_ref().map(|g| (i, g)));
    let mut work = p;
    let mut out: Terms = Vec::new();
    let minus_one = -BigInt::one();
    while !work.is_empty() {
        let (m, c) = work[0].clone();
        if let Some(i) = reducer(&m, live()) {
            let g = basis[i].as_ref().expect("live element");
            let (lm, lc) = leading(g);
            let q = c.div_floor(lc);
            if !q.is_zero() {
                let one = Monomial::one(m.nvars());
                work = combine(&work, &BigInt::one(), &one, g, &(&q * &minus_one), &m.div(lm), order);
            }
        }
        if work.first().is_some_and(|t| t.0 == m) {
            out.push(work.remove(0));
        }
    }
    out
}

fn normalize_sign(mut p: Terms) -> Terms {
    if p.first().is_some_and(|t| t.1.is_negative()) {
        for t in p.iter_mut() {
            t.1 = -&t.1;
        }
    }
    p
}

/// S-polynomial and (when neither leading coefficient divides the other)
/// G-polynomial of a pair.
fn pair_polys(f: &Terms, g: &Terms, order: TermOrder) -> Vec<Terms> {
    let (fm, fc) = leading(f);
    let (gm, gc) = leading(g);
    let lcm_m = fm.lcm(gm);
    let (sf, sg) = (lcm_m.div(fm), lcm_m.div(gm));
    let l = fc.lcm(gc);
    let mut out = vec![combine(f, &(&l / fc), &sf, g, &-(&l / gc), &sg, order)];
    if !fc.is_multiple_of(gc) && !gc.is_multiple_of(fc) {
        let e = fc.extended_gcd(gc);
        out.push(combine(f, &e.x, &sf, g, &e.y, &sg, order));
    }
    out
}

fn certify(basis: &[Terms], order: TermOrder) -> bool {
    let wrapped: Vec<Option<Terms>> = basis.iter().cloned().map(Some).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for p in pair_polys(&basis[i], &basis[j], order) {
                if !reduce(p, &wrapped, order).is_empty() {
                    return false;
                }
            }
        }
    }
    true
}

struct Builder {
    order: TermOrder,
    basis: Vec<Option<Terms>>,
    pairs: BTreeSet<(u32, usize, usize)>,
}

impl Builder {
    fn insert(&mut self, p: Terms) {
        let h = normalize_sign(reduce(p, &self.basis, self.order));
        if h.is_empty() {
            return;
        }
        let (hm, hc) = leading(&h);
        // Elements whose leading term the new one strongly divides are
        // pulled out and reinserted after reduction.
        let mut displaced = Vec::new();
        for slot in self.basis.iter_mut() {
            let covered = slot.as_ref().is_some_and(|g| {
                let (gm, gc) = leading(g);
                hm.divides(gm) && gc.is_multiple_of(hc)
            });
            if covered {
                displaced.push(slot.take().expect("checked above"));
            }
        }
        let idx = self.basis.len();
        for (i, g) in self.basis.iter().enumerate() {
            if let Some(g) = g {
                let deg = leading(g).0.lcm(hm).degree();
                self.pairs.insert((deg, i, idx));
            }
        }
        self.basis.push(Some(h));
        for g in displaced {
            self.insert(g);
        }
    }

    fn run(&mut self) {
        while let Some((_, i, j)) = self.pairs.pop_first() {
            let (Some(f), Some(g)) = (&self.basis[i], &self.basis[j]) else {
                continue;
            };
            for p in pair_polys(f, g, self.order) {
                self.insert(p);
            }
        }
    }

    /// Drops redundant elements and reduces tails.
    fn finish(self) -> Vec<Terms> {
        let mut live: Vec<Terms> = self.basis.into_iter().flatten().collect();
        let mut keep: Vec<Terms> = Vec::new();
        live.sort_by(|a, b| {
            let (am, ac) = leading(a);
            let (bm, bc) = leading(b);
            self.order.cmp(am, bm).then_with(|| ac.cmp(bc))
        });
        for g in live {
            let (gm, gc) = leading(&g);
            let redundant = keep.iter().any(|h| {
                let (hm, hc) = leading(h);
                hm.divides(gm) && gc.is_multiple_of(hc)
            });
            if !redundant {
                keep.retain(|h| {
                    let (hm, hc) = leading(h);
                    !(gm.divides(hm) && hc.is_multiple_of(gc))
                });
                keep.push(g);
            }
        }
        let wrapped: Vec<Option<Terms>> = keep.iter().cloned().map(Some).collect();
        keep.into_iter()
            .map(|g| {
                let mut tail_reduced = vec![g[0].clone()];
                tail_reduced.extend(reduce(g[1..].to_vec(), &wrapped, self.order));
                tail_reduced
            })
            .collect()
    }
}

/// Computes the reduced strong Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are processed by increasing degree of the lcm of their leading
/// monomials, ties broken by pair index, so the output is deterministic.
pub fn buchberger_z(gens: &[IntPoly], nvars: usize, order: TermOrder) -> GroebnerBasis {
    let mut b = Builder {
        order,
        basis: Vec::new(),
        pairs: BTreeSet::new(),
    };
    for g in gens {
        assert_eq!(g.nvars(), nvars, "generator from a different ring");
        if !g.is_zero() {
            b.insert(g.sorted_terms(order));
            b.run();
        }
    }
    let sorted = b.finish();
    let complete = certify(&sorted, order);
    let generators = sorted
        .iter()
        .map(|t| IntPoly::from_terms(nvars, t.iter().cloned()))
        .collect();
    GroebnerBasis {
        nvars,
        order,
        generators,
        sorted,
        complete,
    }
}

/// Unique remainder of `p` modulo the ideal of `gb`.
pub fn normal_form(p: &IntPoly, gb: &GroebnerBasis) -> IntPoly {
    assert_eq!(p.nvars(), gb.nvars, "polynomial from a different ring");
    let wrapped: Vec<Option<Terms>> = gb.sorted.iter().cloned().map(Some).collect();
    IntPoly::from_terms(gb.nvars, reduce(p.sorted_terms(gb.order), &wrapped, gb.order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, j: usize) -> IntPoly {
        IntPoly::var(n, j)
    }

    fn c(n: usize, k: i64) -> IntPoly {
        IntPoly::constant(n, k)
    }

    /// Ideal of `∂Δ²` with the standard characteristic rows.
    fn cp2_gens() -> Vec<IntPoly> {
        vec![&(&v(3, 1) * &v(3, 2)) * &v(3, 3), v(3, 3) - v(3, 1), v(3, 3) - v(3, 2)]
    }

    #[test]
    fn cp2_ideal() {
        let gb = buchberger_z(&cp2_gens(), 3, TermOrder::DegRevLex);
        assert!(gb.is_complete());
        let expected = vec![v(3, 3).pow(3), v(3, 2) - v(3, 3), v(3, 1) - v(3, 3)];
        let mut got = gb.generators().to_vec();
        got.sort_by_key(|p| p.to_string());
        let mut want = expected.clone();
        want.sort_by_key(|p| p.to_string());
        assert_eq!(got, want);
        for g in &expected {
            assert!(gb.contains(g));
        }
        assert_eq!(normal_form(&v(3, 1), &gb), v(3, 3));
        assert!(normal_form(&v(3, 3).pow(3), &gb).is_zero());
        assert_eq!(normal_form(&c(3, 1), &gb), c(3, 1));
    }

    #[test]
    fn gcd_combination() {
        let gens = vec![v(1, 1).scale(&BigInt::from(2)), v(1, 1).scale(&BigInt::from(3))];
        let gb = buchberger_z(&gens, 1, TermOrder::DegRevLex);
        assert_eq!(gb.generators(), &[v(1, 1)]);
    }

    #[test]
    fn zero_ideal() {
        let gb = buchberger_z(&[IntPoly::zero(2)], 2, TermOrder::DegRevLex);
        assert!(gb.is_empty());
        assert!(gb.is_complete());
        assert_eq!(normal_form(&v(2, 1), &gb), v(2, 1));
    }

    #[test]
    fn torsion_ideal_normal_forms() {
        // (2x, x^2): 3x reduces to x, 4x to 0.
        let gens = vec![v(1, 1).scale(&BigInt::from(2)), v(1, 1).pow(2)];
        let gb = buchberger_z(&gens, 1, TermOrder::DegRevLex);
        assert!(gb.is_complete());
        assert_eq!(normal_form(&v(1, 1).scale(&BigInt::from(3)), &gb), v(1, 1));
        assert!(normal_form(&v(1, 1).scale(&BigInt::from(-4)), &gb).is_zero());
        assert_eq!(normal_form(&v(1, 1).scale(&BigInt::from(-1)), &gb), v(1, 1));
    }

    #[test]
    fn mixed_coefficients() {
        // (6y - x... ) style ideal needing both S- and G-polynomials.
        let n = 2;
        let gens = vec![
            &v(n, 1).scale(&BigInt::from(4)) + &v(n, 2),
            &v(n, 1).scale(&BigInt::from(6)) - &c(n, 1),
        ];
        let gb = buchberger_z(&gens, n, TermOrder::Lex);
        assert!(gb.is_complete());
        for g in &gens {
            assert!(gb.contains(g));
        }
        // 2x + ... lies in the ideal: 3*(4x+y) - 2*(6x-1) = 3y + 2.
        assert!(gb.contains(&(&v(n, 2).scale(&BigInt::from(3)) + &c(n, 2))));
        assert!(!gb.contains(&c(n, 1)));
    }

    #[test]
    fn unit_ideal() {
        let gens = vec![v(1, 1).scale(&BigInt::from(2)) - c(1, 1), v(1, 1)];
        let gb = buchberger_z(&gens, 1, TermOrder::DegRevLex);
        assert!(gb.is_unit_ideal());
        assert_eq!(gb.generators(), &[c(1, 1)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(nvars: usize) -> impl Strategy<Value = IntPoly> {
            proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -3i64..=3), 0..4)
                .prop_map(move |terms| {
                    IntPoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial::new(e), BigInt::from(c))))
                })
        }

        fn fixed_ideals() -> Vec<Vec<IntPoly>> {
            let n = 3;
            let hirz = vec![
                &v(n, 1) * &v(n, 3),
                v(n, 3) - v(n, 1),
                &(&v(n, 2) * &v(n, 3)) - &v(n, 2),
            ];
            vec![
                cp2_gens(),
                hirz,
                vec![v(n, 1).scale(&BigInt::from(2)), v(n, 1).pow(2), v(n, 2).pow(2) - v(n, 3), v(n, 3).pow(2)],
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn normal_form_is_multiplicative(p in arb_poly(3), q in arb_poly(3), which in 0usize..3) {
                let gens = &fixed_ideals()[which];
                let gb = buchberger_z(gens, 3, TermOrder::DegRevLex);
                let lhs = normal_form(&(&p * &q), &gb);
                let rhs = normal_form(&(&normal_form(&p, &gb) * &normal_form(&q, &gb)), &gb);
                prop_assert_eq!(lhs, rhs);
                for g in gens {
                    prop_assert!(normal_form(g, &gb).is_zero());
                }
            }

            #[test]
            fn random_ideals_are_certified(gens in proptest::collection::vec(arb_poly(2), 1..4)) {
                let gb = buchberger_z(&gens, 2, TermOrder::DegRevLex);
                prop_assert!(gb.is_complete());
                for g in &gens {
                    prop_assert!(normal_form(g, &gb).is_zero());
                }
                // Normal forms are canonical: p and p + g·h agree.
                if let (Some(p), Some(g)) = (gens.first(), gens.last()) {
                    let shifted = p + &(g * &v(2, 1));
                    prop_assert_eq!(normal_form(p, &gb), normal_form(&shifted, &gb));
                }
            }
        }
    }
}
