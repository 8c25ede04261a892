//! Shelling orders, restriction faces, the interval partition and the
//! even-dimensional cell structure they induce.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{FaceSet, NerveComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellingError {
    #[error("order is not a permutation of the facets of the complex")]
    NotPermutation,
    /// 1-based index of the first step whose new faces lack a unique minimal element.
    #[error("not a shelling: step {step} has no unique minimal new face")]
    NotShelling { step: usize },
    #[error("face {0} is not a face of the complex")]
    NotAFace(FaceSet),
    #[error("ambient dimension {n} does not match facet size {facet_size}")]
    DimensionMismatch { n: usize, facet_size: usize },
}

/// A shelling `F_1, .., F_d` together with the restrictions `r(F_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shelling {
    order: Vec<FaceSet>,
    restrictions: Vec<FaceSet>,
}

/// `h_k = #{i : |r(F_i)| = k}` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector(pub Vec<usize>);

impl HVector {
    /// Even Betti numbers `b_0, b_2, .., b_2n`, with `b_2k = h_{n-k}`.
    pub fn betti(&self) -> Vec<usize> {
        self.0.iter().rev().copied().collect()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Facets `F_i ∖ {v}` that already lie in the subcomplex generated by
/// `previous` determine `r(F_i)`.
fn restriction(facet: FaceSet, previous: &[FaceSet]) -> FaceSet {
    let in_prefix = |g: FaceSet| previous.iter().any(|&p| g.is_subset(p));
    facet
        .iter()
        .filter(|&v| in_prefix(facet.without(v)))
        .fold(FaceSet::EMPTY, |acc, v| acc.with(v))
}

/// Restriction of `facet` after `previous`, or `None` if the new faces do
/// not have a unique minimal element.
///
/// Every new face contains the vertex-criterion restriction `r`, so the
/// condition holds exactly when `r` itself is new.
fn step_restriction(facet: FaceSet, previous: &[FaceSet]) -> Option<FaceSet> {
    let r = restriction(facet, previous);
    if previous.iter().any(|&p| r.is_subset(p)) {
        None
    } else {
        Some(r)
    }
}

impl Shelling {
    pub fn order(&self) -> &[FaceSet] {
        &self.order
    }

    pub fn restrictions(&self) -> &[FaceSet] {
        &self.restrictions
    }

    /// Number of facets `d`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn facet_size(&self) -> usize {
        self.order.first().map_or(0, |f| f.len())
    }

    /// The unique 1-based `i` with `r(F_i) ⊆ g ⊆ F_i`.
    pub fn interval_of(&self, g: FaceSet) -> Result<usize, ShellingError> {
        if !self.order.iter().any(|&f| g.is_subset(f)) {
            return Err(ShellingError::NotAFace(g));
        }
        self.order
            .iter()
            .zip(&self.restrictions)
            .position(|(&f, &r)| r.is_subset(g) && g.is_subset(f))
            .map(|i| i + 1)
            .ok_or(ShellingError::NotAFace(g))
    }

    pub fn h_vector(&self) -> HVector {
        let mut h = vec![0; self.facet_size() + 1];
        for r in &self.restrictions {
            h[r.len()] += 1;
        }
        HVector(h)
    }

    /// Real dimensions `2 (n - |r(F_i)|)` of the cells, in shelling order.
    pub fn cell_dimensions(&self, n: usize) -> Result<Vec<usize>, ShellingError> {
        if n != self.facet_size() {
            return Err(ShellingError::DimensionMismatch {
                n,
                facet_size: self.facet_size(),
            });
        }
        Ok(self.restrictions.iter().map(|r| 2 * (n - r.len())).collect())
    }

    /// `Σ 2^{|F_i| - |r(F_i)|}`, the number of faces covered by the intervals.
    pub fn interval_face_count(&self) -> u128 {
        self.order
            .iter()
            .zip(&self.restrictions)
            .map(|(f, r)| 1u128 << (f.len() - r.len()))
            .sum()
    }
}

/// Checks that `order` is a shelling of `complex` and computes the restrictions.
pub fn verify_shelling(complex: &NerveComplex, order: &[FaceSet]) -> Result<Shelling, ShellingError> {
    let mut sorted = order.to_vec();
    sorted.sort();
    if sorted != complex.facets() {
        return Err(ShellingError::NotPermutation);
    }
    let mut restrictions = Vec::with_capacity(order.len());
    for (i, &f) in order.iter().enumerate() {
        let r = step_restriction(f, &order[..i]).ok_or(ShellingError::NotShelling { step: i + 1 })?;
        restrictions.push(r);
    }
    Ok(Shelling {
        order: order.to_vec(),
        restrictions,
    })
}

/// Depth-first search for a shelling.
///
/// Facets are tried in (cardinality, lexicographic) order, those sharing a
/// ridge with the current subcomplex first. Dead prefixes are memoised by
/// their facet set, which is all a later step depends on. Returns the first
/// shelling found, so the result is deterministic.
pub fn find_shelling(complex: &NerveComplex) -> Option<Shelling> {
    let facets = complex.facets();
    if facets.is_empty() {
        return None;
    }
    let mut search = Search {
        facets,
        used: vec![false; facets.len()],
        order: Vec::with_capacity(facets.len()),
        restrictions: Vec::with_capacity(facets.len()),
        dead: HashSet::new(),
    };
    if search.extend() {
        Some(Shelling {
            order: search.order,
            restrictions: search.restrictions,
        })
    } else {
        None
    }
}

struct Search<'a> {
    facets: &'a [FaceSet],
    used: Vec<bool>,
    order: Vec<FaceSet>,
    restrictions: Vec<FaceSet>,
    dead: HashSet<Vec<bool>>,
}

impl Search<'_> {
    fn extend(&mut self) -> bool {
        if self.order.len() == self.facets.len() {
            return true;
        }
        if self.dead.contains(&self.used) {
            return false;
        }
        let shares_ridge = |f: FaceSet, order: &[FaceSet]| {
            order
                .iter()
                .any(|&g| f.intersection(g).len() + 1 == f.len())
        };
        let mut candidates: Vec<usize> = (0..self.facets.len()).filter(|&i| !self.used[i]).collect();
        candidates.sort_by_key(|&i| !shares_ridge(self.facets[i], &self.order));
        for i in candidates {
            let f = self.facets[i];
            let Some(r) = step_restriction(f, &self.order) else {
                continue;
            };
            self.used[i] = true;
            self.order.push(f);
            self.restrictions.push(r);
            if self.extend() {
                return true;
            }
            self.used[i] = false;
            self.order.pop();
            self.restrictions.pop();
        }
        self.dead.insert(self.used.clone());
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(v: &[usize]) -> FaceSet {
        FaceSet::from_vertices(v).unwrap()
    }

    fn faces(v: &[&[usize]]) -> Vec<FaceSet> {
        v.iter().map(|f| face(f)).collect()
    }

    fn triangle() -> NerveComplex {
        NerveComplex::from_lists(3, &[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap()
    }

    fn four_cycle() -> NerveComplex {
        NerveComplex::from_lists(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 1]]).unwrap()
    }

    fn two_cycles() -> NerveComplex {
        NerveComplex::from_lists(
            8,
            &[
                vec![1, 2],
                vec![2, 3],
                vec![3, 4],
                vec![4, 1],
                vec![5, 6],
                vec![6, 7],
                vec![7, 8],
                vec![8, 5],
            ],
        )
        .unwrap()
    }

    /// Straight from the definition: enumerate the faces of `Δ_i` missing
    /// from `Δ_{i-1}` and collect their inclusion-minimal elements.
    fn oracle_restrictions(order: &[FaceSet]) -> Result<Vec<FaceSet>, usize> {
        let mut out = Vec::new();
        for i in 0..order.len() {
            let new: Vec<FaceSet> = order[i]
                .subsets()
                .filter(|g| !order[..i].iter().any(|p| g.is_subset(*p)))
                .collect();
            let minimal: Vec<FaceSet> = new
                .iter()
                .copied()
                .filter(|g| !new.iter().any(|h| h != g && h.is_subset(*g)))
                .collect();
            if minimal.len() != 1 {
                return Err(i + 1);
            }
            out.push(minimal[0]);
        }
        Ok(out)
    }

    fn permutations(items: &[FaceSet]) -> Vec<Vec<FaceSet>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let x = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn verify_examples() {
        let order = faces(&[&[1, 2], &[2, 3], &[1, 3]]);
        let sh = verify_shelling(&triangle(), &order).unwrap();
        let expected = faces(&[&[], &[3], &[1, 3]]);
        assert_eq!(sh.restrictions(), expected.as_slice());
        assert_eq!(oracle_restrictions(&order).unwrap(), expected);

        let order = faces(&[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]);
        let sh = verify_shelling(&four_cycle(), &order).unwrap();
        let expected = faces(&[&[], &[3], &[4], &[1, 4]]);
        assert_eq!(sh.restrictions(), expected.as_slice());
        assert_eq!(oracle_restrictions(&order).unwrap(), expected);

        let segments = NerveComplex::from_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        let order = faces(&[&[1, 2], &[3, 4]]);
        assert_eq!(
            verify_shelling(&segments, &order),
            Err(ShellingError::NotShelling { step: 2 })
        );
        assert_eq!(oracle_restrictions(&order), Err(2));
    }

    #[test]
    fn verify_rejects_non_permutations() {
        let order = faces(&[&[1, 2], &[2, 3]]);
        assert_eq!(verify_shelling(&triangle(), &order), Err(ShellingError::NotPermutation));
        let order = faces(&[&[1, 2], &[2, 3], &[2, 3]]);
        assert_eq!(verify_shelling(&triangle(), &order), Err(ShellingError::NotPermutation));
    }

    #[test]
    fn verify_agrees_with_definition_on_every_order() {
        for k in [triangle(), four_cycle()] {
            for order in permutations(k.facets()) {
                match (verify_shelling(&k, &order), oracle_restrictions(&order)) {
                    (Ok(sh), Ok(r)) => assert_eq!(sh.restrictions(), r.as_slice()),
                    (Err(ShellingError::NotShelling { step }), Err(s)) => assert_eq!(step, s),
                    (a, b) => panic!("disagreement on {order:?}: {a:?} vs {b:?}"),
                }
            }
        }
    }

    #[test]
    fn find_examples() {
        let sh = find_shelling(&triangle()).unwrap();
        assert_eq!(sh.order(), faces(&[&[1, 2], &[1, 3], &[2, 3]]).as_slice());
        assert!(verify_shelling(&triangle(), sh.order()).is_ok());

        let sh = find_shelling(&four_cycle()).unwrap();
        assert!(verify_shelling(&four_cycle(), sh.order()).is_ok());

        assert!(find_shelling(&two_cycles()).is_none());
        let exhaustive_hit = permutations(two_cycles().facets())
            .iter()
            .any(|o| oracle_restrictions(o).is_ok());
        assert!(!exhaustive_hit);
    }

    #[test]
    fn boundary_of_simplex_shells_in_any_order() {
        for n in 1..=3usize {
            let m = n + 1;
            let all = FaceSet::from_bits((1 << m) - 1);
            let facets: Vec<FaceSet> = (1..=m).map(|v| all.without(v)).collect();
            let k = NerveComplex::new(m, facets.clone()).unwrap();
            for order in permutations(&facets) {
                assert!(verify_shelling(&k, &order).is_ok(), "{order:?}");
            }
        }
    }

    #[test]
    fn interval_of_examples() {
        let sh = verify_shelling(&triangle(), &faces(&[&[1, 2], &[2, 3], &[1, 3]])).unwrap();
        assert_eq!(sh.interval_of(face(&[2])), Ok(1));
        assert_eq!(sh.interval_of(face(&[2, 3])), Ok(2));
        assert_eq!(sh.interval_of(FaceSet::EMPTY), Ok(1));
        assert_eq!(
            sh.interval_of(face(&[1, 2, 3])),
            Err(ShellingError::NotAFace(face(&[1, 2, 3])))
        );
    }

    #[test]
    fn h_vector_and_cells() {
        let sh = verify_shelling(&triangle(), &faces(&[&[1, 2], &[2, 3], &[1, 3]])).unwrap();
        assert_eq!(sh.h_vector(), HVector(vec![1, 1, 1]));
        assert_eq!(sh.cell_dimensions(2).unwrap(), vec![4, 2, 0]);

        let sh = verify_shelling(&four_cycle(), &faces(&[&[1, 2], &[2, 3], &[3, 4], &[1, 4]])).unwrap();
        assert_eq!(sh.h_vector(), HVector(vec![1, 2, 1]));
        assert_eq!(sh.cell_dimensions(2).unwrap(), vec![4, 2, 2, 0]);
        assert_eq!(
            sh.cell_dimensions(3),
            Err(ShellingError::DimensionMismatch { n: 3, facet_size: 2 })
        );

        let single = NerveComplex::from_lists(3, &[vec![1, 2, 3]]).unwrap();
        let sh = find_shelling(&single).unwrap();
        assert_eq!(sh.h_vector(), HVector(vec![1, 0, 0, 0]));
        assert_eq!(sh.cell_dimensions(3).unwrap(), vec![6]);
    }

    #[test]
    fn h_vector_is_shelling_invariant() {
        for k in [triangle(), four_cycle()] {
            let reference = find_shelling(&k).unwrap().h_vector();
            let mut seen = 0;
            for order in permutations(k.facets()) {
                if let Ok(sh) = verify_shelling(&k, &order) {
                    assert_eq!(sh.h_vector(), reference);
                    seen += 1;
                }
            }
            assert!(seen > 1);
        }
    }

    #[test]
    fn intervals_partition_the_faces() {
        for k in [triangle(), four_cycle()] {
            for order in permutations(k.facets()) {
                let Ok(sh) = verify_shelling(&k, &order) else { continue };
                let all = k.all_faces();
                for &g in &all {
                    let hits = sh
                        .order()
                        .iter()
                        .zip(sh.restrictions())
                        .filter(|(f, r)| r.is_subset(g) && g.is_subset(**f))
                        .count();
                    assert_eq!(hits, 1);
                }
                assert_eq!(sh.interval_face_count(), all.len() as u128);
            }
        }
    }
}
