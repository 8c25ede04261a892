//! Abstract simplicial complexes on at most 64 vertices.
//!
//! Vertices are 1-based. A face is packed into a `u64` bitset, bit `v - 1`
//! standing for vertex `v`. Every enumeration in this crate sorts faces by
//! cardinality first and then lexicographically on the sorted vertex list.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest vertex count a [`NerveComplex`] accepts.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("vertex {vertex} out of range 1..={m}")]
    VertexOutOfRange { vertex: usize, m: usize },
    #[error("{m} vertices requested, at most {MAX_VERTICES} supported")]
    TooManyVertices { m: usize },
}

/// A finite set of vertices, possibly empty.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FaceSet(u64);

impl FaceSet {
    pub const EMPTY: FaceSet = FaceSet(0);

    pub fn from_vertices(vertices: &[usize]) -> Result<Self, ComplexError> {
        let mut bits = 0u64;
        for &v in vertices {
            if v == 0 || v > MAX_VERTICES {
                return Err(ComplexError::VertexOutOfRange {
                    vertex: v,
                    m: MAX_VERTICES,
                });
            }
            bits |= 1 << (v - 1);
        }
        Ok(FaceSet(bits))
    }

    pub fn from_bits(bits: u64) -> Self {
        FaceSet(bits)
    }

    pub fn singleton(v: usize) -> Self {
        assert!((1..=MAX_VERTICES).contains(&v), "vertex {v} out of range");
        FaceSet(1 << (v - 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: FaceSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: FaceSet) -> FaceSet {
        FaceSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FaceSet) -> FaceSet {
        FaceSet(self.0 & other.0)
    }

    pub fn without(self, v: usize) -> FaceSet {
        if v == 0 || v > MAX_VERTICES {
            return self;
        }
        FaceSet(self.0 & !(1 << (v - 1)))
    }

    pub fn with(self, v: usize) -> FaceSet {
        self.union(FaceSet::singleton(v))
    }

    /// Largest vertex in the set, 0 for the empty set.
    pub fn max_vertex(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn vertices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of this set, in no particular order.
    pub fn subsets(self) -> impl Iterator<Item = FaceSet> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 {
                None
            } else {
                Some((cur - 1) & full)
            };
            Some(FaceSet(cur))
        })
    }
}

impl Ord for FaceSet {
    fn cmp(&self, other: &Self) -> Ordering {
        // Equal-size sets: the one holding the smallest element of the
        // symmetric difference comes first in lexicographic order.
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for FaceSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for FaceSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FaceSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<usize>::deserialize(deserializer)?;
        FaceSet::from_vertices(&vertices).map_err(serde::de::Error::custom)
    }
}

/// A broken [`NerveComplex`] invariant together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoFacets,
    Impure { facet: FaceSet, expected_size: usize },
    UncoveredVertex(usize),
    Contained { inner: FaceSet, outer: FaceSet },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoFacets => write!(f, "complex has no facets"),
            Violation::Impure {
                facet,
                expected_size,
            } => write!(
                f,
                "purity: facet {facet} has {} vertices, expected {expected_size}",
                facet.len()
            ),
            Violation::UncoveredVertex(v) => write!(f, "vertex {v} lies in no facet"),
            Violation::Contained { inner, outer } => {
                write!(f, "containment: facet {inner} lies inside facet {outer}")
            }
        }
    }
}

/// Simplicial complex on vertices `1..=m`, given by its facets.
///
/// Construction only checks vertex ranges; call [`NerveComplex::validate`]
/// for the structural invariants (purity, coverage, no nested facets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    m: usize,
    facets: Vec<FaceSet>,
}

impl NerveComplex {
    pub fn new(m: usize, facets: impl IntoIterator<Item = FaceSet>) -> Result<Self, ComplexError> {
        if m > MAX_VERTICES {
            return Err(ComplexError::TooManyVertices { m });
        }
        let facets: BTreeSet<FaceSet> = facets.into_iter().collect();
        for f in &facets {
            if f.max_vertex() > m {
                return Err(ComplexError::VertexOutOfRange {
                    vertex: f.max_vertex(),
                    m,
                });
            }
        }
        Ok(NerveComplex {
            m,
            facets: facets.into_iter().collect(),
        })
    }

    pub fn from_lists(m: usize, facets: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let sets = facets
            .iter()
            .map(|f| {
                f.iter()
                    .find(|&&v| v == 0 || v > m)
                    .map_or(Ok(()), |&v| Err(ComplexError::VertexOutOfRange { vertex: v, m }))?;
                FaceSet::from_vertices(f)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(m, sets)
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    /// Facets in (cardinality, lexicographic) order.
    pub fn facets(&self) -> &[FaceSet] {
        &self.facets
    }

    /// Size of the largest facet; for a pure complex this is `dim + 1`.
    pub fn facet_size(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    pub fn dim(&self) -> isize {
        self.facet_size() as isize - 1
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.facets.is_empty() {
            out.push(Violation::NoFacets);
            return out;
        }
        let size = self.facet_size();
        for &f in &self.facets {
            if f.len() != size {
                out.push(Violation::Impure {
                    facet: f,
                    expected_size: size,
                });
            }
        }
        let covered = self.facets.iter().fold(FaceSet::EMPTY, |acc, &f| acc.union(f));
        for v in 1..=self.m {
            if !covered.contains(v) {
                out.push(Violation::UncoveredVertex(v));
            }
        }
        for &inner in &self.facets {
            for &outer in &self.facets {
                if inner != outer && inner.is_subset(outer) {
                    out.push(Violation::Contained { inner, outer });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn check_range(&self, s: FaceSet) -> Result<(), ComplexError> {
        if s.max_vertex() > self.m {
            return Err(ComplexError::VertexOutOfRange {
                vertex: s.max_vertex(),
                m: self.m,
            });
        }
        Ok(())
    }

    pub fn is_face(&self, s: FaceSet) -> Result<bool, ComplexError> {
        self.check_range(s)?;
        Ok(self.contains_face(s))
    }

    /// Unchecked variant of [`NerveComplex::is_face`].
    pub(crate) fn contains_face(&self, s: FaceSet) -> bool {
        s.is_empty() || self.facets.iter().any(|&f| s.is_subset(f))
    }

    /// Every face including the empty one, sorted.
    pub fn all_faces(&self) -> Vec<FaceSet> {
        let mut faces: BTreeSet<FaceSet> = BTreeSet::new();
        faces.insert(FaceSet::EMPTY);
        for &f in &self.facets {
            faces.extend(f.subsets());
        }
        faces.into_iter().collect()
    }

    /// Inclusion-minimal vertex sets that are not faces, sorted.
    ///
    /// A minimal nonface is `G ∪ {v}` for a face `G`, so it suffices to try
    /// one-vertex extensions of faces.
    pub fn minimal_nonfaces(&self) -> Vec<FaceSet> {
        let mut out = BTreeSet::new();
        for g in self.all_faces() {
            for v in 1..=self.m {
                if g.contains(v) {
                    continue;
                }
                let s = g.with(v);
                if self.contains_face(s) || out.contains(&s) {
                    continue;
                }
                if s.iter().all(|u| self.contains_face(s.without(u))) {
                    out.insert(s);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Join with another complex; its vertices are shifted by `self.m`.
    pub fn join(&self, other: &NerveComplex) -> Result<NerveComplex, ComplexError> {
        let m = self.m + other.m;
        if m > MAX_VERTICES {
            return Err(ComplexError::TooManyVertices { m });
        }
        let shift = self.m;
        let mut facets = Vec::new();
        for &f in &self.facets {
            for &g in &other.facets {
                facets.push(FaceSet(f.0 | (g.0 << shift)));
            }
        }
        NerveComplex::new(m, facets)
    }
}
