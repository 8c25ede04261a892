//! The K-ring presentation `Z[v_1, .., v_m]/I` and its cohomology companion.
//!
//! `I` is generated by
//!
//! * the monomials `v_{j_1} ⋯ v_{j_k}` of minimal nonfaces of the nerve, and
//! * for each covector `t`,
//!   `Π_{<t,a_j> > 0} (1 - v_j)^{<t,a_j>} - Π_{<t,a_j> < 0} (1 - v_j)^{-<t,a_j>}`.
//!
//! Only finitely many `t` can be imposed: the standard basis `e_1, .., e_n`
//! plus any extra covectors the caller supplies. Whether that suffices is
//! decided per instance: the presentation is conforming only if the
//! quotient is free of rank `d`, the number of facets of the nerve, and the
//! shelling monomials `v_{T_i} = Π_{j ∈ r(F_i)} v_j` form a Z-basis.
//!
//! The printed relations use `(1 - v_j)`; with `v_j = [L_j] - 1` the bundle
//! class is `1 + v_j`. [`SignConvention::Plus`] switches to `(1 + v_j)`. The
//! two ideals are exchanged by `v_j -> -v_j`, so the quotients are isomorphic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charmap::{CharMapError, CharMatrix};
use crate::complex::{FaceSet, NerveComplex, Violation};
use crate::linalg::{determinant, unimodular_inverse, IntMatrix};
use crate::poly::{
    buchberger_z, normal_form, truncated_quotient, GroebnerBasis, IntPoly, Monomial, PolyError, QuotientModule,
    TermOrder,
};
use crate::shelling::{find_shelling, verify_shelling, Shelling, ShellingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("nerve violates complex invariants: {}", join(.0))]
    InvalidComplex(Vec<Violation>),
    #[error(transparent)]
    CharMap(#[from] CharMapError),
    #[error("characteristic matrix is singular on faces {}", join(.0))]
    Singular(Vec<FaceSet>),
    #[error("{names} facet names given for {m} facets")]
    NameCount { names: usize, m: usize },
    #[error("nerve has no shelling")]
    NoShelling,
    #[error(transparent)]
    Shelling(#[from] ShellingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("quotient is not free of rank {d} with a monomial basis")]
    NotFree { d: usize },
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Which factor the product relations are written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    /// `(1 - v_j)`.
    #[default]
    Minus,
    /// `(1 + v_j)`.
    Plus,
}

impl SignConvention {
    pub fn name(self) -> &'static str {
        match self {
            SignConvention::Minus => "minus",
            SignConvention::Plus => "plus",
        }
    }
}

impl std::str::FromStr for SignConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minus" => Ok(SignConvention::Minus),
            "plus" => Ok(SignConvention::Plus),
            other => Err(format!("unknown sign convention `{other}` (expected minus or plus)")),
        }
    }
}

/// Nerve plus characteristic matrix, checked for consistency and nonsingularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldSpec {
    complex: NerveComplex,
    lambda: CharMatrix,
    names: Vec<String>,
}

impl ManifoldSpec {
    pub fn new(complex: NerveComplex, lambda: CharMatrix, names: Option<Vec<String>>) -> Result<Self, PresentationError> {
        let violations = complex.validate();
        if !violations.is_empty() {
            return Err(PresentationError::InvalidComplex(violations));
        }
        let singular = lambda.validate_nonsingular(&complex)?;
        if !singular.is_empty() {
            return Err(PresentationError::Singular(singular));
        }
        let m = complex.vertex_count();
        let names = match names {
            Some(n) if n.len() != m => return Err(PresentationError::NameCount { names: n.len(), m }),
            Some(n) => n,
            None => (1..=m).map(|j| format!("Q{j}")).collect(),
        };
        Ok(ManifoldSpec { complex, lambda, names })
    }

    pub fn complex(&self) -> &NerveComplex {
        &self.complex
    }

    pub fn lambda(&self) -> &CharMatrix {
        &self.lambda
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Torus rank `n`.
    pub fn n(&self) -> usize {
        self.lambda.rank()
    }

    pub fn m(&self) -> usize {
        self.complex.vertex_count()
    }

    /// Number of facets of the nerve (vertices of the orbit space).
    pub fn d(&self) -> usize {
        self.complex.facets().len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct PresentationOptions {
    pub order: TermOrder,
    pub convention: SignConvention,
    /// Covectors imposed in addition to `e_1, .., e_n`.
    pub extra_t: Vec<Vec<BigInt>>,
    /// Degree bound for the truncation fallback; defaults to `n·m`.
    pub bound: Option<usize>,
    /// Shelling to use instead of searching for one.
    pub shelling: Option<Vec<FaceSet>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresentationKind {
    KTheory,
    Cohomology,
}

/// A relation together with the covector `t` it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TRelation {
    pub t: Vec<BigInt>,
    pub poly: IntPoly,
}

/// Change of basis from the shelling monomials to the standard monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCertificate {
    /// Row `i` holds the coordinates of `v_{T_i}` in the standard monomials.
    pub matrix: IntMatrix,
    pub determinant: BigInt,
}

impl BasisCertificate {
    pub fn is_unimodular(&self) -> bool {
        self.determinant.abs().is_one()
    }
}

/// `v_{T_i} · v_{T_j} = Σ_k c[i][j][k] · v_{T_k}`, indices 1-based in accessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    d: usize,
    data: Vec<BigInt>,
}

impl StructureConstants {
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(d * d * d);
        for i in 1..=d {
            for j in 1..=d {
                for k in 1..=d {
                    data.push(f(i, j, k));
                }
            }
        }
        StructureConstants { d, data }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &BigInt {
        let d = self.d;
        &self.data[((i - 1) * d + (j - 1)) * d + (k - 1)]
    }

    /// Nonzero `(i, j, k, c)` with `i <= j`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, BigInt)> {
        let mut out = Vec::new();
        for i in 1..=self.d {
            for j in i..=self.d {
                for k in 1..=self.d {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Same tensor in the basis reordered by `perm` (new index `a` is old `perm[a-1]`).
    pub fn permuted(&self, perm: &[usize]) -> StructureConstants {
        StructureConstants::from_fn(self.d, |i, j, k| self.get(perm[i - 1], perm[j - 1], perm[k - 1]).clone())
    }

    pub fn is_commutative(&self) -> bool {
        (1..=self.d).all(|i| (1..=self.d).all(|j| (1..=self.d).all(|k| self.get(i, j, k) == self.get(j, i, k))))
    }

    /// Basis element `i` acts as the identity.
    pub fn is_unit(&self, i: usize) -> bool {
        (1..=self.d).all(|j| {
            (1..=self.d).all(|k| {
                let c = self.get(i, j, k);
                if j == k {
                    c.is_one()
                } else {
                    c.is_zero()
                }
            })
        })
    }
}

/// Why a presentation fails to be conforming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    RankMismatch { found: usize, expected: usize },
    Torsion(Vec<BigInt>),
    BasisNotUnimodular { determinant: BigInt },
    GradedRanks { found: Vec<usize>, expected: Vec<usize> },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::RankMismatch { found, expected } => {
                write!(f, "rank {found} differs from the number of facets {expected}")
            }
            Diagnostic::Torsion(t) => write!(f, "torsion with invariant factors {}", join(t)),
            Diagnostic::BasisNotUnimodular { determinant } => {
                write!(f, "shelling monomials are not a Z-basis (determinant {determinant})")
            }
            Diagnostic::GradedRanks { found, expected } => {
                write!(f, "graded ranks {found:?} differ from even Betti numbers {expected:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub kind: PresentationKind,
    pub convention: SignConvention,
    /// Number of variables `m`.
    pub nvars: usize,
    pub n: usize,
    /// Number of facets of the nerve.
    pub d: usize,
    pub sr_relations: Vec<IntPoly>,
    pub t_relations: Vec<TRelation>,
    /// Original variable index (0-based) to the index used by `gb`.
    pub relabeling: Vec<usize>,
    /// Strong Gröbner basis in relabeled variables; see [`RingPresentation::groebner_generators`].
    pub gb: GroebnerBasis,
    pub module: QuotientModule,
    pub shelling: Shelling,
    /// `v_{T_i}`, in shelling order.
    pub shelling_basis: Vec<Monomial>,
    pub certificate: Option<BasisCertificate>,
    pub structure_constants: Option<StructureConstants>,
    /// Ranks in degrees `0, 2, 4, ..` (cohomology only).
    pub graded_ranks: Option<Vec<usize>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl RingPresentation {
    pub fn is_conforming(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.module.rank
    }

    /// Variables from largest to smallest in the term order, 1-based.
    pub fn variable_priority(&self) -> Vec<usize> {
        invert(&self.relabeling).into_iter().map(|j| j + 1).collect()
    }

    /// Gröbner basis generators in the original variables.
    pub fn groebner_generators(&self) -> Vec<IntPoly> {
        let inverse = invert(&self.relabeling);
        self.gb.generators().iter().map(|g| g.permute_variables(&inverse)).collect()
    }

    /// Normal form of `p` (original variables) modulo the ideal.
    pub fn normal_form(&self, p: &IntPoly) -> IntPoly {
        normal_form(&p.permute_variables(&self.relabeling), &self.gb).permute_variables(&invert(&self.relabeling))
    }

    /// Coordinates of the class of `p` in the Z-basis of the quotient: the
    /// standard monomials when the Gröbner basis has unit leading
    /// coefficients, otherwise the Smith coordinates of the truncation.
    pub fn coordinates(&self, p: &IntPoly) -> Vec<BigInt> {
        match &self.module.truncated {
            Some(t) => t.coordinates(&p.permute_variables(&self.relabeling)),
            None => {
                let nf = self.normal_form(p);
                self.module.standard_monomials.iter().map(|s| nf.coefficient(s)).collect()
            }
        }
    }

    pub fn ideal_contains(&self, p: &IntPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Shelling basis indices sorted by their restriction faces in
    /// (cardinality, lexicographic) order, i.e. by degree and then support.
    pub fn normalized_order(&self) -> Vec<usize> {
        let r = self.shelling.restrictions();
        let mut idx: Vec<usize> = (1..=r.len()).collect();
        idx.sort_by_key(|&i| r[i - 1]);
        idx
    }

    /// Structure constants in the normalized basis order.
    pub fn normalized_structure_constants(&self) -> Option<StructureConstants> {
        self.structure_constants.as_ref().map(|c| c.permuted(&self.normalized_order()))
    }
}

/// One squarefree monomial per minimal nonface.
pub fn sr_relations(complex: &NerveComplex) -> Vec<IntPoly> {
    let m = complex.vertex_count();
    complex
        .minimal_nonfaces()
        .into_iter()
        .map(|s| IntPoly::term(Monomial::squarefree(m, s.iter()), 1))
        .collect()
}

fn factor(m: usize, j: usize, convention: SignConvention) -> IntPoly {
    match convention {
        SignConvention::Minus => &IntPoly::one(m) - &IntPoly::var(m, j),
        SignConvention::Plus => &IntPoly::one(m) + &IntPoly::var(m, j),
    }
}

/// The product relation for covector `t`.
pub fn t_relation(lambda: &CharMatrix, t: &[BigInt], convention: SignConvention) -> Result<IntPoly, CharMapError> {
    let m = lambda.row_count();
    let mut pos = IntPoly::one(m);
    let mut neg = IntPoly::one(m);
    for (j, p) in lambda.pairings(t)?.into_iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let e = u32::try_from(p.abs()).expect("pairing exponent fits in u32");
        let f = factor(m, j + 1, convention).pow(e);
        if p.is_positive() {
            pos = &pos * &f;
        } else {
            neg = &neg * &f;
        }
    }
    Ok(&pos - &neg)
}

/// `Σ_j <t, a_j> v_j`.
pub fn linear_relation(lambda: &CharMatrix, t: &[BigInt]) -> Result<IntPoly, CharMapError> {
    let m = lambda.row_count();
    let terms = lambda
        .pairings(t)?
        .into_iter()
        .enumerate()
        .map(|(j, p)| (Monomial::var(m, j + 1), p));
    Ok(IntPoly::from_terms(m, terms))
}

fn covectors(spec: &ManifoldSpec, opts: &PresentationOptions) -> Vec<Vec<BigInt>> {
    let mut ts: Vec<Vec<BigInt>> = (0..spec.n()).map(|i| spec.lambda.unit_covector(i)).collect();
    ts.extend(opts.extra_t.iter().cloned());
    ts
}

fn shelling_for(spec: &ManifoldSpec, opts: &PresentationOptions) -> Result<Shelling, PresentationError> {
    match &opts.shelling {
        Some(order) => Ok(verify_shelling(&spec.complex, order)?),
        None => find_shelling(&spec.complex).ok_or(PresentationError::NoShelling),
    }
}

/// K-ring presentation: relations, Gröbner basis, Z-module structure, and
/// when the rank is `d`, the shelling-basis certificate and multiplication table.
pub fn k_presentation(spec: &ManifoldSpec, opts: &PresentationOptions) -> Result<RingPresentation, PresentationError> {
    let t_relations = covectors(spec, opts)
        .into_iter()
        .map(|t| {
            let poly = t_relation(&spec.lambda, &t, opts.convention)?;
            Ok(TRelation { t, poly })
        })
        .collect::<Result<Vec<_>, CharMapError>>()?;
    assemble(spec, opts, PresentationKind::KTheory, t_relations)
}

/// Cohomology presentation `Z[v]/(SR + Σ_j <t,a_j> v_j)` with `deg v_j = 2`.
pub fn cohomology_presentation(
    spec: &ManifoldSpec,
    opts: &PresentationOptions,
) -> Result<RingPresentation, PresentationError> {
    let t_relations = covectors(spec, opts)
        .into_iter()
        .map(|t| {
            let poly = linear_relation(&spec.lambda, &t)?;
            Ok(TRelation { t, poly })
        })
        .collect::<Result<Vec<_>, CharMapError>>()?;
    assemble(spec, opts, PresentationKind::Cohomology, t_relations)
}

/// Variable relabelings to try, as maps from original index to working index
/// (working index 0 is the largest variable). The identity comes first.
fn candidate_relabelings(m: usize, shelling: &Shelling) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![(0..m).collect(), (0..m).rev().collect()];
    for f in shelling.order() {
        let (inside, outside): (Vec<usize>, Vec<usize>) = (0..m).partition(|&j| f.contains(j + 1));
        for priority in [outside.iter().chain(&inside), inside.iter().chain(&outside)] {
            let mut perm = vec![0; m];
            for (pos, &j) in priority.enumerate() {
                perm[j] = pos;
            }
            out.push(perm);
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|p| seen.insert(p.clone()));
    out
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        inv[p] = j;
    }
    inv
}

fn assemble(
    spec: &ManifoldSpec,
    opts: &PresentationOptions,
    kind: PresentationKind,
    t_relations: Vec<TRelation>,
) -> Result<RingPresentation, PresentationError> {
    let m = spec.m();
    let shelling = shelling_for(spec, opts)?;
    let sr = sr_relations(&spec.complex);
    let gens: Vec<IntPoly> = sr.iter().cloned().chain(t_relations.iter().map(|r| r.poly.clone())).collect();

    // Non-unit leading coefficients leave no monomial basis; another variable
    // priority often avoids them.
    let mut chosen = None;
    for perm in candidate_relabelings(m, &shelling) {
        let working: Vec<IntPoly> = gens.iter().map(|g| g.permute_variables(&perm)).collect();
        let gb = buchberger_z(&working, m, opts.order);
        let unit = gb.leading_terms().all(|(_, c)| c.is_one());
        if unit || chosen.is_none() {
            chosen = Some((perm, gb));
        }
        if unit {
            break;
        }
    }
    let (perm, gb) = chosen.expect("at least one relabeling");
    let bound = opts.bound.unwrap_or(spec.n() * m).max(1);
    let mut module = crate::poly::quotient_module(&gb, bound)?;
    let inverse = invert(&perm);
    for mono in module.standard_monomials.iter_mut() {
        *mono = mono.permuted(&inverse);
    }
    let shelling_basis = shelling
        .restrictions()
        .iter()
        .map(|r| Monomial::squarefree(m, r.iter()))
        .collect();

    let mut pres = RingPresentation {
        kind,
        convention: opts.convention,
        nvars: m,
        n: spec.n(),
        d: spec.d(),
        sr_relations: sr,
        t_relations,
        relabeling: perm,
        gb,
        module,
        shelling,
        shelling_basis,
        certificate: None,
        structure_constants: None,
        graded_ranks: None,
        diagnostics: Vec::new(),
    };

    if !pres.module.free {
        pres.diagnostics.push(Diagnostic::Torsion(pres.module.torsion.clone()));
    }
    if pres.module.rank != pres.d {
        pres.diagnostics.push(Diagnostic::RankMismatch {
            found: pres.module.rank,
            expected: pres.d,
        });
    }
    if kind == PresentationKind::Cohomology {
        let mut ranks = graded_ranks(&pres);
        let mut expected = pres.shelling.h_vector().betti();
        let len = ranks.len().max(expected.len());
        ranks.resize(len, 0);
        expected.resize(len, 0);
        if ranks != expected {
            pres.diagnostics.push(Diagnostic::GradedRanks {
                found: ranks.clone(),
                expected,
            });
        }
        pres.graded_ranks = Some(ranks);
    }
    if pres.diagnostics.is_empty() {
        let cert = shelling_basis_check(&pres, &pres.shelling)?;
        if cert.is_unimodular() {
            pres.certificate = Some(cert);
            pres.structure_constants = Some(structure_constants(&pres)?);
        } else {
            pres.diagnostics.push(Diagnostic::BasisNotUnimodular {
                determinant: cert.determinant.clone(),
            });
            pres.certificate = Some(cert);
        }
    }
    Ok(pres)
}

/// Ranks of the graded pieces of a homogeneous quotient, by degree.
fn graded_ranks(pres: &RingPresentation) -> Vec<usize> {
    let mut ranks = Vec::new();
    match &pres.module.truncated {
        None => {
            for mono in &pres.module.standard_monomials {
                let deg = mono.degree() as usize;
                if ranks.len() <= deg {
                    ranks.resize(deg + 1, 0);
                }
                ranks[deg] += 1;
            }
        }
        Some(t) => {
            // Truncating a homogeneous ideal at degree k keeps degrees 0..=k.
            let gens = pres.gb.generators();
            let mut below = 0;
            for k in 0..=t.bound() {
                let rank = truncated_quotient(gens, pres.nvars, k).rank;
                ranks.push(rank - below);
                below = rank;
                if below == pres.module.rank {
                    break;
                }
            }
        }
    }
    ranks
}

fn require_free_of_rank_d(pres: &RingPresentation) -> Result<(), PresentationError> {
    if pres.module.free && pres.module.rank == pres.d {
        Ok(())
    } else {
        Err(PresentationError::NotFree { d: pres.d })
    }
}

/// Expresses the monomials `v_{T_i}` of `shelling` in a Z-basis of the
/// quotient (standard monomials, or the Smith coordinates of the truncated
/// presentation); they form a Z-basis iff the determinant is ±1.
pub fn shelling_basis_check(pres: &RingPresentation, shelling: &Shelling) -> Result<BasisCertificate, PresentationError> {
    require_free_of_rank_d(pres)?;
    let matrix: IntMatrix = shelling
        .restrictions()
        .iter()
        .map(|r| {
            let mono = IntPoly::term(Monomial::squarefree(pres.nvars, r.iter()), 1);
            pres.coordinates(&mono)
        })
        .collect();
    let determinant = determinant(&matrix);
    Ok(BasisCertificate { matrix, determinant })
}

/// Multiplication table of the shelling basis of a certified presentation.
pub fn structure_constants(pres: &RingPresentation) -> Result<StructureConstants, PresentationError> {
    require_free_of_rank_d(pres)?;
    let cert = match &pres.certificate {
        Some(c) => c.clone(),
        None => shelling_basis_check(pres, &pres.shelling)?,
    };
    let inverse = unimodular_inverse(&cert.matrix).ok_or(PresentationError::NotFree { d: pres.d })?;
    let d = pres.d;
    let basis: Vec<IntPoly> = pres
        .shelling_basis
        .iter()
        .map(|m| IntPoly::term(m.clone(), 1))
        .collect();
    // T-coordinates x of an element with standard coordinates s: x = s · P^{-1}.
    let mut table = vec![vec![Vec::<BigInt>::new(); d]; d];
    for i in 0..d {
        for j in i..d {
            let s = pres.coordinates(&(&basis[i] * &basis[j]));
            let x: Vec<BigInt> = (0..d).map(|k| (0..d).map(|l| &s[l] * &inverse[l][k]).sum()).collect();
            table[i][j] = x.clone();
            table[j][i] = x;
        }
    }
    Ok(StructureConstants::from_fn(d, |i, j, k| table[i - 1][j - 1][k - 1].clone()))
}
