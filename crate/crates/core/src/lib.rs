//! Generators-and-relations presentations of K-rings of torus manifolds
//! whose orbit space has a shellable nerve.
//!
//! The input is combinatorial: the nerve `K` of the facet covering (a pure
//! simplicial complex on `m` vertices) and the characteristic matrix with
//! rows `a_1, .., a_m ∈ Z^n`. From it the crate builds
//!
//! * a shelling of `K`, its restriction faces, h-vector and cell dimensions,
//! * the ideal generated by the Stanley-Reisner monomials and the relations
//!   `Π_{<t,a_j> > 0} (1 - v_j)^{<t,a_j>} - Π_{<t,a_j> < 0} (1 - v_j)^{-<t,a_j>}`,
//! * a strong Gröbner basis over Z, the Z-module structure of the quotient,
//!   a unimodularity certificate for the shelling monomials and the
//!   multiplication table in that basis,
//! * the companion cohomology presentation with linear relations.

pub mod charmap;
pub mod complex;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod shelling;

pub use num_bigint::BigInt;

pub use charmap::{CharMapError, CharMatrix};
pub use complex::{ComplexError, FaceSet, NerveComplex, Violation};
pub use poly::{buchberger_z, normal_form, GroebnerBasis, IntPoly, Monomial, PolyError, QuotientModule, TermOrder};
pub use presentation::{
    cohomology_presentation, k_presentation, Diagnostic, ManifoldSpec, PresentationError, PresentationOptions,
    RingPresentation, SignConvention, StructureConstants,
};
pub use shelling::{find_shelling, verify_shelling, HVector, Shelling, ShellingError};
