//! Exact-arithmetic kernels for moduli dimensions of invariant closed and
//! coclosed G2-structures on 7-dimensional nilpotent Lie algebras.
//!
//! Everything is computed over the rationals: ranks, kernels, determinants,
//! Chevalley-Eilenberg cohomology, derivation algebras and form stabilizers.
//! The only floating-point operation in the whole crate is the metric
//! normalization in [`g2::metric_approx`].
//!
//! Module layout:
//! - [`exactla`]: dense rational matrices (rank, kernel, determinant,
//!   definiteness),
//! - [`exterior`]: the exterior algebra of (R^n)* with rational coefficients,
//! - [`notation`]: parsers and printers for structure-equation tuples and
//!   form expressions,
//! - [`liealg`]: Lie algebras from structure equations, cohomology and
//!   derivations,
//! - [`g2`]: positivity, metrics, stabilizers, moduli dimensions and the
//!   principal-orbit perturbation search,
//! - [`catalog`]: the built-in catalog of algebras, reference forms and
//!   published values,
//! - [`reproduce`]: the golden-value reproduction harness.

pub mod catalog;
pub mod exactla;
pub mod exterior;
pub mod g2;
pub mod liealg;
pub mod notation;
pub mod reproduce;

pub use exactla::{Definiteness, LinAlgError, Rational, RationalMatrix};
pub use exterior::{KForm, Vector};
pub use g2::{ModuliKind, ModuliReport, SearchOptions, StabilizerResult};
pub use liealg::{DerivationSpace, LieAlgebra};
pub use notation::SalamonSpec;

/// Version tag carried by every machine-readable output (catalog files,
/// JSON reports).
pub const SCHEMA_VERSION: u32 = 1;
