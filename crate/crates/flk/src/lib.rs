//! Exact arithmetic for finite and affine root systems at roots of unity.
//!
//! Everything in this crate is integer or residue arithmetic: bilinear forms
//! and Cartan matrices are integer matrices, roots are integer coefficient
//! vectors over the simple roots, and root-of-unity values `q^e` live in the
//! cyclic exponent group `Z/ell`. There is no floating point anywhere.
//!
//! The main pipeline:
//!
//! - [`datum`] builds the Cartan datum (form, Cartan matrix, marks, duality)
//!   of every supported finite and affine type and recognizes generalized
//!   Cartan matrices up to diagram isomorphism.
//! - [`roots`] enumerates real roots, either by the closed-form description
//!   of affine root systems or by a reflection-closure oracle, and knows the
//!   isotropic root multiplicities.
//! - [`subsystem`] computes the subsystem `Δ^t` of roots whose norm is
//!   divisible by `t`, discovers its simple system and checks it against the
//!   reference tables.
//! - [`braiding`] handles diagonal braiding matrices `q^(α,β)`, the
//!   generalized Cartan matrix of a diagonal braiding, and Lusztig's
//!   non-degeneracy condition.
//! - [`classify`] classifies every `(type, ell)` pair into
//!   trivial/generic/degenerate/exotic/pseudo-exotic/deaffinized, verifies
//!   the primitive-degree tables and the exotic braiding matrices, and diffs
//!   everything against the reference classification table.
//! - [`report`] and [`cli`] provide deterministic text/JSON reports and the
//!   command line surface.

// Index arithmetic over small square matrices is the dominant style here;
// iterator rewrites of the double loops obscure the (i, j) symmetry.
#![allow(clippy::needless_range_loop)]

pub mod braiding;
pub mod classify;
pub mod cli;
pub mod datum;
pub mod report;
pub mod roots;
pub mod subsystem;

pub use datum::{CartanDatum, Family, Gcm, RootVec, Twist, TypeLabel};
pub use roots::RootSet;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown type label `{0}`")]
    UnknownLabel(String),
    #[error("rank parameter out of legal range for `{0}`")]
    RankOutOfRange(String),
    #[error("expected an affine type, got `{0}`")]
    ExpectedAffine(String),
    #[error("expected a finite type, got `{0}`")]
    ExpectedFinite(String),
    #[error("level bound {0} too small, need at least {1}")]
    LevelTooSmall(i64, i64),
    #[error("no finite Cartan entry m_{i}{j}: the quantum integer never vanishes")]
    NoFiniteCartanEntry { i: usize, j: usize },
    #[error("isotropic multiple m must be nonzero")]
    ZeroIsotropicMultiple,
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
