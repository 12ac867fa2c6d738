//! Contact topology of lens spaces, computably.
//!
//! This crate implements the calculus of generating functions for
//! contactomorphisms of the lens spaces `L_k^{2n-1}(w)` (quotients of the unit
//! sphere in `R^{2n}` by a free linear `Z_k`-action), together with the two
//! engines that turn that calculus into integers:
//!
//! * exact inertia bookkeeping for *quadratic* generating forms, which
//!   computes the non-linear Maslov index of loops and paths of
//!   contactomorphisms (`quadform`, `maslov`);
//! * a `Z_k`-equivariant simplicial engine for the cohomological index of
//!   invariant subsets of spheres, including the equivariant join of chains
//!   and the Bockstein ladder used to detect it (`equivtop`).
//!
//! The glue between the two is the composition formula for generating
//! functions (`genfun`) and the dynamics layer (`contact`): homogeneous
//! Hamiltonian flows, certified `C^1`-small decompositions, discriminant and
//! translated points.

pub mod contact;
pub mod equivtop;
pub mod genfun;
pub mod lens;
pub mod maslov;
pub mod quadform;
pub mod report;
pub mod sampling;

use thiserror::Error;

/// Crate-wide error type. Every failure mode that a caller can trigger with
/// bad input (rather than a bug) is enumerated here. The CLI treats most of
/// them as usage errors; [`Error::Numerical`] and [`Error::IndexShape`] are
/// the two that indicate a guaranteed property failed to certify, and those
/// map to its "contract violation" exit instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group order k must be a prime >= 2, got {0}")]
    CompositeOrder(u32),
    #[error("weight {weight} is not invertible mod k = {k}")]
    WeightNotCoprime { weight: u32, k: u32 },
    #[error("at least one weight is required")]
    NoWeights,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("quadratic form is not Z_k-invariant (violation {0:.3e})")]
    NotInvariant(f64),
    #[error("function is not Z_k-invariant on the sphere (violation {0:.3e})")]
    HamiltonianNotInvariant(f64),
    #[error("map failed the C^1-smallness certificate: min singular value {got:.3e} <= {required:.3e}")]
    NotGraphical { got: f64, required: f64 },
    #[error("no C^1-small decomposition with at most {0} pieces")]
    DecompositionTooLong(usize),
    #[error("form is not fibrewise nondegenerate: {0}")]
    SingularFibre(String),
    #[error("form does not generate the identity: {0}")]
    NotIdentityForm(String),
    #[error("invalid simplicial data: {0}")]
    BadComplex(String),
    #[error("the group action on the complex is not free: {0}")]
    ActionNotFree(String),
    #[error("unknown subcomplex {0:?}")]
    UnknownSubcomplex(String),
    #[error("chain is not a cocycle: {0}")]
    NotCocycle(String),
    #[error("restriction ranks violate the no-holes profile: {0}")]
    IndexShape(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
