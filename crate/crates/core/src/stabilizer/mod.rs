//! Monomial stabilizer groups acting on Fock space.
//!
//! A monomial `g = P_σ·D` acts on Fock states without any permanent:
//! `B(g)|n⟩ = Π_i D_ii^{n_i} |σ⁻¹(n)⟩`. For a finite Abelian group of such
//! matrices the joint eigenspaces of `B_n(G)` are labelled by characters, and
//! everything here (projections, suppression laws, orbits, measurement
//! statistics) is evaluated on the support of a state or on single basis
//! states, never on the whole Fock space.

mod character;
mod group;
mod laws;

pub use character::Character;
pub use group::{
    apply_monomial, conjugate_group, monomial_from_matrix, Conjugated, ExtractedMonomial, StabilizerGroup,
};
pub use laws::{
    measure_stabilizers, orbit, projector_norm, suppressed_outcomes, transitive_phase_projection,
    transitive_phase_projection_with, OrbitSet, TransitiveProjection,
};

use thiserror::Error;

use crate::fock::FockError;
use crate::linalg::LinalgError;

/// Entry magnitude separating structural zeros from non-zeros.
pub const MONOMIAL_TOL: f64 = 1e-9;
/// Largest phase denominator accepted when snapping extracted phases.
pub const MAX_PHASE_DENOMINATOR: u64 = 4096;
/// Default cap on the order of a closed group.
pub const DEFAULT_MAX_ORDER: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilizerError {
    #[error("matrix is not monomial: {0}")]
    NotMonomial(String),

    #[error("phase {value} of mode {mode} is not a root of unity with denominator <= {max_den}")]
    InexactPhase { mode: usize, value: String, max_den: u64 },

    #[error("group order exceeds {limit}")]
    GroupTooLarge { limit: usize },

    #[error("operation requires an Abelian group")]
    NonAbelianGroup,

    #[error("generator values are inconsistent: {0}")]
    InconsistentCharacter(String),

    #[error("group element {0} is not diagonal")]
    NotDiagonalGroup(String),

    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeCountMismatch { expected: usize, found: usize },

    #[error("expected {expected} generator values, found {found}")]
    GeneratorCountMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Fock(#[from] FockError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
