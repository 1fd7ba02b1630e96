//! Bosonic stabilizer formalism for passive linear optics.

pub mod bell;
pub mod fock;
pub mod linalg;
pub mod stabilizer;
