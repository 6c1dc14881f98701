//! Electromagnetism in the spacetime algebra Cl(1,3).
//!
//! The crate states and cross-checks Maxwell's equations in three equivalent
//! formulations (the pair-form pair `dF = 0, dG = -J`, the pair/impair
//! variant with a twisted excitation, and the single Clifford equation
//! `dirac(F) = J`) together with electromagnetic stress-energy, relativistic
//! particle dynamics, constitutive-tensor analysis, a retarded-potential
//! solver, and the engineering 3D split in the Pauli subalgebra.
//!
//! Orientation conventions are first-class throughout: every Hodge operator
//! takes its volume element explicitly, impair (twisted) forms carry a
//! coframe-orientation tag, and the `mechanics` and `pauli` modules provide
//! the flip experiments showing that physical predictions do not depend on
//! the orientation convention.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod calculus;
pub mod electrodynamics;
pub mod forms;
pub mod kernel;
pub mod linalg;
pub mod mechanics;
pub mod pauli;
pub mod scenario;

use thiserror::Error as ThisError;

/// Errors surfaced by the toolkit.
#[derive(Debug, ThisError)]
pub enum Error {
    /// An argument violated a precondition (range, degeneracy, support).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A numeric evaluation failed (non-finite sample, domain violation).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub use kernel::Multivector;
