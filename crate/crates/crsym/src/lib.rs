//! Exact computation of the infinitesimal CR symmetry algebras of quadric models.
//!
//! The crate builds the defining equations of a catalog of quadrics, checks
//! explicit generator lists against the tangency criterion, recomputes every
//! graded piece as the kernel of an exact linear system, and certifies the
//! resulting real Lie algebra (closure, grading, Jacobi, Killing inertia).

pub mod dsl;
pub mod exact;
pub mod generators;
pub mod liealg;
pub mod linalg;
pub mod prolong;
pub mod quadric;
pub mod report;
pub mod tangency;
pub mod vfield;
