//! Sum-free partitions: constraint checking, exact search, the transformation
//! set between maximal partitions, the self-correlated sequence, and small
//! constrained many-body models.

pub mod bits;
pub mod coloring;
pub mod constraint;
pub mod manybody;
pub mod sequence;
pub mod solver;
pub mod transform;

pub use coloring::{verify_coloring, Certificate, Coloring, VerifyReport, Violation};
pub use constraint::{is_sum_free, residue, Block, Constraint, ConstraintKind, Triple};
