//! Birkhoff-James orthogonality, smoothness and pointwise symmetry in sup,
//! L1 and Lp spaces over finite atomic measure spaces.
//!
//! The analytic criteria live in [`sup`], [`l1`] and [`lp`], each exposed
//! through the [`strategy::OrthogonalityCriterion`] trait and the name-keyed
//! [`strategy::Registry`]. [`oracle`] decides orthogonality independently
//! by minimising `||f + λ g||`, and [`selftest`] cross-checks the two.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod input;
pub mod l1;
pub mod lp;
pub mod oracle;
mod partition;
pub mod report;
pub mod selftest;
pub mod space;
pub mod strategy;
pub mod sup;
pub mod verdict;

pub use error::{Error, Result};
pub use oracle::{oracle_orthogonal, OracleResult, OracleVerdict};
pub use space::{conjugate_exponent, norm, sgn, Atom, Field, FunctionVec, MeasureSpace, Scalar, SpaceKind, Tolerances};
pub use strategy::{criterion_for, FamilyParams, OrthogonalityCriterion, Registry};
pub use verdict::{Side, SymmetryVerdict, Verdict, Witness};
