//! Convex-geometric computations on finite-dimensional normed spaces:
//! unit-ball volumes, volume ratios relative to ℓ_p, Lozanovskii diagonal
//! factorizations and p-summing norm brackets, with verification suites
//! for the identities and inequalities that relate them.

pub mod error;
pub mod exponent;
pub mod lattice;
pub mod linalg;
pub mod lozanovskii;
pub mod norm;
pub mod operator;
pub mod report;
pub mod rng;
pub mod space;
pub mod suites;
pub mod summing;
pub mod volume;
pub mod vr;

pub use error::{GeoError, Result};
pub use exponent::Exponent;
pub use norm::Norm;
pub use operator::{block_diagonal, operator_norm, LinOperator, NormBracket, OptBudget};
pub use report::{Observed, Report, Status, Verdict};
pub use space::{NormedSpace, SpaceSpec};
pub use volume::{McConfig, VolumeEstimate, VolumeMethod};
