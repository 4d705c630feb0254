//! Exact computations with the N=2 superconformal algebra, affine sl(2) and
//! gl(1|1): PBW normal forms, presented highest-weight modules, singular
//! vectors, twisted Zhu algebras, the Frenkel-Zhu bimodule of a chiral Verma
//! module and truncated checks of BGG-type resolutions.
//!
//! All arithmetic is over [`Q`]; there is no floating point in the core.

pub mod exactla;
pub mod known;
pub mod pbw;
pub mod poly;
pub mod reps;
pub mod resolutions;
pub mod scalar;
pub mod superalg;
pub mod zhu;

pub use scalar::{Field, Q};
pub use superalg::{Algebra, AlgebraId, Family, Mode, Params};

/// Bumped whenever a change can alter a computed result; part of cache keys.
pub const ENGINE_VERSION: &str = "1";
