//! Exact-arithmetic series solutions of the collision-induced breakage
//! equation by variational iteration (VIM) and optimized decomposition (ODM),
//! with diagnostics and an independent numerical oracle.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod expalg;
pub mod model;
pub mod odm;
pub mod oracle;
pub mod series;
pub mod vim;

pub use error::{Error, Result};
pub use expalg::{ExpPoly, Rational, Term};
pub use model::{CaseSpec, CollisionKernel, Fragment, Fragmentation, InitialCondition};
pub use series::{Method, SeriesSolution};
