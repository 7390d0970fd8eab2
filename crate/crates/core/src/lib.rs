//! Exact symbolic verification of the integration of standard and exact
//! Courant algebroids on ℝᵈ to local symplectic 2-groupoids.

pub mod cli;
pub mod error;
pub mod graded;
pub mod groupoid;
pub mod jet;
pub mod linalg;
pub mod phase;
pub mod simplicial;

pub use error::{Error, Result};
