//! Detection of complex analytic germs inside real algebraic sets `X = {ρ = 0}`
//! via grids of pairwise Segre-related points, together with Segre varieties,
//! D'Angelo-type invariants, and Hausdorff-metric experiments.
//!
//! Exact arithmetic is used wherever a statement is an identity (Segre
//! symmetry, the holomorphic decomposition, monomial ideal invariants).
//! Floating point enters only in the numerical grid search and the isometry
//! construction.

pub mod algebra;
pub mod dangelo;
pub mod error;
pub mod catalog;
pub mod grid;
pub mod hausdorff;
pub mod segre;

pub use error::{Error, Result};
