//! Lie systems integrated as automorphic Lie systems on matrix groups.
//!
//! A Lie system `dx/dt = Σ b_α(t) X_α(x)` is lifted to `dY/dt = A(t) Y` on a
//! matrix group, integrated with a geometric scheme, and mapped back to the
//! manifold through a group action.

pub mod actions;
pub mod control;
pub mod error;
pub mod integrators;
pub mod lie;
pub mod liesys;
pub mod matkit;
pub mod sweep;

pub use error::{Error, Result};
pub use integrators::{ClassicalScheme, LieScheme, MatrixPath, TimeGrid};
pub use lie::LieAlgebraBasis;
pub use liesys::{LieSystem, Method, Problem, Trajectory};
pub use matkit::{Matrix, SquareMatrix, StateVector};
