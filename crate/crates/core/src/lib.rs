//! Convex analysis on Hadamard spaces: quasilinearization, the linear dual
//! space, p-Fenchel conjugates, monotone operators and their Fitzpatrick
//! transforms, evaluated over finite tables on Euclidean ℝⁿ, an ℝ-tree and
//! hyperbolic ℍⁿ.

pub mod cli;
pub mod conjugate;
pub mod dual;
pub mod error;
pub mod ext_real;
pub mod fitzpatrick;
pub mod geometry;
pub mod index;
pub mod io;
pub mod monotone;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod spaces;
pub mod tolerance;
pub mod worked_examples;

pub use error::{Error, Result};
pub use ext_real::ExtReal;
pub use geometry::{quasilinearization, BoundVector, Point, SpaceHandle, SpaceKind};
pub use scalar::Scalar;
