//! Distance matrices, block Laplacians and incidence matrices of graphs whose
//! edges carry `s x s` real matrix weights, together with the closed-form
//! determinant and inverse of tree distance matrices and numerical checks of
//! the identities, rank, inertia and interlacing properties that relate them.
//!
//! ```
//! use mwtree_core::{closed_forms, fixtures, operators};
//!
//! let g = fixtures::asymmetric_path4();
//! let d = operators::distance_matrix(&g).unwrap();
//! let d_inv = closed_forms::distance_inverse(&g).unwrap();
//! let residual = (&(&*d * &d_inv) - &mwtree_core::DenseMatrix::identity(8)).frobenius_norm();
//! assert!(residual < 1e-10);
//! ```

pub mod closed_forms;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod linalg;
pub mod operators;

pub use closed_forms::{CheckStatus, VerificationReport};
pub use error::{Error, Result, SingularFactor};
pub use graph::{DeltaVector, Edge, EdgeId, MatrixWeightedGraph, TreePath, Violation};
pub use linalg::{BlockMatrix, DenseMatrix, Inertia, Spectrum};
pub use operators::LaplacianMode;
