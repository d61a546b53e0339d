//! Exact Lie-theory engine and numerical auditors for a KAM local-rigidity
//! argument: Chevalley bases, abelian unipotent bases and their checks, an
//! atomic model of representation-side smoothing, and the derivative-loss /
//! iteration-schedule bookkeeping.

pub mod constructions;
pub mod error;
pub mod lie_core;
pub mod model_rep;
pub mod tame_kam;
pub mod verifier;

pub use error::{Error, Result};
pub use lie_core::{Element, LieAlgebra, LieType, Root, RootSystem, SparseVec, Subspace, Q};
