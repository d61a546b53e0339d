//! Exact split simple Lie algebras in L-coordinates.

pub mod algebra;
pub mod linalg;
pub mod roots;
pub mod spectral;

pub use algebra::{basis_jacobiator, chevalley_basis, AlgebraId, Element, LieAlgebra};
pub use linalg::{q, qf, QMatrix, SparseVec, Subspace, Q};
pub use roots::{build_root_system, LengthClass, LieType, Root, RootSystem};
pub use spectral::{eigenspace_decomposition, jordan_chains, JordanChains};
