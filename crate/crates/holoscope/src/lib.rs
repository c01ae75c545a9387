//! Exact computational group theory at desk scale: linear algebra over GF(p),
//! generic finite-group machinery, holomorphs and affine groups, admissibility
//! calculus, the order-168 wreath constructions, and the classification
//! arithmetic that pins every insoluble case down to GL3(2).

pub mod admissibility;
pub mod affine;
pub mod classify;
pub mod construction;
pub mod gf;
pub mod group;
pub mod holomorph;
pub mod perm;
pub mod report;
pub mod textio;

pub use affine::AffineElement;
pub use gf::{GFMatrix, GFVector, Subspace};
pub use group::{FiniteGroup, GroupElement, PointAction, SubgroupHandle};
pub use perm::Permutation;
