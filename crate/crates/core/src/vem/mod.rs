//! Local virtual element machinery: DOF layout, interpolation, elliptic
//! projector, stiffness with stabilization, and the enhanced load.

mod dofs;
mod kernels;
mod layout;

pub use dofs::{compute_dofs, default_quadrature_degree};
pub use kernels::LocalKernels;
pub use layout::{DofEntity, DofLayout};
