//! Fully nonconforming virtual elements of arbitrary order for the clamped
//! Kirchhoff plate `D Δ²u = f` on polygonal meshes of the unit square.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: the four polygonal mesh families, topology, regularity checks and JSON I/O.
//! * [`polybasis`]: scaled monomials, quadrature, plate boundary operators.
//! * [`vem`]: local degrees of freedom, elliptic projector, stiffness and load.
//! * [`assembly`]: global numbering with orientation signs, sparse system, SPD solve.
//! * [`error_analysis`]: the relative broken-H² error of projected fields and convergence studies.
//! * [`morley`]: an independent Morley finite element used to cross-check the lowest order.

pub mod assembly;
pub mod error;
pub mod error_analysis;
pub mod fields;
pub mod geometry;
pub mod mesh;
pub mod morley;
pub mod polybasis;
pub mod vem;

pub use error::{Error, Result};
pub use geometry::Point2;
pub use mesh::{MeshFamily, PolygonMesh};
pub use polybasis::MaterialParams;
