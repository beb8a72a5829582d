//! Polynomial machinery shared by the local virtual element kernels.

pub mod edge;
pub mod monomial;
pub mod plate;
pub mod quadrature;

pub use edge::EdgePolynomial;
pub use monomial::{Derivative, ScaledMonomialBasis, ScaledPoly};
pub use plate::{exact_bilinear_poly, plate_edge_operators, MaterialParams, PlateEdgeTraces};
pub use quadrature::{edge_rule, polygon_rule, triangle_rule, EdgeRule, QuadratureRule};
