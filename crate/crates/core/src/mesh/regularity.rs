use serde::Serialize;

use crate::geometry::kernel_chebyshev_center;

use super::PolygonMesh;

/// Default lower bound (radians) on the smallest angle of the fan triangles.
pub const DEFAULT_ANGLE_FLOOR: f64 = 1e-3;

/// Shape-regularity measures of a mesh.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegularityReport {
    /// `min_K ρ_K / h_K`, with `ρ_K` the radius of the largest disc inside the
    /// kernel of `K`.
    pub min_star_radius_ratio: f64,
    /// `min_K min_{e ⊂ ∂K} |e| / h_K`.
    pub min_edge_to_diameter_ratio: f64,
    /// Smallest angle of any fan triangle, in radians.
    pub min_subtriangle_quality: f64,
    pub angle_floor: f64,
}

impl RegularityReport {
    pub fn passes(&self, rho0: f64) -> bool {
        self.min_star_radius_ratio >= rho0
            && self.min_edge_to_diameter_ratio >= rho0
            && self.min_subtriangle_quality > self.angle_floor
    }
}

pub fn validate_regularity(mesh: &PolygonMesh, angle_floor: f64) -> RegularityReport {
    let mut report = RegularityReport {
        min_star_radius_ratio: f64::INFINITY,
        min_edge_to_diameter_ratio: f64::INFINITY,
        min_subtriangle_quality: f64::INFINITY,
        angle_floor,
    };
    for cell in &mesh.cells {
        let g = &cell.geometry;
        let radius = kernel_chebyshev_center(&g.vertices).map_or(0.0, |(_, r)| r);
        report.min_star_radius_ratio = report.min_star_radius_ratio.min(radius / g.diameter);
        for e in &g.edges {
            report.min_edge_to_diameter_ratio = report.min_edge_to_diameter_ratio.min(e.length / g.diameter);
        }
        report.min_subtriangle_quality = report.min_subtriangle_quality.min(g.min_fan_angle());
    }
    report
}
