//! Kirchhoff plate operators on polynomials: the bending moment `M_nn`, the
//! effective shear `T`, the corner twisting moment `M_nt`, and the exact
//! local energy `a^K(p, q)`.

use serde::{Deserialize, Serialize};

use crate::geometry::{CellGeometry, LocalEdge};
use crate::{Error, Result};

use super::edge::EdgePolynomial;
use super::monomial::ScaledPoly;
use super::quadrature::polygon_rule;

/// Plate material. Only the rigidity `D` and Poisson ratio `ν` enter the
/// discrete problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub young: f64,
    pub thickness: f64,
    pub poisson: f64,
    pub rigidity: f64,
}

impl MaterialParams {
    /// `D = E t³ / (12 (1 - ν²))`.
    pub fn new(young: f64, thickness: f64, poisson: f64) -> Result<Self> {
        let rigidity = young * thickness.powi(3) / (12.0 * (1.0 - poisson * poisson));
        Self::checked(Self { young, thickness, poisson, rigidity })
    }

    /// Material with prescribed rigidity (unit thickness).
    pub fn from_rigidity(rigidity: f64, poisson: f64) -> Result<Self> {
        let young = 12.0 * rigidity * (1.0 - poisson * poisson);
        Self::checked(Self { young, thickness: 1.0, poisson, rigidity })
    }

    fn checked(m: Self) -> Result<Self> {
        if !(0.0..0.5).contains(&m.poisson) {
            return Err(Error::Config(format!("Poisson ratio {} outside [0, 0.5)", m.poisson)));
        }
        if !(m.rigidity > 0.0 && m.rigidity.is_finite()) {
            return Err(Error::Config(format!("bending rigidity {} must be positive", m.rigidity)));
        }
        Ok(m)
    }
}

impl Default for MaterialParams {
    /// `D = 1`, `ν = 0.3`.
    fn default() -> Self {
        Self::from_rigidity(1.0, 0.3).unwrap()
    }
}

/// Traces of the plate operators of a polynomial on one edge, already
/// multiplied by `D`.
#[derive(Clone, Debug)]
pub struct PlateEdgeTraces {
    /// `D (ν Δp + (1 - ν) p_nn)`, degree at most `deg p - 2`.
    pub bending: EdgePolynomial,
    /// `D (∂_n Δp + (1 - ν) p_ntt)`, degree at most `deg p - 3`.
    pub shear: EdgePolynomial,
    /// `D (1 - ν) p_nt` at the start and end point of the edge.
    pub twisting: [f64; 2],
}

struct SecondDerivatives {
    xx: ScaledPoly,
    xy: ScaledPoly,
    yy: ScaledPoly,
}

fn second_derivatives(p: &ScaledPoly) -> SecondDerivatives {
    let px = p.dx();
    let py = p.dy();
    SecondDerivatives { xx: px.dx(), xy: px.dy(), yy: py.dy() }
}

/// Plate boundary operators of `p` on a straight edge with outward normal
/// `n` and counterclockwise tangent `t`.
///
/// With these traces, for every polynomial `p` and smooth `v`,
///
/// ```text
/// a^K(p, v) = D ∫_K Δ²p v + Σ_e ∫_e M_nn(p) ∂_n v - Σ_e ∫_e T(p) v
///           + Σ_e [M_nt(p) v](end) - [M_nt(p) v](start)
/// ```
pub fn plate_edge_operators(p: &ScaledPoly, edge: &LocalEdge, material: &MaterialParams) -> PlateEdgeTraces {
    let (nu, rigidity) = (material.poisson, material.rigidity);
    let (n1, n2) = (edge.normal.x, edge.normal.y);
    let (t1, t2) = (edge.tangent.x, edge.tangent.y);
    let d2 = second_derivatives(p);

    let laplacian = d2.xx.plus(&d2.yy, 1.0);
    let p_nn = d2.xx.scaled(n1 * n1).plus(&d2.xy, 2.0 * n1 * n2).plus(&d2.yy, n2 * n2);
    let bending = laplacian.scaled(nu).plus(&p_nn, 1.0 - nu).scaled(rigidity);

    let xxx = d2.xx.dx();
    let xxy = d2.xx.dy();
    let xyy = d2.xy.dy();
    let yyy = d2.yy.dy();
    let dn_lap = xxx.plus(&xyy, 1.0).scaled(n1).plus(&xxy.plus(&yyy, 1.0), n2);
    let p_ntt = xxx
        .scaled(n1 * t1 * t1)
        .plus(&xxy, 2.0 * n1 * t1 * t2 + n2 * t1 * t1)
        .plus(&xyy, n1 * t2 * t2 + 2.0 * n2 * t1 * t2)
        .plus(&yyy, n2 * t2 * t2);
    let shear = dn_lap.plus(&p_ntt, 1.0 - nu).scaled(rigidity);

    let p_nt = d2.xx.scaled(n1 * t1).plus(&d2.xy, n1 * t2 + n2 * t1).plus(&d2.yy, n2 * t2);
    let scale = rigidity * (1.0 - nu);
    PlateEdgeTraces {
        bending: bending.restrict_to_edge(edge),
        shear: shear.restrict_to_edge(edge),
        twisting: [scale * p_nt.eval(edge.start), scale * p_nt.eval(edge.end)],
    }
}

/// `a^K(p, q) = D ∫_K (ν Δp Δq + (1 - ν) p_ij q_ij)`, integrated exactly.
pub fn exact_bilinear_poly(p: &ScaledPoly, q: &ScaledPoly, cell: &CellGeometry, material: &MaterialParams) -> f64 {
    let degree = (p.degree() + q.degree()).saturating_sub(4);
    let rule = polygon_rule(cell, degree);
    let hp = second_derivatives(p);
    let hq = second_derivatives(q);
    let nu = material.poisson;
    material.rigidity
        * rule.integrate(|x| {
            let (pxx, pxy, pyy) = (hp.xx.eval(x), hp.xy.eval(x), hp.yy.eval(x));
            let (qxx, qxy, qyy) = (hq.xx.eval(x), hq.xy.eval(x), hq.yy.eval(x));
            nu * (pxx + pyy) * (qxx + qyy) + (1.0 - nu) * (pxx * qxx + 2.0 * pxy * qxy + pyy * qyy)
        })
}
