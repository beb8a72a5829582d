//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use ncvem::geometry::CellGeometry;
use ncvem::Point2;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    lo + (hi - lo) * u
}

/// Random polygon, star-shaped about its generating center, possibly
/// non-convex. Angular gaps are kept in `[0.15, 0.9π]`.
pub fn random_star_polygon(rng: &mut ChaCha8Rng) -> CellGeometry {
    let k = 3 + (rng.next_u64() % 7) as usize;
    let angles = loop {
        let mut a: Vec<f64> = (0..k).map(|_| uniform(rng, 0.0, std::f64::consts::TAU)).collect();
        a.sort_by(f64::total_cmp);
        let gaps: Vec<f64> =
            (0..k).map(|i| if i + 1 < k { a[i + 1] - a[i] } else { a[0] + std::f64::consts::TAU - a[i] }).collect();
        if gaps.iter().all(|&g| (0.15..0.9 * std::f64::consts::PI).contains(&g)) {
            break a;
        }
    };
    let scale = uniform(rng, 0.05, 2.0);
    let center = Point2::new(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    let vertices = angles
        .iter()
        .map(|&t| {
            let r = scale * uniform(rng, 0.4, 1.0);
            Point2::new(center.x + r * t.cos(), center.y + r * t.sin())
        })
        .collect();
    CellGeometry::new(vertices).expect("generated polygon is valid")
}

/// Regular `k`-gon with random rotation, size and position.
pub fn random_convex_polygon(rng: &mut ChaCha8Rng, k: usize) -> CellGeometry {
    let phase = uniform(rng, 0.0, std::f64::consts::TAU);
    let radius = uniform(rng, 0.05, 2.0);
    let center = Point2::new(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0));
    let vertices = (0..k)
        .map(|i| {
            let t = phase + std::f64::consts::TAU * i as f64 / k as f64;
            Point2::new(center.x + radius * t.cos(), center.y + radius * t.sin())
        })
        .collect();
    CellGeometry::new(vertices).expect("regular polygon is valid")
}

fn binomial_expansion(p: f64, d: f64, power: usize) -> Vec<f64> {
    // coefficients in t of (p + t d)^power
    let mut c = vec![0.0; power + 1];
    let mut binom = 1.0;
    for k in 0..=power {
        c[k] = binom * p.powi((power - k) as i32) * d.powi(k as i32);
        binom = binom * (power - k) as f64 / (k + 1) as f64;
    }
    c
}

/// `∫_K X^a Y^b` with `X = (x - cx)/h`, `Y = (y - cy)/h`, in closed form by
/// Green's theorem and exact integration of the polynomial edge traces.
pub fn exact_scaled_monomial_integral(vertices: &[Point2], center: Point2, h: f64, a: usize, b: usize) -> f64 {
    let n = vertices.len();
    let mut total = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        let (px, py) = ((p.x - center.x) / h, (p.y - center.y) / h);
        let (dx, dy) = ((q.x - p.x) / h, (q.y - p.y) / h);
        let xs = binomial_expansion(px, dx, a + 1);
        let ys = binomial_expansion(py, dy, b);
        let mut edge = 0.0;
        for (i, cx) in xs.iter().enumerate() {
            for (j, cy) in ys.iter().enumerate() {
                edge += cx * cy / (i + j + 1) as f64;
            }
        }
        total += edge * dy;
    }
    total * h * h / (a + 1) as f64
}
