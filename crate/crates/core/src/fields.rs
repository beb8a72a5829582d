//! Smooth fields that can be interpolated into the discrete space.

use std::collections::BTreeMap;

use crate::geometry::Point2;
use crate::polybasis::monomial::exponents;
use crate::polybasis::ScaledPoly;

/// A `C¹` function supplying the values and gradients the degrees of freedom need.
pub trait Field: Sync {
    fn value(&self, p: Point2) -> f64;
    fn gradient(&self, p: Point2) -> [f64; 2];
}

/// Wraps a pair of closures as a [`Field`].
pub struct FnField<F, G> {
    pub value: F,
    pub gradient: G,
}

impl<F, G> Field for FnField<F, G>
where
    F: Fn(Point2) -> f64 + Sync,
    G: Fn(Point2) -> [f64; 2] + Sync,
{
    fn value(&self, p: Point2) -> f64 {
        (self.value)(p)
    }
    fn gradient(&self, p: Point2) -> [f64; 2] {
        (self.gradient)(p)
    }
}

/// Bivariate polynomial in global coordinates, `Σ c_ab x^a y^b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial2 {
    terms: BTreeMap<(u32, u32), f64>,
}

impl Polynomial2 {
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), f64)>) -> Self {
        let mut p = Self::default();
        for (k, c) in terms {
            *p.terms.entry(k).or_insert(0.0) += c;
        }
        p.prune();
        p
    }

    /// `x^a y^b`.
    pub fn monomial(a: u32, b: u32) -> Self {
        Self::from_terms([((a, b), 1.0)])
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * p.x.powi(a as i32) * p.y.powi(b as i32))
            .sum()
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|(&(a, b), &c)| ((a - 1, b), c * a as f64)),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|(&(a, b), &c)| ((a, b - 1), c * b as f64)),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms()
                .flat_map(|((a, b), c)| other.terms().map(move |((p, q), d)| ((a + p, b + q), c * d))),
        )
    }

    pub fn laplacian(&self) -> Self {
        self.dx().dx().add(&self.dy().dy())
    }

    pub fn bilaplacian(&self) -> Self {
        self.laplacian().laplacian()
    }

    /// `u = x²(1-x)² y²(1-y)²`, which satisfies `u = ∂_n u = 0` on the
    /// boundary of the unit square.
    pub fn clamped_bubble() -> Self {
        let gx = Self::from_terms([((2, 0), 1.0), ((3, 0), -2.0), ((4, 0), 1.0)]);
        let gy = Self::from_terms([((0, 2), 1.0), ((0, 3), -2.0), ((0, 4), 1.0)]);
        gx.mul(&gy)
    }
}

impl Field for Polynomial2 {
    fn value(&self, p: Point2) -> f64 {
        self.eval(p)
    }
    fn gradient(&self, p: Point2) -> [f64; 2] {
        [self.dx().eval(p), self.dy().eval(p)]
    }
}

/// A polynomial with its derivatives expanded once, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct PolyField {
    pub poly: Polynomial2,
    dx: Polynomial2,
    dy: Polynomial2,
}

impl PolyField {
    pub fn new(poly: Polynomial2) -> Self {
        Self { dx: poly.dx(), dy: poly.dy(), poly }
    }

    /// `D Δ²u`, the load that makes this field an exact solution.
    pub fn plate_load(&self, rigidity: f64) -> Polynomial2 {
        self.poly.bilaplacian().scale(rigidity)
    }
}

impl Field for PolyField {
    fn value(&self, p: Point2) -> f64 {
        self.poly.eval(p)
    }
    fn gradient(&self, p: Point2) -> [f64; 2] {
        [self.dx.eval(p), self.dy.eval(p)]
    }
}

impl Field for ScaledPoly {
    fn value(&self, p: Point2) -> f64 {
        self.eval(p)
    }
    fn gradient(&self, p: Point2) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (&c, alpha) in self.coeffs.iter().zip(exponents(self.basis.order)) {
            if c != 0.0 {
                g[0] += c * self.basis.partial(alpha, 1, 0, p);
                g[1] += c * self.basis.partial(alpha, 0, 1, p);
            }
        }
        g
    }
}
