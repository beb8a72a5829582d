use crate::geometry::{LocalEdge, Point2};

use super::edge::EdgePolynomial;

/// Number of monomials of total degree at most `order` in two variables.
pub const fn dim(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Position of `x^a y^b` in the ordering by total degree, then by
/// decreasing power of `x`.
pub const fn index_of(a: usize, b: usize) -> usize {
    let k = a + b;
    k * (k + 1) / 2 + b
}

/// Exponent pairs `(a, b)` of all monomials up to `order`, in basis order.
pub fn exponents(order: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim(order));
    for k in 0..=order {
        for b in 0..=k {
            out.push((k - b, b));
        }
    }
    out
}

fn falling(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    ((n - k + 1)..=n).map(|v| v as f64).product()
}

/// Which derivative of a monomial to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivative {
    Value,
    /// `[∂x, ∂y]`
    Gradient,
    /// `[∂xx, ∂xy, ∂yy]`
    Hessian,
    /// `[∂xxx, ∂xxy, ∂xyy, ∂yyy]`
    Third,
    Laplacian,
    Bilaplacian,
}

/// `m_α(x) = ((x - x_K) / h_K)^α` for all `|α| <= order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledMonomialBasis {
    pub center: Point2,
    pub scale: f64,
    pub order: usize,
}

impl ScaledMonomialBasis {
    pub fn new(center: Point2, scale: f64, order: usize) -> Self {
        Self { center, scale, order }
    }

    pub fn dim(&self) -> usize {
        dim(self.order)
    }

    pub fn scaled_coords(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.center.x) / self.scale, (p.y - self.center.y) / self.scale)
    }

    /// Same centre and scale, different order.
    pub fn with_order(&self, order: usize) -> Self {
        Self { order, ..*self }
    }

    /// Values of every basis monomial at `p`.
    pub fn eval_all(&self, p: Point2) -> Vec<f64> {
        let (xi, eta) = self.scaled_coords(p);
        let mut out = Vec::with_capacity(self.dim());
        let xp = powers(xi, self.order);
        let yp = powers(eta, self.order);
        for k in 0..=self.order {
            for b in 0..=k {
                out.push(xp[k - b] * yp[b]);
            }
        }
        out
    }

    /// `∂^{i+j} m_α / ∂x^i ∂y^j` at `p`.
    pub fn partial(&self, alpha: (usize, usize), i: usize, j: usize, p: Point2) -> f64 {
        let (a, b) = alpha;
        if i > a || j > b {
            return 0.0;
        }
        let (xi, eta) = self.scaled_coords(p);
        falling(a, i) * falling(b, j) * xi.powi((a - i) as i32) * eta.powi((b - j) as i32)
            / self.scale.powi((i + j) as i32)
    }

    pub fn derivatives(&self, alpha: (usize, usize), p: Point2, which: Derivative) -> Vec<f64> {
        let d = |i, j| self.partial(alpha, i, j, p);
        match which {
            Derivative::Value => vec![d(0, 0)],
            Derivative::Gradient => vec![d(1, 0), d(0, 1)],
            Derivative::Hessian => vec![d(2, 0), d(1, 1), d(0, 2)],
            Derivative::Third => vec![d(3, 0), d(2, 1), d(1, 2), d(0, 3)],
            Derivative::Laplacian => vec![d(2, 0) + d(0, 2)],
            Derivative::Bilaplacian => vec![d(4, 0) + 2.0 * d(2, 2) + d(0, 4)],
        }
    }

    /// The basis monomial with index `idx` as a polynomial.
    pub fn monomial(&self, idx: usize) -> ScaledPoly {
        let mut coeffs = vec![0.0; self.dim()];
        coeffs[idx] = 1.0;
        ScaledPoly { basis: *self, coeffs }
    }
}

fn powers(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = 1.0;
    for _ in 0..=n {
        out.push(v);
        v *= x;
    }
    out
}

/// A polynomial expanded in a scaled monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledPoly {
    pub basis: ScaledMonomialBasis,
    pub coeffs: Vec<f64>,
}

impl ScaledPoly {
    pub fn zero(basis: ScaledMonomialBasis) -> Self {
        Self { basis, coeffs: vec![0.0; basis.dim()] }
    }

    pub fn degree(&self) -> usize {
        self.basis.order
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.basis
            .eval_all(p)
            .iter()
            .zip(&self.coeffs)
            .map(|(m, c)| m * c)
            .sum()
    }

    /// Partial derivative; the result lives in the basis of one lower order.
    pub fn derivative(&self, wrt_y: bool) -> ScaledPoly {
        let order = self.basis.order.saturating_sub(1);
        let target = self.basis.with_order(order);
        let mut out = ScaledPoly::zero(target);
        if self.basis.order == 0 {
            return out;
        }
        for (idx, (a, b)) in exponents(self.basis.order).into_iter().enumerate() {
            let c = self.coeffs[idx];
            if c == 0.0 {
                continue;
            }
            if wrt_y && b > 0 {
                out.coeffs[index_of(a, b - 1)] += c * b as f64 / self.basis.scale;
            } else if !wrt_y && a > 0 {
                out.coeffs[index_of(a - 1, b)] += c * a as f64 / self.basis.scale;
            }
        }
        out
    }

    pub fn dx(&self) -> ScaledPoly {
        self.derivative(false)
    }

    pub fn dy(&self) -> ScaledPoly {
        self.derivative(true)
    }

    pub fn laplacian(&self) -> ScaledPoly {
        self.dx().dx().plus(&self.dy().dy(), 1.0)
    }

    /// `self + c * other`, in the basis of the larger order.
    pub fn plus(&self, other: &ScaledPoly, c: f64) -> ScaledPoly {
        let (big, small, cs, cb) = if self.basis.order >= other.basis.order {
            (self, other, c, 1.0)
        } else {
            (other, self, 1.0, c)
        };
        let mut out = big.clone();
        for v in out.coeffs.iter_mut() {
            *v *= cb;
        }
        for (i, v) in small.coeffs.iter().enumerate() {
            out.coeffs[i] += cs * v;
        }
        out
    }

    pub fn scaled(&self, c: f64) -> ScaledPoly {
        ScaledPoly { basis: self.basis, coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    /// Exact restriction to a straight edge, as a polynomial in the scaled
    /// edge variable `s̃ = (s - s_mid) / |e|`.
    pub fn restrict_to_edge(&self, edge: &LocalEdge) -> EdgePolynomial {
        let h = self.basis.scale;
        let (x0, y0) = self.basis.scaled_coords(edge.midpoint);
        let xi = EdgePolynomial::new(vec![x0, edge.length * edge.tangent.x / h]);
        let eta = EdgePolynomial::new(vec![y0, edge.length * edge.tangent.y / h]);
        let n = self.basis.order;
        let mut xp = vec![EdgePolynomial::new(vec![1.0])];
        let mut yp = vec![EdgePolynomial::new(vec![1.0])];
        for k in 1..=n {
            xp.push(xp[k - 1].mul(&xi));
            yp.push(yp[k - 1].mul(&eta));
        }
        let mut out = EdgePolynomial::new(vec![0.0; n + 1]);
        for (idx, (a, b)) in exponents(n).into_iter().enumerate() {
            let c = self.coeffs[idx];
            if c != 0.0 {
                out.add_assign_scaled(&xp[a].mul(&yp[b]), c);
            }
        }
        out
    }
}
