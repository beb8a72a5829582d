/// Polynomial in the scaled edge variable `s̃ ∈ [-1/2, 1/2]`, stored by
/// increasing power.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgePolynomial {
    pub coeffs: Vec<f64>,
}

impl EdgePolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Highest power with a nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn mul(&self, other: &EdgePolynomial) -> EdgePolynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EdgePolynomial::new(out)
    }

    pub fn add_assign_scaled(&mut self, other: &EdgePolynomial, c: f64) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (i, v) in other.coeffs.iter().enumerate() {
            self.coeffs[i] += c * v;
        }
    }

    /// Coefficient of `s̃^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// `∫_e p ds` on an edge of the given length.
    pub fn integrate(&self, length: f64) -> f64 {
        length
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * scaled_moment(k))
                .sum::<f64>()
    }
}

/// `∫_{-1/2}^{1/2} s^k ds`.
pub fn scaled_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        0.5f64.powi(k as i32) / (k + 1) as f64
    }
}
