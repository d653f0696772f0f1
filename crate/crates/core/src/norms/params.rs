use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of the weighted norms.
///
/// `σ` and `β` are not free: they follow from `(θ, q)` through
/// `1/σ = θ/2` and `1/β = θ/q + (1 − θ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub s: f64,
    pub delta: f64,
    pub alpha: f64,
    pub p: f64,
    pub theta: f64,
    pub q: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams { s: 1.6, delta: 0.25, alpha: 0.0, p: 2.0, theta: 0.5, q: 4.0 }
    }
}

impl WeightParams {
    pub fn new(s: f64, delta: f64) -> Self {
        WeightParams { s, delta, ..Default::default() }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_interpolation(mut self, theta: f64, q: f64) -> Self {
        self.theta = theta;
        self.q = q;
        self
    }

    pub fn sigma(&self) -> f64 {
        2.0 / self.theta
    }

    pub fn beta(&self) -> f64 {
        1.0 / (self.theta / self.q + (1.0 - self.theta) / 2.0)
    }

    /// `1 < s < 2`, `δ > 0`, `α ≥ 0`.
    pub fn check_estimate(&self) -> Result<()> {
        if !(self.s > 1.0 && self.s < 2.0) {
            return Err(Error::Precondition(format!("need 1 < s < 2, got s = {}", self.s)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Precondition(format!("need δ > 0, got δ = {}", self.delta)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Precondition(format!("need α ≥ 0, got α = {}", self.alpha)));
        }
        Ok(())
    }

    /// The single-weight form of the source norm needs `1 + 2δ ≤ s`.
    pub fn check_delta_below_s(&self) -> Result<()> {
        self.check_estimate()?;
        if 1.0 + 2.0 * self.delta > self.s + 1e-12 {
            return Err(Error::Precondition(format!("need 1 + 2δ ≤ s, got δ = {}, s = {}", self.delta, self.s)));
        }
        Ok(())
    }

    /// `0 < θ < 1` and `q ≥ 2`.
    pub fn check_interpolation(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::Precondition(format!("need 0 < θ < 1, got θ = {}", self.theta)));
        }
        if !(self.q >= 2.0 && self.q.is_finite()) {
            return Err(Error::Precondition(format!("need 2 ≤ q < ∞, got q = {}", self.q)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_exponents() {
        let w = WeightParams::default().with_interpolation(0.5, 4.0);
        assert!((w.sigma() - 4.0).abs() < 1e-15);
        assert!((w.beta() - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn admissibility() {
        assert!(WeightParams::new(1.5, 0.1).check_estimate().is_ok());
        assert!(WeightParams::new(2.0, 0.1).check_estimate().is_err());
        assert!(WeightParams::new(1.5, 0.0).check_estimate().is_err());
        assert!(WeightParams::new(1.2, 0.25).check_delta_below_s().is_err());
        assert!(WeightParams::new(1.6, 0.25).check_delta_below_s().is_ok());
        assert!(WeightParams::default().with_interpolation(1.0, 4.0).check_interpolation().is_err());
    }
}
