//! `L_t^∞ L_r^σ(X)` norms with power weights in `r`, `t+2+r` and `t+2−r`,
//! where `X` is a norm on the unit sphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RadialModeField;
use crate::sphere::{sobolev_sphere_norm, SphereQuadrature};

/// Norm on `S²` applied at each radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SphereNorm {
    /// Spectral `L²`, `(Σ c²)^{1/2}`.
    L2,
    /// Nodal `L^β`.
    Lp(f64),
    /// Spectral `H¹`.
    H1,
    /// Spectral `H²`.
    H2,
    /// Nodal `(∫|f|^β + |∇f|^β)^{1/β}`.
    W1p(f64),
    /// Max over quadrature nodes.
    LInf,
}

/// `r^a (t+2+r)^b (t+2−r)^c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialWeight {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RadialWeight {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        RadialWeight { a, b, c }
    }

    pub fn at(&self, t: f64, r: f64) -> f64 {
        let minus = (t + 2.0 - r).max(0.0);
        r.powf(self.a) * (t + 2.0 + r).powf(self.b) * minus.powf(self.c)
    }
}

/// Evaluates sphere norms; nodal norms use a grid exact for degree `4 l_max`.
pub struct MixedNorm {
    sphere: SphereQuadrature,
    nodal: Vec<f64>,
    grad: Vec<f64>,
}

impl MixedNorm {
    pub fn new(l_max: usize) -> Self {
        let sphere = SphereQuadrature::with_nodes(l_max, 2 * l_max + 2);
        let n = sphere.len();
        MixedNorm { sphere, nodal: vec![0.0; n], grad: vec![0.0; n] }
    }

    pub fn sphere_norm(&mut self, coeffs: &[f64], norm: SphereNorm) -> Result<f64> {
        let nodal_power = |this: &mut Self, beta: f64, with_grad: bool| -> Result<f64> {
            if !(beta >= 1.0 && beta.is_finite()) {
                return Err(Error::UnsupportedNorm(format!("sphere exponent {beta}")));
            }
            this.sphere.synthesize_into(coeffs, &mut this.nodal);
            if with_grad {
                this.sphere.gradient_magnitude_into(coeffs, &mut this.grad);
            }
            let acc: f64 = this
                .sphere
                .nodes()
                .iter()
                .enumerate()
                .map(|(n, nd)| {
                    let g = if with_grad { this.grad[n].abs().powf(beta) } else { 0.0 };
                    nd.weight * (this.nodal[n].abs().powf(beta) + g)
                })
                .sum();
            Ok(acc.powf(1.0 / beta))
        };
        match norm {
            SphereNorm::L2 => Ok(sobolev_sphere_norm(coeffs, 0)),
            SphereNorm::H1 => Ok(sobolev_sphere_norm(coeffs, 1)),
            SphereNorm::H2 => Ok(sobolev_sphere_norm(coeffs, 2)),
            SphereNorm::Lp(beta) => nodal_power(self, beta, false),
            SphereNorm::W1p(beta) => nodal_power(self, beta, true),
            SphereNorm::LInf => {
                self.sphere.synthesize_into(coeffs, &mut self.nodal);
                Ok(self.nodal.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            }
        }
    }

    /// `(Σ_j |w(t,r_j) h(r_j)|^σ r_j² dr)^{1/σ}` on one slice, `σ = ∞` giving the sup.
    pub fn slice_norm(
        &mut self,
        field: &RadialModeField,
        slice: usize,
        weight: RadialWeight,
        sigma: f64,
        norm: SphereNorm,
    ) -> Result<f64> {
        check_sigma(sigma)?;
        let sl = field.slices.get(slice).ok_or_else(|| Error::Domain(format!("slice {slice} out of range")))?;
        let n_r = field.n_r;
        let mut coeffs = vec![0.0; field.modes()];
        let mut h = Vec::with_capacity(n_r);
        for j in 0..n_r {
            sl.coeffs_at(j, n_r, &mut coeffs);
            if coeffs.iter().all(|c| *c == 0.0) {
                continue;
            }
            let r = field.r(j);
            h.push((r, weight.at(sl.t, r) * self.sphere_norm(&coeffs, norm)?));
        }
        let peak = h.iter().fold(0.0f64, |m, (_, v)| m.max(*v));
        if sigma.is_infinite() || peak == 0.0 || !peak.is_finite() {
            return Ok(peak);
        }
        // scaled so that large σ neither underflows nor overflows
        let acc: f64 = h.iter().map(|(r, v)| (v / peak).powf(sigma) * r * r * field.dr).sum();
        Ok(peak * acc.powf(1.0 / sigma))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 2.0) {
        return Err(Error::UnsupportedNorm(format!("radial exponent σ = {sigma} below 2")));
    }
    Ok(())
}

/// `sup_t` of [`MixedNorm::slice_norm`] over every stored slice.
pub fn mixed_norm(field: &RadialModeField, weight: RadialWeight, sigma: f64, norm: SphereNorm) -> Result<f64> {
    check_sigma(sigma)?;
    let mut m = MixedNorm::new(field.l_max);
    let mut best = 0.0f64;
    for k in 0..field.slices.len() {
        best = best.max(m.slice_norm(field, k, weight, sigma, norm)?);
    }
    Ok(best)
}

/// One slice of the Hölder interpolation check
/// `mixed ≤ A^θ B^{1−θ}` with
/// `mixed = ‖r^{1/2−3θ/2}(t+2+r)^{(1−θ)/2}(t+2−r)^{(s−1+θ)/2}φ‖_{L^σ_r L^β}`,
/// `A = ‖r^{−1}(t+2−r)^{s/2}φ‖_{L²_r L^q}` and `B` the trace norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationSlice {
    pub t: f64,
    pub mixed: f64,
    pub endpoint_a: f64,
    pub endpoint_b: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub theta: f64,
    pub q: f64,
    pub sigma: f64,
    pub beta: f64,
    /// `max_t mixed/bound`; at most 1 up to round-off.
    pub worst: f64,
    pub slices: Vec<InterpolationSlice>,
}

pub fn interpolation_check(field: &RadialModeField, s: f64, theta: f64, q: f64) -> Result<InterpolationReport> {
    if !(theta > 0.0 && theta < 1.0 && q >= 2.0) {
        return Err(Error::Precondition(format!("need 0 < θ < 1 and q ≥ 2, got θ = {theta}, q = {q}")));
    }
    let sigma = 2.0 / theta;
    let beta = 1.0 / (theta / q + (1.0 - theta) / 2.0);
    let mixed_w = RadialWeight::new(0.5 - 1.5 * theta, 0.5 * (1.0 - theta), 0.5 * (s - 1.0 + theta));
    let a_w = RadialWeight::new(-1.0, 0.0, 0.5 * s);
    let b_w = RadialWeight::new(0.5, 0.5, 0.5 * (s - 1.0));
    let mut m = MixedNorm::new(field.l_max);
    let mut slices = Vec::with_capacity(field.slices.len());
    let mut worst = 0.0f64;
    for k in 0..field.slices.len() {
        let mixed = m.slice_norm(field, k, mixed_w, sigma, SphereNorm::Lp(beta))?;
        let endpoint_a = m.slice_norm(field, k, a_w, 2.0, SphereNorm::Lp(q))?;
        let endpoint_b = m.slice_norm(field, k, b_w, f64::INFINITY, SphereNorm::Lp(2.0))?;
        let bound = endpoint_a.powf(theta) * endpoint_b.powf(1.0 - theta);
        if bound > 0.0 {
            worst = worst.max(mixed / bound);
        } else if mixed > 0.0 {
            worst = f64::INFINITY;
        }
        slices.push(InterpolationSlice { t: field.slices[k].t, mixed, endpoint_a, endpoint_b, bound });
    }
    Ok(InterpolationReport { theta, q, sigma, beta, worst, slices })
}
