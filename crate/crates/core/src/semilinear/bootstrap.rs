//! The weighted functional whose smallness closes the bootstrap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{feasibility_with, Application, DEFAULT_TRUNCATION};
use crate::field::RadialModeField;
use crate::norms::{MixedNorm, RadialWeight, SphereNorm};

/// `θ` used when the ladder has no admissible pair (diagnostic runs below threshold).
pub const DIAGNOSTIC_THETA: f64 = 0.01;
/// `q` of the interpolation exponents.
pub const INTERPOLATION_Q: f64 = 4.0;

/// Weight, radial exponent and sphere norm of the functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSpec {
    pub p: f64,
    pub application: Application,
    pub weight: RadialWeight,
    pub sigma: f64,
    pub sphere: SphereNorm,
    /// False when the exponents come from the diagnostic fallback.
    pub feasible: bool,
}

/// Undamped: `r^{1/2}(t+2+r)^{1/2}(t+2−r)^{1/p}` in `L_r^∞ H²(S²)`.
/// Damped: `r^{1/2−3θ/2}(t+2+r)^{(1−θ)/2}(t+2−r)^{(s−1+θ)/2+α}` in `L_r^σ W^{1,β}(S²)`
/// with `s = 2 − 1/p`, `α = 3/(2p) − 1/2`.
///
/// With `strict`, infeasible exponents are rejected with the report attached;
/// otherwise the same formulas are used with `θ =` [`DIAGNOSTIC_THETA`].
pub fn bootstrap_spec(p: f64, application: Application, strict: bool) -> Result<BootstrapSpec> {
    let rep = feasibility_with(p, application, INTERPOLATION_Q, DEFAULT_TRUNCATION, false)?;
    if strict && !rep.feasible {
        return Err(Error::InfeasibleExponents(Box::new(rep)));
    }
    match application {
        Application::Undamped => Ok(BootstrapSpec {
            p,
            application,
            weight: RadialWeight::new(0.5, 0.5, 1.0 / p),
            sigma: f64::INFINITY,
            sphere: SphereNorm::H2,
            feasible: rep.feasible,
        }),
        Application::Damped => {
            if !(rep.alpha > 0.0) {
                return Err(Error::InfeasibleExponents(Box::new(rep)));
            }
            let theta = rep.theta.unwrap_or(DIAGNOSTIC_THETA);
            let beta = 1.0 / (theta / INTERPOLATION_Q + (1.0 - theta) / 2.0);
            Ok(BootstrapSpec {
                p,
                application,
                weight: RadialWeight::new(0.5 - 1.5 * theta, 0.5 * (1.0 - theta), 0.5 * (rep.s - 1.0 + theta) + rep.alpha),
                sigma: 2.0 / theta,
                sphere: SphereNorm::W1p(beta),
                feasible: rep.feasible,
            })
        }
    }
}

/// `Q(t_k)` on every stored slice.
pub fn bootstrap_functional(field: &RadialModeField, spec: &BootstrapSpec) -> Result<Vec<(f64, f64)>> {
    let mut m = MixedNorm::new(field.l_max);
    (0..field.slices.len())
        .map(|k| Ok((field.slices[k].t, m.slice_norm(field, k, spec.weight, spec.sigma, spec.sphere)?)))
        .collect()
}
