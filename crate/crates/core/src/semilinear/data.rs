//! Compactly supported Cauchy data and the Liouville transform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ModeSlice, RadialModeField};
use crate::grid::Grid;
use crate::sphere::{mode_index, SphereQuadrature};

/// `amplitude · r^l (1 − r²)^k Y_lm`, normalised so that for `l = 0` the
/// function itself is `amplitude · (1 − r²)^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataTerm {
    pub l: usize,
    pub m: i64,
    pub amplitude: f64,
    pub k: i32,
}

impl DataTerm {
    pub fn radial(amplitude: f64) -> Self {
        DataTerm { l: 0, m: 0, amplitude, k: 4 }
    }

    /// Mode coefficient at radius `r`.
    pub fn coefficient(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return 0.0;
        }
        let norm = (4.0 * std::f64::consts::PI).sqrt();
        norm * self.amplitude * r.powi(self.l as i32) * (1.0 - r * r).powi(self.k)
    }
}

/// `(φ, φ_t)(0) = ε(f, g)` with `f, g` supported in the unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyData {
    pub f: Vec<DataTerm>,
    pub g: Vec<DataTerm>,
    pub eps: f64,
}

impl CauchyData {
    /// `f = (1 − r²)⁴`, `g = 0`.
    pub fn positive(eps: f64) -> Self {
        CauchyData { f: vec![DataTerm::radial(1.0)], g: Vec::new(), eps }
    }

    /// Positive radial data plus a small `(2, 1)` component.
    pub fn with_angular(eps: f64) -> Self {
        let mut d = Self::positive(eps);
        d.f.push(DataTerm { l: 2, m: 1, amplitude: 0.2, k: 4 });
        d
    }

    pub fn validate(&self, l_max: usize) -> Result<()> {
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::Domain(format!("ε must be finite and ≥ 0, got {}", self.eps)));
        }
        for t in self.f.iter().chain(&self.g) {
            if t.l > l_max || t.m.unsigned_abs() as usize > t.l {
                return Err(Error::DegreeMismatch { expected: l_max, got: t.l });
            }
            if !t.amplitude.is_finite() || t.k < 1 {
                return Err(Error::Domain(format!("invalid data term {t:?}")));
            }
        }
        Ok(())
    }

    /// Mode-major `(εf, εg)` on the grid radii.
    pub fn sample(&self, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate(grid.l_max)?;
        let n_r = grid.n_r;
        let fill = |terms: &[DataTerm]| {
            let mut out = vec![0.0; grid.modes() * n_r];
            for t in terms {
                let idx = mode_index(t.l, t.m);
                for j in 0..n_r {
                    out[idx * n_r + j] += self.eps * t.coefficient(grid.r(j));
                }
            }
            out
        };
        Ok((fill(&self.f), fill(&self.g)))
    }

    /// Largest nodal `|εf|`.
    pub fn initial_amplitude(&self, grid: &Grid) -> Result<f64> {
        let (u0, _) = self.sample(grid)?;
        let sphere = SphereQuadrature::with_nodes(grid.l_max, 2 * grid.l_max);
        let mut c = vec![0.0; grid.modes()];
        let mut nodal = vec![0.0; sphere.len()];
        let mut best = 0.0f64;
        for j in 0..grid.n_r {
            for (idx, v) in c.iter_mut().enumerate() {
                *v = u0[idx * grid.n_r + j];
            }
            sphere.synthesize_into(&c, &mut nodal);
            best = nodal.iter().fold(best, |m, v| m.max(v.abs()));
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `φ = (1+t)Φ`.
    Forward,
    /// `Φ = φ/(1+t)`.
    Inverse,
}

/// Transforms `(u, u_t)` at time `t` in place.
pub fn liouville(u: &mut [f64], ut: &mut [f64], t: f64, direction: Direction) {
    let a = 1.0 + t;
    for (x, xt) in u.iter_mut().zip(ut.iter_mut()) {
        match direction {
            Direction::Forward => {
                let phi = a * *x;
                *xt = *x + a * *xt;
                *x = phi;
            }
            Direction::Inverse => {
                let phi = *x / a;
                *xt = (*xt - phi) / a;
                *x = phi;
            }
        }
    }
}

pub fn liouville_slice(slice: &ModeSlice, direction: Direction) -> ModeSlice {
    let mut out = slice.clone();
    liouville(&mut out.u, &mut out.ut, slice.t, direction);
    out
}

pub fn liouville_field(field: &RadialModeField, direction: Direction) -> RadialModeField {
    let mut out = field.clone();
    out.slices = field.slices.iter().map(|s| liouville_slice(s, direction)).collect();
    out
}
