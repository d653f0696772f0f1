//! Linear inhomogeneous wave equation `φ_tt − Δφ = F` with zero Cauchy data.

mod huygens;
mod kirchhoff;
mod manufactured;
mod oracle;
mod stepper;

pub use huygens::{cone_weight_domination_check, huygens_residual, DominationProbe, DominationReport, HuygensReport, Probe};
pub use kirchhoff::{kirchhoff_eval, kirchhoff_eval_mapped, KirchhoffOptions, KirchhoffValue};
pub use manufactured::Manufactured;
pub use oracle::{compare_solution, oracle_compare, probe_points, OracleReport};
pub use stepper::{ModeStepper, NonFiniteAt};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ModeSlice, RadialModeField};
use crate::grid::{Grid, GridMeta};
use crate::source::SourceSpec;
use crate::sphere::{mode_lm, real_harmonics_at};

pub const SCHEME: &str = "leapfrog-2 (staggered r, averaged potential)";

#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub field: RadialModeField,
    pub grid: GridMeta,
    pub source_id: String,
    pub scheme: &'static str,
    /// Modes that were evolved; all others are identically zero.
    pub active: Vec<usize>,
    /// `(t_{n+½}, E)` of the conserved discrete energy after every step.
    pub energy: Vec<(f64, f64)>,
}

/// Evolve every mode the source can excite, from zero Cauchy data.
pub fn solve_linear(source: &SourceSpec, grid: &Grid) -> Result<LinearSolution> {
    let zeros = vec![0.0; grid.modes() * grid.n_r];
    solve_linear_with_data(source, &zeros, &zeros, grid)
}

/// As [`solve_linear`] with Cauchy data `(u0, ut0)` given mode-major on the grid radii.
pub fn solve_linear_with_data(source: &SourceSpec, u0: &[f64], ut0: &[f64], grid: &Grid) -> Result<LinearSolution> {
    let n = grid.modes() * grid.n_r;
    if u0.len() != n || ut0.len() != n {
        return Err(Error::DegreeMismatch { expected: n, got: u0.len().min(ut0.len()) });
    }
    let active = source.active_modes(grid.l_max).map(|mut a| {
        for idx in 0..grid.modes() {
            let block = idx * grid.n_r..(idx + 1) * grid.n_r;
            if u0[block.clone()].iter().chain(&ut0[block]).any(|v| *v != 0.0) && !a.contains(&idx) {
                a.push(idx);
            }
        }
        a.sort_unstable();
        a
    });
    let radii = grid.radii();
    let mut stepper = ModeStepper::new(grid, active);
    let mut f = vec![0.0; n];
    source.modes_at(0.0, &radii, grid.sphere(), &mut f);
    stepper.start(u0, ut0, &f)?;

    let mut field = RadialModeField::new(grid.l_max, grid.dr, grid.n_r);
    field.slices.reserve(grid.n_slices());
    field.slices.push(ModeSlice { t: 0.0, u: u0.to_vec(), ut: ut0.to_vec() });
    let mut energy = Vec::with_capacity(grid.steps + 1);
    energy.push((0.5 * grid.dt, stepper.energy()));
    let skip_source = source.is_zero();
    for n in 1..=grid.steps {
        let t = n as f64 * grid.dt;
        if !skip_source {
            source.modes_at(t, &radii, grid.sphere(), &mut f);
        }
        let want = n % grid.slice_stride == 0;
        if let Some(mut s) = stepper.advance(&f, want)? {
            s.t = grid.slice_time(n / grid.slice_stride);
            field.slices.push(s);
        }
        energy.push((t + 0.5 * grid.dt, stepper.energy()));
    }
    Ok(LinearSolution {
        field,
        grid: grid.meta(),
        source_id: source.id.clone(),
        scheme: SCHEME,
        active: stepper.active().to_vec(),
        energy,
    })
}

impl LinearSolution {
    pub fn n_r(&self) -> usize {
        self.field.n_r
    }

    pub fn times(&self) -> Vec<f64> {
        self.field.slices.iter().map(|s| s.t).collect()
    }

    /// `u_lm(t, r)` by linear interpolation in `r` (parity ghost below the first
    /// cell centre) on a stored slice.
    pub fn mode_value(&self, slice: &ModeSlice, idx: usize, r: f64) -> f64 {
        let n_r = self.n_r();
        let dr = self.field.dr;
        let m = slice.mode(idx, n_r);
        let x = r / dr - 0.5;
        if x >= (n_r - 1) as f64 {
            return if x <= n_r as f64 - 0.5 { m[n_r - 1] } else { 0.0 };
        }
        if x < 0.0 {
            let (l, _) = mode_lm(idx);
            let ghost = if l % 2 == 0 { m[0] } else { -m[0] };
            let w = x + 1.0;
            return ghost * (1.0 - w) + m[0] * w;
        }
        let j = x.floor() as usize;
        let w = x - j as f64;
        m[j] * (1.0 - w) + m[j + 1] * w
    }

    fn eval_on_slice(&self, slice: &ModeSlice, y: [f64; 3], ylm: &mut [f64]) -> f64 {
        let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        real_harmonics_at(self.field.l_max, y, ylm);
        self.active.iter().map(|&idx| self.mode_value(slice, idx, r) * ylm[idx]).sum()
    }

    /// `φ(t, y)`: linear in `t` between stored slices, linear in `r`, exact in angle.
    pub fn eval(&self, t: f64, y: [f64; 3]) -> Result<f64> {
        let slices = &self.field.slices;
        let last = slices.last().ok_or(Error::NoSuchSlice { t })?;
        if t < 0.0 || t > last.t + 1e-9 {
            return Err(Error::NoSuchSlice { t });
        }
        let mut ylm = vec![0.0; self.field.modes()];
        let k = slices.partition_point(|s| s.t <= t + 1e-12).saturating_sub(1);
        let a = self.eval_on_slice(&slices[k], y, &mut ylm);
        if k + 1 == slices.len() || (t - slices[k].t).abs() < 1e-12 {
            return Ok(a);
        }
        let b = self.eval_on_slice(&slices[k + 1], y, &mut ylm);
        let w = (t - slices[k].t) / (slices[k + 1].t - slices[k].t);
        Ok(a * (1.0 - w) + b * w)
    }

    /// Largest `|u_lm|` beyond `r > t + 1 + margin`, and the overall largest `|u_lm|`.
    pub fn outside_cone_sup(&self, margin: f64) -> (f64, f64) {
        let n_r = self.n_r();
        let (mut outside, mut total) = (0.0f64, 0.0f64);
        for s in &self.field.slices {
            for &idx in &self.active {
                for (j, v) in s.mode(idx, n_r).iter().enumerate() {
                    total = total.max(v.abs());
                    if self.field.r(j) > s.t + 1.0 + margin {
                        outside = outside.max(v.abs());
                    }
                }
            }
        }
        (outside, total)
    }

    /// Largest relative variation of the discrete energy over steps with `t ≥ t0`.
    pub fn energy_drift_after(&self, t0: f64) -> f64 {
        let tail: Vec<f64> = self.energy.iter().filter(|(t, _)| *t >= t0).map(|(_, e)| *e).collect();
        let Some(&first) = tail.first() else { return 0.0 };
        if first == 0.0 {
            return tail.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        }
        tail.iter().fold(0.0f64, |a, e| a.max(((e - first) / first).abs()))
    }
}

/// Serializable summary of a linear run.
#[derive(Debug, Clone, Serialize)]
pub struct LinearSummary {
    pub source: String,
    pub scheme: &'static str,
    pub grid: GridMeta,
    pub active_modes: usize,
    pub slices: usize,
    pub max_abs: f64,
    pub outside_cone_max: f64,
    pub final_energy: f64,
}

impl LinearSolution {
    pub fn summary(&self) -> LinearSummary {
        let (outside, total) = self.outside_cone_sup(2.0 * self.grid.dr);
        LinearSummary {
            source: self.source_id.clone(),
            scheme: self.scheme,
            grid: self.grid,
            active_modes: self.active.len(),
            slices: self.field.slices.len(),
            max_abs: total,
            outside_cone_max: outside,
            final_energy: self.energy.last().map(|e| e.1).unwrap_or(0.0),
        }
    }
}
