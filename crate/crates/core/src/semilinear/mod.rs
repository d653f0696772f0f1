//! Semilinear evolutions `φ_tt − Δφ = |φ|^p` and, through the Liouville
//! transform, `Φ_tt − ΔΦ + 2/(1+t)Φ_t = |Φ|^p`, with blow-up detection and
//! monitoring of the bootstrap functional.

mod bootstrap;
mod data;
mod sweep;

pub use bootstrap::{bootstrap_functional, bootstrap_spec, BootstrapSpec, DIAGNOSTIC_THETA, INTERPOLATION_Q};
pub use data::{liouville, liouville_field, liouville_slice, CauchyData, DataTerm, Direction};
pub use sweep::{lifespan_sweep, sweep_csv, SweepCell};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::Application;
use crate::field::{ModeSlice, RadialModeField};
use crate::grid::{Grid, GridMeta, GridParams, MAX_CFL};
use crate::solver::ModeStepper;
use crate::sphere::{mode_count, sobolev_sphere_norm, SphereQuadrature};

/// Run parameters for one semilinear evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SemilinearConfig {
    pub p: f64,
    pub damped: bool,
    pub horizon: f64,
    pub dr: f64,
    pub l_max: usize,
    /// Time between stored slices.
    pub slice_dt: f64,
    /// Blow-up when `max|φ|` exceeds this multiple of the initial amplitude.
    pub threshold_factor: f64,
    /// `Q` growth is measured against `sup_{t ≤ q_window} Q`.
    pub q_window: f64,
    /// Re-run detected blow-ups at half the grid spacing.
    pub confirm_blowup: bool,
    /// Replace `(1+t)^{−(p−1)}` by 1 on the damped path.
    pub unit_damping_factor: bool,
}

impl Default for SemilinearConfig {
    fn default() -> Self {
        SemilinearConfig {
            p: 2.5,
            damped: false,
            horizon: 50.0,
            dr: 1.0 / 16.0,
            l_max: 2,
            slice_dt: 0.5,
            threshold_factor: 1e6,
            q_window: 5.0,
            confirm_blowup: false,
            unit_damping_factor: false,
        }
    }
}

impl SemilinearConfig {
    pub fn application(&self) -> Application {
        if self.damped {
            Application::Damped
        } else {
            Application::Undamped
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        let stride = ((self.slice_dt / (MAX_CFL * self.dr)).round() as usize).max(1);
        Grid::new(GridParams::new(self.dr, self.horizon, self.l_max).with_stride(stride))
    }

    fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::Domain(format!("need p > 1, got {}", self.p)));
        }
        if !(self.threshold_factor > 1.0) {
            return Err(Error::Precondition(format!(
                "threshold factor {} must exceed 1 so the threshold lies above the initial amplitude",
                self.threshold_factor
            )));
        }
        if !(self.q_window > 0.0) {
            return Err(Error::Domain(format!("q_window must be positive, got {}", self.q_window)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    GlobalToHorizon { horizon: f64 },
    Blowup { t_star: f64, t_star_refined: Option<f64> },
    /// Blow-up whose time moved by more than 10% under refinement.
    Unconfirmed { t_star: f64, t_star_refined: Option<f64> },
    Failed { error: String },
}

impl Outcome {
    pub fn t_star(&self) -> Option<f64> {
        match self {
            Outcome::Blowup { t_star, .. } | Outcome::Unconfirmed { t_star, .. } => Some(*t_star),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::GlobalToHorizon { .. } => "global-to-horizon",
            Outcome::Blowup { .. } => "blowup",
            Outcome::Unconfirmed { .. } => "unconfirmed-blowup",
            Outcome::Failed { .. } => "failed",
        }
    }
}

/// First time the amplitude exceeds `threshold` or is non-finite.
pub fn detect_blowup(amplitude: &[(f64, f64)], threshold: f64) -> Result<Option<f64>> {
    let Some(&(_, a0)) = amplitude.first() else { return Ok(None) };
    if !(threshold > a0) {
        return Err(Error::Precondition(format!("threshold {threshold} must exceed the initial amplitude {a0}")));
    }
    Ok(amplitude.iter().find(|(_, a)| !a.is_finite() || *a > threshold).map(|(t, _)| *t))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LifespanRecord {
    pub p: f64,
    pub eps: f64,
    pub damped: bool,
    pub outcome: Outcome,
    pub grid: GridMeta,
    pub threshold: f64,
    /// `(t_k, Q(t_k))` on stored slices before blow-up.
    pub q: Vec<(f64, f64)>,
    /// False when `Q` uses the diagnostic exponents.
    pub q_exponents_feasible: bool,
    pub q_max: f64,
    /// `sup_t Q / sup_{t ≤ q_window} Q`.
    pub q_growth: f64,
    /// `(t_n, max |φ|)` at every step.
    pub amplitude: Vec<(f64, f64)>,
    /// Largest `‖|φ|^p‖_{H²(S²)} / (‖φ‖_{L^∞(S²)}^{p−1} ‖φ‖_{H²(S²)})` over radii and steps.
    pub chain_rule_constant: f64,
    #[serde(skip)]
    pub field: Option<RadialModeField>,
}

impl LifespanRecord {
    pub fn q_bounded(&self, factor: f64) -> bool {
        self.q_growth <= factor
    }
}

/// Nodewise `|φ|^p` with re-projection on a padded sphere grid.
struct Nonlinearity {
    p: f64,
    n_r: usize,
    sphere: SphereQuadrature,
    coeffs: Vec<f64>,
    nodal: Vec<f64>,
    out: Vec<f64>,
}

impl Nonlinearity {
    fn new(p: f64, l_max: usize, n_r: usize) -> Self {
        let l_nodes = (p * l_max as f64).ceil() as usize;
        let sphere = SphereQuadrature::with_nodes(l_max, l_nodes.max(l_max));
        let nm = mode_count(l_max);
        let n = sphere.len();
        Nonlinearity { p, n_r, sphere, coeffs: vec![0.0; nm], nodal: vec![0.0; n], out: vec![0.0; nm] }
    }

    /// Writes `factor · |φ|^p` mode-major into `f`; returns `(max|φ|, chain-rule ratio)`.
    fn eval(&mut self, u: &[f64], factor: f64, f: &mut [f64]) -> (f64, f64) {
        let n_r = self.n_r;
        let nm = self.coeffs.len();
        f.iter_mut().for_each(|v| *v = 0.0);
        let (mut amp, mut chain) = (0.0f64, 0.0f64);
        for j in 0..n_r {
            for idx in 0..nm {
                self.coeffs[idx] = u[idx * n_r + j];
            }
            if self.coeffs.iter().all(|c| *c == 0.0) {
                continue;
            }
            self.sphere.synthesize_into(&self.coeffs, &mut self.nodal);
            let mut local = 0.0f64;
            for v in self.nodal.iter_mut() {
                if !v.is_finite() {
                    local = f64::NAN;
                }
                local = local.max(v.abs());
                *v = v.abs().powf(self.p);
            }
            if local.is_nan() {
                return (f64::NAN, chain);
            }
            amp = amp.max(local);
            self.sphere.project_into(&self.nodal, &mut self.out);
            let den = local.powf(self.p - 1.0) * sobolev_sphere_norm(&self.coeffs, 2);
            if den > 0.0 && den.is_finite() {
                chain = chain.max(sobolev_sphere_norm(&self.out, 2) / den);
            }
            for idx in 0..nm {
                f[idx * n_r + j] = factor * self.out[idx];
            }
        }
        (amp, chain)
    }
}

/// One evolution on the grid of `cfg`.
pub fn evolve_semilinear(cfg: &SemilinearConfig, data: &CauchyData) -> Result<LifespanRecord> {
    let mut rec = evolve_once(cfg, data)?;
    if cfg.confirm_blowup {
        if let Outcome::Blowup { t_star, .. } = rec.outcome {
            let fine = SemilinearConfig { dr: cfg.dr / 2.0, confirm_blowup: false, ..*cfg };
            let refined = evolve_once(&fine, data)?.outcome.t_star();
            rec.outcome = match refined {
                Some(t2) if (t2 - t_star).abs() <= 0.1 * t_star => {
                    Outcome::Blowup { t_star, t_star_refined: Some(t2) }
                }
                other => Outcome::Unconfirmed { t_star, t_star_refined: other },
            };
        }
    }
    Ok(rec)
}

fn evolve_once(cfg: &SemilinearConfig, data: &CauchyData) -> Result<LifespanRecord> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let (mut u0, mut ut0) = data.sample(&grid)?;
    if cfg.damped {
        liouville(&mut u0, &mut ut0, 0.0, Direction::Forward);
    }
    let a0 = data.initial_amplitude(&grid)?;
    let threshold = if a0 > 0.0 { cfg.threshold_factor * a0 } else { f64::INFINITY };
    let p = cfg.p;
    let factor = |t: f64| {
        if cfg.damped && !cfg.unit_damping_factor {
            (1.0 + t).powf(-(p - 1.0))
        } else {
            1.0
        }
    };

    let n = grid.modes() * grid.n_r;
    let mut nl = Nonlinearity::new(p, grid.l_max, grid.n_r);
    let mut f = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut amplitude = Vec::with_capacity(grid.steps + 1);
    let (amp0, mut chain) = nl.eval(&u0, factor(0.0), &mut f);
    amplitude.push((0.0, amp0));

    let mut field = RadialModeField::new(grid.l_max, grid.dr, grid.n_r);
    field.slices.push(ModeSlice { t: 0.0, u: u0.clone(), ut: ut0.clone() });
    let mut stepper = ModeStepper::new(&grid, None);
    let mut t_star = None;
    if stepper.start(&u0, &ut0, &f).is_err() {
        t_star = Some(grid.dt);
    }
    if t_star.is_none() {
        for step in 1..=grid.steps {
            let t = step as f64 * grid.dt;
            stepper.current_u(&mut u);
            let (amp, c) = nl.eval(&u, factor(t), &mut f);
            amplitude.push((t, amp));
            if !amp.is_finite() || amp > threshold {
                break;
            }
            chain = chain.max(c);
            let want = step % grid.slice_stride == 0;
            match stepper.advance(&f, want) {
                Ok(Some(mut s)) => {
                    s.t = grid.slice_time(step / grid.slice_stride);
                    field.slices.push(s);
                }
                Ok(None) => {}
                Err(_) => {
                    amplitude.push((t + grid.dt, f64::NAN));
                    break;
                }
            }
        }
        t_star = detect_blowup(&amplitude, threshold)?;
    }
    let outcome = match t_star {
        Some(t_star) => Outcome::Blowup { t_star, t_star_refined: None },
        None => Outcome::GlobalToHorizon { horizon: cfg.horizon },
    };

    let spec = bootstrap_spec(p, cfg.application(), false)?;
    let q = bootstrap_functional(&field, &spec)?;
    let q_max = q.iter().fold(0.0f64, |m, (_, v)| m.max(*v));
    let early = q.iter().filter(|(t, _)| *t <= cfg.q_window).fold(0.0f64, |m, (_, v)| m.max(*v));
    let q_growth = if early > 0.0 { q_max / early } else { 0.0 };
    Ok(LifespanRecord {
        p,
        eps: data.eps,
        damped: cfg.damped,
        outcome,
        grid: grid.meta(),
        threshold,
        q,
        q_exponents_feasible: spec.feasible,
        q_max,
        q_growth,
        amplitude,
        chain_rule_constant: chain,
        field: Some(field),
    })
}
