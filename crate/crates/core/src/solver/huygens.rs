//! Strong Huygens principle and the cone-weight domination step.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridMeta};
use crate::source::SourceSpec;

use super::kirchhoff::{kirchhoff_eval, kirchhoff_eval_mapped, KirchhoffOptions};
use super::solve_linear;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub t: f64,
    pub x: [f64; 3],
}

impl Probe {
    pub fn new(t: f64, x: [f64; 3]) -> Self {
        Probe { t, x }
    }

    pub fn r(&self) -> f64 {
        (self.x[0] * self.x[0] + self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HuygensReport {
    pub source: String,
    pub tau0: f64,
    pub support_radius: f64,
    pub probes_used: usize,
    pub probes_skipped: usize,
    /// `max |φ|` over trailing probes from the grid solver.
    pub solver_max: f64,
    /// Same probes through the Kirchhoff quadrature (exactly zero when the
    /// backward cone misses the support).
    pub kirchhoff_max: f64,
    /// `max |φ|` over the whole run, for scale.
    pub solution_scale: f64,
    pub grid: GridMeta,
}

/// Largest `|φ|` at probes with `t − |x| > τ₀ + R`.
pub fn huygens_residual(source: &SourceSpec, support_radius: f64, probes: &[Probe], grid: &Grid) -> Result<HuygensReport> {
    let tau0 = source
        .time_support
        .ok_or_else(|| Error::Precondition(format!("source `{}` has no time support [0, τ₀]", source.id)))?;
    let trailing: Vec<Probe> = probes.iter().copied().filter(|p| p.t - p.r() > tau0 + support_radius).collect();
    if trailing.is_empty() {
        return Err(Error::Precondition(format!(
            "no probe satisfies t − |x| > τ₀ + R = {}; the trailing region is empty",
            tau0 + support_radius
        )));
    }
    let t_need = trailing.iter().fold(0.0f64, |a, p| a.max(p.t));
    if t_need > grid.t_max + 1e-9 {
        return Err(Error::Precondition(format!("probe time {t_need} beyond grid horizon {}", grid.t_max)));
    }
    let sol = solve_linear(source, grid)?;
    let mut solver_max = 0.0f64;
    for p in &trailing {
        solver_max = solver_max.max(sol.eval(p.t, p.x)?.abs());
    }
    let opts = KirchhoffOptions::default();
    let kirchhoff_max = trailing
        .par_iter()
        .map(|p| kirchhoff_eval(source, p.t, p.x, &opts).map(|v| v.value.abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    Ok(HuygensReport {
        source: source.id.clone(),
        tau0,
        support_radius,
        probes_used: trailing.len(),
        probes_skipped: probes.len() - trailing.len(),
        solver_max,
        kirchhoff_max,
        solution_scale: sol.outside_cone_sup(0.0).1,
        grid: grid.meta(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DominationProbe {
    pub probe: Probe,
    /// `(t + 2 − |x|)^α |φ(t, x)|`
    pub lhs: f64,
    /// Kirchhoff integral of `(τ + 2 + |y|)^α |F(τ, y)|`
    pub rhs: f64,
    pub holds: bool,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DominationReport {
    pub source: String,
    pub alpha: f64,
    pub probes: Vec<DominationProbe>,
    pub all_hold: bool,
}

/// On the backward cone `t − τ = |x − y|` one has `t + 2 − |x| ≤ τ + 2 + |y|`,
/// so the weighted solution is dominated by the Kirchhoff integral of the
/// weighted `|F|`. Both sides are evaluated by quadrature.
pub fn cone_weight_domination_check(
    source: &SourceSpec,
    alpha: f64,
    probes: &[Probe],
    opts: &KirchhoffOptions,
) -> Result<DominationReport> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Precondition(format!("α must be ≥ 0, got {alpha}")));
    }
    let rows = probes
        .par_iter()
        .map(|p| {
            let r = p.r();
            if p.t + 2.0 - r < 0.0 {
                return Err(Error::Domain(format!("probe (t = {}, r = {r}) has t + 2 − r < 0", p.t)));
            }
            let phi = kirchhoff_eval(source, p.t, p.x, opts)?;
            let weighted = kirchhoff_eval_mapped(source, p.t, p.x, opts, |tau, y, f| {
                let ry = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
                (tau + 2.0 + ry).powf(alpha) * f.abs()
            })?;
            let lhs = (p.t + 2.0 - r).powf(alpha) * phi.value.abs();
            let slack = phi.error_estimate + weighted.error_estimate + 1e-14;
            Ok(DominationProbe {
                probe: *p,
                lhs,
                rhs: weighted.value,
                holds: lhs <= weighted.value + slack,
                warning: phi.warning.or(weighted.warning),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(DominationReport { source: source.id.clone(), alpha, probes: rows, all_hold })
}
