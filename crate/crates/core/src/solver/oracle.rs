//! Grid solver against the retarded-potential quadrature at fixed probe points.

use serde::Serialize;

use super::{kirchhoff_eval, solve_linear, KirchhoffOptions, LinearSolution};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridMeta, GridParams};
use crate::source::SourceSpec;

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub source: String,
    pub t: f64,
    pub points: usize,
    /// `‖φ_grid − φ_K‖ / ‖φ_K‖` over the probe points.
    pub rel_l2: f64,
    /// Largest Richardson estimate of the quadrature itself.
    pub kirchhoff_error_max: f64,
    pub grid: GridMeta,
}

/// `n` points spread over the ball `|x| ≤ 0.95 (t + 1)`: radii evenly spaced,
/// directions on a golden-angle spiral.
pub fn probe_points(t: f64, n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let rho = 0.95 * (t + 1.0) * (k as f64 + 0.5) / n as f64;
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let w = (1.0 - z * z).sqrt();
            let a = golden * k as f64;
            [rho * w * a.cos(), rho * w * a.sin(), rho * z]
        })
        .collect()
}

pub fn compare_solution(sol: &LinearSolution, source: &SourceSpec, t: f64, points: &[[f64; 3]]) -> Result<OracleReport> {
    let opts = KirchhoffOptions::default();
    let (mut num, mut den, mut kerr) = (0.0, 0.0, 0.0f64);
    for &x in points {
        let phi = sol.eval(t, x)?;
        let k = kirchhoff_eval(source, t, x, &opts)?;
        num += (phi - k.value).powi(2);
        den += k.value * k.value;
        kerr = kerr.max(k.error_estimate);
    }
    if den == 0.0 {
        return Err(Error::Precondition(format!("source `{}` gives φ ≡ 0 at the probes", source.id)));
    }
    Ok(OracleReport {
        source: source.id.clone(),
        t,
        points: points.len(),
        rel_l2: (num / den).sqrt(),
        kirchhoff_error_max: kerr,
        grid: sol.grid,
    })
}

/// Solve on `params` up to `params.t_max` and compare at that time.
pub fn oracle_compare(source: &SourceSpec, params: GridParams, points: usize) -> Result<OracleReport> {
    let grid = Grid::new(params)?;
    let sol = solve_linear(source, &grid)?;
    let t = sol.field.slices.last().map(|s| s.t).ok_or(Error::NoSuchSlice { t: params.t_max })?;
    compare_solution(&sol, source, t, &probe_points(t, points))
}
