//! Space-time grid: staggered radial nodes, leapfrog time step, sphere quadrature.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::SphereQuadrature;

/// Largest Courant number accepted by the leapfrog scheme.
pub const MAX_CFL: f64 = 0.9;

/// User-facing grid parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub dr: f64,
    pub cfl: f64,
    pub t_max: f64,
    pub l_max: usize,
    /// Defaults to `t_max + 1 + 4 dr`.
    pub r_max: Option<f64>,
    /// Store every `slice_stride`-th time level.
    pub slice_stride: usize,
}

impl GridParams {
    pub fn new(dr: f64, t_max: f64, l_max: usize) -> Self {
        GridParams { dr, cfl: MAX_CFL, t_max, l_max, r_max: None, slice_stride: 1 }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.slice_stride = stride;
        self
    }

    /// Same grid with `dr` and `dt` halved; the stride doubles so the stored
    /// slice times are unchanged.
    pub fn refined(&self) -> Self {
        GridParams {
            dr: self.dr / 2.0,
            slice_stride: self.slice_stride * 2,
            r_max: self.r_max,
            ..*self
        }
    }
}

/// Serializable grid metadata embedded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub dr: f64,
    pub dt: f64,
    pub r_max: f64,
    pub t_max: f64,
    pub l_max: usize,
    pub n_r: usize,
    pub steps: usize,
    pub slice_stride: usize,
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub dr: f64,
    pub dt: f64,
    pub r_max: f64,
    pub t_max: f64,
    pub l_max: usize,
    pub n_r: usize,
    pub steps: usize,
    pub slice_stride: usize,
    sphere: Arc<SphereQuadrature>,
}

impl Grid {
    pub fn new(p: GridParams) -> Result<Self> {
        if !(p.dr > 0.0 && p.dr.is_finite()) {
            return Err(Error::InvalidGrid(format!("dr must be positive, got {}", p.dr)));
        }
        if !(p.t_max > 0.0 && p.t_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("t_max must be positive, got {}", p.t_max)));
        }
        if !(p.cfl > 0.0 && p.cfl <= MAX_CFL) {
            return Err(Error::InvalidGrid(format!("cfl must lie in (0, {MAX_CFL}], got {}", p.cfl)));
        }
        if p.slice_stride == 0 {
            return Err(Error::InvalidGrid("slice_stride must be ≥ 1".into()));
        }
        let stride = p.slice_stride;
        let raw = (p.t_max / (p.cfl * p.dr) - 1e-9).ceil().max(1.0) as usize;
        let steps = raw.div_ceil(stride) * stride;
        let dt = p.t_max / steps as f64;
        Self::build(p, dt, steps)
    }

    /// Grid with an explicit time step; rejects `dt > cfl · dr`.
    pub fn with_dt(p: GridParams, dt: f64) -> Result<Self> {
        let limit = p.cfl.min(MAX_CFL) * p.dr;
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, cfl: p.cfl, limit });
        }
        let steps = (p.t_max / dt).round() as usize;
        if steps == 0 || (steps as f64 * dt - p.t_max).abs() > 1e-9 * p.t_max {
            return Err(Error::InvalidGrid(format!("dt = {dt} does not divide t_max = {}", p.t_max)));
        }
        if steps % p.slice_stride != 0 {
            return Err(Error::InvalidGrid("slice_stride must divide the step count".into()));
        }
        Self::build(p, dt, steps)
    }

    fn build(p: GridParams, dt: f64, steps: usize) -> Result<Self> {
        if dt > p.cfl * p.dr * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, cfl: p.cfl, limit: p.cfl * p.dr });
        }
        let r_max = p.r_max.unwrap_or(p.t_max + 1.0 + 4.0 * p.dr);
        if r_max < p.t_max + 1.0 + 2.0 * p.dr {
            return Err(Error::InvalidGrid(format!(
                "r_max = {r_max} must be ≥ t_max + 1 + 2 dr = {}",
                p.t_max + 1.0 + 2.0 * p.dr
            )));
        }
        let n_r = (r_max / p.dr - 1e-9).ceil() as usize;
        Ok(Grid {
            dr: p.dr,
            dt,
            r_max,
            t_max: p.t_max,
            l_max: p.l_max,
            n_r,
            steps,
            slice_stride: p.slice_stride,
            sphere: Arc::new(SphereQuadrature::new(p.l_max)),
        })
    }

    /// Cell-centred radius `(j + ½) dr`.
    #[inline]
    pub fn r(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_r).map(|j| self.r(j)).collect()
    }

    pub fn sphere(&self) -> &SphereQuadrature {
        &self.sphere
    }

    pub fn sphere_arc(&self) -> Arc<SphereQuadrature> {
        Arc::clone(&self.sphere)
    }

    pub fn modes(&self) -> usize {
        self.sphere.modes()
    }

    pub fn n_slices(&self) -> usize {
        self.steps / self.slice_stride + 1
    }

    pub fn slice_time(&self, k: usize) -> f64 {
        (k * self.slice_stride) as f64 * self.dt
    }

    pub fn meta(&self) -> GridMeta {
        GridMeta {
            dr: self.dr,
            dt: self.dt,
            r_max: self.r_max,
            t_max: self.t_max,
            l_max: self.l_max,
            n_r: self.n_r,
            steps: self.steps,
            slice_stride: self.slice_stride,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_hold_for_default_construction() {
        let g = Grid::new(GridParams::new(1.0 / 64.0, 5.0, 4)).unwrap();
        assert!(g.dt <= MAX_CFL * g.dr);
        assert!(g.r_max >= g.t_max + 1.0 + 2.0 * g.dr);
        assert!((g.steps as f64 * g.dt - 5.0).abs() < 1e-12);
        assert!(g.r(g.n_r - 1) < g.r_max + g.dr);
    }

    #[test]
    fn rejects_cfl_violation() {
        let p = GridParams::new(0.1, 1.0, 2);
        assert!(matches!(Grid::with_dt(p, 0.1), Err(Error::Cfl { .. })));
        assert!(Grid::with_dt(p, 0.05).is_ok());
    }

    #[test]
    fn rejects_small_domain() {
        let mut p = GridParams::new(0.1, 3.0, 2);
        p.r_max = Some(4.0);
        assert!(matches!(Grid::new(p), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn refinement_keeps_slice_times() {
        let p = GridParams::new(1.0 / 16.0, 2.0, 2).with_stride(4);
        let a = Grid::new(p).unwrap();
        let b = Grid::new(p.refined()).unwrap();
        assert_eq!(a.n_slices(), b.n_slices());
        for k in 0..a.n_slices() {
            assert!((a.slice_time(k) - b.slice_time(k)).abs() < 1e-12);
        }
    }
}
