//! Leapfrog stepper for `v = r·u`, all `(l, m)` modes advanced in lock-step.
//!
//! Per mode the scheme is
//!
//! ```text
//! (v⁺ − 2v + v⁻)/Δt² = D2 v − V (v⁺ + 2v + v⁻)/4 + r F,   V = l(l+1)/r²
//! ```
//!
//! with `D2` the three-point Laplacian, the parity ghost `v₋₁ = (−1)^{l+1} v₀`
//! and a homogeneous Dirichlet ghost past `r_max`. The averaged potential keeps
//! the scheme stable up to `Δt < Δr` for every `l` and admits the exactly
//! conserved energy returned by [`ModeStepper::energy`].

use crate::error::Error;
use crate::field::ModeSlice;
use crate::grid::Grid;
use crate::sphere::mode_lm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonFiniteAt {
    pub t: f64,
    pub r: f64,
    pub l: usize,
    pub m: i64,
}

impl From<NonFiniteAt> for Error {
    fn from(b: NonFiniteAt) -> Self {
        Error::NonFinite {
            value: f64::NAN,
            location: format!("t = {}, r = {}, mode (l = {}, m = {})", b.t, b.r, b.l, b.m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModeStepper {
    n_r: usize,
    dr: f64,
    dt: f64,
    modes: usize,
    active: Vec<usize>,
    parity: Vec<f64>,
    /// `l(l+1)/r_j²` per `(mode, j)`; only `l` matters but the layout keeps loops flat.
    potential: Vec<Vec<f64>>,
    r: Vec<f64>,
    v_prev: Vec<f64>,
    v_cur: Vec<f64>,
    v_next: Vec<f64>,
    level: usize,
}

impl ModeStepper {
    /// `active = None` evolves every mode; otherwise the listed mode indices only.
    pub fn new(grid: &Grid, active: Option<Vec<usize>>) -> Self {
        let modes = grid.modes();
        let active = active.unwrap_or_else(|| (0..modes).collect());
        let r = grid.radii();
        let l_max = grid.l_max;
        let potential = (0..=l_max)
            .map(|l| r.iter().map(|&r| (l * (l + 1)) as f64 / (r * r)).collect())
            .collect();
        let parity = (0..modes).map(|idx| if mode_lm(idx).0 % 2 == 0 { -1.0 } else { 1.0 }).collect();
        let n = modes * grid.n_r;
        ModeStepper {
            n_r: grid.n_r,
            dr: grid.dr,
            dt: grid.dt,
            modes,
            active,
            parity,
            potential,
            r,
            v_prev: vec![0.0; n],
            v_cur: vec![0.0; n],
            v_next: vec![0.0; n],
            level: 0,
        }
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// Index of the time level held in the "current" buffer.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn time(&self) -> f64 {
        self.level as f64 * self.dt
    }

    fn laplacian(&self, v: &[f64], parity: f64, j: usize) -> f64 {
        let left = if j == 0 { parity * v[0] } else { v[j - 1] };
        let right = if j + 1 == self.n_r { 0.0 } else { v[j + 1] };
        (right - 2.0 * v[j] + left) / (self.dr * self.dr)
    }

    /// Set level 0 from `(u0, ut0)` and compute level 1 by a Taylor step with
    /// source modes `f0 = F_lm(0, r_j)`.
    pub fn start(&mut self, u0: &[f64], ut0: &[f64], f0: &[f64]) -> std::result::Result<(), NonFiniteAt> {
        let (n_r, dt) = (self.n_r, self.dt);
        self.v_prev.iter_mut().for_each(|x| *x = 0.0);
        self.v_cur.iter_mut().for_each(|x| *x = 0.0);
        for &idx in &self.active {
            let (l, _) = mode_lm(idx);
            let off = idx * n_r;
            for j in 0..n_r {
                self.v_prev[off + j] = self.r[j] * u0[off + j];
            }
            for j in 0..n_r {
                let v0 = &self.v_prev[off..off + n_r];
                let acc = self.laplacian(v0, self.parity[idx], j) - self.potential[l][j] * v0[j]
                    + self.r[j] * f0[off + j];
                self.v_cur[off + j] = v0[j] + dt * self.r[j] * ut0[off + j] + 0.5 * dt * dt * acc;
            }
        }
        self.level = 1;
        self.check(&self.v_cur, dt)
    }

    /// Advance from level `n` to `n + 1` given `f = F_lm(t_n, r_j)`.
    ///
    /// With `want_slice` the stored slice for level `n` (with `u_t` by centred
    /// differences) is returned.
    pub fn advance(&mut self, f: &[f64], want_slice: bool) -> std::result::Result<Option<ModeSlice>, NonFiniteAt> {
        let (n_r, dt) = (self.n_r, self.dt);
        let dt2 = dt * dt;
        for &idx in &self.active {
            let (l, _) = mode_lm(idx);
            let off = idx * n_r;
            let cur = &self.v_cur[off..off + n_r];
            let prev = &self.v_prev[off..off + n_r];
            let pot = &self.potential[l];
            for j in 0..n_r {
                let lap = self.laplacian(cur, self.parity[idx], j);
                let rhs = 2.0 * cur[j] - prev[j]
                    + dt2 * (lap - pot[j] * (0.5 * cur[j] + 0.25 * prev[j]) + self.r[j] * f[off + j]);
                self.v_next[off + j] = rhs / (1.0 + 0.25 * dt2 * pot[j]);
            }
        }
        self.check(&self.v_next, (self.level + 1) as f64 * dt)?;
        let slice = want_slice.then(|| self.slice_current());
        std::mem::swap(&mut self.v_prev, &mut self.v_cur);
        std::mem::swap(&mut self.v_cur, &mut self.v_next);
        self.level += 1;
        Ok(slice)
    }

    fn slice_current(&self) -> ModeSlice {
        let n_r = self.n_r;
        let mut s = ModeSlice::zeros(self.time(), self.modes, n_r);
        for &idx in &self.active {
            let off = idx * n_r;
            for j in 0..n_r {
                let r = self.r[j];
                s.u[off + j] = self.v_cur[off + j] / r;
                s.ut[off + j] = (self.v_next[off + j] - self.v_prev[off + j]) / (2.0 * self.dt * r);
            }
        }
        s
    }

    /// `u` at the current level into `out` (mode-major).
    pub fn current_u(&self, out: &mut [f64]) {
        let n_r = self.n_r;
        out.iter_mut().for_each(|x| *x = 0.0);
        for &idx in &self.active {
            let off = idx * n_r;
            for j in 0..n_r {
                out[off + j] = self.v_cur[off + j] / self.r[j];
            }
        }
    }

    fn check(&self, v: &[f64], t: f64) -> std::result::Result<(), NonFiniteAt> {
        for &idx in &self.active {
            let off = idx * self.n_r;
            if let Some(j) = v[off..off + self.n_r].iter().position(|x| !x.is_finite()) {
                let (l, m) = mode_lm(idx);
                return Err(NonFiniteAt { t, r: self.r[j], l, m });
            }
        }
        Ok(())
    }

    /// Conserved discrete energy of the pair (previous, current) levels:
    ///
    /// `Σ_j [ (Δ_t v)² + (A v⁺)·v⁻ + V (v⁺ + v⁻)²/4 ] Δr`, `A = −D2`.
    ///
    /// Without a source it is constant to round-off.
    pub fn energy(&self) -> f64 {
        let n_r = self.n_r;
        let mut e = 0.0;
        for &idx in &self.active {
            let (l, _) = mode_lm(idx);
            let off = idx * n_r;
            let a = &self.v_cur[off..off + n_r];
            let b = &self.v_prev[off..off + n_r];
            for j in 0..n_r {
                let vt = (a[j] - b[j]) / self.dt;
                let av = -self.laplacian(a, self.parity[idx], j);
                let s = a[j] + b[j];
                e += vt * vt + av * b[j] + 0.25 * self.potential[l][j] * s * s;
            }
        }
        e * self.dr
    }
}
