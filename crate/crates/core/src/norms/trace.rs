//! Trace inequality: pointwise-in-`r` sphere norms against weighted `L²(R³)`
//! norms of `φ_r` and `φ/r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::LinearSolution;

use super::energy::minus_weight;
use super::slice::SliceData;

/// `r^{1/2}(t+2+r)^{1/2}(t+2−r)^{(s−1)/2}`.
pub fn trace_weight(t: f64, r: f64, s: f64) -> f64 {
    r.sqrt() * (t + 2.0 + r).sqrt() * minus_weight(t, r, 0.5 * (s - 1.0))
}

/// Regime `t ≥ 3r − 2` weight `r^{1/2}(t+2−r)^{s/2}`; dominates the trace weight by `√2`.
pub fn inner_weight(t: f64, r: f64, s: f64) -> f64 {
    r.sqrt() * minus_weight(t, r, 0.5 * s)
}

/// Regime `t ≤ 3r − 2` weight `r(t+2−r)^{(s−1)/2}`; dominates the trace weight by `2`.
pub fn outer_weight(t: f64, r: f64, s: f64) -> f64 {
    r * minus_weight(t, r, 0.5 * (s - 1.0))
}

pub const INNER_FACTOR: f64 = std::f64::consts::SQRT_2;
pub const OUTER_FACTOR: f64 = 2.0;

/// Both sides of the trace inequality on one slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSlice {
    pub t: f64,
    /// `sup_r trace_weight · ‖φ(t,r,·)‖_{L²(S²)}`.
    pub trace: f64,
    /// Sup of the inner-regime weight over `t ≥ 3r − 2`.
    pub inner: f64,
    /// Sup of the outer-regime weight over `t ≤ 3r − 2`.
    pub outer: f64,
    /// `‖(t+2−r)^{s/2}φ_r‖ + ‖(t+2−r)^{s/2}φ/r‖` in `L²(R³)`.
    pub rhs: f64,
    /// Largest `trace_weight/(factor · regime weight) − 1` seen on the grid.
    pub domination_excess: f64,
}

pub fn trace_slice(sd: &SliceData, s: f64) -> TraceSlice {
    let t = sd.t();
    let dr = sd.field.dr;
    let mut out = TraceSlice { t, trace: 0.0, inner: 0.0, outer: 0.0, rhs: 0.0, domination_excess: f64::NEG_INFINITY };
    let (mut a, mut b) = (0.0, 0.0);
    for j in 0..sd.n_r() {
        let r = sd.r(j);
        let w = minus_weight(t, r, s);
        if w == 0.0 {
            continue;
        }
        let u2 = sd.u2(j);
        a += w * sd.ur2(j) * r * r * dr;
        b += w * u2 * dr;
        let norm = u2.sqrt();
        let tw = trace_weight(t, r, s);
        out.trace = out.trace.max(tw * norm);
        let excess = if t >= 3.0 * r - 2.0 {
            out.inner = out.inner.max(inner_weight(t, r, s) * norm);
            tw / (INNER_FACTOR * inner_weight(t, r, s)) - 1.0
        } else {
            out.outer = out.outer.max(outer_weight(t, r, s) * norm);
            tw / (OUTER_FACTOR * outer_weight(t, r, s)) - 1.0
        };
        out.domination_excess = out.domination_excess.max(excess);
    }
    out.rhs = a.sqrt() + b.sqrt();
    out
}

/// Trace norm of the solution at the stored time `t`.
pub fn trace_norm(sol: &LinearSolution, s: f64, t: f64) -> Result<f64> {
    check_s(s)?;
    let slice = sol.field.slice_at(t)?;
    Ok(trace_slice(&SliceData::new(&sol.field, slice, &sol.active), s).trace)
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::Precondition(format!("need 1 < s < 2, got {s}")));
    }
    Ok(())
}

/// `sup_t` ratios of the trace inequality and of each regime bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceReport {
    pub s: f64,
    pub trace_ratio: f64,
    pub inner_ratio: f64,
    pub outer_ratio: f64,
    /// `≤ 0` when both regime dominations hold at every node.
    pub domination_excess: f64,
    pub slices: Vec<TraceSlice>,
}

pub fn trace_check(sol: &LinearSolution, s: f64) -> Result<TraceReport> {
    check_s(s)?;
    let slices: Vec<TraceSlice> =
        sol.field.slices.iter().map(|sl| trace_slice(&SliceData::new(&sol.field, sl, &sol.active), s)).collect();
    let ratio = |f: fn(&TraceSlice) -> f64| {
        slices.iter().filter(|x| x.rhs > 0.0).map(|x| f(x) / x.rhs).fold(0.0, f64::max)
    };
    Ok(TraceReport {
        s,
        trace_ratio: ratio(|x| x.trace),
        inner_ratio: ratio(|x| x.inner),
        outer_ratio: ratio(|x| x.outer),
        domination_excess: slices.iter().map(|x| x.domination_excess).fold(f64::NEG_INFINITY, f64::max),
        slices,
    })
}
