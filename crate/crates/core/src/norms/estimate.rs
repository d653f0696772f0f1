//! Weighted energy against weighted source norm, with a refinement trend.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridMeta, GridParams};
use crate::solver::{solve_linear, LinearSolution};
use crate::source::SourceSpec;

use super::energy::{rhs_weighted_source, slice_energy, EnergyComponents};
use super::params::WeightParams;
use super::slice::SliceData;
use super::trace::trace_weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Finite,
    /// Both sides vanish; the ratio is reported as 0.
    Vacuous,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LhsPiece {
    pub name: String,
    pub value: f64,
}

/// One level of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub dr: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Per-slice LHS breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub t: f64,
    pub grad: f64,
    pub phi_over_r: f64,
    pub angular: f64,
    pub trace: f64,
}

/// One certified inequality check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormReport {
    pub inequality: String,
    pub source: String,
    pub params: WeightParams,
    pub status: Status,
    /// `sup_t` of the sum of the pieces.
    pub lhs: f64,
    /// Pieces at the maximising time.
    pub lhs_pieces: Vec<LhsPiece>,
    pub t_argmax: f64,
    /// Source norm with `(t+2−r)^{1/2+δ}`.
    pub rhs: f64,
    /// Source norm with `|t+r−2|^{1/2+δ}`, reported for comparison.
    pub rhs_literal: f64,
    pub ratio: f64,
    pub grid: GridMeta,
    /// Baseline first, then each refinement.
    pub refinement: Vec<RefinementLevel>,
    pub slices: Vec<SliceRow>,
}

impl NormReport {
    /// `max |ratio_k / ratio_0 − 1|` over the refinement levels.
    pub fn refinement_spread(&self) -> f64 {
        let Some(base) = self.refinement.first() else { return 0.0 };
        if base.ratio == 0.0 {
            return 0.0;
        }
        self.refinement.iter().map(|l| (l.ratio / base.ratio - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Relative change between the last two levels.
    pub fn last_step_change(&self) -> f64 {
        match self.refinement.as_slice() {
            [.., a, b] if a.ratio > 0.0 => (b.ratio / a.ratio - 1.0).abs(),
            _ => 0.0,
        }
    }

    /// Checks the documented invariants: finite non-negative values and
    /// `ratio = lhs/rhs`.
    pub fn check_invariants(&self) -> Result<()> {
        let values = [self.lhs, self.rhs, self.rhs_literal, self.ratio]
            .into_iter()
            .chain(self.lhs_pieces.iter().map(|p| p.value));
        for v in values {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::NonFinite { value: v, location: format!("report {}", self.inequality) });
            }
        }
        let expect = if self.status == Status::Vacuous { 0.0 } else { self.lhs / self.rhs };
        if (self.ratio - expect).abs() > 1e-12 * expect.max(1.0) {
            return Err(Error::Domain(format!("ratio {} ≠ lhs/rhs {}", self.ratio, expect)));
        }
        Ok(())
    }

    /// Per-slice breakdown as CSV.
    pub fn slices_csv(&self) -> String {
        let mut out = String::from("t,grad,phi_over_r,angular,trace\n");
        for r in &self.slices {
            out.push_str(&format!("{},{:e},{:e},{:e},{:e}\n", r.t, r.grad, r.phi_over_r, r.angular, r.trace));
        }
        out
    }
}

/// Sup over the slice of the shifted trace weight `(t+2−r)^α` times `‖φ‖_{L²(S²)}`.
fn shifted_trace(sd: &SliceData, s: f64, alpha: f64) -> f64 {
    let t = sd.t();
    (0..sd.n_r())
        .map(|j| {
            let r = sd.r(j);
            trace_weight(t, r, s) * (t + 2.0 - r).max(0.0).powf(alpha) * sd.u2(j).sqrt()
        })
        .fold(0.0, f64::max)
}

struct Lhs {
    sup: f64,
    t_argmax: f64,
    pieces: Vec<LhsPiece>,
    slices: Vec<SliceRow>,
}

fn lhs_sup(sol: &LinearSolution, params: &WeightParams) -> Lhs {
    let shifted = params.alpha > 0.0;
    let exponent = params.s + 2.0 * params.alpha;
    let mut best = Lhs { sup: 0.0, t_argmax: 0.0, pieces: Vec::new(), slices: Vec::new() };
    for sl in &sol.field.slices {
        let sd = SliceData::new(&sol.field, sl, &sol.active);
        let e: EnergyComponents = slice_energy(&sd, exponent);
        let trace = if shifted { shifted_trace(&sd, params.s, params.alpha) } else { 0.0 };
        let total = e.norm_sum() + trace;
        best.slices.push(SliceRow { t: sd.t(), grad: e.grad, phi_over_r: e.phi_over_r, angular: e.angular, trace });
        if total > best.sup || best.pieces.is_empty() {
            best.sup = best.sup.max(total);
            best.t_argmax = sd.t();
            let mut pieces = vec![
                LhsPiece { name: "grad".into(), value: e.grad.sqrt() },
                LhsPiece { name: "phi_over_r".into(), value: e.phi_over_r.sqrt() },
                LhsPiece { name: "angular".into(), value: e.angular.sqrt() },
            ];
            if shifted {
                pieces.push(LhsPiece { name: "trace".into(), value: trace });
            }
            best.pieces = pieces;
        }
    }
    best
}

/// Report from an already computed solution on `grid`.
pub fn estimate_from_solution(
    sol: &LinearSolution,
    source: &SourceSpec,
    grid: &Grid,
    params: &WeightParams,
) -> Result<NormReport> {
    params.check_estimate()?;
    if params.alpha > 0.0 && source.time_support.is_none() {
        return Err(Error::Precondition(format!(
            "shift α = {} needs a source with compact time support",
            params.alpha
        )));
    }
    let lhs = lhs_sup(sol, params);
    let rhs = rhs_weighted_source(source, params.s, params.delta, params.alpha, grid)?;
    let (status, ratio) = if rhs.proof_weight == 0.0 && lhs.sup == 0.0 {
        (Status::Vacuous, 0.0)
    } else {
        (Status::Finite, lhs.sup / rhs.proof_weight)
    };
    let inequality = if params.alpha > 0.0 { "weighted-energy-shifted" } else { "weighted-energy" };
    Ok(NormReport {
        inequality: inequality.into(),
        source: source.id.clone(),
        params: *params,
        status,
        lhs: lhs.sup,
        lhs_pieces: lhs.pieces,
        t_argmax: lhs.t_argmax,
        rhs: rhs.proof_weight,
        rhs_literal: rhs.literal_weight,
        ratio,
        grid: grid.meta(),
        refinement: vec![RefinementLevel { dr: grid.dr, lhs: lhs.sup, rhs: rhs.proof_weight, ratio }],
        slices: lhs.slices,
    })
}

/// Solve at `grid` and `levels − 1` successive refinements; the report
/// carries baseline values and the trend.
pub fn estimate_ratio(source: &SourceSpec, params: &WeightParams, grid: GridParams, levels: usize) -> Result<NormReport> {
    params.check_estimate()?;
    let mut report: Option<NormReport> = None;
    let mut g = grid;
    for _ in 0..levels.max(1) {
        let grid = Grid::new(g)?;
        let sol = solve_linear(source, &grid)?;
        let r = estimate_from_solution(&sol, source, &grid, params)?;
        match report.as_mut() {
            None => report = Some(r),
            Some(base) => base.refinement.push(r.refinement[0]),
        }
        g = g.refined();
    }
    Ok(report.expect("at least one level"))
}

/// Estimate reports for many parameter sets sharing one solve per level.
pub fn estimate_many(
    source: &SourceSpec,
    params: &[WeightParams],
    grid: GridParams,
    levels: usize,
) -> Result<Vec<NormReport>> {
    let mut reports: Vec<NormReport> = Vec::new();
    let mut g = grid;
    for level in 0..levels.max(1) {
        let grid = Grid::new(g)?;
        let sol = solve_linear(source, &grid)?;
        for (i, p) in params.iter().enumerate() {
            let r = estimate_from_solution(&sol, source, &grid, p)?;
            if level == 0 {
                reports.push(r);
            } else {
                reports[i].refinement.push(r.refinement[0]);
            }
        }
        g = g.refined();
    }
    Ok(reports)
}
