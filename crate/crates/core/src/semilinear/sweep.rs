//! Lifespan tables over `(p, ε)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evolve_semilinear, CauchyData, LifespanRecord, Outcome, SemilinearConfig};

/// One row of a sweep table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub p: f64,
    pub eps: f64,
    pub damped: bool,
    pub outcome: Outcome,
    pub q_max: f64,
    pub q_growth: f64,
}

impl From<&LifespanRecord> for SweepCell {
    fn from(r: &LifespanRecord) -> Self {
        SweepCell { p: r.p, eps: r.eps, damped: r.damped, outcome: r.outcome.clone(), q_max: r.q_max, q_growth: r.q_growth }
    }
}

/// Every `(p, ε)` combination, `p`-major; failures are recorded, not propagated.
pub fn lifespan_sweep(
    ps: &[f64],
    epss: &[f64],
    base: &SemilinearConfig,
    data: impl Fn(f64) -> CauchyData + Sync,
) -> Vec<SweepCell> {
    let cells: Vec<(f64, f64)> = ps.iter().flat_map(|&p| epss.iter().map(move |&e| (p, e))).collect();
    cells
        .par_iter()
        .map(|&(p, eps)| {
            let cfg = SemilinearConfig { p, ..*base };
            match evolve_semilinear(&cfg, &data(eps)) {
                Ok(r) => SweepCell::from(&r),
                Err(e) => SweepCell {
                    p,
                    eps,
                    damped: base.damped,
                    outcome: Outcome::Failed { error: e.to_string() },
                    q_max: f64::NAN,
                    q_growth: f64::NAN,
                },
            }
        })
        .collect()
}

/// Columns `p,eps,damped,outcome,T_star,Q_max`.
pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from("p,eps,damped,outcome,T_star,Q_max\n");
    for c in cells {
        let t = c.outcome.t_star().map(|t| t.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{:e},{},{},{},{:e}\n", c.p, c.eps, c.damped, c.outcome.label(), t, c.q_max));
    }
    out
}
