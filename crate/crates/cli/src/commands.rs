use serde::Serialize;
use serde_json::{json, Value};
use wavecert::config::RunConfig;
use wavecert::exponents::{self, Application};
use wavecert::grid::Grid;
use wavecert::multiplier::{radial_catalogue, verify_identity, verify_taylor, TestFunction, PROFILES};
use wavecert::norms::{estimate_ratio, trace_check, verify_hardy, Status, INNER_FACTOR, OUTER_FACTOR};
use wavecert::semilinear::{evolve_semilinear, lifespan_sweep, sweep_csv, Outcome as Lifespan};
use wavecert::solver::{huygens_residual, oracle_compare, solve_linear, Probe};
use wavecert::source::catalogue;
use wavecert::Error;

use crate::report::{Check, Outcome};

/// Identity residual bound, relative to the size of the terms.
const IDENTITY_TOL: f64 = 1e-9;
const TAYLOR_TOL: f64 = 1e-12;
const TAYLOR_T_MAX: f64 = 100.0;
const ORACLE_TOL: f64 = 0.02;
const HUYGENS_TOL: f64 = 1e-4;
const REFINEMENT_TOL: f64 = 0.1;

/// Bad input is a usage error (2); anything else is a failed run (1).
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidGrid(_)
        | Error::Cfl { .. }
        | Error::Domain(_)
        | Error::Precondition(_)
        | Error::UnsupportedNorm(_)
        | Error::UnknownCatalogue(_)
        | Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn plain(result: Value, checks: Vec<Check>) -> Outcome {
    Outcome { grid: None, result, checks, files: Vec::new() }
}

pub fn run(cfg: &RunConfig, save_field: bool) -> Result<Outcome, Error> {
    match cfg.subcommand.as_str() {
        "verify-identity" => identity(cfg),
        "verify-taylor" => taylor(cfg),
        "verify-hardy" => hardy(cfg),
        "verify-trace" => trace(cfg),
        "verify-estimate" => estimate(cfg),
        "solve-linear" => linear(cfg),
        "oracle-compare" => oracle(cfg),
        "verify-huygens" => huygens(cfg),
        "exponents" => exponent_calculus(cfg),
        "semilinear" => semilinear(cfg, save_field),
        "sweep" => sweep(cfg),
        other => Err(Error::Domain(format!("unknown subcommand {other:?}"))),
    }
}

fn identity(cfg: &RunConfig) -> Result<Outcome, Error> {
    let mut functions = radial_catalogue();
    for l in 1..=3 {
        functions.push(TestFunction::single_mode(PROFILES[l % PROFILES.len()], l, 0));
    }
    let rep = verify_identity(&functions, cfg.samples.unwrap_or(2_000), cfg.seed)?;
    let checks = vec![
        Check::new("identity-residual", rep.max_residual <= IDENTITY_TOL, format!("max {:e} ≤ {IDENTITY_TOL:e}", rep.max_residual)),
        Check::new(
            "mutation-detected",
            rep.mutation_median_residual > 1e3 * IDENTITY_TOL,
            format!("corrupted identity residual {:e}", rep.mutation_median_residual),
        ),
    ];
    Ok(plain(to_value(&rep), checks))
}

fn taylor(cfg: &RunConfig) -> Result<Outcome, Error> {
    let rep = verify_taylor(cfg.samples.unwrap_or(100_000), cfg.seed, TAYLOR_T_MAX)?;
    let checks = vec![
        Check::new("min-gap", rep.min_gap >= -TAYLOR_TOL, format!("min gap {:e}", rep.min_gap)),
        Check::new("zero-faces", rep.face_max_abs == 0.0, format!("max |gap| on faces {:e}", rep.face_max_abs)),
    ];
    Ok(plain(to_value(&rep), checks))
}

fn hardy(cfg: &RunConfig) -> Result<Outcome, Error> {
    let rep = verify_hardy(cfg.samples.unwrap_or(50), cfg.seed, &[1.2, 1.8], &[0.0, 5.0, 20.0])?;
    let checks = vec![Check::new(
        "hardy-bounds",
        rep.holds,
        format!("bounds {} and {}, 3-D refinement stable", rep.hardy2_bound, rep.hardy1_bound),
    )];
    Ok(plain(to_value(&rep), checks))
}

fn trace(cfg: &RunConfig) -> Result<Outcome, Error> {
    let source = catalogue(&cfg.source)?;
    let grid = Grid::new(cfg.grid.params())?;
    let sol = solve_linear(&source, &grid)?;
    let rep = trace_check(&sol, cfg.weights.s)?;
    let bound = (INNER_FACTOR * rep.inner_ratio).max(OUTER_FACTOR * rep.outer_ratio);
    let checks = vec![
        Check::new("regime-domination", rep.domination_excess <= 1e-12, format!("excess {:e}", rep.domination_excess)),
        Check::new(
            "trace-bounded-by-regimes",
            rep.trace_ratio.is_finite() && rep.trace_ratio <= bound * (1.0 + 1e-12),
            format!("trace ratio {} vs {}", rep.trace_ratio, bound),
        ),
    ];
    let mut csv = String::from("t,trace,inner,outer,rhs\n");
    for s in &rep.slices {
        csv.push_str(&format!("{},{:e},{:e},{:e},{:e}\n", s.t, s.trace, s.inner, s.outer, s.rhs));
    }
    let result = json!({
        "s": rep.s,
        "trace_ratio": rep.trace_ratio,
        "inner_ratio": rep.inner_ratio,
        "outer_ratio": rep.outer_ratio,
        "domination_excess": rep.domination_excess,
    });
    Ok(Outcome { grid: Some(grid.meta()), result, checks, files: vec![("trace_slices.csv".into(), csv)] })
}

fn estimate(cfg: &RunConfig) -> Result<Outcome, Error> {
    let source = catalogue(&cfg.source)?;
    let rep = estimate_ratio(&source, &cfg.weights, cfg.grid.params(), cfg.levels.max(1))?;
    let mut checks = vec![
        Check::new("report-invariants", rep.check_invariants().is_ok(), "finite, non-negative entries".to_string()),
        Check::new("finite-ratio", rep.status == Status::Finite && rep.ratio.is_finite(), format!("ratio {}", rep.ratio)),
    ];
    if rep.refinement.len() >= 2 {
        let spread = rep.refinement_spread();
        checks.push(Check::new("refinement-stable", spread <= REFINEMENT_TOL, format!("spread {spread:.4}")));
    }
    let files = vec![("estimate_slices.csv".to_string(), rep.slices_csv())];
    Ok(Outcome { grid: Some(rep.grid), result: to_value(&rep), checks, files })
}

fn linear(cfg: &RunConfig) -> Result<Outcome, Error> {
    let source = catalogue(&cfg.source)?;
    let grid = Grid::new(cfg.grid.params())?;
    let sol = solve_linear(&source, &grid)?;
    let summary = sol.summary();
    let checks = vec![
        Check::new("finite", sol.field.first_non_finite().is_none(), "no non-finite coefficients".to_string()),
        Check::new(
            "finite-speed",
            summary.outside_cone_max <= 1e-8 * summary.max_abs.max(f64::MIN_POSITIVE),
            format!("outside cone {:e} vs max {:e}", summary.outside_cone_max, summary.max_abs),
        ),
    ];
    let files = vec![("field.csv".to_string(), sol.field.to_csv(true))];
    Ok(Outcome { grid: Some(grid.meta()), result: to_value(&summary), checks, files })
}

fn oracle(cfg: &RunConfig) -> Result<Outcome, Error> {
    let source = catalogue(&cfg.source)?;
    let rep = oracle_compare(&source, cfg.grid.params(), cfg.samples.unwrap_or(24))?;
    let checks = vec![Check::new("oracle-agreement", rep.rel_l2 <= ORACLE_TOL, format!("relative L² {:e}", rep.rel_l2))];
    Ok(Outcome { grid: Some(rep.grid), result: to_value(&rep), checks, files: Vec::new() })
}

fn huygens(cfg: &RunConfig) -> Result<Outcome, Error> {
    let source = catalogue(&cfg.source)?;
    let radius = source
        .support_radius()
        .ok_or_else(|| Error::Precondition(format!("source `{}` has no fixed spatial support", source.id)))?;
    let tau0 = source.time_support.unwrap_or(f64::INFINITY);
    let t = cfg.grid.t_max;
    let reach = t - tau0 - radius - 0.25;
    let probes: Vec<Probe> = (0..12)
        .map(|k| {
            let rho = reach.max(0.0) * (k / 3) as f64 / 3.0;
            let a = 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0;
            Probe::new(t, [rho * a.cos(), rho * a.sin(), 0.3 * rho])
        })
        .collect();
    let grid = Grid::new(cfg.grid.params())?;
    let rep = huygens_residual(&source, radius, &probes, &grid)?;
    let checks = vec![
        Check::new("trailing-quiet", rep.solver_max <= HUYGENS_TOL, format!("solver max {:e}", rep.solver_max)),
        Check::new("kirchhoff-zero", rep.kirchhoff_max == 0.0, format!("quadrature max {:e}", rep.kirchhoff_max)),
    ];
    Ok(Outcome { grid: Some(rep.grid), result: to_value(&rep), checks, files: Vec::new() })
}

fn exponent_calculus(cfg: &RunConfig) -> Result<Outcome, Error> {
    let e = &cfg.exponents;
    let app = if e.damped { Application::Damped } else { Application::Undamped };
    let p_c = exponents::strauss_exponent(e.n)?;
    let residual = exponents::strauss_quadratic(e.n, p_c).abs();
    let mut checks = vec![Check::new("strauss-root", residual <= 1e-12, format!("quadratic residual {residual:e}"))];
    let mut result = json!({ "n": e.n, "p_c": p_c });
    let mut files = Vec::new();
    if let Some(p) = e.p {
        let rep = exponents::feasibility(p, app)?;
        let detail = rep.binding_constraint.clone().unwrap_or_else(|| "admissible (δ, θ) found".into());
        checks.push(Check::new("report-consistent", !rep.feasible || rep.reduced_exponent < 0.0, detail));
        result["feasibility"] = to_value(&rep);
    }
    if let Some(range) = e.sweep {
        let rows = exponents::feasibility_sweep(range.p0, range.p1, range.steps, app)?;
        let feasible: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.feasible).map(|(i, _)| i).collect();
        let interval = feasible.windows(2).all(|w| w[1] == w[0] + 1);
        checks.push(Check::new("feasible-interval", interval, format!("{} of {} feasible", feasible.len(), rows.len())));
        files.push(("exponents_sweep.csv".to_string(), exponents::sweep_csv(&rows)));
        result["sweep"] = to_value(&rows);
    }
    Ok(Outcome { grid: None, result, checks, files })
}

fn q_checks(q: &[(f64, f64)]) -> Check {
    let ok = q.iter().all(|(_, v)| v.is_finite() && *v >= 0.0);
    Check::new("bootstrap-finite", ok, format!("{} stored slices", q.len()))
}

fn semilinear(cfg: &RunConfig, save_field: bool) -> Result<Outcome, Error> {
    let rec = evolve_semilinear(&cfg.semilinear, &cfg.data.build(cfg.eps))?;
    let mut checks = vec![q_checks(&rec.q)];
    if let Lifespan::Failed { error } = &rec.outcome {
        checks.push(Check::new("run-completed", false, error.clone()));
    }
    let mut files = vec![
        ("bootstrap.csv".to_string(), rec.q.iter().fold(String::from("t,Q\n"), |s, (t, q)| s + &format!("{t},{q:e}\n"))),
        (
            "amplitude.csv".to_string(),
            rec.amplitude.iter().fold(String::from("t,max_abs\n"), |s, (t, a)| s + &format!("{t},{a:e}\n")),
        ),
    ];
    if save_field {
        if let Some(f) = &rec.field {
            files.push(("semilinear_field.csv".to_string(), f.to_csv(true)));
        }
    }
    let result = json!({
        "p": rec.p,
        "eps": rec.eps,
        "damped": rec.damped,
        "outcome": rec.outcome,
        "threshold": rec.threshold,
        "q_max": rec.q_max,
        "q_growth": rec.q_growth,
        "q_bounded": rec.q_bounded(2.0),
        "q_exponents_feasible": rec.q_exponents_feasible,
        "chain_rule_constant": rec.chain_rule_constant,
        "q": rec.q,
    });
    Ok(Outcome { grid: Some(rec.grid), result, checks, files })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, Error> {
    let data = cfg.data;
    let cells = lifespan_sweep(&cfg.sweep_p, &cfg.sweep_eps, &cfg.semilinear, |eps| data.build(eps));
    let failed: Vec<String> = cells
        .iter()
        .filter_map(|c| match &c.outcome {
            Lifespan::Failed { error } => Some(format!("p = {}, ε = {}: {error}", c.p, c.eps)),
            _ => None,
        })
        .collect();
    let checks = vec![Check::new("all-cells-ran", failed.is_empty(), failed.join("; "))];
    let grid = cfg.semilinear.grid().ok().map(|g| g.meta());
    Ok(Outcome { grid, result: to_value(&cells), checks, files: vec![("sweep.csv".to_string(), sweep_csv(&cells))] })
}
