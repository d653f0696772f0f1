//! Scalar exponent calculus: Strauss exponents, the truncated space-time
//! integrals that close the bootstrap, and admissibility of `(s, δ, α, θ)`.
//!
//! Tail exponents are exponents `e` of the large-`t` integrand `(t+2)^e`; the
//! integral over `t` converges iff the reduced exponent `e + 1` is negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::gauss_legendre;

/// Strict inequalities are enforced with this margin.
pub const MARGIN: f64 = 1e-9;
/// `δ, θ ∈ {1e-1, …, 1e-6}`, largest first.
pub const LADDER: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Default truncation for reported integral values.
pub const DEFAULT_TRUNCATION: f64 = 1e3;

/// Positive root of `(n−1)p² − (n+1)p − 2 = 0`.
pub fn strauss_exponent(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be ≥ 2, got {n}")));
    }
    let (a, b) = ((n - 1) as f64, (n + 1) as f64);
    Ok((b + (b * b + 8.0 * a).sqrt()) / (2.0 * a))
}

/// `(n−1)p² − (n+1)p − 2`.
pub fn strauss_quadratic(n: u32, p: f64) -> f64 {
    (n as f64 - 1.0) * p * p - (n as f64 + 1.0) * p - 2.0
}

/// `∫₀^{t+1} (t+2+r)^a (t+2−r)^b r^c dr`, graded toward `r = 0` and `r = t+1`.
pub fn cone_integral(t: f64, a: f64, b: f64, c: f64) -> Result<f64> {
    if !(c > -1.0) {
        return Err(Error::Infeasible(format!("r-exponent {c} ≤ −1: inner integral diverges at the origin")));
    }
    let (x, w) = gauss_legendre(8);
    let f = |r: f64| (t + 2.0 + r).powf(a) * (t + 2.0 - r).powf(b) * r.powf(c);
    let panel = |lo: f64, hi: f64| -> f64 {
        let h = hi - lo;
        x.iter().zip(&w).map(|(xi, wi)| 0.5 * h * wi * f(lo + 0.5 * h * (xi + 1.0))).sum()
    };
    let end = t + 1.0;
    let mid = 0.5 * end;
    let mut total = 0.0;
    // toward the origin
    let mut hi = mid;
    for _ in 0..60 {
        let lo = 0.5 * hi;
        total += panel(lo, hi);
        hi = lo;
    }
    total += panel(0.0, hi);
    // toward the cone, geometric in the distance t + 2 − r ≥ 1
    let mut d = 1.0;
    let d_mid = t + 2.0 - mid;
    while d < d_mid {
        let next = (2.0 * d).min(d_mid);
        total += panel(t + 2.0 - next, t + 2.0 - d);
        d = next;
    }
    Ok(total)
}

/// `∫₀ᵀ g(t) dt` in `u = ln((t+2)/2)` with 8-point panels of width ≤ 1/8.
pub fn log_time_integral(truncation: f64, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    if !(truncation > 0.0 && truncation.is_finite()) {
        return Err(Error::Domain(format!("truncation must be positive, got {truncation}")));
    }
    let (x, w) = gauss_legendre(8);
    let u_max = ((truncation + 2.0) / 2.0).ln();
    let panels = (8.0 * u_max).ceil().max(1.0) as usize;
    let h = u_max / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        for (xi, wi) in x.iter().zip(&w) {
            let u = (k as f64 + 0.5 * (xi + 1.0)) * h;
            let tp2 = 2.0 * u.exp();
            total += 0.5 * h * wi * tp2 * g(tp2 - 2.0)?;
        }
    }
    Ok(total)
}

/// Large-`t` exponent of `(∫₀^{t+1}(t+2+r)^a(t+2−r)^b r^c dr)^k`.
pub fn inner_tail(a: f64, b: f64, c: f64, k: f64) -> f64 {
    k * (a + (b + c + 1.0).max(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MIntegral {
    pub p: f64,
    pub delta: f64,
    pub truncation: f64,
    /// `∫₀ᵀ∫₀^{t+1}(t+2+r)^{1+2/p−p}(t+2−r)^{−1+2δ}r^{2−p} dr dt`.
    pub value: f64,
    /// `−1 + 2δ + (2+4p−2p²)/p`.
    pub tail_exponent: f64,
}

impl MIntegral {
    pub fn reduced_exponent(&self) -> f64 {
        self.tail_exponent + 1.0
    }
}

pub fn m_tail_exponent(p: f64, delta: f64) -> f64 {
    -1.0 + 2.0 * delta + (2.0 + 4.0 * p - 2.0 * p * p) / p
}

pub fn m_integral(p: f64, delta: f64, truncation: f64) -> Result<MIntegral> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("need p > 1, got {p}")));
    }
    if p >= 3.0 {
        return Err(Error::Infeasible(format!("p = {p} ≥ 3: r^{{2−p}} is not integrable at the origin")));
    }
    let (a, b, c) = (1.0 + 2.0 / p - p, -1.0 + 2.0 * delta, 2.0 - p);
    let value = log_time_integral(truncation, |t| cone_integral(t, a, b, c))?;
    Ok(MIntegral { p, delta, truncation, value, tail_exponent: m_tail_exponent(p, delta) })
}

/// The damped-path integral with `s = 2 − 1/p`, `α = 3/(2p) − 1/2`.
///
/// `value` uses the integrand obtained from the Hölder step with exponent
/// `κ = 2/(1−pθ)`; `verbatim_value` uses the exponents exactly as displayed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NIntegral {
    pub p: f64,
    pub delta: f64,
    pub theta: f64,
    pub truncation: f64,
    pub value: f64,
    pub verbatim_value: f64,
    /// Claimed `−1 + 2δ − 2pθ + (2+6p−4p²)/p`.
    pub tail_exponent: f64,
    /// Large-`t` exponent of the Hölder-step integrand.
    pub integrand_tail: f64,
    /// Large-`t` exponent of the verbatim integrand.
    pub verbatim_tail: f64,
}

impl NIntegral {
    pub fn reduced_exponent(&self) -> f64 {
        self.tail_exponent + 1.0
    }
}

pub fn n_tail_exponent(p: f64, delta: f64, theta: f64) -> f64 {
    -1.0 + 2.0 * delta - 2.0 * p * theta + (2.0 + 6.0 * p - 4.0 * p * p) / p
}

/// `(a, b, c)` of the inner integrand `(t+2+r)^a (t+2−r)^b r^c` and the outer power.
fn n_exponents(p: f64, delta: f64, theta: f64, verbatim: bool) -> (f64, f64, f64, f64) {
    let k = 1.0 - p * theta;
    let pt = p * theta;
    if verbatim {
        (
            (1.5 + 1.0 / p - 1.5 * p - 0.5 * pt) * 2.0 / k,
            (-1.0 + 2.0 * delta - 0.5 * pt) * 2.0 / k,
            2.0 - (0.5 - 1.5 * theta * 2.0 * p / k),
            k,
        )
    } else {
        // weight (t+2+r)^{s/2+α−p+1}(t+2−r)^{1/2+δ} over the p-th power of
        // r^{1/2−3θ/2}(t+2+r)^{(1−θ)/2}(t+2−r)^{(s−1+θ)/2+α}
        (
            (1.5 + 1.0 / p - 1.5 * p + 0.5 * pt) * 2.0 / k,
            (-1.0 + 2.0 * delta - pt) / k,
            2.0 - (p - 3.0 * pt) / k,
            k,
        )
    }
}

pub fn n_integral(p: f64, delta: f64, theta: f64, truncation: f64) -> Result<NIntegral> {
    if !(p > 1.0 && p < 3.0) {
        return Err(Error::Infeasible(format!("need 1 < p < 3, got {p}")));
    }
    if !(theta > 0.0 && p * theta < 1.0) {
        return Err(Error::Domain(format!("need 0 < θ < 1/p, got θ = {theta}")));
    }
    let eval = |verbatim: bool| -> Result<(f64, f64)> {
        let (a, b, c, k) = n_exponents(p, delta, theta, verbatim);
        let v = log_time_integral(truncation, |t| Ok(cone_integral(t, a, b, c)?.powf(k)))?;
        Ok((v, inner_tail(a, b, c, k)))
    };
    let (value, integrand_tail) = eval(false)?;
    let (verbatim_value, verbatim_tail) = eval(true)?;
    Ok(NIntegral {
        p,
        delta,
        theta,
        truncation,
        value,
        verbatim_value,
        tail_exponent: n_tail_exponent(p, delta, theta),
        integrand_tail,
        verbatim_tail,
    })
}

/// Truncated values at geometrically growing `T` are Cauchy when the last
/// increment is smaller than the one before.
pub fn is_cauchy(values: &[f64]) -> bool {
    match values {
        [.., a, b, c] => (c - b) < (b - a),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Application {
    /// `φ_tt − Δφ = |φ|^p` in 3-D.
    Undamped,
    /// `Φ_tt − ΔΦ + 2/(1+t) Φ_t = |Φ|^p` in 3-D.
    Damped,
}

impl Application {
    /// Dimension whose Strauss exponent bounds the feasible range.
    pub fn critical_dimension(&self) -> u32 {
        match self {
            Application::Undamped => 3,
            Application::Damped => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub p: f64,
    pub n: u32,
    pub application: Application,
    pub s: f64,
    pub alpha: f64,
    pub delta: Option<f64>,
    pub theta: Option<f64>,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    pub truncation: f64,
    /// `M²` (undamped) or `N²` (damped) truncated at `truncation`; absent when not evaluable.
    pub integral: Option<f64>,
    pub tail_exponent: f64,
    pub reduced_exponent: f64,
    pub feasible: bool,
    pub binding_constraint: Option<String>,
}

/// First admissible `(δ, θ)` on [`LADDER`], or the binding constraint.
pub fn feasibility(p: f64, application: Application) -> Result<ExponentReport> {
    feasibility_with(p, application, 4.0, DEFAULT_TRUNCATION, true)
}

/// As [`feasibility`]; `evaluate` controls the truncated-integral evaluation.
pub fn feasibility_with(
    p: f64,
    application: Application,
    q: f64,
    truncation: f64,
    evaluate: bool,
) -> Result<ExponentReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("need p > 1, got {p}")));
    }
    let n = application.critical_dimension();
    let mut rep = ExponentReport {
        p,
        n,
        application,
        s: 0.0,
        alpha: 0.0,
        delta: None,
        theta: None,
        sigma: None,
        beta: None,
        truncation,
        integral: None,
        tail_exponent: f64::NAN,
        reduced_exponent: f64::NAN,
        feasible: false,
        binding_constraint: None,
    };
    let fail = |mut rep: ExponentReport, why: String| {
        rep.binding_constraint = Some(why);
        if !rep.tail_exponent.is_finite() {
            rep.tail_exponent = 0.0;
            rep.reduced_exponent = 1.0;
        }
        Ok(rep)
    };
    match application {
        Application::Undamped => {
            rep.s = 1.0 + 2.0 / p;
            let quad = 2.0 + 4.0 * p - 2.0 * p * p;
            rep.tail_exponent = m_tail_exponent(p, LADDER[LADDER.len() - 1]);
            rep.reduced_exponent = rep.tail_exponent + 1.0;
            if p >= 3.0 {
                return fail(rep, "p < 3 (r^{2−p} integrable)".into());
            }
            if !(rep.s < 2.0 - MARGIN) {
                return fail(rep, "s = 1 + 2/p < 2".into());
            }
            if !(quad < -MARGIN * p) {
                return fail(rep, "2+4p−2p² < 0".into());
            }
            let Some(&delta) = LADDER
                .iter()
                .find(|&&d| m_tail_exponent(p, d) + 1.0 < -MARGIN && 1.0 + 2.0 * d <= rep.s)
            else {
                return fail(rep, "2δ + (2+4p−2p²)/p < 0 on the δ ladder".into());
            };
            rep.delta = Some(delta);
            rep.tail_exponent = m_tail_exponent(p, delta);
            rep.reduced_exponent = rep.tail_exponent + 1.0;
            if evaluate {
                rep.integral = Some(m_integral(p, delta, truncation)?.value);
            }
        }
        Application::Damped => {
            rep.s = 2.0 - 1.0 / p;
            rep.alpha = 1.5 / p - 0.5;
            let quad = 2.0 + 6.0 * p - 4.0 * p * p;
            rep.tail_exponent = n_tail_exponent(p, LADDER[LADDER.len() - 1], LADDER[LADDER.len() - 1]);
            rep.reduced_exponent = rep.tail_exponent + 1.0;
            if !(rep.alpha > MARGIN) {
                return fail(rep, "α = 3/(2p) − 1/2 > 0".into());
            }
            if !(quad < -MARGIN * p) {
                return fail(rep, "2+6p−4p² < 0".into());
            }
            let pair = LADDER.iter().find_map(|&d| {
                LADDER
                    .iter()
                    .find(|&&th| p * th < 1.0 - MARGIN && n_tail_exponent(p, d, th) + 1.0 < -MARGIN)
                    .map(|&th| (d, th))
            });
            let Some((delta, theta)) = pair else {
                return fail(rep, "2δ − 2pθ + (2+6p−4p²)/p < 0 on the (δ, θ) ladder".into());
            };
            rep.delta = Some(delta);
            rep.theta = Some(theta);
            rep.sigma = Some(2.0 / theta);
            rep.beta = Some(1.0 / (theta / q + (1.0 - theta) / 2.0));
            rep.tail_exponent = n_tail_exponent(p, delta, theta);
            rep.reduced_exponent = rep.tail_exponent + 1.0;
            if evaluate {
                rep.integral = Some(n_integral(p, delta, theta, truncation)?.value);
            }
        }
    }
    rep.feasible = true;
    Ok(rep)
}

/// Bisection for the smallest feasible `p` in `[lo, hi]`, with `lo`
/// infeasible and `hi` feasible. Returns the final bracket.
pub fn feasibility_threshold(application: Application, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let ok = |p: f64| -> Result<bool> { Ok(feasibility_with(p, application, 4.0, DEFAULT_TRUNCATION, false)?.feasible) };
    let (mut lo, mut hi) = (lo, hi);
    if ok(lo)? || !ok(hi)? {
        return Err(Error::Domain(format!("[{lo}, {hi}] does not bracket the feasibility boundary")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Reports for `steps` evenly spaced `p` in `[p0, p1]`.
pub fn feasibility_sweep(p0: f64, p1: f64, steps: usize, application: Application) -> Result<Vec<ExponentReport>> {
    if steps < 2 || !(p1 > p0) {
        return Err(Error::Domain(format!("sweep needs p0 < p1 and ≥ 2 steps, got {p0}:{p1}:{steps}")));
    }
    (0..steps)
        .map(|i| {
            let p = p0 + (p1 - p0) * i as f64 / (steps - 1) as f64;
            feasibility_with(p, application, 4.0, DEFAULT_TRUNCATION, false)
        })
        .collect()
}

pub fn sweep_csv(reports: &[ExponentReport]) -> String {
    let mut out = String::from("p,application,s,alpha,delta,theta,tail_exponent,feasible,binding\n");
    let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.p,
            match r.application {
                Application::Undamped => "undamped",
                Application::Damped => "damped",
            },
            r.s,
            r.alpha,
            opt(r.delta),
            opt(r.theta),
            r.tail_exponent,
            r.feasible,
            r.binding_constraint.as_deref().unwrap_or("")
        ));
    }
    out
}
