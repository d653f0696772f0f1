//! Retarded-potential oracle
//!
//! ```text
//! φ(t, x) = 1/(4π) ∫₀ᵗ ρ ∮_{S²} F(t − ρ, x + ρω) dω dρ
//! ```
//!
//! evaluated by composite Gauss–Legendre in `ρ` and `cos θ` (with the pole along
//! `x` and panel breaks at every support edge) and the trapezoid rule in `φ`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::source::{RadialShape, SourceKind, SourceSpec};
use crate::sphere::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KirchhoffOptions {
    pub rho_panels: usize,
    pub theta_panels: usize,
    pub phi_nodes: usize,
    /// Gauss points per panel.
    pub order: usize,
    /// Relative Richardson estimate above which a warning is attached.
    pub rel_tol: f64,
}

impl Default for KirchhoffOptions {
    fn default() -> Self {
        KirchhoffOptions { rho_panels: 8, theta_panels: 6, phi_nodes: 16, order: 6, rel_tol: 1e-4 }
    }
}

impl KirchhoffOptions {
    fn doubled(&self) -> Self {
        KirchhoffOptions {
            rho_panels: self.rho_panels * 2,
            theta_panels: self.theta_panels * 2,
            phi_nodes: self.phi_nodes * 2,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KirchhoffValue {
    pub value: f64,
    /// `|fine − coarse|` from one step-halving.
    pub error_estimate: f64,
    pub warning: Option<String>,
}

/// `φ(t, x)` for zero Cauchy data.
pub fn kirchhoff_eval(source: &SourceSpec, t: f64, x: [f64; 3], opts: &KirchhoffOptions) -> Result<KirchhoffValue> {
    kirchhoff_eval_mapped(source, t, x, opts, |_, _, f| f)
}

/// Same quadrature applied to `map(τ, y, F(τ, y))` instead of `F`; the support
/// edges of `source` still drive the panel breaks, so `map` must vanish where `F` does.
pub fn kirchhoff_eval_mapped(
    source: &SourceSpec,
    t: f64,
    x: [f64; 3],
    opts: &KirchhoffOptions,
    map: impl Fn(f64, [f64; 3], f64) -> f64,
) -> Result<KirchhoffValue> {
    if !(t >= 0.0 && t.is_finite()) || x.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain(format!("Kirchhoff point must be finite with t ≥ 0, got t = {t}")));
    }
    if opts.rho_panels == 0 || opts.theta_panels == 0 || opts.phi_nodes == 0 || opts.order == 0 {
        return Err(Error::Precondition("Kirchhoff resolution must be positive".into()));
    }
    let coarse = integrate(source, t, x, opts, &map);
    let fine = integrate(source, t, x, &opts.doubled(), &map);
    let error_estimate = (fine - coarse).abs();
    let warning = (error_estimate > opts.rel_tol * fine.abs().max(1e-300) && error_estimate > 1e-14).then(|| {
        format!("quadrature estimate {error_estimate:.3e} exceeds {:.1e} relative (value {fine:.6e})", opts.rel_tol)
    });
    Ok(KirchhoffValue { value: fine, error_estimate, warning })
}

/// Fixed support radii of the source (independent of time) and whether the
/// cone radius `τ + 1` is an edge.
fn support_edges(source: &SourceSpec) -> (Vec<f64>, bool) {
    let mut radii = Vec::new();
    let mut cone = source.masked;
    if let SourceKind::Separable(terms) = &source.kind {
        for term in terms {
            match term.shape {
                RadialShape::Ball { a, .. } => radii.push(a),
                RadialShape::Shell { r0, w, .. } => {
                    radii.push(r0 + w);
                    radii.push((r0 - w).max(0.0));
                }
                RadialShape::Expanding { .. } => cone = true,
            }
        }
    }
    (radii, cone)
}

fn panel_nodes(breaks: &[f64], panels: usize, gl: &(Vec<f64>, Vec<f64>), out: &mut Vec<(f64, f64)>) {
    out.clear();
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    let total = hi - lo;
    if !(total > 0.0) {
        return;
    }
    for w in breaks.windows(2) {
        let len = w[1] - w[0];
        if len <= 1e-15 * total.max(1.0) {
            continue;
        }
        let n = ((panels as f64 * len / total).ceil() as usize).max(1);
        let h = len / n as f64;
        for p in 0..n {
            let a = w[0] + p as f64 * h;
            for (xi, wi) in gl.0.iter().zip(&gl.1) {
                out.push((a + 0.5 * h * (xi + 1.0), 0.5 * h * wi));
            }
        }
    }
}

fn sorted_breaks(lo: f64, hi: f64, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut b = vec![lo, hi];
    b.extend(extra.into_iter().filter(|v| *v > lo && *v < hi));
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn integrate(
    source: &SourceSpec,
    t: f64,
    x: [f64; 3],
    opts: &KirchhoffOptions,
    map: &impl Fn(f64, [f64; 3], f64) -> f64,
) -> f64 {
    let xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let mut lo = 0.0;
    let mut hi = t;
    if let Some(tau0) = source.time_support {
        lo = (t - tau0).max(0.0);
    }
    if source.masked {
        // |x + ρω| ≥ ρ − |x| must not exceed t − ρ + 1
        hi = hi.min(0.5 * (t + 1.0 + xn));
    }
    if hi <= lo {
        return 0.0;
    }
    let (radii, cone) = support_edges(source);
    let mut rho_extra: Vec<f64> = radii.iter().flat_map(|&a| [xn - a, xn + a]).collect();
    if cone {
        rho_extra.push(0.5 * (t + 1.0 + xn));
    }
    let rho_breaks = sorted_breaks(lo, hi, rho_extra);

    // frame with e3 along x
    let e3 = if xn > 0.0 { [x[0] / xn, x[1] / xn, x[2] / xn] } else { [0.0, 0.0, 1.0] };
    let helper = if e3[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = helper[0] * e3[0] + helper[1] * e3[1] + helper[2] * e3[2];
    let mut e1 = [helper[0] - dot * e3[0], helper[1] - dot * e3[1], helper[2] - dot * e3[2]];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|c| *c /= n1);
    let e2 = [e3[1] * e1[2] - e3[2] * e1[1], e3[2] * e1[0] - e3[0] * e1[2], e3[0] * e1[1] - e3[1] * e1[0]];

    let gl = gauss_legendre(opts.order);
    let phis: Vec<(f64, f64)> = (0..opts.phi_nodes)
        .map(|k| {
            let p = 2.0 * PI * k as f64 / opts.phi_nodes as f64;
            (p.cos(), p.sin())
        })
        .collect();
    let w_phi = 2.0 * PI / opts.phi_nodes as f64;

    let mut rho_nodes = Vec::new();
    panel_nodes(&rho_breaks, opts.rho_panels, &gl, &mut rho_nodes);
    let mut c_nodes = Vec::new();
    let mut total = 0.0;
    for &(rho, w_rho) in &rho_nodes {
        let tau = t - rho;
        let mut edges: Vec<f64> = radii.clone();
        if cone {
            edges.push(tau + 1.0);
        }
        let c_breaks = if xn > 0.0 && rho > 0.0 {
            sorted_breaks(-1.0, 1.0, edges.iter().map(|a| (a * a - xn * xn - rho * rho) / (2.0 * rho * xn)))
        } else {
            vec![-1.0, 1.0]
        };
        panel_nodes(&c_breaks, opts.theta_panels, &gl, &mut c_nodes);
        let mut sphere = 0.0;
        for &(c, w_c) in &c_nodes {
            let s = (1.0 - c * c).max(0.0).sqrt();
            let mut ring = 0.0;
            for &(cp, sp) in &phis {
                let mut y = [0.0; 3];
                for i in 0..3 {
                    y[i] = x[i] + rho * (s * cp * e1[i] + s * sp * e2[i] + c * e3[i]);
                }
                ring += map(tau, y, source.eval(tau, y));
            }
            sphere += w_c * ring * w_phi;
        }
        total += w_rho * rho * sphere;
    }
    total / (4.0 * PI)
}
