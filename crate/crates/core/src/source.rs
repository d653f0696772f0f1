//! Right-hand sides `F(t, x)` with a declared support cone `|x| ≤ t + 1`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RadialModeField;
use crate::jet::Scalar;
use crate::sphere::{mode_count, mode_index, SphereQuadrature};

/// Time factor of a separable term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TimeEnvelope {
    /// `sin⁴(π t / τ₀)` on `[0, τ₀]`, zero afterwards.
    Pulse { tau0: f64 },
    /// `t² e^{-rate t}`.
    RampDecay { rate: f64 },
    /// `(1 + t)^{-power}`.
    Algebraic { power: f64 },
}

impl TimeEnvelope {
    pub fn eval<T: Scalar>(&self, t: T) -> T {
        match *self {
            TimeEnvelope::Pulse { tau0 } => {
                let tv = t.value();
                if tv <= 0.0 || tv >= tau0 {
                    T::cst(0.0)
                } else {
                    (t * (PI / tau0)).sin().powi(4)
                }
            }
            TimeEnvelope::RampDecay { rate } => t * t * (t * -rate).exp(),
            TimeEnvelope::Algebraic { power } => (t + 1.0).powf(-power),
        }
    }

    pub fn time_support(&self) -> Option<f64> {
        match *self {
            TimeEnvelope::Pulse { tau0 } => Some(tau0),
            _ => None,
        }
    }
}

/// Radial factor (without the `r^l` regularity factor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadialShape {
    /// `(1 - (r/a)²)^k` for `r < a ≤ 1`.
    Ball { a: f64, k: i32 },
    /// `(1 - (r/(t+1))²)^k`: fills the whole cone.
    Expanding { k: i32 },
    /// `(1 - ((r - r0)/w)²)^k` on `|r - r0| < w`, inside the unit ball.
    Shell { r0: f64, w: f64, k: i32 },
}

impl RadialShape {
    pub fn eval<T: Scalar>(&self, t: T, r: T) -> T {
        let bump = |x: T, k: i32| {
            if x.value().abs() >= 1.0 {
                T::cst(0.0)
            } else {
                (-(x * x) + 1.0).powi(k)
            }
        };
        match *self {
            RadialShape::Ball { a, k } => bump(r / a, k),
            RadialShape::Expanding { k } => bump(r / (t + 1.0), k),
            RadialShape::Shell { r0, w, k } => bump((r - r0) / w, k),
        }
    }

    /// Outer radius of the support at time `t`.
    pub fn support(&self, t: f64) -> f64 {
        match *self {
            RadialShape::Ball { a, .. } => a,
            RadialShape::Expanding { .. } => t + 1.0,
            RadialShape::Shell { r0, w, .. } => r0 + w,
        }
    }
}

/// `amplitude · envelope(t) · r^l · shape(t, r) · Y_lm(ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableTerm {
    pub l: usize,
    pub m: i64,
    pub amplitude: f64,
    pub envelope: TimeEnvelope,
    pub shape: RadialShape,
}

impl SeparableTerm {
    /// Radial-temporal profile `g(t, r)`.
    pub fn profile<T: Scalar>(&self, t: T, r: T) -> T {
        self.envelope.eval(t) * r.powi(self.l as i32) * self.shape.eval(t, r) * self.amplitude
    }
}

type PointFn = dyn Fn(f64, [f64; 3]) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum SourceKind {
    Separable(Vec<SeparableTerm>),
    /// Arbitrary pointwise evaluator `(t, y) → F`.
    Pointwise(Arc<PointFn>),
    /// Mode table, linearly interpolated in `t` and `r`.
    Tabulated(Arc<RadialModeField>),
}

impl fmt::Debug for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceKind::Separable(terms) => f.debug_tuple("Separable").field(terms).finish(),
            SourceKind::Pointwise(_) => f.write_str("Pointwise(..)"),
            SourceKind::Tabulated(field) => write!(f, "Tabulated(l_max = {}, {} slices)", field.l_max, field.slices.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SourceSpec {
    pub id: String,
    pub kind: SourceKind,
    /// `F = 0` for `t > τ₀` when set.
    pub time_support: Option<f64>,
    /// Zero the evaluator outside `|x| ≤ t + 1`.
    pub masked: bool,
}

impl SourceSpec {
    pub fn separable(id: impl Into<String>, terms: Vec<SeparableTerm>) -> Self {
        let time_support = terms
            .iter()
            .map(|t| t.envelope.time_support())
            .try_fold(0.0f64, |acc, s| s.map(|s| acc.max(s)));
        SourceSpec { id: id.into(), kind: SourceKind::Separable(terms), time_support, masked: true }
    }

    pub fn pointwise(id: impl Into<String>, f: impl Fn(f64, [f64; 3]) -> f64 + Send + Sync + 'static) -> Self {
        SourceSpec { id: id.into(), kind: SourceKind::Pointwise(Arc::new(f)), time_support: None, masked: true }
    }

    pub fn tabulated(id: impl Into<String>, field: RadialModeField) -> Self {
        SourceSpec { id: id.into(), kind: SourceKind::Tabulated(Arc::new(field)), time_support: None, masked: true }
    }

    pub fn zero() -> Self {
        Self::separable("zero", Vec::new())
    }

    pub fn unmasked(mut self) -> Self {
        self.masked = false;
        self
    }

    pub fn with_time_support(mut self, tau0: f64) -> Self {
        self.time_support = Some(tau0);
        self
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.kind, SourceKind::Separable(t) if t.iter().all(|t| t.amplitude == 0.0))
    }

    /// Highest degree present, when known.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.kind {
            SourceKind::Separable(terms) => Some(terms.iter().map(|t| t.l).max().unwrap_or(0)),
            SourceKind::Tabulated(f) => Some(f.l_max),
            SourceKind::Pointwise(_) => None,
        }
    }

    /// Radius of a time-independent spatial support, when there is one.
    pub fn support_radius(&self) -> Option<f64> {
        match &self.kind {
            SourceKind::Separable(terms) => terms.iter().try_fold(0.0f64, |acc, t| match t.shape {
                RadialShape::Expanding { .. } => None,
                shape => Some(acc.max(shape.support(0.0))),
            }),
            _ => None,
        }
    }

    /// Mode indices that can be non-zero, or `None` for all.
    pub fn active_modes(&self, l_max: usize) -> Option<Vec<usize>> {
        match &self.kind {
            SourceKind::Separable(terms) => {
                let mut v: Vec<usize> =
                    terms.iter().filter(|t| t.l <= l_max && t.amplitude != 0.0).map(|t| mode_index(t.l, t.m)).collect();
                v.sort_unstable();
                v.dedup();
                Some(v)
            }
            _ => None,
        }
    }

    fn inside(&self, t: f64, r: f64) -> bool {
        if let Some(tau0) = self.time_support {
            if t > tau0 {
                return false;
            }
        }
        !self.masked || r <= t + 1.0
    }

    /// `F(t, y)` at a Cartesian point.
    pub fn eval(&self, t: f64, y: [f64; 3]) -> f64 {
        let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        if !self.inside(t, r) {
            return 0.0;
        }
        match &self.kind {
            SourceKind::Separable(terms) => {
                let (x, phi) = direction_angles(y, r);
                terms.iter().map(|term| term.profile(t, r) * real_harmonic(term.l, term.m, x, phi)).sum()
            }
            SourceKind::Pointwise(f) => f(t, y),
            SourceKind::Tabulated(field) => {
                let (x, phi) = direction_angles(y, r);
                let nm = mode_count(field.l_max);
                (0..nm)
                    .map(|idx| {
                        let (l, m) = crate::sphere::mode_lm(idx);
                        let c = interpolate_table(field, idx, t, r);
                        if c == 0.0 {
                            0.0
                        } else {
                            c * real_harmonic(l, m, x, phi)
                        }
                    })
                    .sum()
            }
        }
    }

    /// Mode coefficients `F_lm(t, r_j)` into `out[mode * radii.len() + j]`,
    /// zero outside the support cone.
    pub fn modes_at(&self, t: f64, radii: &[f64], sphere: &SphereQuadrature, out: &mut [f64]) {
        let n_r = radii.len();
        let nm = sphere.modes();
        debug_assert_eq!(out.len(), nm * n_r);
        out.iter_mut().for_each(|v| *v = 0.0);
        if let Some(tau0) = self.time_support {
            if t > tau0 {
                return;
            }
        }
        match &self.kind {
            SourceKind::Separable(terms) => {
                for term in terms.iter().filter(|term| term.l <= sphere.l_max()) {
                    let idx = mode_index(term.l, term.m);
                    for (j, &r) in radii.iter().enumerate() {
                        if self.inside(t, r) {
                            out[idx * n_r + j] += term.profile(t, r);
                        }
                    }
                }
            }
            SourceKind::Tabulated(field) => {
                let nm_src = mode_count(field.l_max);
                for idx in 0..nm.min(nm_src) {
                    for (j, &r) in radii.iter().enumerate() {
                        if self.inside(t, r) {
                            out[idx * n_r + j] = interpolate_table(field, idx, t, r);
                        }
                    }
                }
            }
            SourceKind::Pointwise(f) => {
                let mut nodal = vec![0.0; sphere.len()];
                let mut c = vec![0.0; nm];
                for (j, &r) in radii.iter().enumerate() {
                    if !self.inside(t, r) {
                        continue;
                    }
                    for (v, node) in nodal.iter_mut().zip(sphere.nodes()) {
                        let d = node.direction();
                        *v = f(t, [r * d[0], r * d[1], r * d[2]]);
                    }
                    sphere.project_into(&nodal, &mut c);
                    for (idx, cv) in c.iter().enumerate() {
                        out[idx * n_r + j] = *cv;
                    }
                }
            }
        }
    }
}

fn direction_angles(y: [f64; 3], r: f64) -> (f64, f64) {
    if r == 0.0 {
        (1.0, 0.0)
    } else {
        ((y[2] / r).clamp(-1.0, 1.0), y[1].atan2(y[0]))
    }
}

/// Single real harmonic `Y_lm(θ, φ)` with `cosθ = x`.
pub fn real_harmonic(l: usize, m: i64, x: f64, phi: f64) -> f64 {
    let ma = m.unsigned_abs() as usize;
    let sin = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=ma {
        let kf = k as f64;
        pmm *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin;
    }
    let p = if l == ma {
        pmm
    } else {
        let mf = ma as f64;
        let mut p0 = pmm;
        let mut p1 = (2.0 * mf + 3.0).sqrt() * x * pmm;
        for ll in (ma + 2)..=l {
            let lf = ll as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let p2 = a * (x * p1 - b * p0);
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    match m.cmp(&0) {
        std::cmp::Ordering::Equal => p,
        std::cmp::Ordering::Greater => std::f64::consts::SQRT_2 * p * (m as f64 * phi).cos(),
        std::cmp::Ordering::Less => std::f64::consts::SQRT_2 * p * (ma as f64 * phi).sin(),
    }
}

fn interpolate_table(field: &RadialModeField, idx: usize, t: f64, r: f64) -> f64 {
    let slices = &field.slices;
    if slices.is_empty() || t < slices[0].t || t > slices[slices.len() - 1].t {
        return 0.0;
    }
    let k = slices.partition_point(|s| s.t <= t).saturating_sub(1).min(slices.len() - 1);
    let (k0, k1) = if k + 1 < slices.len() { (k, k + 1) } else { (k, k) };
    let wt = if k1 == k0 { 0.0 } else { (t - slices[k0].t) / (slices[k1].t - slices[k0].t) };
    let x = r / field.dr - 0.5;
    if x < -0.5 || x > field.n_r as f64 - 0.5 {
        return 0.0;
    }
    let j0 = x.floor().max(0.0) as usize;
    let j1 = (j0 + 1).min(field.n_r - 1);
    let wr = (x - j0 as f64).clamp(0.0, 1.0);
    let at = |k: usize| {
        let m = slices[k].mode(idx, field.n_r);
        m[j0] * (1.0 - wr) + m[j1] * wr
    };
    at(k0) * (1.0 - wt) + at(k1) * wt
}

/// Named catalogue entries.
pub const CATALOGUE: &[&str] = &["zero", "bump", "pulse", "expanding", "shell", "persistent"];

/// Number of parametrised `family-<i>` entries.
pub const FAMILY_SIZE: usize = 20;

const BALL: RadialShape = RadialShape::Ball { a: 1.0, k: 4 };

/// Look up a catalogue source by id (`bump`, `pulse`, …, `family-0` … `family-19`).
pub fn catalogue(id: &str) -> Result<SourceSpec> {
    let term = |l, m, amplitude, envelope, shape| SeparableTerm { l, m, amplitude, envelope, shape };
    let pulse2 = TimeEnvelope::Pulse { tau0: 2.0 };
    let spec = match id {
        "zero" => SourceSpec::zero(),
        "bump" => SourceSpec::separable(
            id,
            vec![term(0, 0, 1.0, pulse2, BALL), term(1, 0, 0.5, pulse2, BALL), term(2, 1, 0.3, pulse2, BALL)],
        ),
        "pulse" => SourceSpec::separable(id, vec![term(0, 0, 1.0, TimeEnvelope::Pulse { tau0: 1.0 }, BALL)]),
        "expanding" => SourceSpec::separable(
            id,
            vec![
                term(0, 0, 1.0, TimeEnvelope::RampDecay { rate: 1.0 }, RadialShape::Expanding { k: 4 }),
                term(1, -1, 0.4, TimeEnvelope::RampDecay { rate: 1.0 }, RadialShape::Expanding { k: 4 }),
            ],
        ),
        "shell" => SourceSpec::separable(
            id,
            vec![term(0, 0, 1.0, pulse2, RadialShape::Shell { r0: 0.5, w: 0.45, k: 4 })],
        ),
        "persistent" => SourceSpec::separable(
            id,
            vec![term(0, 0, 1.0, TimeEnvelope::Algebraic { power: 2.0 }, RadialShape::Ball { a: 0.8, k: 4 })],
        ),
        _ => {
            let i: usize = id
                .strip_prefix("family-")
                .and_then(|s| s.parse().ok())
                .filter(|&i| i < FAMILY_SIZE)
                .ok_or_else(|| Error::UnknownCatalogue(id.to_string()))?;
            return Ok(family(i));
        }
    };
    Ok(spec)
}

/// Deterministic family of twenty sources mixing envelopes, shapes and degrees.
pub fn family(i: usize) -> SourceSpec {
    let envelope = match i % 4 {
        0 => TimeEnvelope::Pulse { tau0: 1.0 + 0.25 * (i % 3) as f64 },
        1 => TimeEnvelope::RampDecay { rate: 0.8 + 0.2 * (i % 5) as f64 },
        2 => TimeEnvelope::Pulse { tau0: 2.5 },
        _ => TimeEnvelope::Algebraic { power: 1.5 + 0.25 * (i % 3) as f64 },
    };
    let shape = match i % 5 {
        0 => RadialShape::Ball { a: 1.0, k: 4 },
        1 => RadialShape::Ball { a: 0.6, k: 5 },
        2 => RadialShape::Shell { r0: 0.55, w: 0.4, k: 4 },
        3 => RadialShape::Expanding { k: 4 },
        _ => RadialShape::Ball { a: 0.85, k: 6 },
    };
    let mut terms = vec![SeparableTerm { l: 0, m: 0, amplitude: 1.0, envelope, shape }];
    let l = i % 4;
    if l > 0 {
        let m = (i as i64 % (2 * l as i64 + 1)) - l as i64;
        terms.push(SeparableTerm { l, m, amplitude: 0.6 / l as f64, envelope, shape });
    }
    if i % 3 == 0 {
        terms.push(SeparableTerm { l: 1, m: 1, amplitude: -0.3, envelope, shape });
    }
    SourceSpec::separable(format!("family-{i}"), terms)
}
