//! The weighted multiplier
//!
//! ```text
//! Xφ = (t+2+r)^s (φ_t + φ_r + φ/r) + (t+2−r)^s (φ_t − φ_r − φ/r)
//! ```
//!
//! and the divergence-form identity for `Xφ · r² □φ`, checked with exact
//! derivatives. Non-radial test functions `g(t, r) Y_lm` are checked after
//! integration over the sphere: `(∇_{S²}φ)²` becomes `l(l+1) g²` and the pure
//! sphere divergences drop out.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Dual, Jet, Scalar};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// `(t + 2 ± r)^s`.
pub fn weight_eval(t: f64, r: f64, s: f64, sign: Sign) -> Result<f64> {
    if !(t >= 0.0 && r >= 0.0) {
        return Err(Error::Domain(format!("weight needs t, r ≥ 0, got t = {t}, r = {r}")));
    }
    match sign {
        Sign::Plus => Ok((t + 2.0 + r).powf(s)),
        Sign::Minus if r > t + 2.0 => Err(Error::Domain(format!("t + 2 − r < 0 at t = {t}, r = {r}"))),
        Sign::Minus => Ok((t + 2.0 - r).powf(s)),
    }
}

/// `Xφ` from point values.
pub fn apply_multiplier(phi_t: f64, phi_r: f64, phi: f64, t: f64, r: f64, s: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("multiplier has a 1/r term, got r = {r}")));
    }
    let a = weight_eval(t, r, s, Sign::Plus)?;
    let b = weight_eval(t, r, s, Sign::Minus)?;
    Ok(a * (phi_t + phi_r + phi / r) + b * (phi_t - phi_r - phi / r))
}

/// Closed-form radial profiles `g(t, r)`, each supported in `r ≤ t + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// `e^{−t/3} (1 − (r/(t+1))²)⁴`
    ExpandingBump,
    /// `cos t · (1 − r²)³`
    StandingBall,
    /// `sin(3t − 2r) (1 − (r/(t+1))²)³`
    WavePacket,
    /// `(1 − ((r − c(t))/0.4)²)⁴`, `c(t) = 0.5 + 0.1 t/(1+t)`
    MovingShell,
    /// `r² (1 − (r/(t+1))²)⁵ / (t+1)`
    Power,
}

pub const PROFILES: [Profile; 5] =
    [Profile::ExpandingBump, Profile::StandingBall, Profile::WavePacket, Profile::MovingShell, Profile::Power];

impl Profile {
    pub fn name(&self) -> &'static str {
        match self {
            Profile::ExpandingBump => "expanding-bump",
            Profile::StandingBall => "standing-ball",
            Profile::WavePacket => "wave-packet",
            Profile::MovingShell => "moving-shell",
            Profile::Power => "power",
        }
    }

    pub fn eval<T: Scalar>(&self, t: T, r: T) -> T {
        let bump = |x: T, k: i32| {
            if x.value().abs() >= 1.0 {
                T::cst(0.0)
            } else {
                (-(x * x) + 1.0).powi(k)
            }
        };
        // 1 − (r/(t+1))² factored so that (t − r) + 1 stays exact near the edge
        let cone_bump = |k: i32| {
            if r.value() >= t.value() + 1.0 {
                T::cst(0.0)
            } else {
                let tp = t + 1.0;
                ((t - r + 1.0) * (t + r + 1.0) / (tp * tp)).powi(k)
            }
        };
        match self {
            Profile::ExpandingBump => (t * (-1.0 / 3.0)).exp() * cone_bump(4),
            Profile::StandingBall => t.cos() * bump(r, 3),
            Profile::WavePacket => (t * 3.0 - r * 2.0).sin() * cone_bump(3),
            Profile::MovingShell => {
                let c = t / (t + 1.0) * 0.1 + 0.5;
                bump((r - c) / 0.4, 4)
            }
            Profile::Power => r * r * cone_bump(5) / (t + 1.0),
        }
    }
}

/// `φ = r^l g(t, r) Y_lm` (radial when `l = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub profile: Profile,
    pub l: usize,
    pub m: i64,
}

impl TestFunction {
    pub fn radial(profile: Profile) -> Self {
        TestFunction { profile, l: 0, m: 0 }
    }

    pub fn single_mode(profile: Profile, l: usize, m: i64) -> Self {
        TestFunction { profile, l, m }
    }

    pub fn id(&self) -> String {
        format!("{}:l{}m{}", self.profile.name(), self.l, self.m)
    }

    /// Radial factor with exact first and second derivatives.
    pub fn jet(&self, t: f64, r: f64) -> Jet {
        let (tj, rj) = (Jet::var_t(t), Jet::var_r(r));
        rj.powi(self.l as i32) * self.profile.eval(tj, rj)
    }

    /// `l(l+1)`: sphere integral of `|∇_{S²}Y_lm|²`.
    pub fn angular(&self) -> f64 {
        (self.l * (self.l + 1)) as f64
    }
}

/// The radial test catalogue.
pub fn radial_catalogue() -> Vec<TestFunction> {
    PROFILES.iter().map(|&p| TestFunction::radial(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    First,
    Second,
    Third,
    Combined,
}

pub const PARTS: [Part; 4] = [Part::First, Part::Second, Part::Third, Part::Combined];

/// Both sides of one identity and the magnitude of its terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityTerms {
    pub lhs: f64,
    pub rhs: f64,
    pub scale: f64,
}

impl IdentityTerms {
    pub fn residual(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / self.scale
        }
    }
}

struct Acc {
    sum: f64,
    scale: f64,
}

impl Acc {
    fn new() -> Self {
        Acc { sum: 0.0, scale: 0.0 }
    }
    fn add(&mut self, v: f64) {
        self.sum += v;
        self.scale += v.abs();
    }
}

/// Point data carried as duals so that brackets can be differentiated exactly.
struct Point {
    t: Dual,
    r: Dual,
    g: Dual,
    gt: Dual,
    gr: Dual,
    lam: f64,
    jet: Jet,
}

impl Point {
    fn new(tf: &TestFunction, t: f64, r: f64) -> Self {
        let j = tf.jet(t, r);
        Point {
            t: Dual::new(t, 1.0, 0.0),
            r: Dual::new(r, 0.0, 1.0),
            g: Dual::new(j.v, j.t, j.r),
            gt: Dual::new(j.t, j.tt, j.tr),
            gr: Dual::new(j.r, j.tr, j.rr),
            lam: tf.angular(),
            jet: j,
        }
    }

    fn a(&self, s: f64) -> Dual {
        (self.t + self.r + 2.0).powf(s)
    }

    fn b(&self, s: f64) -> Dual {
        (self.t - self.r + 2.0).powf(s)
    }

    /// Sphere-integrated `r² □φ`.
    fn r2_box(&self) -> f64 {
        let (j, r) = (self.jet, self.r.v);
        r * r * (j.tt - j.rr) - 2.0 * r * j.r + self.lam * j.v
    }

    /// Sum of the absolute summands of [`Point::r2_box`].
    fn r2_box_scale(&self) -> f64 {
        let (j, r) = (self.jet, self.r.v);
        r * r * (j.tt.abs() + j.rr.abs()) + 2.0 * r * j.r.abs() + self.lam * j.v.abs()
    }
}

/// Evaluate one part of the identity at `(t, r)`; `mutate` perturbs the
/// exponent of the first weight by `+0.1` (a deliberately wrong identity).
pub fn identity_terms(tf: &TestFunction, t: f64, r: f64, s: f64, part: Part, mutate: bool) -> Result<IdentityTerms> {
    if !(r > 0.0) || !(t >= 0.0) {
        return Err(Error::Domain(format!("identity needs r > 0, t ≥ 0, got t = {t}, r = {r}")));
    }
    if r > t + 2.0 {
        return Err(Error::Domain(format!("t + 2 − r < 0 at t = {t}, r = {r}")));
    }
    let p = Point::new(tf, t, r);
    let sm = if mutate { s + 0.1 } else { s };
    let (a, b, am) = (p.a(s), p.b(s), p.a(sm));
    let (g, gt, gr, rr, lam) = (p.g, p.gt, p.gr, p.r, p.lam);
    let (av, bv) = (a.v, b.v);
    let a1 = (t + 2.0 + r).powf(s - 1.0);
    let b1 = (t + 2.0 - r).powf(s - 1.0);
    let j = p.jet;
    let mut rhs = Acc::new();
    let box_scale = p.r2_box_scale();
    let (lhs, lhs_scale) = match part {
        Part::First => {
            rhs.add((am * rr * rr * (gt + gr) * (gt + gr) * 0.5).d_minus());
            rhs.add(r * av * (j.t * j.t - j.r * j.r));
            rhs.add((a * g * g * (0.5 * lam)).d_plus());
            rhs.add(-s * a1 * lam * j.v * j.v);
            (av * (j.t + j.r) * p.r2_box(), av * (j.t.abs() + j.r.abs()) * box_scale)
        }
        Part::Second => {
            rhs.add((b * rr * rr * (gt - gr) * (gt - gr) * 0.5).d_plus());
            rhs.add(-r * bv * (j.t * j.t - j.r * j.r));
            rhs.add((b * g * g * (0.5 * lam)).d_minus());
            rhs.add(-s * b1 * lam * j.v * j.v);
            (bv * (j.t - j.r) * p.r2_box(), bv * (j.t.abs() + j.r.abs()) * box_scale)
        }
        Part::Third => {
            let half_rg2 = |d_sign: f64| {
                // (∂t ± ∂r)(r g²/2) as a dual
                g * g * (0.5 * d_sign) + rr * g * (gt + gr * d_sign)
            };
            rhs.add((am * half_rg2(1.0)).d_minus());
            rhs.add(-(b * half_rg2(-1.0)).d_plus());
            rhs.add(-(av - bv) * r * (j.t * j.t - j.r * j.r));
            rhs.add((av - bv) / r * lam * j.v * j.v);
            ((av - bv) * j.v * p.r2_box() / r, (av - bv).abs() * j.v.abs() * box_scale / r)
        }
        Part::Combined => {
            let form1 = {
                let mut acc = Acc::new();
                let out = (am * rr * rr * (gt + gr) * (gt + gr) * 0.5
                    + a * g * g * 0.5
                    + a * rr * g * (gt + gr)
                    + b * g * g * (0.5 * lam))
                    .d_minus();
                let inn = (b * rr * rr * (gt - gr) * (gt - gr) * 0.5 + b * g * g * 0.5 - b * rr * g * (gt - gr)
                    + a * g * g * (0.5 * lam))
                    .d_plus();
                acc.add(out);
                acc.add(inn);
                acc.add((av - bv - s * r * a1 - s * r * b1) / r * lam * j.v * j.v);
                acc
            };
            let form2 = {
                let mut acc = Acc::new();
                // r·P and r·Q, formed without dividing by r
                let rp = rr * (gt + gr) + g;
                let rq = rr * (gt - gr) - g;
                acc.add((am * rp * rp * 0.5 + b * g * g * (0.5 * lam)).d_minus());
                acc.add((b * rq * rq * 0.5 + a * g * g * (0.5 * lam)).d_plus());
                acc.add(taylor_bracket(t, r, s) / r * lam * j.v * j.v);
                acc
            };
            let x = apply_multiplier(j.t, j.r, j.v, t, r, s)?;
            let lhs = x * p.r2_box();
            let x_scale = (av + bv) * (j.t.abs() + j.r.abs() + j.v.abs() / r);
            let scale = x.abs().max(x_scale) * box_scale;
            let t1 = IdentityTerms { lhs, rhs: form1.sum, scale: scale + form1.scale };
            let t2 = IdentityTerms { lhs, rhs: form2.sum, scale: scale + form2.scale };
            return Ok(if t1.residual() >= t2.residual() { t1 } else { t2 });
        }
    };
    Ok(IdentityTerms { lhs, rhs: rhs.sum, scale: lhs_scale + rhs.scale })
}

/// Relative residual `|LHS − RHS| / Σ|terms|` of one part at `(t, r)`.
pub fn identity_residual(tf: &TestFunction, t: f64, r: f64, s: f64, part: Part) -> Result<f64> {
    Ok(identity_terms(tf, t, r, s, part, false)?.residual())
}

fn taylor_bracket(t: f64, r: f64, s: f64) -> f64 {
    (t + 2.0 - (s - 1.0) * r) * (t + 2.0 + r).powf(s - 1.0) - (t + 2.0 - r).powf(s - 1.0) * (t + 2.0 + (s - 1.0) * r)
}

/// `(t+2−(s−1)r)(t+2+r)^{s−1} − (t+2−r)^{s−1}(t+2+(s−1)r)`, non-negative on the
/// stated domain `1 ≤ s ≤ 2`, `0 ≤ r ≤ t + 1`.
///
/// Evaluated as `(t+2)^s [B·expm1(a(ℓ₊ − ℓ₋)) − a x (A + B)]` with `x = r/(t+2)`,
/// `a = s − 1`, `A = (1+x)^a`, `B = (1−x)^a`, which is exact on the faces `r = 0`
/// and `s = 1`.
pub fn taylor_gap(t: f64, r: f64, s: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&s) {
        return Err(Error::Precondition(format!("taylor gap needs 1 ≤ s ≤ 2, got {s}")));
    }
    if !(t >= 0.0 && r >= 0.0 && r <= t + 1.0) {
        return Err(Error::Precondition(format!("taylor gap needs 0 ≤ r ≤ t + 1, got t = {t}, r = {r}")));
    }
    let a = s - 1.0;
    let x = r / (t + 2.0);
    let lp = x.ln_1p();
    let lm = (-x).ln_1p();
    let big_a = (a * lp).exp();
    let big_b = (a * lm).exp();
    let f = big_b * (a * (lp - lm)).exp_m1() - a * x * (big_a + big_b);
    Ok((t + 2.0).powf(s) * f)
}

/// The three displayed forms of the time-slice energy density, without an `r²`
/// factor on either term, and the lower bound `2(t+2−r)^s [φ_t² + (φ_r + φ/r)²]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityForms {
    pub squares: f64,
    pub symmetric: f64,
    pub split: f64,
    pub lower_bound: f64,
}

pub fn density_forms(phi_t: f64, phi_r: f64, phi: f64, t: f64, r: f64, s: f64) -> Result<DensityForms> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("density needs r > 0, got {r}")));
    }
    let a = weight_eval(t, r, s, Sign::Plus)?;
    let b = weight_eval(t, r, s, Sign::Minus)?;
    let w = phi_r + phi / r;
    let p = phi_t + w;
    let q = phi_t - w;
    let base = phi_t * phi_t + w * w;
    Ok(DensityForms {
        squares: a * p * p + b * q * q,
        symmetric: (a + b) * base + 2.0 * (a - b) * phi_t * w,
        split: 2.0 * b * base + (a - b) * p * p,
        lower_bound: 2.0 * b * base,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PartResidual {
    pub part: Part,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IdentityReport {
    pub samples: usize,
    pub seed: u64,
    pub functions: Vec<String>,
    pub per_part: Vec<PartResidual>,
    pub max_residual: f64,
    /// Median residual of the deliberately corrupted identity (should stay large).
    pub mutation_median_residual: f64,
}

/// Sample `(t, r, s)` uniformly with `t ∈ [0, t_max]`, `r ∈ (0, t+1]`, `s ∈ (1, 2)`.
pub fn sample_point(rng: &mut impl Rng, t_max: f64) -> (f64, f64, f64) {
    let t = rng.gen_range(0.0..=t_max);
    let r = (t + 1.0) * rng.gen_range(1e-6..=1.0);
    let s = rng.gen_range(1.0 + 1e-9..2.0);
    (t, r, s)
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// `samples` random points per test function, every part.
pub fn verify_identity(functions: &[TestFunction], samples: usize, seed: u64) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_part: Vec<PartResidual> = PARTS.iter().map(|&part| PartResidual { part, max_residual: 0.0 }).collect();
    let mut mutated_residuals = Vec::new();
    for tf in functions {
        for _ in 0..samples {
            let (t, r, s) = sample_point(&mut rng, 10.0);
            for pr in per_part.iter_mut() {
                let res = identity_residual(tf, t, r, s, pr.part)?;
                pr.max_residual = pr.max_residual.max(res);
            }
            let mutated = identity_terms(tf, t, r, s, Part::Combined, true)?;
            mutated_residuals.push(mutated.residual());
        }
    }
    let max_residual = per_part.iter().map(|p| p.max_residual).fold(0.0, f64::max);
    Ok(IdentityReport {
        samples: samples * functions.len(),
        seed,
        functions: functions.iter().map(|f| f.id()).collect(),
        per_part,
        max_residual,
        mutation_median_residual: median(&mut mutated_residuals),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TaylorReport {
    pub samples: usize,
    pub seed: u64,
    pub min_gap: f64,
    pub argmin: (f64, f64, f64),
    /// Largest `|gap|` on the faces `r = 0` and `s = 1`.
    pub face_max_abs: f64,
}

pub fn verify_taylor(samples: usize, seed: u64, t_max: f64) -> Result<TaylorReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_gap = f64::INFINITY;
    let mut argmin = (0.0, 0.0, 0.0);
    let mut face = 0.0f64;
    for _ in 0..samples {
        let t = rng.gen_range(0.0..=t_max);
        let r = rng.gen_range(0.0..=t + 1.0);
        let s = rng.gen_range(1.0..2.0);
        let g = taylor_gap(t, r, s)?;
        if g < min_gap {
            min_gap = g;
            argmin = (t, r, s);
        }
        face = face.max(taylor_gap(t, 0.0, s)?.abs()).max(taylor_gap(t, r, 1.0)?.abs());
    }
    Ok(TaylorReport { samples, seed, min_gap, argmin, face_max_abs: face })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        assert!((weight_eval(0.0, 0.0, 1.5, Sign::Plus).unwrap() - 2f64.powf(1.5)).abs() < 1e-12);
        assert_eq!(weight_eval(3.0, 4.0, 1.2, Sign::Minus).unwrap(), 1.0);
        assert!((weight_eval(1.0, 2.0, 1.8, Sign::Plus).unwrap() - 18.119_491_591_942).abs() < 1e-9);
        assert!(weight_eval(0.0, 2.5, 1.5, Sign::Minus).is_err());
    }

    #[test]
    fn multiplier_examples() {
        let c = 0.7;
        let (t, r, s) = (1.3, 0.4, 1.5);
        let expect = c / r * ((t + 2.0 + r).powf(s) - (t + 2.0 - r).powf(s));
        assert!((apply_multiplier(0.0, 0.0, c, t, r, s).unwrap() - expect).abs() < 1e-12);
        assert!((apply_multiplier(0.0, 0.0, c, 2.0, 0.3, 1.0).unwrap() - 2.0 * c).abs() < 1e-12);
        let v = apply_multiplier(1.0, 0.0, 0.0, 0.0, 1.0, 1.5).unwrap();
        assert!((v - (3f64.powf(1.5) + 1.0)).abs() < 1e-12);
        assert!(apply_multiplier(1.0, 0.0, 0.0, 0.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn taylor_examples() {
        let g = taylor_gap(0.0, 1.0, 1.5).unwrap();
        assert!((g - (1.5 * 3f64.sqrt() - 2.5)).abs() < 1e-12);
        assert_eq!(taylor_gap(7.0, 0.0, 1.3).unwrap(), 0.0);
        assert_eq!(taylor_gap(7.0, 5.0, 1.0).unwrap(), 0.0);
        assert!(taylor_gap(0.0, 1.5, 1.5).is_err());
        assert!((taylor_gap(3.0, 2.0, 1.7).unwrap() - taylor_bracket(3.0, 2.0, 1.7)).abs() < 1e-12);
    }

    #[test]
    fn identity_parts_hold_at_a_point() {
        for tf in radial_catalogue().into_iter().chain([TestFunction::single_mode(Profile::WavePacket, 2, 1)]) {
            for part in PARTS {
                let r = identity_residual(&tf, 1.7, 1.1, 1.4, part).unwrap();
                assert!(r < 1e-12, "{} {part:?}: {r}", tf.id());
            }
        }
    }

    #[test]
    fn mutation_breaks_identity() {
        let tf = TestFunction::radial(Profile::ExpandingBump);
        let m = identity_terms(&tf, 1.0, 0.8, 1.5, Part::Combined, true).unwrap();
        assert!(m.residual() > 1e-3);
    }

    #[test]
    fn density_forms_agree() {
        let f = density_forms(0.3, -1.2, 0.8, 2.0, 1.5, 1.6).unwrap();
        assert!((f.squares - f.symmetric).abs() < 1e-12 * f.squares);
        assert!((f.squares - f.split).abs() < 1e-12 * f.squares);
        assert!(f.lower_bound <= f.split);
    }
}
