//! Weighted Hardy inequalities for radial profiles supported in `[0, t+1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Dual, Scalar};
use crate::sphere::gauss_legendre;

/// Proven bound for [`HardyVariant::Hardy2`] (Cauchy–Schwarz after one integration by parts).
pub const HARDY2_BOUND: f64 = 4.0;
/// Proven bound for [`HardyVariant::Hardy1`]: `2 + 2·4`.
pub const HARDY1_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardyVariant {
    /// `∫w φ² dr ≤ C ∫w (φ_r + φ/r)² r² dr`, `w = (t+2−r)^s`.
    Hardy2,
    /// `∫w φ_r² r² dr ≤ C ∫w (φ_r + φ/r)² r² dr`.
    Hardy1,
    /// `‖|t+2−r|^{s/2−1}φ‖ ≤ C(‖|t+2−r|^{s/2}φ_r‖ + ‖|t+2−r|^{s/2}φ/r‖)` in `L²(R³)`.
    ThreeHardy,
}

/// Smooth radial test profile, compactly supported in `[0, support]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HardyProfile {
    /// `P(r/R)(1 − (r/R)²)^k` with cubic `P`.
    Ball { radius: f64, k: i32, coeffs: [f64; 4] },
    /// `(1 − ((r − c)/w)²)^k`, `0 ≤ c − w`.
    Shell { center: f64, width: f64, k: i32 },
    /// `r(1 − r)` on `[0, 1]`.
    Parabola,
}

impl HardyProfile {
    pub fn support(&self) -> f64 {
        match *self {
            HardyProfile::Ball { radius, .. } => radius,
            HardyProfile::Shell { center, width, .. } => center + width,
            HardyProfile::Parabola => 1.0,
        }
    }

    pub fn eval<T: Scalar>(&self, r: T) -> T {
        match *self {
            HardyProfile::Ball { radius, k, coeffs } => {
                let x = r / radius;
                if x.value() >= 1.0 {
                    return T::cst(0.0);
                }
                let p = ((x * coeffs[3] + coeffs[2]) * x + coeffs[1]) * x + coeffs[0];
                p * (-(x * x) + 1.0).powi(k)
            }
            HardyProfile::Shell { center, width, k } => {
                let x = (r - center) / width;
                if x.value().abs() >= 1.0 {
                    return T::cst(0.0);
                }
                (-(x * x) + 1.0).powi(k)
            }
            HardyProfile::Parabola => {
                if r.value() >= 1.0 {
                    T::cst(0.0)
                } else {
                    r * (-r + 1.0)
                }
            }
        }
    }

    /// `(φ, φ_r)` at `r`.
    pub fn value_and_slope(&self, r: f64) -> (f64, f64) {
        let d = self.eval(Dual::new(r, 0.0, 1.0));
        (d.v, d.r)
    }
}

/// `n` random profiles supported in `[0, t + 1]`.
pub fn random_profiles(n: usize, t: f64, seed: u64) -> Vec<HardyProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let big_r = (t + 1.0) * rng.gen_range(0.3..=1.0);
            if i % 3 == 2 {
                let width = big_r * rng.gen_range(0.1..0.45);
                let center = rng.gen_range(width..=big_r - width);
                HardyProfile::Shell { center, width, k: rng.gen_range(2..=6) }
            } else {
                let mut coeffs = [0.0; 4];
                coeffs.iter_mut().for_each(|c| *c = rng.gen_range(-1.0..=1.0));
                coeffs[0] += 0.1f64.copysign(coeffs[0]);
                HardyProfile::Ball { radius: big_r, k: rng.gen_range(2..=6), coeffs }
            }
        })
        .collect()
}

/// Both sides of one Hardy inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardySides {
    pub lhs: f64,
    pub rhs: f64,
}

impl HardySides {
    /// `lhs/rhs`, with `0/0 := 0`.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 && self.rhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Composite Gauss–Legendre with `panels` panels of 8 points on `[0, support]`.
pub fn hardy_sides(
    profile: &HardyProfile,
    s: f64,
    t: f64,
    variant: HardyVariant,
    panels: usize,
) -> Result<HardySides> {
    let support = profile.support();
    if !(support <= t + 1.0 + 1e-12) {
        return Err(Error::Precondition(format!("profile support {support} exceeds t + 1 = {}", t + 1.0)));
    }
    match variant {
        HardyVariant::ThreeHardy if !(s > 1.0 && s < 2.0) => {
            return Err(Error::Precondition(format!("3-D Hardy needs 1 < s < 2, got {s}")))
        }
        _ if !(s > 0.0) => return Err(Error::Precondition(format!("Hardy needs s > 0, got {s}"))),
        _ => {}
    }
    let (x, w) = gauss_legendre(8);
    let h = support / panels as f64;
    let (mut i_lhs, mut i_rhs, mut i_rhs2) = (0.0, 0.0, 0.0);
    for p in 0..panels {
        let a = p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            let r = a + 0.5 * h * (xi + 1.0);
            let wq = 0.5 * h * wi;
            let (phi, dphi) = profile.value_and_slope(r);
            let base = t + 2.0 - r;
            let wt = base.powf(s);
            let hardy = (dphi + phi / r) * r;
            match variant {
                HardyVariant::Hardy2 => {
                    i_lhs += wq * wt * phi * phi;
                    i_rhs += wq * wt * hardy * hardy;
                }
                HardyVariant::Hardy1 => {
                    i_lhs += wq * wt * dphi * dphi * r * r;
                    i_rhs += wq * wt * hardy * hardy;
                }
                HardyVariant::ThreeHardy => {
                    i_lhs += wq * base.abs().powf(s - 2.0) * phi * phi * r * r;
                    i_rhs += wq * wt * dphi * dphi * r * r;
                    i_rhs2 += wq * wt * phi * phi;
                }
            }
        }
    }
    Ok(match variant {
        HardyVariant::ThreeHardy => HardySides { lhs: i_lhs.sqrt(), rhs: i_rhs.sqrt() + i_rhs2.sqrt() },
        _ => HardySides { lhs: i_lhs, rhs: i_rhs },
    })
}

/// `LHS/RHS` of one Hardy inequality at production resolution.
pub fn hardy_ratio(profile: &HardyProfile, s: f64, t: f64, variant: HardyVariant) -> Result<f64> {
    Ok(hardy_sides(profile, s, t, variant, 256)?.ratio())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardyRow {
    pub s: f64,
    pub t: f64,
    pub hardy2_max: f64,
    pub hardy1_max: f64,
    pub three_hardy_max: f64,
    /// `max |ratio(256 panels)/ratio(128 panels) − 1|` for the 3-D form.
    pub three_hardy_refinement: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardyReport {
    pub profiles: usize,
    pub seed: u64,
    pub rows: Vec<HardyRow>,
    pub hardy2_bound: f64,
    pub hardy1_bound: f64,
    pub holds: bool,
}

/// Random-family sweep over `(s, t)`.
pub fn verify_hardy(profiles: usize, seed: u64, s_values: &[f64], t_values: &[f64]) -> Result<HardyReport> {
    let mut rows = Vec::new();
    for &s in s_values {
        for &t in t_values {
            let family = random_profiles(profiles, t, seed);
            let mut row =
                HardyRow { s, t, hardy2_max: 0.0, hardy1_max: 0.0, three_hardy_max: 0.0, three_hardy_refinement: 0.0 };
            for p in &family {
                row.hardy2_max = row.hardy2_max.max(hardy_ratio(p, s, t, HardyVariant::Hardy2)?);
                row.hardy1_max = row.hardy1_max.max(hardy_ratio(p, s, t, HardyVariant::Hardy1)?);
                let fine = hardy_ratio(p, s, t, HardyVariant::ThreeHardy)?;
                let coarse = hardy_sides(p, s, t, HardyVariant::ThreeHardy, 128)?.ratio();
                row.three_hardy_max = row.three_hardy_max.max(fine);
                row.three_hardy_refinement = row.three_hardy_refinement.max((fine / coarse - 1.0).abs());
            }
            rows.push(row);
        }
    }
    let holds = rows.iter().all(|r| r.hardy2_max <= HARDY2_BOUND && r.hardy1_max <= HARDY1_BOUND);
    Ok(HardyReport { profiles, seed, rows, hardy2_bound: HARDY2_BOUND, hardy1_bound: HARDY1_BOUND, holds })
}
