//! Manufactured solutions `u*(t, r) Y_lm` with `F := □(u* Y_lm)` in closed form.

use crate::error::Result;
use crate::jet::{Jet, Scalar};
use crate::source::{real_harmonic, SourceSpec};
use crate::sphere::mode_index;

use super::LinearSolution;

/// `u*(t, r) = A t⁴ e^{−t} r^l (1 − (r/(t+1))²)^k` inside the cone, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub l: usize,
    pub m: i64,
    pub k: i32,
    pub amplitude: f64,
}

impl Manufactured {
    pub fn new(l: usize, m: i64) -> Self {
        Manufactured { l, m, k: 6, amplitude: 1.0 }
    }

    pub fn profile<T: Scalar>(&self, t: T, r: T) -> T {
        let x = r / (t + 1.0);
        if x.value() >= 1.0 {
            return T::cst(0.0);
        }
        t.powi(4) * (-t).exp() * r.powi(self.l as i32) * (-(x * x) + 1.0).powi(self.k) * self.amplitude
    }

    /// Radial part of `□(u* Y_lm)`.
    pub fn forcing(&self, t: f64, r: f64) -> f64 {
        let r = r.max(1e-9);
        let j = self.profile(Jet::var_t(t), Jet::var_r(r));
        let ll = (self.l * (self.l + 1)) as f64;
        j.tt - j.rr - 2.0 * j.r / r + ll * j.v / (r * r)
    }

    pub fn source(&self) -> SourceSpec {
        let me = *self;
        SourceSpec::pointwise(format!("manufactured-l{}m{}", self.l, self.m), move |t, y| {
            let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            if r == 0.0 {
                return if me.l == 0 { me.forcing(t, 0.0) } else { 0.0 };
            }
            me.forcing(t, r) * real_harmonic(me.l, me.m, (y[2] / r).clamp(-1.0, 1.0), y[1].atan2(y[0]))
        })
    }

    /// `(∫ Σ_lm (u_lm − u*_lm)² r² dr)^{1/2}` on the slice stored at `t`.
    pub fn l2_error(&self, sol: &LinearSolution, t: f64) -> Result<f64> {
        let slice = sol.field.slice_at(t)?;
        let n_r = sol.n_r();
        let target = mode_index(self.l, self.m);
        let mut sum = 0.0;
        for idx in 0..sol.field.modes() {
            let m = slice.mode(idx, n_r);
            for (j, v) in m.iter().enumerate() {
                let r = sol.field.r(j);
                let exact = if idx == target { self.profile(t, r) } else { 0.0 };
                sum += (v - exact).powi(2) * r * r;
            }
        }
        Ok((sum * sol.field.dr).sqrt())
    }
}
