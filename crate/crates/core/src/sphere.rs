//! Real spherical harmonics and the Gauss–Legendre × uniform product
//! quadrature on S².
//!
//! Harmonics are real and orthonormal:
//! `Y_l0 = P̄_l^0(cosθ)`, `Y_lm = √2 P̄_l^m cos(mφ)`, `Y_l,-m = √2 P̄_l^m sin(mφ)`,
//! with `P̄` the fully normalised associated Legendre functions (no
//! Condon–Shortley phase). Modes are stored flat at `l(l+1) + m`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Number of real harmonics with degree `≤ l_max`.
pub fn mode_count(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

/// Flat index of `(l, m)`, `-l ≤ m ≤ l`.
#[inline]
pub fn mode_index(l: usize, m: i64) -> usize {
    debug_assert!(m.unsigned_abs() as usize <= l);
    ((l * (l + 1)) as i64 + m) as usize
}

/// Inverse of [`mode_index`].
pub fn mode_lm(idx: usize) -> (usize, i64) {
    let l = (idx as f64).sqrt().floor() as usize;
    let l = if (l + 1) * (l + 1) <= idx { l + 1 } else { l };
    (l, idx as i64 - (l * (l + 1)) as i64)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fully normalised associated Legendre values `P̄_l^m(x)` for `m ≤ l ≤ l_max`,
/// laid out as `l(l+1)/2 + m`.
fn normalized_legendre(l_max: usize, x: f64, out: &mut Vec<f64>) {
    let len = (l_max + 1) * (l_max + 2) / 2;
    out.clear();
    out.resize(len, 0.0);
    let tri = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let sin = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin;
        }
        out[tri(m, m)] = pmm;
        if m < l_max {
            out[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
        }
        for l in (m + 2)..=l_max {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            out[tri(l, m)] = a * (x * out[tri(l - 1, m)] - b * out[tri(l - 2, m)]);
        }
    }
}

/// All real harmonics `Y_lm(θ, φ)` with `cosθ = x`, into `out[mode_index(l, m)]`.
pub fn real_harmonics(l_max: usize, x: f64, phi: f64, out: &mut [f64]) {
    let mut p = Vec::new();
    normalized_legendre(l_max, x, &mut p);
    fill_harmonics(l_max, &p, phi, out);
}

fn fill_harmonics(l_max: usize, p: &[f64], phi: f64, out: &mut [f64]) {
    let tri = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let sqrt2 = std::f64::consts::SQRT_2;
    for l in 0..=l_max {
        out[mode_index(l, 0)] = p[tri(l, 0)];
        for m in 1..=l {
            let (s, c) = (m as f64 * phi).sin_cos();
            out[mode_index(l, m as i64)] = sqrt2 * p[tri(l, m)] * c;
            out[mode_index(l, -(m as i64))] = sqrt2 * p[tri(l, m)] * s;
        }
    }
}

/// Harmonics at the direction of a Cartesian vector (north pole for the origin).
pub fn real_harmonics_at(l_max: usize, y: [f64; 3], out: &mut [f64]) {
    let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    let (x, phi) = if r == 0.0 { (1.0, 0.0) } else { ((y[2] / r).clamp(-1.0, 1.0), y[1].atan2(y[0])) };
    real_harmonics(l_max, x, phi, out);
}

/// `(1 + l(l+1))^k`-weighted coefficient norm: the spectral `H^k(S²)` norm.
pub fn sobolev_sphere_norm(coeffs: &[f64], k: u32) -> f64 {
    let mut acc = 0.0;
    for (idx, c) in coeffs.iter().enumerate() {
        let (l, _) = mode_lm(idx);
        let lam = 1.0 + (l * (l + 1)) as f64;
        acc += lam.powi(k as i32) * c * c;
    }
    acc.sqrt()
}

/// One quadrature node on S².
#[derive(Debug, Clone, Copy)]
pub struct SphereNode {
    pub cos_theta: f64,
    pub phi: f64,
    pub weight: f64,
}

impl SphereNode {
    pub fn direction(&self) -> [f64; 3] {
        let s = (1.0 - self.cos_theta * self.cos_theta).max(0.0).sqrt();
        [s * self.phi.cos(), s * self.phi.sin(), self.cos_theta]
    }
}

/// Product quadrature with tabulated harmonics and their surface gradients.
///
/// `l_max` is the band limit of the coefficient vectors; `l_nodes ≥ l_max`
/// sets the node count `(l_nodes + 1) × (2 l_nodes + 1)`, which is exact for
/// polynomials of degree `≤ 2 l_nodes`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    l_max: usize,
    l_nodes: usize,
    nodes: Vec<SphereNode>,
    /// node-major `Y[node * modes + mode]`
    y: Vec<f64>,
    /// `∂θ Y`
    dtheta: Vec<f64>,
    /// `(1/sinθ) ∂φ Y`
    dphi: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(l_max: usize) -> Self {
        Self::with_nodes(l_max, l_max)
    }

    pub fn with_nodes(l_max: usize, l_nodes: usize) -> Self {
        let l_nodes = l_nodes.max(l_max);
        let n_theta = l_nodes + 1;
        let n_phi = 2 * l_nodes + 1;
        let (xs, ws) = gauss_legendre(n_theta);
        let nm = mode_count(l_max);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut y = Vec::with_capacity(n_theta * n_phi * nm);
        let mut dtheta = Vec::with_capacity(n_theta * n_phi * nm);
        let mut dphi = Vec::with_capacity(n_theta * n_phi * nm);
        let tri = |l: usize, m: usize| l * (l + 1) / 2 + m;
        let mut p = Vec::new();
        let mut row = vec![0.0; nm];
        let sqrt2 = std::f64::consts::SQRT_2;
        for (&x, &w) in xs.iter().zip(&ws) {
            normalized_legendre(l_max, x, &mut p);
            let sin = (1.0 - x * x).sqrt();
            // ∂θ P̄_l^m = -[l x P̄_l^m - c_lm P̄_{l-1}^m] / sinθ
            let mut dp = vec![0.0; p.len()];
            for l in 0..=l_max {
                for m in 0..=l {
                    let (lf, mf) = (l as f64, m as f64);
                    let lower = if l > m {
                        ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - mf * mf)).sqrt() * p[tri(l - 1, m)]
                    } else {
                        0.0
                    };
                    dp[tri(l, m)] = -(lf * x * p[tri(l, m)] - lower) / sin;
                }
            }
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                nodes.push(SphereNode { cos_theta: x, phi, weight: w * 2.0 * PI / n_phi as f64 });
                fill_harmonics(l_max, &p, phi, &mut row);
                y.extend_from_slice(&row);
                fill_harmonics(l_max, &dp, phi, &mut row);
                dtheta.extend_from_slice(&row);
                let start = dphi.len();
                dphi.resize(start + nm, 0.0);
                for l in 0..=l_max {
                    for m in 1..=l {
                        let mf = m as f64;
                        let (s, c) = (mf * phi).sin_cos();
                        let a = sqrt2 * p[tri(l, m)] / sin * mf;
                        dphi[start + mode_index(l, m as i64)] = -a * s;
                        dphi[start + mode_index(l, -(m as i64))] = a * c;
                    }
                }
            }
        }
        SphereQuadrature { l_max, l_nodes, nodes, y, dtheta, dphi }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn l_nodes(&self) -> usize {
        self.l_nodes
    }

    pub fn modes(&self) -> usize {
        mode_count(self.l_max)
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Harmonic row at node `n`.
    pub fn harmonics(&self, n: usize) -> &[f64] {
        let nm = self.modes();
        &self.y[n * nm..(n + 1) * nm]
    }

    pub fn integrate(&self, field: &[f64]) -> f64 {
        self.nodes.iter().zip(field).map(|(n, f)| n.weight * f).sum()
    }

    /// `c_lm = Σ_nodes w · field · Y_lm`; non-finite samples are rejected.
    pub fn project(&self, field: &[f64]) -> Result<Vec<f64>> {
        if field.len() != self.nodes.len() {
            return Err(Error::Precondition(format!(
                "field has {} samples, quadrature has {} nodes",
                field.len(),
                self.nodes.len()
            )));
        }
        if let Some((i, v)) = field.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            let n = self.nodes[i];
            return Err(Error::NonFinite {
                value: *v,
                location: format!("sphere node {i} (cosθ = {:.6}, φ = {:.6})", n.cos_theta, n.phi),
            });
        }
        let mut out = vec![0.0; self.modes()];
        self.project_into(field, &mut out);
        Ok(out)
    }

    /// Unchecked projection for inner loops.
    pub fn project_into(&self, field: &[f64], out: &mut [f64]) {
        let nm = self.modes();
        out.iter_mut().for_each(|c| *c = 0.0);
        for (n, node) in self.nodes.iter().enumerate() {
            let f = field[n] * node.weight;
            if f == 0.0 {
                continue;
            }
            let row = &self.y[n * nm..(n + 1) * nm];
            for (c, y) in out.iter_mut().zip(row) {
                *c += f * y;
            }
        }
    }

    /// Pointwise `Σ c_lm Y_lm` at the nodes.
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.modes() {
            return Err(Error::DegreeMismatch { expected: self.modes(), got: coeffs.len() });
        }
        let mut out = vec![0.0; self.nodes.len()];
        self.synthesize_into(coeffs, &mut out);
        Ok(out)
    }

    pub fn synthesize_into(&self, coeffs: &[f64], out: &mut [f64]) {
        let nm = self.modes();
        for (n, o) in out.iter_mut().enumerate() {
            let row = &self.y[n * nm..(n + 1) * nm];
            *o = row.iter().zip(coeffs).map(|(y, c)| y * c).sum();
        }
    }

    /// `|∇_{S²} f|` at the nodes for band-limited coefficients.
    pub fn gradient_magnitude_into(&self, coeffs: &[f64], out: &mut [f64]) {
        let nm = self.modes();
        for (n, o) in out.iter_mut().enumerate() {
            let a = &self.dtheta[n * nm..(n + 1) * nm];
            let b = &self.dphi[n * nm..(n + 1) * nm];
            let gt: f64 = a.iter().zip(coeffs).map(|(y, c)| y * c).sum();
            let gp: f64 = b.iter().zip(coeffs).map(|(y, c)| y * c).sum();
            *o = (gt * gt + gp * gp).sqrt();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_index_roundtrip() {
        for idx in 0..mode_count(12) {
            let (l, m) = mode_lm(idx);
            assert!(m.unsigned_abs() as usize <= l);
            assert_eq!(mode_index(l, m), idx);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        // exact through degree 13
        for k in 0..=13 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "k={k} q={q}");
        }
    }

    #[test]
    fn orthonormality_to_band_limit() {
        let l = 8;
        let q = SphereQuadrature::new(l);
        let nm = q.modes();
        let mut max_err: f64 = 0.0;
        for a in 0..nm {
            for b in 0..nm {
                let s: f64 = (0..q.len()).map(|n| q.nodes[n].weight * q.harmonics(n)[a] * q.harmonics(n)[b]).sum();
                let e = if a == b { 1.0 } else { 0.0 };
                max_err = max_err.max((s - e).abs());
            }
        }
        assert!(max_err <= 1e-12, "max orthonormality error {max_err}");
    }

    #[test]
    fn constant_field_projects_to_l0() {
        let q = SphereQuadrature::new(6);
        let c = q.project(&vec![1.0; q.len()]).unwrap();
        assert!((c[0] - (4.0 * PI).sqrt()).abs() < 1e-12);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn y10_projects_to_unit_coefficient() {
        let q = SphereQuadrature::new(5);
        let f: Vec<f64> = (0..q.len()).map(|n| q.harmonics(n)[mode_index(1, 0)]).collect();
        let c = q.project(&f).unwrap();
        for (i, v) in c.iter().enumerate() {
            let e = if i == mode_index(1, 0) { 1.0 } else { 0.0 };
            assert!((v - e).abs() < 1e-12);
        }
        // explicit closed form Y_10 = sqrt(3/4π) cosθ
        let n = q.nodes()[3];
        assert!((f[3] - (3.0 / (4.0 * PI)).sqrt() * n.cos_theta).abs() < 1e-14);
    }

    #[test]
    fn synthesis_of_zero_and_constant() {
        let q = SphereQuadrature::new(4);
        let mut c = vec![0.0; q.modes()];
        assert!(q.synthesize(&c).unwrap().iter().all(|v| *v == 0.0));
        c[0] = (4.0 * PI).sqrt();
        assert!(q.synthesize(&c).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-13));
    }

    #[test]
    fn synthesis_rejects_degree_mismatch() {
        let q = SphereQuadrature::new(4);
        assert!(matches!(q.synthesize(&[1.0; 9]), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn projection_rejects_nan_with_location() {
        let q = SphereQuadrature::new(2);
        let mut f = vec![0.0; q.len()];
        f[4] = f64::NAN;
        match q.project(&f) {
            Err(Error::NonFinite { location, .. }) => assert!(location.contains("node 4")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sobolev_norm_examples() {
        let mut c = vec![0.0; mode_count(2)];
        c[0] = 2.5;
        assert_eq!(sobolev_sphere_norm(&c, 2), sobolev_sphere_norm(&c, 0));
        let mut d = vec![0.0; mode_count(2)];
        d[mode_index(1, 1)] = 1.0;
        assert!((sobolev_sphere_norm(&d, 1) - 3f64.sqrt()).abs() < 1e-15);
        // two modes: c00 = 0.5, c2,-1 = 2 at k = 2: 0.25 + 49*4
        let mut e = vec![0.0; mode_count(2)];
        e[0] = 0.5;
        e[mode_index(2, -1)] = 2.0;
        assert!((sobolev_sphere_norm(&e, 2) - (0.25f64 + 196.0).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gradient_energy_equals_eigenvalue() {
        // ∫|∇Y_lm|² = l(l+1); |∇Y|² has degree 2l so the quadrature is exact
        let l_max = 6;
        let q = SphereQuadrature::new(l_max);
        let mut g = vec![0.0; q.len()];
        for idx in 0..q.modes() {
            let (l, _) = mode_lm(idx);
            let mut c = vec![0.0; q.modes()];
            c[idx] = 1.0;
            q.gradient_magnitude_into(&c, &mut g);
            let e: f64 = q.nodes().iter().zip(&g).map(|(n, g)| n.weight * g * g).sum();
            assert!((e - (l * (l + 1)) as f64).abs() < 1e-10, "idx {idx}: {e}");
        }
    }

    #[test]
    fn harmonics_at_direction_match_table() {
        let q = SphereQuadrature::new(5);
        let mut out = vec![0.0; q.modes()];
        for n in [0, 7, 31] {
            real_harmonics_at(5, q.nodes()[n].direction(), &mut out);
            for (a, b) in out.iter().zip(q.harmonics(n)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
