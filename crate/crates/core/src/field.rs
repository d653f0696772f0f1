//! Mode-coefficient containers and the CSV mode-table format.
//!
//! CSV layout: a header line `l,m,t,r,value` followed by one row per sample.
//! Lines starting with `#` are comments.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sphere::{mode_count, mode_index, mode_lm};

/// All modes at one stored time level; `u[mode * n_r + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSlice {
    pub t: f64,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

impl ModeSlice {
    pub fn zeros(t: f64, modes: usize, n_r: usize) -> Self {
        ModeSlice { t, u: vec![0.0; modes * n_r], ut: vec![0.0; modes * n_r] }
    }

    pub fn mode(&self, idx: usize, n_r: usize) -> &[f64] {
        &self.u[idx * n_r..(idx + 1) * n_r]
    }

    pub fn mode_t(&self, idx: usize, n_r: usize) -> &[f64] {
        &self.ut[idx * n_r..(idx + 1) * n_r]
    }

    /// Coefficients of all modes at radial node `j`.
    pub fn coeffs_at(&self, j: usize, n_r: usize, out: &mut [f64]) {
        for (idx, o) in out.iter_mut().enumerate() {
            *o = self.u[idx * n_r + j];
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ModeSlice {
            t: self.t,
            u: self.u.iter().map(|v| v * factor).collect(),
            ut: self.ut.iter().map(|v| v * factor).collect(),
        }
    }
}

/// Samples `u_lm(t_k, r_j)` of a field expanded in real spherical harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialModeField {
    pub l_max: usize,
    pub dr: f64,
    pub n_r: usize,
    pub slices: Vec<ModeSlice>,
}

impl RadialModeField {
    pub fn new(l_max: usize, dr: f64, n_r: usize) -> Self {
        RadialModeField { l_max, dr, n_r, slices: Vec::new() }
    }

    pub fn modes(&self) -> usize {
        mode_count(self.l_max)
    }

    pub fn r(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr
    }

    /// Index of the slice stored at time `t` (to within `1e-9`).
    pub fn slice_index(&self, t: f64) -> Result<usize> {
        self.slices
            .iter()
            .position(|s| (s.t - t).abs() <= 1e-9 * (1.0 + t.abs()))
            .ok_or(Error::NoSuchSlice { t })
    }

    pub fn slice_at(&self, t: f64) -> Result<&ModeSlice> {
        Ok(&self.slices[self.slice_index(t)?])
    }

    /// First non-finite sample, if any.
    pub fn first_non_finite(&self) -> Option<(f64, usize, usize)> {
        for s in &self.slices {
            for (i, v) in s.u.iter().enumerate() {
                if !v.is_finite() {
                    return Some((s.t, i / self.n_r, i % self.n_r));
                }
            }
        }
        None
    }

    /// `u_lm(t, 0)` by even/odd extrapolation from the first two cell centres.
    ///
    /// Modes with `l ≥ 1` vanish at the origin; for `l = 0` the profile is even in
    /// `r`, so `a + b r²` through `r = dr/2, 3dr/2` gives `(9 u_0 - u_1) / 8`.
    pub fn value_at_origin(&self, slice: usize, idx: usize) -> f64 {
        let (l, _) = mode_lm(idx);
        if l >= 1 || self.n_r < 2 {
            return 0.0;
        }
        let m = self.slices[slice].mode(idx, self.n_r);
        (9.0 * m[0] - m[1]) / 8.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        RadialModeField {
            slices: self.slices.iter().map(|s| s.scaled(factor)).collect(),
            ..self.clone()
        }
    }

    /// CSV export (`l,m,t,r,value`), skipping exact zeros when `sparse`.
    pub fn to_csv(&self, sparse: bool) -> String {
        let mut out = String::from("l,m,t,r,value\n");
        for s in &self.slices {
            for idx in 0..self.modes() {
                let (l, m) = mode_lm(idx);
                for (j, v) in s.mode(idx, self.n_r).iter().enumerate() {
                    if sparse && *v == 0.0 {
                        continue;
                    }
                    let _ = writeln!(out, "{l},{m},{},{},{:e}", s.t, self.r(j), v);
                }
            }
        }
        out
    }

    /// Rebuild a field from a parsed table; radii must sit on a cell-centred grid.
    pub fn from_table(table: &ModeTable) -> Result<Self> {
        let mut times: Vec<f64> = table.rows.iter().map(|r| r.t).collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        let mut radii: Vec<f64> = table.rows.iter().map(|r| r.r).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        if radii.is_empty() {
            return Err(Error::Parse { line: 0, msg: "empty table".into() });
        }
        let dr = 2.0 * radii[0];
        if !(dr > 0.0) {
            return Err(Error::Parse { line: 0, msg: "radii must be positive".into() });
        }
        let n_r_f = (radii[radii.len() - 1] / dr - 0.5).round() + 1.0;
        let l_max = table.l_max;
        let nm = mode_count(l_max);
        if !(n_r_f * (nm * times.len()) as f64 <= MAX_TABLE_SAMPLES as f64) {
            return Err(Error::Parse { line: 0, msg: format!("table expands beyond {MAX_TABLE_SAMPLES} samples") });
        }
        let n_r = n_r_f as usize;
        let mut field = RadialModeField::new(l_max, dr, n_r);
        field.slices = times.iter().map(|&t| ModeSlice::zeros(t, nm, n_r)).collect();
        for (k, row) in table.rows.iter().enumerate() {
            let jf = row.r / dr - 0.5;
            let j = jf.round();
            if (jf - j).abs() > 1e-6 {
                return Err(Error::Parse {
                    line: table.lines[k],
                    msg: format!("radius {} is not a cell centre of dr = {dr}", row.r),
                });
            }
            let s = times.binary_search_by(|t| t.total_cmp(&row.t)).expect("time present");
            field.slices[s].u[mode_index(row.l, row.m) * n_r + j as usize] = row.value;
        }
        Ok(field)
    }
}

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRow {
    pub l: usize,
    pub m: i64,
    pub t: f64,
    pub r: f64,
    pub value: f64,
}

/// Parsed CSV mode table.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    pub l_max: usize,
    pub rows: Vec<ModeRow>,
    /// Source line of each row.
    pub lines: Vec<usize>,
}

/// Largest degree accepted from external tables.
pub const MAX_TABLE_DEGREE: usize = 64;

/// Largest dense field materialised from an external table.
pub const MAX_TABLE_SAMPLES: usize = 1 << 26;

/// Parse a `l,m,t,r,value` table. Whitespace around fields is ignored.
pub fn parse_mode_csv(text: &str) -> Result<ModeTable> {
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut seen_header = false;
    let mut l_max = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_header {
            let expect = ["l", "m", "t", "r", "value"];
            if fields.len() != 5 || fields.iter().zip(expect).any(|(a, b)| !a.eq_ignore_ascii_case(b)) {
                return Err(Error::Parse { line: line_no, msg: "expected header `l,m,t,r,value`".into() });
            }
            seen_header = true;
            continue;
        }
        if fields.len() != 5 {
            return Err(Error::Parse { line: line_no, msg: format!("expected 5 fields, got {}", fields.len()) });
        }
        let bad = |what: &str| Error::Parse { line: line_no, msg: format!("invalid {what}") };
        let l: usize = fields[0].parse().map_err(|_| bad("degree l"))?;
        let m: i64 = fields[1].parse().map_err(|_| bad("order m"))?;
        let t: f64 = fields[2].parse().map_err(|_| bad("time t"))?;
        let r: f64 = fields[3].parse().map_err(|_| bad("radius r"))?;
        let value: f64 = fields[4].parse().map_err(|_| bad("value"))?;
        if l > MAX_TABLE_DEGREE {
            return Err(Error::Parse { line: line_no, msg: format!("degree {l} exceeds {MAX_TABLE_DEGREE}") });
        }
        if m.unsigned_abs() as usize > l {
            return Err(Error::Parse { line: line_no, msg: format!("|m| = {} exceeds l = {l}", m.abs()) });
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(bad("time t (must be finite and ≥ 0)"));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(bad("radius r (must be finite and > 0)"));
        }
        if !value.is_finite() {
            return Err(bad("value (must be finite)"));
        }
        l_max = l_max.max(l);
        rows.push(ModeRow { l, m, t, r, value });
        lines.push(line_no);
    }
    if !seen_header {
        return Err(Error::Parse { line: 0, msg: "missing header".into() });
    }
    Ok(ModeTable { l_max, rows, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_field() -> RadialModeField {
        let mut f = RadialModeField::new(2, 0.25, 4);
        for k in 0..3 {
            let mut s = ModeSlice::zeros(0.5 * k as f64, f.modes(), 4);
            for (i, v) in s.u.iter_mut().enumerate() {
                *v = ((i * 7 + k) % 5) as f64 * 0.125 - 0.25;
            }
            f.slices.push(s);
        }
        f
    }

    #[test]
    fn csv_roundtrip_dense() {
        let f = sample_field();
        let table = parse_mode_csv(&f.to_csv(false)).unwrap();
        let g = RadialModeField::from_table(&table).unwrap();
        assert_eq!(g.n_r, f.n_r);
        for (a, b) in f.slices.iter().zip(&g.slices) {
            assert_eq!(a.u, b.u);
        }
    }

    #[test]
    fn parse_rejects_bad_rows() {
        assert!(parse_mode_csv("").is_err());
        assert!(parse_mode_csv("l,m,t,r\n").is_err());
        let e = parse_mode_csv("l,m,t,r,value\n1,2,0,0.5,1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_mode_csv("l,m,t,r,value\n0,0,0,0.5,NaN\n").is_err());
        assert!(parse_mode_csv("l,m,t,r,value\n0,0,-1,0.5,1\n").is_err());
        assert!(parse_mode_csv("l,m,t,r,value\n0,0,0,0,1\n").is_err());
    }

    #[test]
    fn parse_accepts_comments_and_spaces() {
        let t = parse_mode_csv("# exported\n l , m , t , r , value \n 2 , -1 , 0.5 , 0.75 , 1e-3\n").unwrap();
        assert_eq!(t.l_max, 2);
        assert_eq!(t.rows[0].m, -1);
    }

    #[test]
    fn origin_value_extrapolates_even_profile() {
        let mut f = RadialModeField::new(1, 0.1, 3);
        let mut s = ModeSlice::zeros(0.0, f.modes(), 3);
        for j in 0..3 {
            let r = (j as f64 + 0.5) * 0.1;
            s.u[j] = 2.0 + 3.0 * r * r;
            s.u[3 * mode_index(1, 0) + j] = r;
        }
        f.slices.push(s);
        assert!((f.value_at_origin(0, 0) - 2.0).abs() < 1e-14);
        assert_eq!(f.value_at_origin(0, mode_index(1, 0)), 0.0);
    }

    #[test]
    fn non_finite_is_located() {
        let mut f = sample_field();
        f.slices[1].u[5] = f64::INFINITY;
        assert_eq!(f.first_non_finite(), Some((0.5, 1, 1)));
    }
}
