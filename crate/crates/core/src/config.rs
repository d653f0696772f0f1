//! Plain-text run configuration: `[section]` headers and `key = value` lines.
//!
//! ```text
//! # comments start with '#' or ';'
//! [grid]
//! dr = 0.03125
//! t_max = 4
//! [semilinear]
//! p = 2.5
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridParams, MAX_CFL};
use crate::multiplier::DEFAULT_SEED;
use crate::norms::WeightParams;
use crate::semilinear::{CauchyData, SemilinearConfig};

/// Parsed document: section → key → raw value. Keys before any header live
/// in the `""` section.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigDoc {
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

pub fn parse_config(text: &str) -> Result<ConfigDoc> {
    let mut doc = ConfigDoc::default();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| err("unterminated section header".into()))?.trim();
            if !is_name(name) {
                return Err(err(format!("invalid section name {name:?}")));
            }
            section = name.to_string();
            doc.sections.entry(section.clone()).or_default();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        let key = key.trim();
        if !is_name(key) {
            return Err(err(format!("invalid key {key:?}")));
        }
        let value = value.split(" #").next().unwrap_or("").trim();
        let value = value.strip_prefix('"').and_then(|v| v.strip_suffix('"')).unwrap_or(value);
        let entries = doc.sections.entry(section.clone()).or_default();
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(err(format!("duplicate key {key:?} in [{section}]")));
        }
    }
    Ok(doc)
}

/// Grid section of a run; `stride` is the stored-slice stride.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    pub dr: f64,
    pub t_max: f64,
    pub l_max: usize,
    pub stride: usize,
    pub cfl: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { dr: 1.0 / 32.0, t_max: 4.0, l_max: 4, stride: 4, cfl: MAX_CFL }
    }
}

impl GridSection {
    pub fn params(&self) -> GridParams {
        GridParams { cfl: self.cfl, ..GridParams::new(self.dr, self.t_max, self.l_max).with_stride(self.stride) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    Positive,
    Angular,
}

impl DataKind {
    pub fn build(self, eps: f64) -> CauchyData {
        match self {
            DataKind::Positive => CauchyData::positive(eps),
            DataKind::Angular => CauchyData::with_angular(eps),
        }
    }
}

/// `p0:p1:steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub p0: f64,
    pub p1: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let bad = || Error::Domain(format!("expected p0:p1:steps, got {text:?}"));
        let [a, b, n] = parts.as_slice() else { return Err(bad()) };
        let range = SweepRange {
            p0: a.parse().map_err(|_| bad())?,
            p1: b.parse().map_err(|_| bad())?,
            steps: n.parse().map_err(|_| bad())?,
        };
        if !(range.p0.is_finite() && range.p1.is_finite() && range.p0 < range.p1 && range.steps >= 2) {
            return Err(bad());
        }
        Ok(range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExponentsSection {
    /// Space dimension.
    pub n: u32,
    pub p: Option<f64>,
    pub damped: bool,
    pub sweep: Option<SweepRange>,
}

impl Default for ExponentsSection {
    fn default() -> Self {
        ExponentsSection { n: 3, p: None, damped: false, sweep: None }
    }
}

/// Everything needed to reproduce one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub subcommand: String,
    pub seed: u64,
    /// Sample or profile count; each subcommand has its own default.
    pub samples: Option<usize>,
    /// Number of grids in the refinement ladder.
    pub levels: usize,
    pub source: String,
    pub output_dir: Option<String>,
    pub grid: GridSection,
    pub weights: WeightParams,
    pub semilinear: SemilinearConfig,
    pub eps: f64,
    pub data: DataKind,
    pub exponents: ExponentsSection,
    pub sweep_p: Vec<f64>,
    pub sweep_eps: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            subcommand: String::new(),
            seed: DEFAULT_SEED,
            samples: None,
            levels: 2,
            source: "bump".into(),
            output_dir: None,
            grid: GridSection::default(),
            weights: WeightParams::default(),
            semilinear: SemilinearConfig::default(),
            eps: 1e-3,
            data: DataKind::Angular,
            exponents: ExponentsSection::default(),
            sweep_p: vec![2.0, 2.5],
            sweep_eps: vec![1e-3, 1.0],
        }
    }
}

fn num<T: std::str::FromStr>(section: &str, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Domain(format!("[{section}] {key}: cannot parse {v:?}")))
}

fn list(section: &str, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| num(section, key, x.trim())).collect()
}

impl RunConfig {
    /// Overlay every recognised key of `doc`; unknown sections or keys are errors.
    pub fn apply(&mut self, doc: &ConfigDoc) -> Result<()> {
        for (section, entries) in &doc.sections {
            for (key, v) in entries {
                let s = section.as_str();
                match (s, key.as_str()) {
                    ("" | "run", "subcommand") => self.subcommand = v.clone(),
                    ("" | "run", "seed") => self.seed = num(s, key, v)?,
                    ("" | "run", "samples") => self.samples = Some(num(s, key, v)?),
                    ("" | "run", "levels") => self.levels = num(s, key, v)?,
                    ("" | "run", "source") => self.source = v.clone(),
                    ("" | "run", "output_dir") => self.output_dir = Some(v.clone()),
                    ("grid", "dr") => self.grid.dr = num(s, key, v)?,
                    ("grid", "t_max") => self.grid.t_max = num(s, key, v)?,
                    ("grid", "l_max") => self.grid.l_max = num(s, key, v)?,
                    ("grid", "stride") => self.grid.stride = num(s, key, v)?,
                    ("grid", "cfl") => self.grid.cfl = num(s, key, v)?,
                    ("weights", "s") => self.weights.s = num(s, key, v)?,
                    ("weights", "delta") => self.weights.delta = num(s, key, v)?,
                    ("weights", "alpha") => self.weights.alpha = num(s, key, v)?,
                    ("weights", "theta") => self.weights.theta = num(s, key, v)?,
                    ("weights", "q") => self.weights.q = num(s, key, v)?,
                    ("weights", "p") => self.weights.p = num(s, key, v)?,
                    ("semilinear", "p") => self.semilinear.p = num(s, key, v)?,
                    ("semilinear", "eps") => self.eps = num(s, key, v)?,
                    ("semilinear", "damped") => self.semilinear.damped = num(s, key, v)?,
                    ("semilinear", "horizon") => self.semilinear.horizon = num(s, key, v)?,
                    ("semilinear", "dr") => self.semilinear.dr = num(s, key, v)?,
                    ("semilinear", "l_max") => self.semilinear.l_max = num(s, key, v)?,
                    ("semilinear", "slice_dt") => self.semilinear.slice_dt = num(s, key, v)?,
                    ("semilinear", "threshold_factor") => self.semilinear.threshold_factor = num(s, key, v)?,
                    ("semilinear", "q_window") => self.semilinear.q_window = num(s, key, v)?,
                    ("semilinear", "confirm_blowup") => self.semilinear.confirm_blowup = num(s, key, v)?,
                    ("semilinear", "data") => {
                        self.data = match v.as_str() {
                            "positive" => DataKind::Positive,
                            "angular" => DataKind::Angular,
                            _ => return Err(Error::Domain(format!("[semilinear] data: unknown kind {v:?}"))),
                        }
                    }
                    ("sweep", "p") => self.sweep_p = list(s, key, v)?,
                    ("sweep", "eps") => self.sweep_eps = list(s, key, v)?,
                    ("exponents", "n") => self.exponents.n = num(s, key, v)?,
                    ("exponents", "p") => self.exponents.p = Some(num(s, key, v)?),
                    ("exponents", "damped") => self.exponents.damped = num(s, key, v)?,
                    ("exponents", "sweep") => self.exponents.sweep = Some(SweepRange::parse(v)?),
                    _ => return Err(Error::Domain(format!("unknown key {key:?} in [{section}]"))),
                }
            }
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply(&parse_config(text)?)?;
        Ok(cfg)
    }
}
