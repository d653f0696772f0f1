use serde::Serialize;
use serde_json::Value;
use wavecert::config::RunConfig;
use wavecert::grid::GridMeta;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), pass, detail: detail.into() }
    }
}

/// One JSON document per run; contains no timings or paths derived from the
/// environment beyond what the config records.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub seed: u64,
    pub config: RunConfig,
    pub grid: Option<GridMeta>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// What a subcommand hands back before it is wrapped in a [`Report`].
pub struct Outcome {
    pub grid: Option<GridMeta>,
    pub result: Value,
    pub checks: Vec<Check>,
    /// `(file name, contents)` written to the output directory.
    pub files: Vec<(String, String)>,
}

impl Report {
    pub fn new(config: RunConfig, out: &Outcome) -> Self {
        Report {
            tool: "wavecert",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: config.subcommand.clone(),
            seed: config.seed,
            grid: out.grid,
            result: out.result.clone(),
            pass: out.checks.iter().all(|c| c.pass),
            checks: out.checks.clone(),
            config,
        }
    }
}
