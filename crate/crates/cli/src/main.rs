mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavecert::config::{DataKind, RunConfig, SweepRange};
use wavecert::Error;

use report::Report;

/// Environment variable naming the output directory when `--out` is absent.
const OUT_ENV: &str = "WAVECERT_OUT";

#[derive(Debug, Parser)]
#[command(name = "wavecert", version, about = "Weighted wave-equation estimates: solver, norm checks, lifespan sweeps")]
struct Cli {
    /// Config file (`key = value` sections, or a JSON RunConfig).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for JSON and CSV artifacts (default: $WAVECERT_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args, Default)]
struct GridArgs {
    #[arg(long)]
    dr: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    l_max: Option<usize>,
    /// Store every n-th time level.
    #[arg(long)]
    stride: Option<usize>,
}

#[derive(Debug, Args, Default)]
struct SemiArgs {
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    damped: bool,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    dr: Option<f64>,
    #[arg(long)]
    l_max: Option<usize>,
    /// `positive` or `angular`.
    #[arg(long)]
    data: Option<String>,
    /// Re-run blow-ups at half the grid spacing.
    #[arg(long)]
    confirm: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Multiplier identity residuals on random points.
    VerifyIdentity {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Taylor-expansion gap over random (t, r, s).
    VerifyTaylor {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Hardy-type inequalities on random profiles.
    VerifyHardy {
        #[arg(long)]
        profiles: Option<usize>,
    },
    /// Trace inequality and its two regime bounds.
    VerifyTrace {
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        s: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Weighted L²–L² estimate for one source.
    VerifyEstimate {
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Grids in the refinement ladder.
        #[arg(long)]
        levels: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Linear solve; writes the mode table as CSV.
    SolveLinear {
        #[arg(long)]
        source: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Grid solver against the retarded-potential quadrature.
    OracleCompare {
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Trailing-region residual for a time-compact source.
    VerifyHuygens {
        #[arg(long)]
        source: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Critical exponent, feasibility report, or feasibility table.
    Exponents {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        damped: bool,
        /// `p0:p1:steps`
        #[arg(long)]
        sweep: Option<String>,
    },
    /// One semilinear evolution.
    Semilinear {
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        semi: SemiArgs,
        /// Also write the mode table of the run.
        #[arg(long)]
        save_field: bool,
    },
    /// Lifespan table over comma-separated p and ε lists.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        ps: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        epss: Option<Vec<f64>>,
        #[command(flatten)]
        semi: SemiArgs,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::VerifyIdentity { .. } => "verify-identity",
            Cmd::VerifyTaylor { .. } => "verify-taylor",
            Cmd::VerifyHardy { .. } => "verify-hardy",
            Cmd::VerifyTrace { .. } => "verify-trace",
            Cmd::VerifyEstimate { .. } => "verify-estimate",
            Cmd::SolveLinear { .. } => "solve-linear",
            Cmd::OracleCompare { .. } => "oracle-compare",
            Cmd::VerifyHuygens { .. } => "verify-huygens",
            Cmd::Exponents { .. } => "exponents",
            Cmd::Semilinear { .. } => "semilinear",
            Cmd::Sweep { .. } => "sweep",
        }
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn apply_grid(cfg: &mut RunConfig, g: GridArgs) {
    set(&mut cfg.grid.dr, g.dr);
    set(&mut cfg.grid.t_max, g.t_max);
    set(&mut cfg.grid.l_max, g.l_max);
    set(&mut cfg.grid.stride, g.stride);
}

fn apply_semi(cfg: &mut RunConfig, a: SemiArgs) -> Result<(), Error> {
    let s = &mut cfg.semilinear;
    set(&mut s.p, a.p);
    set(&mut s.horizon, a.horizon);
    set(&mut s.dr, a.dr);
    set(&mut s.l_max, a.l_max);
    s.damped |= a.damped;
    s.confirm_blowup |= a.confirm;
    if let Some(d) = a.data {
        cfg.data = match d.as_str() {
            "positive" => DataKind::Positive,
            "angular" => DataKind::Angular,
            _ => return Err(Error::Domain(format!("--data: unknown kind {d:?}"))),
        };
    }
    Ok(())
}

/// Defaults, then the config file, then flags.
fn resolve(cli: Cli) -> Result<(RunConfig, bool), Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
            if text.trim_start().starts_with('{') {
                serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?
            } else {
                RunConfig::from_text(&text)?
            }
        }
        None => RunConfig::default(),
    };
    if let Some(dir) = cli.out.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from)) {
        cfg.output_dir = Some(dir.to_string_lossy().into_owned());
    }
    set(&mut cfg.seed, cli.seed);
    cfg.subcommand = cli.cmd.name().to_string();
    let mut save_field = false;
    match cli.cmd {
        Cmd::VerifyIdentity { samples } | Cmd::VerifyTaylor { samples } => cfg.samples = samples.or(cfg.samples),
        Cmd::VerifyHardy { profiles } => cfg.samples = profiles.or(cfg.samples),
        Cmd::VerifyTrace { source, s, grid } => {
            set(&mut cfg.source, source);
            set(&mut cfg.weights.s, s);
            apply_grid(&mut cfg, grid);
        }
        Cmd::VerifyEstimate { source, s, delta, alpha, levels, grid } => {
            set(&mut cfg.source, source);
            set(&mut cfg.weights.s, s);
            set(&mut cfg.weights.delta, delta);
            set(&mut cfg.weights.alpha, alpha);
            set(&mut cfg.levels, levels);
            apply_grid(&mut cfg, grid);
        }
        Cmd::SolveLinear { source, grid } | Cmd::VerifyHuygens { source, grid } => {
            set(&mut cfg.source, source);
            apply_grid(&mut cfg, grid);
        }
        Cmd::OracleCompare { source, points, grid } => {
            set(&mut cfg.source, source);
            cfg.samples = points.or(cfg.samples);
            apply_grid(&mut cfg, grid);
        }
        Cmd::Exponents { n, p, damped, sweep } => {
            set(&mut cfg.exponents.n, n);
            cfg.exponents.p = p.or(cfg.exponents.p);
            cfg.exponents.damped |= damped;
            if let Some(s) = sweep {
                cfg.exponents.sweep = Some(SweepRange::parse(&s)?);
            }
        }
        Cmd::Semilinear { eps, semi, save_field: save } => {
            set(&mut cfg.eps, eps);
            apply_semi(&mut cfg, semi)?;
            save_field = save;
        }
        Cmd::Sweep { ps, epss, semi } => {
            set(&mut cfg.sweep_p, ps);
            set(&mut cfg.sweep_eps, epss);
            apply_semi(&mut cfg, semi)?;
        }
    }
    Ok((cfg, save_field))
}

fn write_artifacts(dir: &Path, name: &str, report: &str, files: &[(String, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{name}.json")), report)?;
    for (file, contents) in files {
        std::fs::write(dir.join(file), contents)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (cfg, save_field) = match resolve(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}\n\nRun `wavecert --help` for usage.");
            return ExitCode::from(2);
        }
    };
    let outcome = match commands::run(&cfg, save_field) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::exit_code(&e));
        }
    };
    let report = Report::new(cfg, &outcome);
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    print!("{json}");
    if let Some(dir) = &report.config.output_dir {
        if let Err(e) = write_artifacts(Path::new(dir), &report.subcommand, &json, &outcome.files) {
            eprintln!("error: writing artifacts to {dir}: {e}");
            return ExitCode::from(1);
        }
    }
    match report.checks.iter().find(|c| !c.pass) {
        None => ExitCode::SUCCESS,
        Some(c) => {
            eprintln!("check failed: {} ({})", c.name, c.detail);
            ExitCode::from(1)
        }
    }
}
