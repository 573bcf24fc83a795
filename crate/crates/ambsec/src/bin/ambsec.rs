//! Thin command-line front end over the library. Every capability here is a
//! one-call wrapper; the `examples/` directory shows the same operations as
//! library code.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ambsec::analytic::{
    eve_cdf, legit_cdf, sdo_estimate, sop_asymptotic, sop_exact, EvalRoute, SinrDistRoute,
    SopSettings,
};
use ambsec::foxh::{foxh_eval, ContourSpec, FoxHSpec};
use ambsec::sweep::{
    emit, figure, run_sweep, validate_all, EmitFormat, FigureId, RouteChoice, SweepError,
    SweepSpec, SweepVariable, ValidationBudget,
};
use ambsec::sysmodel::{derive, from_toml, SystemConfig};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "AMBSEC_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "ambsec",
    version,
    about = "Secrecy analysis of backscatter-assisted wiretap channels"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// TOML config file; defaults apply for missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override: transmit power in dBm.
    #[arg(long, global = true)]
    power_dbm: Option<f64>,
    /// Override: direct legitimate-link SNR in dB (moves transmit power).
    #[arg(long, global = true)]
    snr_db: Option<f64>,
    /// Override: number of backscatter devices.
    #[arg(long, short = 'k', global = true)]
    num_bds: Option<usize>,
    /// Override: secrecy rate threshold (bit/s/Hz).
    #[arg(long, global = true)]
    secrecy_rate: Option<f64>,
    /// Override: normalized timing error in [0, 1).
    #[arg(long, global = true)]
    timing_error: Option<f64>,
    /// Override: normalized CSI estimation error in [0, 1).
    #[arg(long, global = true)]
    csi_error: Option<f64>,
    /// Override: device–receiver distance in meters.
    #[arg(long, global = true)]
    d_kr: Option<f64>,
    /// Override: transmitter–eavesdropper distance in meters.
    #[arg(long, global = true)]
    d_te: Option<f64>,
    /// Draw device placement per batch instead of holding it fixed.
    #[arg(long, global = true)]
    randomize_bd_distance: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<SystemConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                from_toml(&text).map_err(|e| CliError::Validation(e.to_string()))?
            }
            None => SystemConfig::default(),
        };
        if let Some(p) = self.power_dbm {
            cfg.transmit_power_dbm = p;
        }
        if let Some(k) = self.num_bds {
            cfg.num_bds = k;
        }
        if let Some(r) = self.secrecy_rate {
            cfg.secrecy_rate = r;
        }
        if let Some(t) = self.timing_error {
            cfg.timing_error = t;
        }
        if let Some(e) = self.csi_error {
            cfg.csi_error = e;
        }
        if let Some(d) = self.d_kr {
            cfg.dist_k_r = ambsec::sysmodel::PerDevice::Shared(d);
        }
        if let Some(d) = self.d_te {
            cfg.dist_t_e = d;
        }
        if self.randomize_bd_distance {
            cfg.randomize_bd_distance = true;
        }
        if let Some(snr) = self.snr_db {
            cfg = cfg.with_legit_snr_db(snr);
        }
        cfg.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the fully derived parameter set as JSON.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
    /// Monte Carlo sweep; emits CSV (x, series, route, value, stderr, n).
    Simulate {
        #[arg(long, default_value_t = 1_000_000)]
        n_trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = VariableArg::SnrDb)]
        variable: VariableArg,
        /// Comma-separated ascending grid values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 10.0, 20.0, 30.0])]
        grid: Vec<f64>,
        #[arg(long, default_value = "simulate.csv")]
        out: PathBuf,
    },
    /// Closed-form evaluations (JSON to stdout).
    Analytic {
        #[command(subcommand)]
        what: AnalyticCmd,
    },
    /// Fox-H evaluation from a JSON parameter block.
    Foxh {
        #[command(subcommand)]
        what: FoxhCmd,
    },
    /// Reproduce a predefined experiment figure.
    Figure {
        id: String,
        /// Trials per simulated point. Defaults to 10^6 for the CDF figures
        /// and 10^7 for the outage figures (≥ 100 expected events at the
        /// rarest plotted levels).
        #[arg(long)]
        n_trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Custom sweep over one variable with selectable routes.
    Sweep {
        #[arg(long, value_enum)]
        variable: VariableArg,
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![RouteArg::Exact])]
        routes: Vec<RouteArg>,
        #[arg(long, default_value_t = 1_000_000)]
        n_trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Cross-validation report; exits nonzero if any check fails.
    Validate {
        #[arg(long, default_value_t = 200_000)]
        cdf_trials: usize,
        #[arg(long, default_value_t = 1_000_000)]
        sop_trials: usize,
        #[arg(long, default_value_t = 20_240_901)]
        seed: u64,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Emit the derived parameters as JSON for audit.
    Print,
}

#[derive(Subcommand)]
enum AnalyticCmd {
    /// Secrecy outage probability.
    Sop {
        #[arg(long, value_enum, default_value_t = SopRouteArg::Foxh)]
        route: SopRouteArg,
    },
    /// CDF of one side's SINR at a point.
    Cdf {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        gamma: f64,
    },
    /// High-SNR asymptote of the SOP.
    Asymptote,
    /// Secrecy diversity order from a power sweep.
    Sdo {
        /// Comma-separated dBm grid (span >= 30 dB).
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = SopRouteArg::Asymptotic)]
        route: SopRouteArg,
    },
}

#[derive(Subcommand)]
enum FoxhCmd {
    /// Evaluate a Fox-H function; reads a FoxHSpec as JSON from a file or
    /// inline.
    Eval {
        /// JSON text of the parameter block.
        #[arg(long, conflicts_with = "file")]
        json: Option<String>,
        /// Path to a JSON file with the parameter block.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        anchor: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariableArg {
    SnrDb,
    K,
    GammaEBarDb,
    DKr,
    RS,
    TS,
    CsiEps,
}

impl From<VariableArg> for SweepVariable {
    fn from(v: VariableArg) -> Self {
        match v {
            VariableArg::SnrDb => SweepVariable::SnrDb,
            VariableArg::K => SweepVariable::K,
            VariableArg::GammaEBarDb => SweepVariable::GammaEBarDb,
            VariableArg::DKr => SweepVariable::DKr,
            VariableArg::RS => SweepVariable::RS,
            VariableArg::TS => SweepVariable::TS,
            VariableArg::CsiEps => SweepVariable::CsiEps,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum RouteArg {
    Montecarlo,
    Exact,
    Asymptotic,
}

impl std::fmt::Display for RouteArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RouteArg::Montecarlo => "montecarlo",
            RouteArg::Exact => "exact",
            RouteArg::Asymptotic => "asymptotic",
        })
    }
}

impl From<RouteArg> for RouteChoice {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Montecarlo => RouteChoice::Montecarlo,
            RouteArg::Exact => RouteChoice::Exact,
            RouteArg::Asymptotic => RouteChoice::Asymptotic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SopRouteArg {
    Foxh,
    Master,
    Asymptotic,
}

impl From<SopRouteArg> for EvalRoute {
    fn from(r: SopRouteArg) -> Self {
        match r {
            SopRouteArg::Foxh => EvalRoute::FoxhClosedForm,
            SopRouteArg::Master => EvalRoute::MasterIntegral,
            SopRouteArg::Asymptotic => EvalRoute::Asymptotic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Legit,
    Eve,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

enum CliError {
    Validation(String),
    Numerics(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerics(_) => 2,
            CliError::Io(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerics(m) | CliError::Io(m) => m,
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Io { .. } => CliError::Io(e.to_string()),
            SweepError::Analytic(_) => CliError::Numerics(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ambsec::analytic::AnalyticError> for CliError {
    fn from(e: ambsec::analytic::AnalyticError) -> Self {
        CliError::Numerics(e.to_string())
    }
}

/// Resolve an output path against AMBSEC_OUT_DIR when relative.
fn out_path(p: &Path) -> PathBuf {
    if p.is_absolute() {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(p),
        None => p.to_path_buf(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.config.resolve()?;
    match cli.command {
        Command::Config { action: ConfigAction::Print } => {
            let dp = derive(&cfg).map_err(|e| CliError::Validation(e.to_string()))?;
            let doc = serde_json::json!({ "config": cfg, "derived": dp });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
        }
        Command::Simulate { n_trials, seed, variable, grid, out } => {
            let spec = SweepSpec {
                variable: variable.into(),
                grid,
                routes: vec![RouteChoice::Montecarlo],
                n_trials,
                seed,
                base_config: cfg,
            };
            let ds = run_sweep(&spec)?;
            let path = out_path(&out);
            emit(&ds, EmitFormat::Csv, &path)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Analytic { what } => {
            let dp = derive(&cfg).map_err(|e| CliError::Validation(e.to_string()))?;
            let settings = SopSettings::default();
            match what {
                AnalyticCmd::Sop { route } => {
                    let r = sop_exact(&dp, route.into(), &settings)?;
                    let doc = serde_json::json!({
                        "route": r.route.to_string(),
                        "value": r.sop,
                        "err_estimate": r.err_estimate,
                        "diagnostics": r.diagnostics,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
                }
                AnalyticCmd::Cdf { side, gamma } => {
                    let (value, route) = match side {
                        SideArg::Legit => (
                            legit_cdf(gamma, &dp, SinrDistRoute::HankelReference)?,
                            "hankel-reference",
                        ),
                        SideArg::Eve => (eve_cdf(gamma, &dp), "elementary"),
                    };
                    let doc = serde_json::json!({ "gamma": gamma, "value": value, "route": route });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
                }
                AnalyticCmd::Asymptote => {
                    let r = sop_asymptotic(&dp)?;
                    let doc = serde_json::json!({
                        "route": r.route.to_string(),
                        "value": r.sop,
                        "err_estimate": r.err_estimate,
                        "diagnostics": r.diagnostics,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
                }
                AnalyticCmd::Sdo { grid, route } => {
                    let slope = sdo_estimate(&dp, &grid, route.into(), &settings)?;
                    let doc = serde_json::json!({ "slope": slope, "grid_dbm": grid });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
                }
            }
        }
        Command::Foxh { what: FoxhCmd::Eval { json, file, anchor } } => {
            let text = match (json, file) {
                (Some(j), _) => j,
                (None, Some(f)) => std::fs::read_to_string(&f)
                    .map_err(|e| CliError::Io(format!("{}: {e}", f.display())))?,
                (None, None) => {
                    return Err(CliError::Validation("need --json or --file".into()));
                }
            };
            let spec: FoxHSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Validation(e.to_string()))?;
            let mut contour = ContourSpec::default();
            if let Some(a) = anchor {
                contour.real_anchor = a;
                contour.shift_strategy = ambsec::foxh::ShiftStrategy::Fixed;
            }
            let v = foxh_eval(&spec, &contour).map_err(|e| CliError::Numerics(e.to_string()))?;
            let doc = serde_json::json!({
                "value": v.value,
                "err_estimate": v.err_estimate,
                "diagnostics": v.diagnostics,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
        }
        Command::Figure { id, n_trials, seed, out, format } => {
            let fig: FigureId = id.parse().map_err(CliError::Validation)?;
            let n_trials = n_trials.unwrap_or(match fig {
                FigureId::Fig2a | FigureId::Fig2b => 1_000_000,
                _ => 10_000_000,
            });
            let ds = figure(fig, &cfg, n_trials, seed)?;
            let (fmt, default_name) = match format {
                FormatArg::Csv => (EmitFormat::Csv, format!("{id}.csv")),
                FormatArg::Json => (EmitFormat::Json, format!("{id}.json")),
            };
            let path = out_path(&out.unwrap_or_else(|| PathBuf::from(default_name)));
            emit(&ds, fmt, &path)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Sweep { variable, grid, routes, n_trials, seed, out, format } => {
            let spec = SweepSpec {
                variable: variable.into(),
                grid,
                routes: routes.into_iter().map(Into::into).collect(),
                n_trials,
                seed,
                base_config: cfg,
            };
            let ds = run_sweep(&spec)?;
            let fmt = match format {
                FormatArg::Csv => EmitFormat::Csv,
                FormatArg::Json => EmitFormat::Json,
            };
            let path = out_path(&out);
            emit(&ds, fmt, &path)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Validate { cdf_trials, sop_trials, seed, out } => {
            let budget = ValidationBudget { cdf_trials, sop_trials, seed };
            let report = validate_all(&cfg, &budget)?;
            for c in &report.checks {
                println!(
                    "{} {} (measured {:.6e}, threshold {:.6e}) {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.measured,
                    c.threshold,
                    c.detail
                );
            }
            if let Some(o) = out {
                let path = out_path(&o);
                std::fs::write(&path, serde_json::to_vec_pretty(&report).expect("serializes"))
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            if !report.passed {
                return Err(CliError::Validation("validation checks failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Usage problems are validation failures (exit 1); help/version are
    // successes. Keeps exit 2 reserved for numerical non-convergence.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
