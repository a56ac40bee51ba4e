//! Command-line surface for banditlab: `run`, `table1`, `power` and
//! `boundary-check`.
//!
//! Exit codes: 0 on success, 2 for configuration or argument errors, 3 for
//! file-system errors, 1 for anything else.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use banditlab_core::boundary::{crossing_mc, BoundaryKind, Correction};
use banditlab_core::engine::{
    default_delta_grid, monte_carlo, power_sweep, table_type1, RunConfig, StatisticKind,
};
use banditlab_core::policies::PolicyKind;
use banditlab_core::ScenarioKind;
use clap::{Parser, Subcommand, ValueEnum};

pub use config::CliConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or arguments (exit 2).
    Config(String),
    /// Reading or writing files failed (exit 3).
    Io(String),
    /// The simulation itself failed (exit 1).
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Run(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Run(m) => write!(f, "run failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<banditlab_core::Error> for CliError {
    fn from(e: banditlab_core::Error) -> Self {
        match e {
            banditlab_core::Error::InvalidArgument(_) => CliError::Config(e.to_string()),
            _ => CliError::Run(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "banditlab", version, about = "Anytime-valid tests for adaptive multi-armed experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PooledChoice {
    /// Trimmed pooled statistic (arms need more than c_rho log(kT) draws).
    Thr,
    /// Padded pooled statistic.
    Pad,
}

impl PooledChoice {
    fn statistic(self) -> StatisticKind {
        match self {
            PooledChoice::Thr => StatisticKind::PooledThr,
            PooledChoice::Pad => StatisticKind::PooledPad,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one configuration from a JSON file; writes summary.csv and run_meta.json.
    ///
    /// Config keys (defaults in brackets): scenario (null|spike|multiscale), k, T,
    /// delta [0], alpha [0.05], zeta [2], policy (uniform|ucb1|thompson|sn_ucb|oracle) [uniform],
    /// beta [2.1], nu [1], ucb1_scale [sqrt 2], sn_width (signed|absolute) [signed],
    /// statistics [pooled_thr, max_lin, max_log], lambda [sqrt(log kT)], c_rho [1],
    /// pad_form (inverse_root|root) [inverse_root], correction (bonferroni|independent) [bonferroni],
    /// early_stop [false], reps [1000], seed [BANDITLAB_SEED or built-in], parallelism [1],
    /// thresholds [all 0].
    Run {
        /// JSON configuration file.
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Master seed; overrides the config and BANDITLAB_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; overrides the config. Results do not depend on it.
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Null rejection rates over k in {5,10,20,50} and T in {200,500,1000,2000}; writes type1.csv.
    Table1 {
        #[arg(long, default_value_t = 1000)]
        reps: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "uniform", value_parser = parse_policy)]
        policy: PolicyKind,
        /// Which pooled statistic fills the pooled column.
        #[arg(long, value_enum, default_value_t = PooledChoice::Thr)]
        pooled: PooledChoice,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        zeta: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [5usize, 10, 20, 50])]
        ks: Vec<usize>,
        #[arg(long = "Ts", value_delimiter = ',', default_values_t = [200usize, 500, 1000, 2000])]
        horizons: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Power of each policy over a grid of effect sizes; writes power.csv.
    Power {
        #[arg(long, value_parser = parse_scenario)]
        scenario: ScenarioKind,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long = "T", default_value_t = 200)]
        horizon: usize,
        /// Comma-separated effect sizes [11 points on 0..1].
        #[arg(long, value_delimiter = ',')]
        deltas: Option<Vec<f64>>,
        #[arg(long, default_value_t = 500)]
        reps: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Comma-separated statistics [pooled_thr,max_lin,max_log].
        #[arg(long, value_delimiter = ',', value_parser = parse_statistic)]
        statistics: Option<Vec<StatisticKind>>,
        /// Comma-separated policies [all five].
        #[arg(long, value_delimiter = ',', value_parser = parse_policy)]
        policies: Option<Vec<PolicyKind>>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        zeta: f64,
        #[arg(long, default_value_t = 2.1)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
    },
    /// Monte Carlo crossing frequency of a random walk against a boundary, with its closed-form limit.
    BoundaryCheck {
        #[arg(long, value_parser = parse_boundary)]
        boundary: BoundaryKind,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        q0: u64,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        paths: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    s.parse().map_err(|e: banditlab_core::Error| e.to_string())
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    s.parse().map_err(|e: banditlab_core::Error| e.to_string())
}

fn parse_statistic(s: &str) -> Result<StatisticKind, String> {
    s.parse().map_err(|e: banditlab_core::Error| e.to_string())
}

fn parse_boundary(s: &str) -> Result<BoundaryKind, String> {
    s.parse().map_err(|e: banditlab_core::Error| e.to_string())
}

fn create_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> Result<(), String>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| io_err(path, e))?;
    fs::write(path, buf).map_err(|e| io_err(path, e))
}

/// Executes `run` and returns the paths written.
pub fn cmd_run(
    config: &Path,
    out: &Path,
    seed: Option<u64>,
    parallelism: Option<usize>,
) -> Result<Vec<PathBuf>, CliError> {
    let text = fs::read_to_string(config).map_err(|e| io_err(config, e))?;
    let mut cli_cfg = CliConfig::parse(&text)?;
    if let Some(p) = parallelism {
        cli_cfg.parallelism = p;
    }
    let resolved = cli_cfg.resolve(seed)?;
    let rows = monte_carlo(&resolved.to_run_config()?)?;
    create_out_dir(out)?;
    let summary = out.join("summary.csv");
    write_file(&summary, |buf| output::write_summary(buf, &rows).map_err(|e| e.to_string()))?;
    let meta = out.join("run_meta.json");
    write_file(&meta, |buf| {
        serde_json::to_writer_pretty(&mut *buf, &resolved).map_err(|e| e.to_string())?;
        buf.push(b'\n');
        Ok(())
    })?;
    Ok(vec![summary, meta])
}

#[allow(clippy::too_many_arguments)]
pub fn table1_rows(
    reps: u64,
    seed: u64,
    policy: PolicyKind,
    pooled: PooledChoice,
    alpha: f64,
    zeta: f64,
    ks: &[usize],
    horizons: &[usize],
    parallelism: usize,
) -> Result<Vec<banditlab_core::engine::SummaryRow>, CliError> {
    let k0 = ks.first().copied().unwrap_or(1);
    let base = RunConfig {
        reps,
        master_seed: seed,
        alpha,
        zeta,
        parallelism,
        statistics: vec![pooled.statistic(), StatisticKind::MaxLin, StatisticKind::MaxLog],
        correction: Correction::Bonferroni,
        ..RunConfig::new(ScenarioKind::Null, k0, 0.0, 2 * k0, policy)
    };
    Ok(table_type1(ks, horizons, &base)?)
}

pub fn run(cli: Cli, stdout: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out, seed, parallelism } => {
            for path in cmd_run(&config, &out, seed, parallelism)? {
                writeln!(stdout, "wrote {}", path.display()).map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        Command::Table1 { reps, seed, out, policy, pooled, alpha, zeta, ks, horizons, parallelism } => {
            let seed = config::resolve_seed(seed)?;
            let rows = table1_rows(reps, seed, policy, pooled, alpha, zeta, &ks, &horizons, parallelism)?;
            create_out_dir(&out)?;
            let path = out.join("type1.csv");
            write_file(&path, |buf| output::write_type1(buf, &rows).map_err(|e| e.to_string()))?;
            writeln!(stdout, "wrote {}", path.display()).map_err(|e| CliError::Io(e.to_string()))?;
        }
        Command::Power {
            scenario,
            k,
            horizon,
            deltas,
            reps,
            seed,
            out,
            statistics,
            policies,
            alpha,
            zeta,
            beta,
            parallelism,
        } => {
            let mut base = RunConfig {
                reps,
                master_seed: config::resolve_seed(seed)?,
                alpha,
                zeta,
                parallelism,
                ..RunConfig::new(scenario, k, 0.0, horizon, PolicyKind::Uniform)
            };
            base.policy.beta = beta;
            let deltas = deltas.unwrap_or_else(default_delta_grid);
            let statistics = statistics.unwrap_or_else(|| base.statistics.clone());
            let policies = policies.unwrap_or_else(|| PolicyKind::ALL.to_vec());
            let rows = power_sweep(scenario, &deltas, &policies, &statistics, &base)?;
            create_out_dir(&out)?;
            let path = out.join("power.csv");
            write_file(&path, |buf| output::write_power(buf, &rows).map_err(|e| e.to_string()))?;
            writeln!(stdout, "wrote {}", path.display()).map_err(|e| CliError::Io(e.to_string()))?;
        }
        Command::BoundaryCheck { boundary, a, q0, horizon, paths, seed } => {
            let seed = config::resolve_seed(seed)?;
            let est = crossing_mc(a, q0, horizon, paths, boundary, seed)?;
            let target = boundary.limit_probability(a);
            let z = if est.mc_se > 0.0 { (est.estimate - target) / est.mc_se } else { f64::NAN };
            writeln!(
                stdout,
                "boundary={boundary} a={} q0={q0} horizon={horizon} paths={paths} estimate={} mc_se={} target={} z={}",
                output::fmt_num(a),
                output::fmt_num(est.estimate),
                output::fmt_num(est.mc_se),
                output::fmt_num(target),
                output::fmt_num(z),
            )
            .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "banditlab: {e}");
            e.exit_code()
        }
    }
}
