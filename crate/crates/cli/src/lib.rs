//! Command-line driver: named-problem solves, convergence sweeps, timing
//! studies and the LQR vehicle demo. Everything is written as CSV with
//! `#`-prefixed metadata lines.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use liesys_core::control::VehicleSimulation;
use liesys_core::integrators::log_log_fit;
use liesys_core::{sweep, LieScheme, Method, Problem, StateVector, TimeGrid};

/// Exit code for bad arguments.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for numerical failures (chart violations, blow-ups).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(liesys_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        }
    }
}

impl From<liesys_core::Error> for CliError {
    fn from(e: liesys_core::Error) -> Self {
        use liesys_core::Error as E;
        match e {
            E::InvalidGrid(_) | E::InvalidInput(_) | E::DimensionMismatch { .. } | E::OutOfRange { .. } => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Numerical(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "liesys", version, about = "Lie-system solvers on matrix groups")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a named problem and write the trajectory.
    Solve(SolveArgs),
    /// Global errors over a list of step sizes, with fitted slopes.
    Converge(SweepArgs),
    /// Wall-clock medians over a list of step sizes.
    Bench(BenchArgs),
    /// Optimal vs constant control for the vehicle example.
    Lqr(LqrArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("resolution").required(true).args(["steps", "h"])))]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: Problem,
    /// magnus2 | magnus4 | rkmk4 | heun | rk4 | alternate-heun | alternate-rk4
    #[arg(long)]
    pub scheme: Method,
    /// Start time (defaults to the problem's interval).
    #[arg(long)]
    pub a: Option<f64>,
    /// End time (defaults to the problem's interval).
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Initial state as comma-separated reals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub problem: Problem,
    #[arg(long, value_delimiter = ',', required = true)]
    pub schemes: Vec<Method>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub hs: Vec<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Repetitions per (h, scheme); the median is reported.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

#[derive(Debug, Args)]
pub struct LqrArgs {
    #[arg(long, value_delimiter = ',', default_value = "1.2,1.15,1.1,1.05,1")]
    pub v_bars: Vec<f64>,
    /// Step of the backward Riccati solve.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, default_value = "rkmk4")]
    pub scheme: LieScheme,
    /// Directory for per-speed trajectory files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Cost table destination (standard output if omitted).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A fully resolved single-solve configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: Problem,
    pub method: Method,
    pub grid: TimeGrid,
    pub x0: StateVector,
}

impl RunConfig {
    pub fn from_args(args: &SolveArgs) -> CliResult<Self> {
        let (da, db) = args.problem.interval();
        let (a, b) = (args.a.unwrap_or(da), args.b.unwrap_or(db));
        let grid = match (args.steps, args.h) {
            (Some(n), None) => TimeGrid::new(a, b, n)?,
            (None, Some(h)) => TimeGrid::with_step(a, b, h)?,
            _ => return Err(CliError::Usage("give exactly one of --steps and --h".into())),
        };
        let x0 = match &args.x0 {
            Some(v) => StateVector::new(v.clone())?,
            None => args.problem.initial_state(),
        };
        let dim = args.problem.initial_state().dim();
        if x0.dim() != dim {
            return Err(CliError::Usage(format!(
                "{} needs a {dim}-dimensional initial state, got {}",
                args.problem,
                x0.dim()
            )));
        }
        Ok(RunConfig {
            problem: args.problem,
            method: args.scheme,
            grid,
            x0,
        })
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_block(header: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(num))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

/// Trajectory CSV: `t,x1..[,exact1..]`, exact columns when a closed form is
/// known for the start.
pub fn cmd_solve(cfg: &RunConfig) -> CliResult<String> {
    let sys = cfg.problem.system();
    let tr = cfg.method.solve(&sys, &cfg.grid, &cfg.x0)?;
    let t0 = cfg.grid.start();
    let has_exact = cfg.problem.exact_from(t0, &cfg.x0, t0).is_some();
    let d = cfg.x0.dim();
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    if has_exact {
        header.extend((1..=d).map(|i| format!("exact{i}")));
    }
    let rows = cfg.grid.nodes().zip(&tr.states).map(|(t, x)| {
        let mut row = vec![t];
        row.extend_from_slice(x.as_slice());
        if let Some(e) = cfg.problem.exact_from(t0, &cfg.x0, t) {
            row.extend_from_slice(e.as_slice());
        }
        row
    });
    let mut out = format!(
        "# problem={}\n# scheme={}\n# a={}\n# b={}\n# steps={}\n# h={}\n",
        cfg.problem,
        cfg.method,
        num(cfg.grid.start()),
        num(cfg.grid.end()),
        cfg.grid.steps(),
        num(cfg.grid.step_size())
    );
    out.push_str(&csv_block(&header, rows)?);
    if let Some(drift) = tr.max_det_drift() {
        out.push_str(&format!("# max_det_drift={}\n", num(drift)));
    }
    Ok(out)
}

/// Global errors per step size and method.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub problem: Problem,
    pub hs: Vec<f64>,
    pub methods: Vec<Method>,
    /// `errors[m][i]`: method `m` at `hs[i]`.
    pub errors: Vec<Vec<f64>>,
}

impl ConvergenceTable {
    pub fn slope(&self, m: usize) -> CliResult<f64> {
        Ok(liesys_core::integrators::estimate_order(&self.hs, &self.errors[m])?)
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut header = vec!["h".to_string()];
        header.extend(self.methods.iter().map(|m| format!("err_{m}")));
        let rows = self.hs.iter().enumerate().map(|(i, h)| {
            let mut row = vec![*h];
            row.extend(self.errors.iter().map(|e| e[i]));
            row
        });
        let mut out = format!("# problem={}\n", self.problem);
        out.push_str(&csv_block(&header, rows)?);
        for (i, m) in self.methods.iter().enumerate() {
            out.push_str(&format!("# slope_{m}={}\n", num(self.slope(i)?)));
        }
        Ok(out)
    }
}

fn check_sweep(args: &SweepArgs) -> CliResult<()> {
    if args.hs.len() < 3 {
        return Err(CliError::Usage("need at least three step sizes".into()));
    }
    let (a, b) = args.problem.interval();
    for &h in &args.hs {
        TimeGrid::with_step(a, b, h)?;
    }
    Ok(())
}

/// Convergence sweep; the step sizes run concurrently when the `parallel`
/// feature is on.
pub fn cmd_converge(args: &SweepArgs) -> CliResult<ConvergenceTable> {
    check_sweep(args)?;
    let errors = args
        .schemes
        .iter()
        .map(|&m| sweep::convergence_errors(args.problem, m, &args.hs))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceTable {
        problem: args.problem,
        hs: args.hs.clone(),
        methods: args.schemes.clone(),
        errors,
    })
}

/// Median wall-clock seconds per step size and method.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchTable {
    pub problem: Problem,
    pub hs: Vec<f64>,
    pub methods: Vec<Method>,
    /// `seconds[m][i]`: method `m` at `hs[i]`.
    pub seconds: Vec<Vec<f64>>,
}

impl BenchTable {
    /// Log-log slope and correlation of time against `h` for method `m`.
    pub fn fit(&self, m: usize) -> CliResult<(f64, f64)> {
        let fit = log_log_fit(&self.hs, &self.seconds[m])?;
        Ok((fit.slope, fit.correlation))
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut header = vec!["h".to_string()];
        header.extend(self.methods.iter().map(|m| format!("seconds_{m}")));
        let rows = self.hs.iter().enumerate().map(|(i, h)| {
            let mut row = vec![*h];
            row.extend(self.seconds.iter().map(|s| s[i]));
            row
        });
        let mut out = format!("# problem={}\n", self.problem);
        out.push_str(&csv_block(&header, rows)?);
        for (i, m) in self.methods.iter().enumerate() {
            let (slope, r) = self.fit(i)?;
            out.push_str(&format!("# slope_{m}={}\n# r_{m}={}\n", num(slope), num(r)));
        }
        Ok(out)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Timing study. Runs sequentially so the measurements do not compete for
/// cores.
pub fn cmd_bench(args: &BenchArgs) -> CliResult<BenchTable> {
    check_sweep(&args.sweep)?;
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    let problem = args.sweep.problem;
    let sys = problem.system();
    let x0 = problem.initial_state();
    let (a, b) = problem.interval();
    let mut seconds = Vec::with_capacity(args.sweep.schemes.len());
    for &m in &args.sweep.schemes {
        let mut per_h = Vec::with_capacity(args.sweep.hs.len());
        for &h in &args.sweep.hs {
            let grid = TimeGrid::with_step(a, b, h)?;
            let mut samples = Vec::with_capacity(args.reps);
            for _ in 0..args.reps {
                let start = Instant::now();
                let tr = m.solve(&sys, &grid, &x0)?;
                std::hint::black_box(&tr);
                samples.push(start.elapsed().as_secs_f64());
            }
            per_h.push(median(samples));
        }
        seconds.push(per_h);
    }
    Ok(BenchTable {
        problem,
        hs: args.sweep.hs.clone(),
        methods: args.sweep.schemes.clone(),
        seconds,
    })
}

/// Vehicle costs (×1000) per cruise speed.
#[derive(Clone, Debug, PartialEq)]
pub struct LqrTable {
    pub rows: Vec<liesys_core::control::VehicleComparison>,
}

impl LqrTable {
    pub fn to_csv(&self) -> CliResult<String> {
        let header = ["v_bar", "J_optimal_x1000", "J_constant_x1000"].map(String::from);
        let rows = self
            .rows
            .iter()
            .map(|r| vec![r.v_bar, 1000.0 * r.cost_optimal, 1000.0 * r.cost_constant]);
        csv_block(&header, rows)
    }
}

fn trajectory_csv(sim: &VehicleSimulation, optimal: bool) -> CliResult<String> {
    let (tr, law) = if optimal {
        (&sim.optimal, &sim.optimal_law)
    } else {
        (&sim.constant, &sim.constant_law)
    };
    let header = ["t", "dv", "du"].map(String::from);
    let rows = tr
        .grid
        .nodes()
        .zip(&tr.states)
        .map(|(t, x)| vec![t, x[0], law.input(t, x)[0]]);
    let mut out = format!("# v_bar={}\n# law={}\n", num(sim.v_bar), if optimal { "optimal" } else { "constant" });
    out.push_str(&csv_block(&header, rows)?);
    Ok(out)
}

/// LQR demo; cruise speeds run concurrently. With `out_dir`, also writes one
/// trajectory file per (speed, law).
pub fn cmd_lqr(args: &LqrArgs) -> CliResult<LqrTable> {
    if args.v_bars.is_empty() {
        return Err(CliError::Usage("need at least one cruise speed".into()));
    }
    let sims = sweep::map(&args.v_bars, |&v| VehicleSimulation::run(v, args.scheme, args.h))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
        for sim in &sims {
            for optimal in [true, false] {
                let name = format!("lqr_vbar_{}_{}.csv", sim.v_bar, if optimal { "optimal" } else { "constant" });
                fs::write(dir.join(name), trajectory_csv(sim, optimal)?)?;
            }
        }
    }
    let rows = sims.iter().map(|s| s.comparison()).collect::<Result<Vec<_>, _>>()?;
    Ok(LqrTable { rows })
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(args) => {
            let cfg = RunConfig::from_args(args)?;
            emit(args.output.as_deref(), &cmd_solve(&cfg)?)
        }
        Command::Converge(args) => emit(args.output.as_deref(), &cmd_converge(args)?.to_csv()?),
        Command::Bench(args) => emit(args.sweep.output.as_deref(), &cmd_bench(args)?.to_csv()?),
        Command::Lqr(args) => emit(args.output.as_deref(), &cmd_lqr(args)?.to_csv()?),
    }
}

/// Parses `args`, runs the command, reports errors on stderr and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
