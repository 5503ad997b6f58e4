use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod coverage;
mod report;

use commands::CliError;
use config::{ConfigError, JobConfig, Params};

/// Numerical hyperfunction calculator.
///
/// Every command prints a table; with --output it also writes
/// `<command>.json` and `<command>.csv`. Exit status is 0 on success, 1 when
/// a check fails or a computation cannot be certified, 2 on bad input.
#[derive(Parser, Debug)]
#[command(name = "hypercalc", version)]
struct Cli {
    /// JSON job file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the JSON and CSV reports.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `corpus` for the built-in corpus, or a corpus file.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Contour offset from the real axis.
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Contour half-length.
    #[arg(long, global = true, allow_hyphen_values = true)]
    radius: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, allow_hyphen_values = true)]
    abs_tol: Option<f64>,
    /// Print the JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// List each library operation with the command that runs it.
    #[arg(long)]
    list_ops: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pair a hyperfunction with test functions.
    Pair(Opts),
    /// Moments and the Taylor coefficients of the Fourier transform.
    Moments(Opts),
    /// Finite asymptotic sum of delta derivatives.
    Expand(Opts),
    /// Parametric order check under dilation.
    ParamCheck(Opts),
    /// Fourier transform at sample frequencies.
    Fourier(Opts),
    /// Inverse Fourier transform of a smooth field.
    Invfourier(Opts),
    /// Realize a moment sequence.
    Realize(Opts),
    /// Build an infinite-order multiplier.
    Multiplier(Opts),
    /// Structural representation through a multiplier.
    Structural(Opts),
    /// Radon slices, directly and through the Fourier route.
    Radon(Opts),
    /// Helgason moment polynomials.
    Helgason(Opts),
    /// Radon asymptotic expansion.
    RadonExpand(Opts),
    /// Gevrey-type decay probe.
    Gevrey(Opts),
    /// Support test from moment growth.
    SupportCheck(Opts),
    /// Series solutions of an ODE with polynomial coefficients.
    OdeSolve(Opts),
    /// Run every acceptance criterion.
    VerifyAll(Opts),
}

/// Parameters shared by the subcommands; each reads the ones it needs.
#[derive(Args, Debug, Default)]
struct Opts {
    /// Corpus label.
    #[arg(long)]
    label: Option<String>,
    /// Defining expression in `z`, embedded as a real-analytic function.
    #[arg(long)]
    expr: Option<String>,
    /// Half-width of the strip of analyticity of --expr.
    #[arg(long)]
    strip: Option<f64>,
    /// asymptotic, tempered(g), infra-exponential or exp-decay(d).
    #[arg(long)]
    growth: Option<String>,
    /// Growth constant.
    #[arg(long)]
    constant: Option<f64>,
    /// Use the n-th derivative of delta as input.
    #[arg(long)]
    delta: Option<usize>,
    /// suite, gaussian, sech, odd_gaussian or shifted_gaussian.
    #[arg(long)]
    test: Option<String>,
    /// Also pair the standardized representative.
    #[arg(long)]
    standardize: bool,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Highest degree attempted for Helgason polynomials.
    #[arg(long)]
    k_cap: Option<usize>,
    #[arg(long)]
    q_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Number of seeded random directions.
    #[arg(long)]
    directions: Option<usize>,
    /// One explicit direction, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    direction: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<f64>>,
    /// Points t at which to sample Fourier-route slices.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t_grid: Option<Vec<f64>>,
    /// Field expression in `z` standing for the frequency variable.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    moments: Option<Vec<f64>>,
    /// Moment bound `M,R` in |mu_k| <= M R^k.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    bound: Option<Vec<f64>>,
    #[arg(long)]
    half_width: Option<f64>,
    /// Treat the moment list as complete (all later moments zero).
    #[arg(long)]
    complete: bool,
    #[arg(long)]
    weight_power: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    weight_table: Option<Vec<f64>>,
    /// Product length of the multiplier.
    #[arg(long)]
    terms: Option<usize>,
    /// Operator such as `t^2*D - 1`.
    #[arg(long)]
    op: Option<String>,
    /// delta or fp.
    #[arg(long)]
    basis: Option<String>,
    /// Leading coefficient, such as `1` or `1/2+3i`.
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    /// Complex shift `re,im`.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    tau: Option<Vec<f64>>,
    /// direct, fourier or both.
    #[arg(long)]
    route: Option<String>,
    /// Criterion ids to run.
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u32>>,
}

fn pair2(path: &str, v: Option<Vec<f64>>) -> Result<Option<[f64; 2]>, ConfigError> {
    match v {
        None => Ok(None),
        Some(v) if v.len() == 2 => Ok(Some([v[0], v[1]])),
        Some(v) => Err(ConfigError::new(path, format!("expected 2 values, got {}", v.len()))),
    }
}

impl Opts {
    fn into_params(self) -> Result<Params, ConfigError> {
        Ok(Params {
            label: self.label,
            expr: self.expr,
            strip: self.strip,
            growth: self.growth,
            constant: self.constant,
            delta: self.delta,
            test: self.test,
            standardize: self.standardize.then_some(true),
            order: self.order,
            lambdas: self.lambdas,
            k_cap: self.k_cap,
            q_max: self.q_max,
            eps: self.eps,
            directions: self.directions,
            direction: self.direction,
            xi: self.xi,
            t_grid: self.t_grid,
            field: self.field,
            moments: self.moments,
            bound: pair2("params.bound", self.bound)?,
            half_width: self.half_width,
            complete: self.complete.then_some(true),
            weight_power: self.weight_power,
            weight_table: self.weight_table,
            terms: self.terms,
            op: self.op,
            basis: self.basis,
            init: self.init,
            tau: pair2("params.tau", self.tau)?,
            route: self.route,
            only: self.only,
        })
    }
}

impl Command {
    fn split(self) -> (&'static str, Opts) {
        match self {
            Command::Pair(o) => ("pair", o),
            Command::Moments(o) => ("moments", o),
            Command::Expand(o) => ("expand", o),
            Command::ParamCheck(o) => ("param-check", o),
            Command::Fourier(o) => ("fourier", o),
            Command::Invfourier(o) => ("invfourier", o),
            Command::Realize(o) => ("realize", o),
            Command::Multiplier(o) => ("multiplier", o),
            Command::Structural(o) => ("structural", o),
            Command::Radon(o) => ("radon", o),
            Command::Helgason(o) => ("helgason", o),
            Command::RadonExpand(o) => ("radon-expand", o),
            Command::Gevrey(o) => ("gevrey", o),
            Command::SupportCheck(o) => ("support-check", o),
            Command::OdeSolve(o) => ("ode-solve", o),
            Command::VerifyAll(o) => ("verify-all", o),
        }
    }
}

fn job(cli: Cli) -> Result<JobConfig, ConfigError> {
    let base = match &cli.config {
        Some(p) => config::load(p)?,
        None => JobConfig::default(),
    };
    let (command, params) = match cli.command {
        Some(c) => {
            let (name, opts) = c.split();
            (Some(name.to_string()), opts.into_params()?)
        }
        None => (None, Params::default()),
    };
    let over = JobConfig {
        command,
        input: cli.input,
        contour: config::ContourDefaults {
            eta: cli.eta,
            radius: cli.radius,
            abs_tol: cli.abs_tol,
        },
        output: cli.output,
        seed: cli.seed,
        params,
    };
    let cfg = base.overlay(&over);
    cfg.validate()?;
    Ok(cfg)
}

fn threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var("HYPERCALC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| ConfigError::new("HYPERCALC_THREADS", format!("expected a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError::new("HYPERCALC_THREADS", e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_ops {
        for (op, cmd) in coverage::COVERAGE {
            println!("{op:<28}{cmd}");
        }
        return ExitCode::SUCCESS;
    }
    let json = cli.json;
    let result = threads()
        .and_then(|_| job(cli))
        .map_err(CliError::from)
        .and_then(|cfg| commands::run(&cfg).map(|r| (cfg, r)));
    let (cfg, report) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if json {
        print!("{}", report.json());
    } else {
        print!("{}", report.table());
    }
    if let Some(dir) = &cfg.output {
        if let Err(e) = report.write(dir) {
            eprintln!("error: cannot write reports to {}: {e}", dir.display());
            return ExitCode::from(1);
        }
    }
    match report.verdict {
        report::Verdict::Fail => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
