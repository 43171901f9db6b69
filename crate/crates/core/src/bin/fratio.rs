use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use fratio::bench::{quadrature_check, run_sweep, ExperimentConfig, QuadratureCheck, SweepMode};
use fratio::Error;

#[derive(Parser)]
#[command(name = "fratio", version, about = "Fourier ratio bounds and sparse recovery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measured Fourier ratio against the bound r_N / r_L.
    Fr(CommonArgs),
    /// Coefficient decay check on the torus.
    Decay(CommonArgs),
    /// Riemann-sum and L² lower-bound checks on the torus.
    Lemmas(CommonArgs),
    /// Sampling and ℓ¹ recovery.
    Recover(CommonArgs),
    /// Factorial sweep from a config file plus overrides.
    Sweep(SweepArgs),
    /// Gram and round-trip checks of the sphere quadrature.
    QuadratureCheck(QuadratureArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    setting: Option<String>,
    /// Battery function names, comma-separated.
    #[arg(long = "fn")]
    function: Option<String>,
    /// Grid sizes N, comma-separated.
    #[arg(long, conflicts_with = "l")]
    n: Option<String>,
    /// Bandwidths L, comma-separated.
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long = "c-univ")]
    c_univ: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Constraint radius replacing ε‖truth‖₂.
    #[arg(long)]
    delta: Option<f64>,
    /// Explicit sample sizes replacing the formula, comma-separated.
    #[arg(long = "sample-size")]
    sample_size: Option<String>,
    #[arg(long = "q-max")]
    q_max: Option<u64>,
    /// Run recovery even when the discretization hypothesis is not certified.
    #[arg(long)]
    allow_uncertified: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// fr, recover, rn_vs_logn, decay or lemmas.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct QuadratureArgs {
    /// Bandwidths, comma-separated.
    #[arg(long, default_value = "2,4,8,16,32")]
    l: String,
    /// Random signals per bandwidth.
    #[arg(long, default_value_t = 20)]
    signals: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(args: &CommonArgs, mode: Option<SweepMode>) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::parse(&fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(mode) = mode {
        cfg.mode = mode;
    }
    let overrides = [
        ("setting", args.setting.clone()),
        ("fn", args.function.clone()),
        ("n", args.n.clone()),
        ("l", args.l.clone()),
        ("eps", args.eps.clone()),
        ("c_univ", args.c_univ.clone()),
        ("trials", args.trials.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("radius", args.delta.map(|v| v.to_string())),
        ("sample_sizes", args.sample_size.clone()),
        ("q_max", args.q_max.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(value) = value {
            cfg.set(key, &value)?;
        }
    }
    if args.l.is_some() && args.setting.is_none() && args.config.is_none() {
        cfg.set("setting", "sphere")?;
    }
    if args.allow_uncertified {
        cfg.allow_uncertified = true;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    std::io::stdout().write_all(text.as_bytes())?;
    if let Some(path) = out {
        fs::write(path, text)?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn run_mode(args: &CommonArgs, mode: Option<SweepMode>) -> Result<(), Error> {
    let cfg = build_config(args, mode)?;
    let output = run_sweep(&cfg)?;
    if output.failures > 0 {
        warn!("{} of {} cells failed; see the status column", output.failures, output.rows.len());
    }
    emit(&output.to_csv(&cfg), cfg.out.as_ref())
}

fn run_quadrature(args: &QuadratureArgs) -> Result<(), Error> {
    let sizes: Vec<usize> = args
        .l
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Config(format!("--l: cannot parse {s:?}"))))
        .collect::<Result<_, _>>()?;
    if sizes.is_empty() || args.signals == 0 {
        return Err(Error::Config("need at least one bandwidth and one signal".into()));
    }
    let mut text = format!("# seed={}\n{}\n", args.seed, QuadratureCheck::CSV_HEADER);
    for l in sizes {
        let check = quadrature_check(l, args.signals, args.seed)?;
        text.push_str(&check.csv_row());
        text.push('\n');
    }
    emit(&text, args.out.as_ref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Fr(args) => run_mode(args, Some(SweepMode::Fr)),
        Command::Decay(args) => run_mode(args, Some(SweepMode::Decay)),
        Command::Lemmas(args) => run_mode(args, Some(SweepMode::Lemmas)),
        Command::Recover(args) => run_mode(args, Some(SweepMode::Recover)),
        Command::Sweep(args) => args
            .mode
            .as_deref()
            .map(str::parse)
            .transpose()
            .and_then(|mode| run_mode(&args.common, mode)),
        Command::QuadratureCheck(args) => run_quadrature(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Config(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
