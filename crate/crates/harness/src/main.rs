use std::fs;
use std::io::Write;
use std::process::exit;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use sdioph::campaign;
use sdioph::config::{self, OutputFormat, Overrides};

/// Exact S-adic approximation experiments.
#[derive(Parser, Debug)]
#[command(name = "sdioph", version, disable_help_subcommand = true)]
struct Cli {
    /// Campaign kind: simplex1d, simplex, dirichlet, bcsum, decay or survey
    kind: String,
    /// Config file with key = value lines; flags override its keys
    #[arg(long)]
    config: Option<String>,
    /// Comma-separated finite primes, e.g. 2,3
    #[arg(long)]
    primes: Option<String>,
    /// Include the real place
    #[arg(long)]
    infty: bool,
    /// Ambient dimension
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    /// First level counted by survey threshold checks
    #[arg(long)]
    n0: Option<u32>,
    /// Approximation rate: pow:c,tau | powlog:c,tau,lambda | table:h=v,...
    #[arg(long)]
    psi: Option<String>,
    /// Measure decay exponent, a rational or 'auto'
    #[arg(long)]
    alpha: Option<String>,
    /// Digit measure, repeatable: 'p:3 digits:0,2 weights:1/2,1/2'
    #[arg(long)]
    measure: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sample_count: Option<usize>,
    /// Digits of sampled points kept per place
    #[arg(long)]
    precision: Option<usize>,
    /// Numerator range scanned by simplex1d
    #[arg(long)]
    numerator_bound: Option<i64>,
    /// 'denominator' or 'classical'
    #[arg(long)]
    dirichlet_exponent: Option<String>,
    /// Denominator cap for dirichlet witnesses
    #[arg(long)]
    height_bound: Option<u64>,
    /// Override the scheduled cover radius (a positive rational)
    #[arg(long)]
    radius: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// Add wall-clock columns (breaks bit-for-bit reproducibility)
    #[arg(long)]
    timings: bool,
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides {
        primes: cli.primes.clone(),
        infty: cli.infty,
        d: cli.d,
        n_min: cli.n_min,
        n_max: cli.n_max,
        n0: cli.n0,
        psi: cli.psi.clone(),
        alpha: cli.alpha.clone(),
        measures: cli.measure.clone(),
        seed: cli.seed,
        sample_count: cli.sample_count,
        precision: cli.precision,
        numerator_bound: cli.numerator_bound,
        dirichlet_exponent: cli.dirichlet_exponent.clone(),
        height_bound: cli.height_bound,
        radius: cli.radius.clone(),
        format: cli.format.clone(),
        out: cli.out.clone(),
        timings: cli.timings,
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config file '{path}'"))?;
            config::parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    let settings = config::resolve(&file, &overrides(cli))?;
    let table = campaign::run(&cli.kind, &settings)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    let json = settings.format == OutputFormat::Json;
    match &settings.out {
        Some(path) => {
            let mut f = fs::File::create(path)
                .with_context(|| format!("cannot create output file '{path}'"))?;
            table.write_to(&mut f, json)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_to(&mut lock, json)?;
            lock.flush()?;
        }
    }
    Ok(table.violation)
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(threads) = std::env::var("SDIOPH_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global();
        }
    }
    match execute(&cli) {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn main() {
    exit(run());
}
