use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cantrees::bigdp::Stat;
use cantrees_cli::*;

/// Exact enumeration and certified asymptotics for canonical t-ary trees.
#[derive(Parser)]
#[command(name = "cantrees", version)]
struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of trees with n internal vertices.
    Count {
        #[arg(short)]
        t: u32,
        #[arg(short)]
        n: usize,
    },
    /// Exact distribution of a parameter.
    Dist {
        #[arg(short)]
        t: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, value_parser = parse_stat)]
        stat: Stat,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Decimal digits of the probabilities.
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Exact mean and variance of a parameter.
    Moments {
        #[arg(short)]
        t: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, value_parser = parse_stat)]
        stat: Stat,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Uniformly random tree, printed as its level profile.
    Sample {
        #[arg(short)]
        t: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Power series coefficients of a, b or H = a/(1-b) at u = v = w = 1.
    Series {
        #[arg(short)]
        t: u32,
        /// Truncation order.
        #[arg(short = 'N', long)]
        order: usize,
        #[arg(long, default_value = "h")]
        which: String,
    },
    /// Certified asymptotic constants.
    Constants {
        /// Arity or range such as 2..10.
        #[arg(short, value_parser = parse_t_range)]
        t: std::ops::RangeInclusive<u32>,
        /// Compare with the published reference values.
        #[arg(long)]
        check_tables: bool,
        #[arg(long)]
        json: bool,
        /// Truncation order of the generating-function sums.
        #[arg(long = "J")]
        j: Option<u32>,
        /// Truncation order of the shifted sums.
        #[arg(long = "J-sigma")]
        j_sigma: Option<u32>,
        /// Number of p_m entries to report.
        #[arg(long, default_value_t = 20)]
        p_count: usize,
    },
    /// Exact distribution next to its limiting curve.
    Compare {
        #[arg(short)]
        t: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, value_parser = parse_stat)]
        stat: Stat,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Counts of trees with width at most K.
    WidthCaps {
        #[arg(short)]
        t: u32,
        #[arg(short = 'K')]
        k: u64,
        #[arg(long)]
        n_max: usize,
    },
    /// Certified enclosure of the radius q_K of width-capped trees.
    Qk {
        #[arg(short)]
        t: u32,
        #[arg(short = 'K')]
        k: u64,
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
    },
    /// Exact (or tolerance-bracketed) mean width.
    WidthMean {
        #[arg(short)]
        t: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Run a verification suite and print a JSON verdict.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(short, value_parser = parse_t_range, default_value = "2")]
        t: std::ops::RangeInclusive<u32>,
        /// Order of the series cross-check.
        #[arg(long, default_value_t = 120)]
        order: usize,
        /// Include every certified cell of the local-limit scans.
        #[arg(long)]
        scans: bool,
    },
}

fn parse_stat(s: &str) -> Result<Stat, String> {
    s.parse().map_err(|e: cantrees::bigdp::DpError| e.to_string())
}

fn configure_workers() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("CANTREES_WORKERS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("CANTREES_WORKERS={v:?} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Other(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, CliError> {
    configure_workers()?;
    match cli.command {
        Command::Count { t, n } => cmd_count(t, n),
        Command::Dist { t, n, stat, format, digits } => cmd_dist(t, n, stat, format, digits),
        Command::Moments { t, n, stat, format } => cmd_moments(t, n, stat, format),
        Command::Sample { t, n, seed } => cmd_sample(t, n, seed),
        Command::Series { t, order, which } => cmd_series(t, order, &which),
        Command::Constants { t, check_tables, json, j, j_sigma, p_count } => {
            cmd_constants(t, ConstantsArgs { j, j_sigma, p_count, check_tables, json })
        }
        Command::Compare { t, n, stat, digits } => cmd_compare(t, n, stat, digits),
        Command::WidthCaps { t, k, n_max } => cmd_width_caps(t, k, n_max),
        Command::Qk { t, k, precision } => cmd_qk(t, k, precision),
        Command::WidthMean { t, n, tol } => cmd_width_mean(t, n, tol),
        Command::Verify { suite, t, order, scans } => cmd_verify(suite, t, order, scans),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(text) => {
            if let Some(path) = output {
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
