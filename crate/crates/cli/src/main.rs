mod commands;
mod figures;
mod input;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "takagi", version, about = "Extrema of Takagi-class functions and Littlewood step roots")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Recursion depth for the step engine
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    /// Precision for value enclosures, in bits
    #[arg(long, global = true, default_value_t = 256)]
    pub precision_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub output: Format,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to all cores
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

impl RunConfig {
    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    pub fn jobs(&self) -> usize {
        self.jobs.map(|j| j as usize).unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "depth": self.depth,
            "precision_bits": self.precision_bits,
            "seed": self.seed,
            "jobs": self.jobs,
        })
    }
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct TargetArgs {
    /// Takagi-Landsberg parameter: -3/2, 0.75, sqrt2, golden, root:<c0,c1,..>:<lo>:<hi>
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Coefficient sequence: power-squared, finite:<c0,c1,..>, file:<path>
    #[arg(long)]
    pub seq: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Global maximizers and maximum value
    Maximize(TargetArgs),
    /// Global minimizers and minimum value
    Minimize(TargetArgs),
    /// Regime and extremizer-set structure
    Classify(TargetArgs),
    /// Value at a rational point
    Eval {
        #[command(flatten)]
        target: TargetArgs,
        /// Point of [0, 1]
        #[arg(long)]
        t: String,
        /// Enclosure width 2^-bits for series evaluation
        #[arg(long, default_value_t = 30)]
        width_bits: u32,
    },
    /// Real roots and step roots of Littlewood polynomials
    Littlewood {
        #[command(subcommand)]
        command: LittlewoodCommand,
    },
    /// Data for the figures
    Figure {
        /// Figure number 1..4
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        /// Grid points (figure 1: alpha samples; figures 2, 3: t samples)
        #[arg(long)]
        points: Option<usize>,
        /// Maximum degree for figure 4
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
    },
    /// Quick end-to-end checks with pass/fail lines
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum LittlewoodCommand {
    /// Count roots and step roots over all polynomials up to a degree
    Scan {
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        /// Count step roots only
        #[arg(long)]
        step_only: bool,
        #[arg(long, default_value_t = 200)]
        bins: usize,
        /// Directory for the JSON summary, histograms, and the root CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every root with 30 digits to roots.csv (slow at high degree)
        #[arg(long)]
        roots_csv: bool,
    },
    /// List the step roots up to a degree
    Steproots {
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        /// Keep only roots of this sign: pos or neg
        #[arg(long)]
        sign: Option<String>,
    },
    /// Gaps in the root set over an interval
    Gaps {
        #[arg(long, default_value_t = 16)]
        max_degree: usize,
        #[arg(long, default_value = "0.01")]
        resolution: String,
        #[arg(long, default_value = "0.5")]
        lo: String,
        #[arg(long, default_value = "2")]
        hi: String,
        /// Use step roots instead of all roots
        #[arg(long)]
        step_only: bool,
    },
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Unresolved(String),
    Budget(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Unresolved(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Unresolved(m) | Failure::Budget(m) | Failure::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    if let Some(j) = cli.config.jobs {
        // only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global();
    }
    let cfg = &cli.config;
    match cli.command {
        Command::Maximize(t) => commands::extremum(cfg, &t, takagi_core::step::Extremum::Max),
        Command::Minimize(t) => commands::extremum(cfg, &t, takagi_core::step::Extremum::Min),
        Command::Classify(t) => commands::classify(cfg, &t),
        Command::Eval { target, t, width_bits } => commands::eval(cfg, &target, &t, width_bits),
        Command::Littlewood { command } => commands::littlewood(cfg, command),
        Command::Figure { which, out, points, max_degree } => figures::figure(cfg, which, &out, points, max_degree),
        Command::Selftest => selftest::run(cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // deep exact comparisons recurse inside num-rational
    let worker = std::thread::Builder::new().stack_size(512 << 20).spawn(move || run(cli));
    let result = match worker.map(|h| h.join()) {
        Ok(Ok(r)) => r,
        _ => Err(Failure::Io("worker thread failed".into())),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
