//! `recurlab`: runs the finite experiments and writes JSON, CSV or text reports.
//!
//! Exit codes: 0 when every check passes, 2 when a check fails, 1 on usage,
//! input or resource-limit errors.

mod experiments;
mod ingest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use ingest::SetFormat;
use recurlab::combinatorics::Kernel;
use report::OutputFormat;

#[derive(Parser, Debug)]
#[command(name = "recurlab", version, about = "Finite experiments on multiple recurrence")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest table any single construction may materialize, in entries.
    #[arg(long, global = true, env = "RECURLAB_BUDGET")]
    budget: Option<u64>,
    /// Wall-clock limit per experiment, in seconds.
    #[arg(long, global = true, default_value_t = 60)]
    time_limit: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// File holding the set.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "lines")]
    pub set_format: SetFormat,
}

#[derive(Args, Debug, Clone)]
pub struct Pattern {
    #[arg(long, short, default_value_t = 1, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long, short, default_value_t = 2, allow_negative_numbers = true)]
    pub b: i64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// p-th power identity and the density tables of the torsion construction.
    Counterexample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
        /// Use the action without the ξ correction.
        #[arg(long)]
        uncorrected: bool,
        #[command(flatten)]
        pattern: Pattern,
        /// B in C_p as exponents; default is the multiplicative Behrend set.
        #[command(flatten)]
        set: SetArgs,
        /// Which density table goes to the CSV output.
        #[arg(long, value_enum, default_value = "xp")]
        table: experiments::DensityTable,
    },
    /// Compares the average of f₁(T_{ag}x)f₂(T_{bg}x) with the Mackey-group integral.
    LimitFormula {
        /// System as a JSON file or inline JSON.
        #[arg(long)]
        system: String,
        #[command(flatten)]
        pattern: Pattern,
        /// Seed for the random root-of-unity test functions.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Order of the roots of unity used by the test functions.
        #[arg(long, default_value_t = 4)]
        modulus: u64,
    },
    /// Averages T_g f₁ · T_{2g} y over G = (ℤ/4)^d for eigenfunctions f₁.
    Example31 {
        #[arg(long)]
        d: usize,
        /// Only the eigenfunction with this character, e.g. `2,0`.
        #[arg(long, value_delimiter = ',')]
        character: Option<Vec<u64>>,
    },
    /// Checks that the average of x_∞ and y is x_∞·y.
    Example41 {
        #[arg(long)]
        d: usize,
    },
    /// Exact density μ(A ∩ T_{ag}A ∩ T_{bg}A) for every g.
    DensityScan {
        #[arg(long)]
        system: String,
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        pattern: Pattern,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
    /// Pattern-free sets: Behrend spheres, exact or greedy search, multiplicative sets.
    Behrend {
        /// Interval length N (additive) or ambient size for `--check`.
        #[arg(long)]
        n: Option<u64>,
        /// Odd prime for the multiplicative construction.
        #[arg(long)]
        p: Option<u64>,
        #[command(flatten)]
        pattern: Pattern,
        #[arg(long, value_enum, default_value = "sphere")]
        search: experiments::Search,
        /// Check an ingested set instead of constructing one.
        #[arg(long)]
        check: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lines")]
        set_format: SetFormat,
        #[arg(long, value_enum, default_value = "interval")]
        ambient: experiments::AmbientKind,
        /// Also write the set in bitset-binary format.
        #[arg(long)]
        bitset_out: Option<PathBuf>,
    },
    /// GHK seminorms ‖f‖_{U^1..U^k} of 1_A (or of 1) on a system.
    Seminorm {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[command(flatten)]
        set: SetArgs,
        /// Subtract the mean of 1_A.
        #[arg(long)]
        center: bool,
    },
    /// Classifies the ℤ² pattern {x, x+M₁n, x+M₂n}.
    Classify {
        /// Row-major entries `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
    },
    /// Counts |A ∩ (A−ad) ∩ (A−bd)| in ℤ/N for every d.
    Scan {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        pattern: Pattern,
        #[arg(long, value_enum, default_value = "bitset")]
        kernel: KernelArg,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Random set of this density when no file is given.
        #[arg(long)]
        random: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Counts x with x, x·m^k, x·m^{k+1} all in E ⊆ [1, N].
    MultiplicativeCount {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        set: SetArgs,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum KernelArg {
    Bitset,
    Naive,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Bitset => Kernel::Bitset,
            KernelArg::Naive => Kernel::Naive,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = cli.global;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .context("configuring the worker pool")?;
    }
    if let Some(b) = g.budget {
        recurlab::budget::set_table_budget(b);
    }
    let start = Instant::now();
    let (tx, rx) = mpsc::channel();
    let command = cli.command;
    std::thread::spawn(move || {
        let _ = tx.send(experiments::run(&command));
    });
    let mut report = match rx.recv_timeout(Duration::from_secs(g.time_limit)) {
        Ok(r) => r?,
        Err(mpsc::RecvTimeoutError::Timeout) => {
            anyhow::bail!("resource limit: experiment exceeded {} s", g.time_limit)
        }
        Err(mpsc::RecvTimeoutError::Disconnected) => anyhow::bail!("experiment aborted"),
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    let text = report.render(g.format)?;
    match &g.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}
