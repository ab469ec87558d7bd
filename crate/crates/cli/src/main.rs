mod commands;
mod tables;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use cmcheck::SamplerMode;

#[derive(Parser, Debug)]
#[command(name = "cmcheck", version, about = "Complex multiplication tests for elliptic curves over number fields")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for surveys (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// CSV rows for survey and table output.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Print the wall-clock time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Faithful,
    Uniform,
}

impl From<Mode> for SamplerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Faithful => SamplerMode::PaperFaithful,
            Mode::Uniform => SamplerMode::ExactUniform,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Randomized CM test from sampled supersingular reductions.
    Test {
        curve: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Upper end of the prime interval.
        #[arg(long, default_value_t = 10_000)]
        xmax: u64,
        /// Use the interval bound from the field degree and coefficient weights instead of --xmax.
        #[arg(long)]
        paper_interval: bool,
        #[arg(long, value_enum, default_value_t = Mode::Uniform)]
        mode: Mode,
        #[arg(long, default_value_t = cmcheck::cmtest::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Endomorphism ring discriminant from ordinary Frobenius traces.
    Disc {
        curve: String,
        #[arg(long, default_value_t = 25)]
        max_records: usize,
        #[arg(long, default_value_t = 10_000)]
        xmax: u64,
        #[arg(long, value_enum, default_value_t = Mode::Uniform)]
        mode: Mode,
    },
    /// Certify non-CM once gcd(a² - 4q) over ordinary reductions is 1.
    OneSided {
        curve: String,
        #[arg(long, default_value_t = 10)]
        max_records: usize,
        #[arg(long, default_value_t = 10_000)]
        xmax: u64,
    },
    /// Supersingular density over all prime ideals of norm at most --bound.
    Survey {
        #[arg(required = true)]
        curves: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Exhaustive comparison of minpoly(j) with Hilbert class polynomials.
    Direct {
        curve: String,
        #[arg(long, default_value_t = cmcheck::classpoly::DEFAULT_DISC_CAP)]
        cap: u64,
    },
    /// Hilbert class polynomial H_D as an integer coefficient array, low to high.
    Hilbert {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Class number h(D).
    Classnum {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
    },
    /// Frobenius certificate that the mod-ℓ image is not solvable.
    Galois {
        curve: String,
        #[arg(long, default_value_t = 7)]
        ell: u64,
        #[arg(long, default_value_t = 200)]
        primes: usize,
    },
    /// GL2(F_ℓ) computations.
    Gl2 {
        #[arg(long)]
        ell: u32,
        /// Exact proportion of trace-zero elements.
        #[arg(long)]
        ratio: bool,
        /// Exhaustive soundness check of the non-solvability witnesses.
        #[arg(long)]
        sweep: bool,
    },
    /// Regenerate the supersingular density tables.
    PaperTables {
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        /// 1, 2, or both when omitted.
        #[arg(long)]
        table: Option<u8>,
    },
}

fn emit_error(kind: &str, message: &str) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "message": message.replace('\n', " ") });
    eprintln!("{line}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return emit_error("usage", first);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return emit_error("config", &e.to_string());
        }
    }
    let start = Instant::now();
    let result = commands::run(&cli);
    if cli.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => emit_error(e.kind(), &e.to_string()),
    }
}
