//! `ffperm`: build, certify, count and invert permutation polynomials over
//! small finite fields.
//!
//! Exit codes: 0 on success, 1 when the mathematical answer is negative (the
//! payload then carries a witness), 2 on usage or input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ffperm::gf::{DEFAULT_MAX_ORDER, HARD_MAX_ORDER};
use ffperm::Exec;

#[derive(Parser, Debug)]
#[command(name = "ffperm", version, about = "Permutation polynomials over small finite fields")]
struct Cli {
    /// JSON file with any of {"max_q", "format", "jobs", "seed"}.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Worker threads; 1 forces the sequential path.
    #[arg(long)]
    jobs: Option<usize>,

    /// Seed for sampled cross-checks.
    #[arg(long)]
    seed: Option<u64>,

    /// Largest field cardinality accepted for exhaustive work.
    #[arg(long, env = "FFPERM_MAX_Q")]
    max_q: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max_q: Option<u64>,
    format: Option<Format>,
    jobs: Option<usize>,
    seed: Option<u64>,
}

/// Resolved settings: command line, then environment, then config file, then defaults.
#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub max_q: u64,
    pub format: Format,
    pub jobs: Option<usize>,
    pub seed: u64,
}

impl Config {
    pub fn exec(&self) -> Exec {
        match self.jobs {
            Some(1) => Exec::Sequential,
            _ => Exec::Parallel,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical field description.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Bijectivity, inversion, images and the local criterion.
    Pp {
        #[command(subcommand)]
        cmd: PpCmd,
    },
    /// The two-variant family over F_(q^2).
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Linearized polynomials over F_(q^n).
    Lin {
        #[command(subcommand)]
        cmd: LinCmd,
    },
    /// The x^r h(x^s) criterion.
    Mult {
        #[command(subcommand)]
        cmd: MultCmd,
    },
    /// Lookup-table export.
    Export {
        #[command(subcommand)]
        cmd: ExportCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    Show {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
        /// Monic modulus coefficients, constant term first.
        #[arg(long)]
        modulus: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// `P,M`.
    #[arg(long)]
    pub field: String,
    /// Monic modulus coefficients, constant term first.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Coefficient encodings, constant term first.
    #[arg(long)]
    pub poly: String,
}

#[derive(Subcommand, Debug)]
pub enum PpCmd {
    Verify(PolyArgs),
    Invert(PolyArgs),
    Image(PolyArgs),
    /// Certify through the fibers of PHI and report the induced map.
    Local {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        phi: String,
    },
    /// Invert through value tables PSI and a combiner expression.
    LocalInverse {
        #[command(flatten)]
        poly: PolyArgs,
        /// A value table (comma-separated images of 0..Q-1); repeat per map.
        #[arg(long, required = true)]
        psi: Vec<String>,
        /// JSON expression tree, e.g. ["add",["var",0],["var",1]].
        #[arg(long)]
        combiner: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value = "II")]
    pub variant: String,
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub u: u32,
    #[arg(long)]
    pub v: u32,
    #[arg(long)]
    pub c: u32,
    /// `b_1,…,b_(q-1)`.
    #[arg(long)]
    pub b: String,
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    Validate(ParamArgs),
    Build(ParamArgs),
    Invert(ParamArgs),
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "II")]
        variant: String,
        /// Also count distinct polynomials.
        #[arg(long)]
        dedupe: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LinArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    /// `a_0,…,a_(n-1)`.
    #[arg(long)]
    pub coeffs: String,
    /// Basis for the trace form; defaults to 1, z, …, z^(n-1).
    #[arg(long)]
    pub theta: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum LinCmd {
    Invert(LinArgs),
    Criteria(LinArgs),
    TraceForm(LinArgs),
    /// A map whose dual trace compositions are all surjective but which is
    /// not a permutation.
    Degenerate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        v: Option<String>,
        /// Nonzero F_q coefficients; defaults to all ones.
        #[arg(long)]
        a: Option<String>,
    },
    /// Smallest set of trace functionals that detects every non-permutation.
    MinWitness {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum MultCmd {
    Check {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        /// Coefficients of h, constant term first.
        #[arg(long)]
        h: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SboxFormat {
    CArray,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum ExportCmd {
    Sbox {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "format", value_enum, default_value = "c-array")]
        sbox_format: SboxFormat,
    },
}

fn resolve(cli: &Cli) -> anyhow::Result<Config> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str::<FileConfig>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => FileConfig::default(),
    };
    let cfg = Config {
        max_q: cli.max_q.or(file.max_q).unwrap_or(DEFAULT_MAX_ORDER),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        jobs: cli.jobs.or(file.jobs),
        seed: cli.seed.or(file.seed).unwrap_or(0),
    };
    if cfg.max_q < 4 || cfg.max_q > HARD_MAX_ORDER {
        bail!("max-q must lie in 4..={HARD_MAX_ORDER}, got {}", cfg.max_q);
    }
    if cfg.jobs == Some(0) {
        bail!("jobs must be at least 1");
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<commands::Outcome> {
    let cfg = resolve(&cli)?;
    #[cfg(feature = "parallel")]
    if let Some(n) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    match cli.command {
        Command::Field { cmd } => commands::field(&cfg, cmd),
        Command::Pp { cmd } => commands::pp(&cfg, cmd),
        Command::Family { cmd } => commands::family(&cfg, cmd),
        Command::Lin { cmd } => commands::lin(&cfg, cmd),
        Command::Mult { cmd } => commands::mult(&cfg, cmd),
        Command::Export { cmd } => commands::export(&cfg, cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.rendered);
            if outcome.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
