use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::float::Round;
use rug::Float;

use crownvol::ngon::QuadratureSpec;
use crownvol::PrecisionValue;

mod commands;
mod output;

use output::{Document, Format};

/// Volumes of moduli spaces of crowned hyperbolic surfaces.
#[derive(Parser, Debug)]
#[command(name = "crownvol", version)]
struct Cli {
    /// Working precision in bits for numeric evaluation.
    #[arg(long, global = true, env = "CROWNVOL_PRECISION")]
    precision: Option<u32>,
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "CROWNVOL_WORKERS")]
    workers: Option<usize>,
    /// Significant digits shown for exactly evaluated numbers.
    #[arg(long, global = true, default_value_t = 11)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Crown volume: closed form in d, its value at a neck length, or the total.
    Crown {
        #[arg(long)]
        n: u32,
        /// Neck length.
        #[arg(long, conflicts_with = "total")]
        d: Option<String>,
        /// Volume with the neck length integrated out.
        #[arg(long)]
        total: bool,
    },
    /// Annulus with two crowns.
    Annulus {
        #[arg(long)]
        a1: u32,
        #[arg(long)]
        a2: u32,
        /// Neck length; prints the fixed-neck value.
        #[arg(long, conflicts_with = "fixed")]
        d: Option<String>,
        /// Prints the fixed-neck volume as a function of d.
        #[arg(long)]
        fixed: bool,
    },
    /// Volume of the moduli space of ideal polygons.
    Ngon(NgonArgs),
    /// Crowned surface from a Weil-Petersson polynomial.
    Surface(SurfaceArgs),
    /// Replays the reference tables and oracle checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
    /// Finds an exact expression for a numeric value.
    Recognize(RecognizeArgs),
}

#[derive(Args, Debug)]
struct NgonArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "quadrature")]
    method: Method,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Independent random streams for Monte Carlo.
    #[arg(long, default_value_t = 64)]
    streams: u32,
    /// Series truncation index.
    #[arg(long, default_value_t = 4096)]
    cutoff: usize,
    /// Plain truncated series without tail extrapolation.
    #[arg(long)]
    no_extrapolate: bool,
    /// Relative tolerance for quadrature refinement.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Maximum quadrature refinement levels.
    #[arg(long)]
    max_levels: Option<u32>,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    cuffs: u32,
    /// Tine counts, one per crown.
    #[arg(long, value_delimiter = ',', required = true)]
    crowns: Vec<u32>,
    /// Weil-Petersson polynomial as JSON.
    #[arg(long)]
    wp: PathBuf,
    /// Neck lengths, one per crown; keeps the necks fixed.
    #[arg(long, value_delimiter = ',')]
    necks: Option<Vec<String>>,
    /// Cuff lengths, needed with --necks when there are cuffs.
    #[arg(long, value_delimiter = ',')]
    cuff_lengths: Option<Vec<String>>,
    /// Prints the fixed-neck volume as a function of the lengths.
    #[arg(long, conflicts_with = "necks")]
    fixed: bool,
}

#[derive(Args, Debug)]
struct RecognizeArgs {
    /// Decimal, `value ± error`, `@file` or `@-` for stdin.
    #[arg(long, allow_hyphen_values = true)]
    value: String,
    /// Weight of the monomials to search.
    #[arg(long)]
    degree: u32,
    /// Search powers of pi only.
    #[arg(long)]
    pi_only: bool,
    /// Allow Dirichlet beta values.
    #[arg(long)]
    beta: bool,
    /// Largest relation entry accepted; defaults to the largest the
    /// precision supports.
    #[arg(long)]
    max_height: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Quadrature,
    Series,
    Mc,
    UMc,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    /// Published reference tables.
    #[value(name = "paper-tables", alias = "tables")]
    Tables,
    Oracles,
    Conjectures,
    All,
}

/// Run settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: Option<u32>,
    pub seed: u64,
    pub digits: usize,
    pub quadrature: QuadratureSpec,
}

impl RunConfig {
    pub fn bits(&self, default: u32) -> u32 {
        self.precision_bits.unwrap_or(default)
    }
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<crownvol::Error> for Failure {
    fn from(e: crownvol::Error) -> Self {
        use crownvol::Error::*;
        let code = match e {
            NonConvergence(_) => 3,
            InsufficientPrecision { .. } => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

pub fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// A length or other input taken as exact up to binary rounding.
pub fn exact_input(s: &str, prec: u32) -> Result<PrecisionValue, Failure> {
    let parsed = Float::parse(s.trim()).map_err(|_| usage(format!("not a number: {s:?}")))?;
    let (v, ord) = Float::with_val_round(prec, parsed, Round::Nearest);
    if !v.is_finite() {
        return Err(usage(format!("not a finite number: {s:?}")));
    }
    if ord == std::cmp::Ordering::Equal || v.is_zero() {
        return Ok(PrecisionValue::exact(v));
    }
    let ulp = Float::with_val(32, 1) << (v.get_exp().unwrap_or(0) - prec as i32);
    Ok(PrecisionValue::new(v, ulp))
}

fn read_value(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn run(cli: Cli) -> Result<Document, Failure> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| usage(format!("worker pool: {e}")))?;
    }
    let mut quadrature = QuadratureSpec::default();
    if let Some(bits) = cli.precision {
        quadrature.precision_bits = bits;
    }
    let cfg = RunConfig { precision_bits: cli.precision, seed: cli.seed, digits: cli.digits.max(1), quadrature };
    match cli.command {
        Command::Crown { n, d, total } => commands::crown(&cfg, n, d.as_deref(), total),
        Command::Annulus { a1, a2, d, fixed } => commands::annulus(&cfg, a1, a2, d.as_deref(), fixed),
        Command::Ngon(a) => {
            let mut cfg = cfg;
            if let Some(t) = a.tolerance {
                cfg.quadrature.tolerance = t;
            }
            if let Some(l) = a.max_levels {
                cfg.quadrature.max_levels = l;
            }
            let method = match a.method {
                Method::Quadrature => commands::NgonMethod::Quadrature,
                Method::Series => commands::NgonMethod::Series { cutoff: a.cutoff, extrapolate: !a.no_extrapolate },
                Method::Mc => commands::NgonMethod::Mc { samples: a.samples, streams: a.streams },
                Method::UMc => commands::NgonMethod::UMc { samples: a.samples, streams: a.streams },
                Method::Conjecture => commands::NgonMethod::Conjecture,
            };
            commands::ngon(&cfg, a.n, method)
        }
        Command::Surface(a) => {
            let text = std::fs::read_to_string(&a.wp).map_err(|e| usage(format!("reading {}: {e}", a.wp.display())))?;
            let spec = crownvol::SurfaceSpec { genus: a.genus, cuffs: a.cuffs, crowns: a.crowns };
            commands::surface(&cfg, &spec, &text, a.necks.as_deref(), a.cuff_lengths.as_deref(), a.fixed)
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Tables => crownvol::verify::Suite::Tables,
                SuiteArg::Oracles => crownvol::verify::Suite::Oracles,
                SuiteArg::Conjectures => crownvol::verify::Suite::Conjectures,
                SuiteArg::All => crownvol::verify::Suite::All,
            };
            commands::verify(&cfg, suite)
        }
        Command::Recognize(a) => {
            let text = read_value(&a.value)?;
            let flags = if a.pi_only {
                crownvol::BasisFlags::pi_only()
            } else {
                crownvol::BasisFlags { include_beta: a.beta, ..Default::default() }
            };
            commands::recognize(&cfg, &text, a.degree, &flags, a.max_height.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let verify = matches!(cli.command, Command::Verify { .. });
    match run(cli) {
        Ok(doc) => {
            let stdout = io::stdout();
            match doc.write(format, &mut stdout.lock()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(1);
                }
                _ => {}
            }
            if verify {
                if let Some(first) = commands::first_failure(&doc) {
                    eprintln!("error: check failed: {first}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
