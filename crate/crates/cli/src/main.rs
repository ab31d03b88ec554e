//! `qkflag`: build J-series and run the consistency checks from the shell.
//!
//! Exit codes: 0 when every assertion passes, 1 when one fails, 2 on a
//! usage or configuration error.

mod checks;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flag_geometry::FlagShape;

use output::Format;

#[derive(Parser)]
#[command(name = "qkflag", version, about = "Exact J-series of flag varieties and their recursion checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a truncated J-series and write it as JSON.
    Build(BuildArgs),
    /// Run one of the checks; exit 1 if any assertion fails.
    Verify {
        check: Check,
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Residues of a localized series at a pole `λ^{1/m}`.
    Residue(ResidueArgs),
    /// Fixed points, orbits and Weyl transpositions with their indices.
    List {
        #[arg(long, value_parser = parse::shape)]
        shape: FlagShape,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Check {
    Recursion,
    Vanishing,
    Weyl,
    DegreeGap,
    Pairing,
    LevelDuality,
    Descent,
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Clone)]
pub struct VariantArgs {
    /// x-small, tw-y, untwisted-y, cotangent, eu-dual-taut, eu-taut or level.
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub level_i: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub level_l: Option<i64>,
}

#[derive(Args, Clone)]
pub struct RunConfig {
    /// Shape such as `1,2:3` (`;` is accepted for `:`).
    #[arg(long, value_parser = parse::shape)]
    pub shape: FlagShape,
    #[command(flatten)]
    pub variant: VariantArgs,
    #[arg(long, default_value_t = 2)]
    pub bound: i64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_parser = parse::shape)]
    shape: FlagShape,
    #[command(flatten)]
    variant: VariantArgs,
    #[arg(long, default_value_t = 2)]
    bound: i64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
pub struct ResidueArgs {
    #[arg(long, value_parser = parse::shape)]
    pub shape: FlagShape,
    #[command(flatten)]
    pub variant: VariantArgs,
    /// Index of the fixed point as printed by `list`.
    #[arg(long, default_value_t = 0)]
    pub point: usize,
    /// Orbit label `i,r,s`: the character `Λ_r / Λ_s`.
    #[arg(long, value_parser = parse::triple, conflicts_with = "lambda")]
    pub pole: Option<(usize, usize, usize)>,
    /// Any character, e.g. `L_2_2^3*L_2_1^-1`.
    #[arg(long, value_parser = parse::monomial)]
    pub lambda: Option<exact_core::Monomial>,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub bound: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw every `Λ_t` as an `m`-th power so the pole is rational.
    #[arg(long)]
    pub power_spec: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("QKFLAG_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("QKFLAG_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("QKFLAG_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, String> {
    init_threads()?;
    match cli.cmd {
        Command::Build(a) => {
            let variant = parse::variant(&a.variant, "x-small")?;
            if a.bound < 0 {
                return Err("bound must be nonnegative".into());
            }
            let series = j_series::build(&a.shape, variant, a.bound).map_err(|e| e.to_string())?;
            output::write_series(&series, &a.out)?;
            Ok(true)
        }
        Command::Verify { check, cfg } => {
            let report = checks::run(check, &cfg)?;
            output::write_report(&report, &cfg.out)?;
            Ok(report.pass)
        }
        Command::Residue(a) => {
            let report = checks::residue(&a)?;
            output::write_report(&report, &a.out)?;
            Ok(report.pass)
        }
        Command::List { shape, m, out } => {
            let report = checks::list(&shape, m)?;
            output::write_report(&report, &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("qkflag: {msg}");
            ExitCode::from(2)
        }
    }
}
