use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::emit::Format;

/// Modular data of SU(N) WZW models and diagonal cosets.
///
/// Exit status: 0 when every requested check passes, 1 when a check fails,
/// 2 for usage or input-format errors, 3 for requests outside the
/// implemented scope.
#[derive(Debug, Parser)]
#[command(name = "coset", version)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Bound for matrix identities (unitarity, modular relations).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Bound for the distance of Verlinde sums from integers.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub integer_tolerance: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Cache directory for computed modular data.
    #[arg(long, global = true, env = "COSET_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SU(N) at level K.
    Wzw {
        n: u32,
        level: u32,
        #[arg(long, value_enum, default_value_t = WzwEmit::Verify)]
        emit: WzwEmit,
    },
    /// SU(N)_m1 x SU(N)_m2 / SU(N)_(m1+m2).
    Coset {
        n: u32,
        m1: u32,
        m2: u32,
        #[arg(long, value_enum, default_value_t = CosetEmit::Verify)]
        emit: CosetEmit,
    },
    /// Kac-Wakimoto checks on derived or supplied branching data.
    Kw(KwArgs),
    /// Lens-space invariants tau(L(p,1)).
    Invariant(InvariantArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WzwEmit {
    S,
    T,
    Fusion,
    Delta,
    Verify,
    /// Full modular-data JSON, re-readable with `invariant --data`.
    Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CosetEmit {
    Sectors,
    S,
    T,
    Fusion,
    Verify,
    SigmaTilde,
    Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KwCheck {
    Kwc,
    Kwh,
    Cond2,
    Prop32,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["diagonal", "branching"])))]
pub struct KwArgs {
    /// Diagonal coset SU(N)_m1 x SU(N)_m2 / SU(N)_(m1+m2).
    #[arg(long, num_args = 3, value_names = ["N", "M1", "M2"])]
    pub diagonal: Option<Vec<u32>>,

    /// Branching-table JSON file.
    #[arg(long)]
    pub branching: Option<PathBuf>,

    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_values_t = [KwCheck::Kwc, KwCheck::Kwh, KwCheck::Cond2, KwCheck::Prop32]
    )]
    pub checks: Vec<KwCheck>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("theory").required(true).args(["wzw", "coset", "data"])))]
pub struct InvariantArgs {
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub wzw: Option<Vec<u32>>,

    #[arg(long, num_args = 3, value_names = ["N", "M1", "M2"])]
    pub coset: Option<Vec<u32>>,

    /// Modular-data JSON file.
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Framing of the surgery unknot.
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,

    /// Compare the coset with its numerator and denominator (cosets only).
    #[arg(long)]
    pub probe: bool,
}
