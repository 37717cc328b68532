use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "chocolate",
    version,
    about = "Chocolate-bar break counts, their sequences, and checks of their arithmetic",
    after_help = "Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 unresolved."
)]
pub struct Cli {
    /// Output format for data written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Space-separated fields, one record per line.
    #[value(alias = "plain_lines")]
    Plain,
    /// Header row then one record per line.
    Csv,
    /// One JSON object per line; every value is a string.
    #[value(alias = "json_lines")]
    Json,
}

#[derive(Debug, Args)]
pub struct CacheArg {
    /// Directory holding the memo table (`chocolate-table.txt`).
    #[arg(long, env = "CHOCOLATE_CACHE_DIR")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one of the chocolate sequences.
    #[command(after_help = "CSV headers: table/triangle `m,n,value`; b/square `n,value`; distinct `k,value`.")]
    Gen {
        #[arg(long, value_enum)]
        seq: GenSeq,
        /// Largest index (rows for `triangle`, side for `table`).
        #[arg(long, conflicts_with = "limit")]
        max: Option<u32>,
        /// Largest value, for `distinct`.
        #[arg(long)]
        limit: Option<String>,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Count break sequences by brute force.
    #[command(after_help = "CSV header: `m,n,oracle` or, with --compare, `m,n,oracle,recursion,match`.")]
    Oracle {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Also run the recursion and fail on mismatch.
        #[arg(long)]
        compare: bool,
        /// Largest bar area the oracle accepts.
        #[arg(long, default_value_t = chocolate_core::oracle::DEFAULT_AREA_LIMIT)]
        area_limit: u32,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Factor sequence values into prime powers.
    #[command(after_help = "CSV headers: b `n,value,factorization`; table `m,n,value,factorization`.")]
    Factor {
        #[arg(long, value_enum)]
        seq: FactorSeq,
        /// Indices: `n` for b, `MxN` for table; comma separated.
        #[arg(long, value_delimiter = ',', required_unless_present = "max")]
        index: Vec<String>,
        /// Every index up to this bound instead of --index.
        #[arg(long, conflicts_with = "index")]
        max: Option<u32>,
        #[arg(long, default_value_t = chocolate_core::arith::DEFAULT_TRIAL_BOUND)]
        trial_bound: u64,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// p-adic valuations of sequence values.
    #[command(
        after_help = "CSV headers: b/square `n,nu` (+ `bound,holds`); table `m,n,nu` (+ `bound,holds`). \
                      Bounds (p = 2 only): B_n >= n for n > 1, A(n,n) >= 2n-2, A(m,n) >= m+n-2 for m,n > 1."
    )]
    Nu {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        seq: NuSeq,
        #[arg(long)]
        max: u32,
        /// Check the 2-adic lower bounds.
        #[arg(long)]
        check_bound: bool,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Residues of B_n or P_n modulo one or more moduli.
    #[command(after_help = "CSV header: `modulus,n,residue`.")]
    Mod {
        #[arg(long, value_enum)]
        seq: ModSeq,
        #[arg(long, value_delimiter = ',', required = true)]
        modulus: Vec<u64>,
        #[arg(long)]
        max: usize,
    },
    /// Detect the eventual period of B_n or P_n modulo M.
    #[command(after_help = "CSV header: `modulus,n_max,resolved,preperiod,period,eventually_zero`.")]
    Period {
        #[arg(long, value_enum)]
        seq: ModSeq,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        max: usize,
        /// Try divisors of M(M-1) as candidate periods first.
        #[arg(long)]
        hint_pp1: bool,
    },
    /// Check a generating-function identity with exact rationals.
    #[command(after_help = "CSV header: `check,degree,numerator,denominator`.")]
    Series {
        #[arg(long, value_enum)]
        check: SeriesCheck,
        #[arg(long)]
        order: usize,
    },
    /// Scan residues against one of the open conjectures.
    #[command(after_help = "CSV header: `conjecture,sequence,modulus,n_max,status,preperiod,period,notes`.")]
    Conjecture {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        /// Moduli to scan (primes for conjectures 1 and 3).
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = ModSeq::B)]
        seq: ModSeq,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenSeq {
    Table,
    Triangle,
    B,
    Square,
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorSeq {
    B,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NuSeq {
    B,
    Square,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModSeq {
    B,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesCheck {
    Riccati,
    Ode,
    Hypergeom,
}
