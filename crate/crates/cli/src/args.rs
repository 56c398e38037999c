//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "qbb",
    version,
    about = "Exact verification of quantum Borcherds-Bozec algebra identities over Q(q)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Datum file (JSON: indices, a_off_diag, nu, max_l).
    #[arg(long, short = 'd', global = true, value_name = "FILE")]
    pub datum: Option<PathBuf>,

    /// Height window of the positive and negative parts of U.
    #[arg(long, global = true, value_name = "H")]
    pub window: Option<usize>,

    /// Height budget of the Gram tables of the free algebra.
    #[arg(long, global = true, value_name = "H")]
    pub budget: Option<usize>,

    /// Depth of truncated highest-weight modules (default: max m_ij + 3).
    #[arg(long, global = true, value_name = "D")]
    pub depth: Option<usize>,

    /// Bound on the integer parameters m, n, p of the identity suites.
    #[arg(long, global = true, value_name = "N")]
    pub max_param: Option<i64>,

    /// Bound on the level l of imaginary generators in the suites.
    #[arg(long, global = true, value_name = "L")]
    pub max_level: Option<i64>,

    /// Bound on l*beta for the f/g families.
    #[arg(long, global = true, value_name = "N")]
    pub max_lbeta: Option<i64>,

    /// Height bound of degree sweeps.
    #[arg(long, global = true, value_name = "H")]
    pub max_height: Option<usize>,

    /// Sampled vectors per module.
    #[arg(long, global = true, value_name = "N")]
    pub samples: Option<usize>,

    /// Seed of every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory of the on-disk Gram cache (falls back to QBB_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Disable the on-disk cache, ignoring QBB_CACHE_DIR as well.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Gram matrix of the form in one degree.
    Gram {
        /// Degree as `name:mult,...` (e.g. `i0:2,i1:1`); omitted indices are 0.
        #[arg(long)]
        degree: String,
    },
    /// Print the primitive generator a_{il} and tau_{il}.
    Primitive {
        /// Index name.
        #[arg(long)]
        i: String,
        /// Level.
        #[arg(long)]
        l: usize,
    },
    /// Check that every Serre element lies in the radical of the form.
    SerreCheck,
    /// Check that the radical of the form is a two-sided ideal.
    RadicalCheck,
    /// Run registered identities.
    IdentitySuite {
        /// Suite(s) to run: foundations, symmetries, form, modules (default: all).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Run only the named identities.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// List the registry instead of running it.
        #[arg(long)]
        list: bool,
    },
    /// Check the braid relation of a pair of real indices on U and on modules.
    BraidCheck {
        /// The pair as `i,j`.
        #[arg(long)]
        pair: String,
    },
    /// Build an irreducible highest-weight module and print its character.
    Module {
        /// Highest weight as `name=value,...` of h-values; omitted indices are 0.
        #[arg(long)]
        weight: String,
    },
    /// Check invariance of the form under the symmetries.
    FormInvariance,
    /// Inspect or clear the on-disk Gram cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum CacheAction {
    /// List cached Gram tables grouped by datum.
    Inspect,
    /// Delete every cached Gram table.
    Clear,
}
