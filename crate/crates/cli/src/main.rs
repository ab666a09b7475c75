mod commands;
mod input;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "iwexp", version, about = "Exact Lie algebra contractions, expansions and BCH expansion groups")]
struct Cli {
    /// Output format. `machine` prints a single JSON document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest BCH word length the star product may use.
    #[arg(long, global = true, env = "IWEXP_ORDER_CAP", default_value_t = iwexp::bch::DEFAULT_ORDER_CAP)]
    order_cap: usize,

    #[command(subcommand)]
    command: Command,
}

/// Common to every command that needs an algebra and a subalgebra.
#[derive(Debug, clap::Args)]
pub struct SplitArgs {
    /// Built-in name (so3, sl2, heis3, iso2, abelianN) or algebra file.
    pub algebra: String,
    /// Subalgebra file (list of spanning vectors) or an inline literal like "0,0,1".
    #[arg(long)]
    pub subalgebra: String,
    /// Expansion order k.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check antisymmetry and the Jacobi identity of an algebra file.
    Validate {
        algebra: String,
    },
    /// Contract along a subalgebra (Inonu-Wigner) or a polynomial family.
    Contract {
        algebra: String,
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        subalgebra: Option<String>,
        /// Family file {"phis": [matrix, ...]}.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Also print the eps-brackets of basis pairs through eps^N.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Order-k expanded algebra along a subalgebra.
    Expand {
        #[command(flatten)]
        split: SplitArgs,
        /// Print the structure constants as an algebra file.
        #[arg(long)]
        emit_constants: bool,
    },
    /// Truncated BCH product of two tuples "v1; ...; vk; w".
    Star {
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Product (h1, a)(h2, b) in the expansion group. H elements are given
    /// by their adjoint matrices, rows separated by ';'.
    GroupMult {
        #[command(flatten)]
        split: SplitArgs,
        #[arg(long, visible_alias = "h", allow_hyphen_values = true)]
        h1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        h2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Worked example checks.
    Example {
        #[arg(value_parser = ["so3"])]
        name: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=1))]
        order: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Compare the BCH product with log(exp * exp) in a matrix representation.
    Oracle {
        algebra: String,
        /// Representation file; defaults to the built-in representation.
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the fixed-seed invariant suite.
    Verify {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Highest expansion order to check.
        #[arg(long, default_value_t = 3)]
        max_order: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cap = cli.order_cap;
    match &cli.command {
        Command::Validate { algebra } => commands::validate(algebra),
        Command::Contract {
            algebra,
            subalgebra,
            family,
            order,
        } => commands::contract(algebra, subalgebra.as_deref(), family.as_deref(), *order),
        Command::Expand { split, emit_constants } => commands::expand(split, *emit_constants),
        Command::Star { split, a, b } => commands::star(split, a, b, cap),
        Command::GroupMult { split, h1, a, h2, b } => {
            commands::group_mult(split, h1.as_deref(), a, h2.as_deref(), b, cap)
        }
        Command::Example { order, seed, .. } => commands::example(*order as usize, *seed),
        Command::Oracle {
            algebra,
            rep,
            order,
            trials,
            seed,
        } => commands::oracle(algebra, rep.as_deref(), *order, *trials as usize, *seed, cap),
        Command::Verify {
            trials,
            seed,
            max_order,
        } => verify::run(*trials as usize, *seed, *max_order, cap),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = run(&cli);
    output::emit(cli.format, result)
}
