use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

#[derive(Parser, Debug)]
#[command(name = "slicecat", version, about = "Causal-curve categories on finite event graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Maximum number of causal curves.
    #[arg(long, global = true, default_value_t = 4096, value_parser = positive)]
    pub curve_cap: usize,
    /// Maximum |C[X,Y]| swept as a powerset.
    #[arg(long, global = true, default_value_t = 12, value_parser = positive)]
    pub hom_cap: usize,
    /// Maximum number of objects in a view.
    #[arg(long, global = true, default_value_t = 1024, value_parser = positive)]
    pub object_cap: usize,
    /// Maximum number of elements in one coend.
    #[arg(long, global = true, default_value_t = 1 << 18, value_parser = positive)]
    pub element_cap: usize,
    /// `all`, or a comma-separated list of slice names / `{labels}`.
    #[arg(long, global = true, default_value = "all")]
    pub objects: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every sampled mode.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Ninja,
    Assoc,
    Coherence,
    Kernel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Vee,
    Space,
    Wedge,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    All,
    Unit,
    Yoneda,
    Wedge,
    Vee,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineArg {
    Factored,
    Exhaustive,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeepArg {
    Hom,
    Through,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyArg {
    Strict,
    Clip,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the description file of a T x W lattice.
    Lattice { times: usize, positions: usize },
    /// List the curve universe.
    Curves { file: PathBuf },
    /// Category laws, (co)equalizers, (co)products and non-monoidality.
    Laws { file: PathBuf },
    /// Basis sets of a wedge or vee presheaf.
    Tensor {
        file: PathBuf,
        #[arg(long, conflicts_with = "vee", required_unless_present = "vee")]
        wedge: bool,
        #[arg(long)]
        vee: bool,
        x: String,
        y: String,
        #[arg(long)]
        probe: Option<String>,
    },
    /// Representability of wedge and vee over slice pairs.
    Representability {
        file: PathBuf,
        /// `all`, or `X,Y`.
        #[arg(long, default_value = "all")]
        pairs: String,
    },
    /// Coend checks.
    Coend {
        file: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, value_enum, default_value_t = EngineArg::Factored)]
        engine: EngineArg,
        /// Seeded sample size in place of every outer tuple.
        #[arg(long)]
        sample: Option<usize>,
        /// Presheaf kinds for `ninja`.
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
        /// `W,X,Y,Z` for `assoc`.
        #[arg(long)]
        at: Option<String>,
        /// The slice `A` for `kernel`; every slice when absent.
        #[arg(long)]
        a: Option<String>,
        /// `X,Y,W` for `kernel`.
        #[arg(long)]
        probe: Option<String>,
        #[arg(long, value_enum, default_value_t = KeepArg::Hom)]
        keep: KeepArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
        policy: PolicyArg,
    },
    /// Search for an interchange witness.
    Witness {
        file: PathBuf,
        #[arg(long, value_enum)]
        interchange: Law,
    },
    /// Slices as predicates: X and Y read through a probe Z.
    Logic { file: PathBuf, x: String, y: String, z: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = commands::run(&cli);
    print!("{text}");
    ExitCode::from(code)
}
