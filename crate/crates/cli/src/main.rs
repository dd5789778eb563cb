//! `wciq`: batch front end over the `wciq` library.
//!
//! Every subcommand prints one canonical JSON document (or a text rendering
//! of it) on stdout and exits with 0 on success, 1 on a proven negative,
//! 2 on invalid input and 3 when a cap or budget runs out.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser)]
#[command(name = "wciq", version, about = "Combinatorics of weighted complete intersections")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct Global {
    /// Largest degree decided by the representability table.
    #[arg(long, global = true, default_value_t = wciq::DEFAULT_DP_CAP)]
    pub dp_cap: u64,
    /// Node budget for every backtracking search.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub node_budget: u64,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl Global {
    pub fn limits(&self) -> wciq::maps::Limits {
        wciq::maps::Limits {
            dp_cap: self.dp_cap,
            node_budget: self.node_budget,
        }
    }
}

#[derive(Args, Clone)]
pub struct PairInput {
    /// Pair file `{"weights": [...], "degrees": [...]}`, or `-` for stdin.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Any,
    Nice,
    Strong,
}

impl From<Mode> for wciq::nef::NefMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Any => wciq::nef::NefMode::Any,
            Mode::Nice => wciq::nef::NefMode::Nice,
            Mode::Strong => wciq::nef::NefMode::Strong,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComplexKind {
    All,
    Singular,
    Base,
    Sr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Compat {
    Image,
    Restriction,
}

#[derive(Subcommand)]
enum Command {
    /// Regularity, complexes, admissible family and strong construction in one report.
    Analyze {
        #[command(flatten)]
        input: PairInput,
        /// Mode of the exhaustive nef-partition search run alongside.
        #[arg(long, value_enum, default_value_t = Mode::Strong)]
        mode: Mode,
    },
    /// Emit S(rho), the base-locus complexes B(d) and the Stanley-Reisner generators.
    Complex {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, value_enum, default_value_t = ComplexKind::All)]
        kind: ComplexKind,
        /// Degrees for B(d); defaults to the degrees of the pair.
        #[arg(long, value_delimiter = ',', value_parser = parse_big)]
        degree: Vec<num_bigint::BigUint>,
    },
    /// Nef-partition search, strong construction and classification.
    Nef {
        #[command(subcommand)]
        action: NefAction,
    },
    /// Admissible families and the face-poset map they induce.
    Posetmap {
        #[command(subcommand)]
        action: PosetAction,
    },
    /// Weights whose singular complex is a given complex, and derived instances.
    Realize(RealizeArgs),
    /// Diff fast paths against brute force.
    Oracle(OracleArgs),
}

#[derive(Subcommand)]
pub enum NefAction {
    /// Exhaustive search in the given mode.
    Find {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, value_enum, default_value_t = Mode::Strong)]
        mode: Mode,
    },
    /// Build a strong nef-partition from an admissible family.
    Construct {
        #[command(flatten)]
        input: PairInput,
        /// Only `strong` is accepted.
        #[arg(long, value_enum, default_value_t = Mode::Strong)]
        mode: Mode,
    },
    /// Classify a partition file `{"parts": [[...], ...]}`.
    Classify {
        #[command(flatten)]
        input: PairInput,
        #[arg(long, value_enum, default_value_t = Mode::Any)]
        mode: Mode,
        #[arg(long)]
        partition: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum PosetAction {
    Build {
        #[command(flatten)]
        input: PairInput,
        /// Compatibility imposed along covers of the face poset.
        #[arg(long, value_enum, default_value_t = Compat::Image)]
        compat: Compat,
    },
    Verify {
        #[command(flatten)]
        input: PairInput,
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Args)]
pub struct RealizeArgs {
    /// Complex file `{"n_vertices": n, "facets": [[...], ...]}`.
    #[arg(long, required_unless_present = "skeleton")]
    pub complex: Option<PathBuf>,
    /// Map file `{"target": <complex>, "assignment": {"<v>": y}}`.
    #[arg(long, requires = "complex")]
    pub map: Option<PathBuf>,
    /// Copies of lcm(rho) appended to the degrees.
    #[arg(long, default_value_t = 0)]
    pub pad: usize,
    /// Weight-1 entries prepended to the weights.
    #[arg(long)]
    pub ones: Option<usize>,
    /// Contraction instance over the l-skeleton of the N-simplex, given as `l,N`.
    #[arg(long, conflicts_with = "complex", value_delimiter = ',', num_args = 1)]
    pub skeleton: Option<Vec<usize>>,
    /// Degrees equal to 2 in the contraction instance.
    #[arg(long, default_value_t = 0)]
    pub twos: usize,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long, short, required_unless_present = "random")]
    pub input: Option<PathBuf>,
    /// Cross-check this many seeded random small pairs instead.
    #[arg(long, conflicts_with = "input")]
    pub random: Option<usize>,
}

fn parse_big(s: &str) -> Result<num_bigint::BigUint, String> {
    s.parse().map_err(|_| format!("not a positive integer: {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let result = match cli.command {
        Command::Analyze { input, mode } => commands::analyze(&input, mode, &g),
        Command::Complex { input, kind, degree } => commands::complex(&input, kind, &degree, &g),
        Command::Nef { action } => commands::nef(action, &g),
        Command::Posetmap { action } => commands::posetmap(action, &g),
        Command::Realize(args) => commands::realize(&args, &g),
        Command::Oracle(args) => commands::oracle(&args, &g),
    };
    let (code, body) = match result {
        Ok(o) => (o.code, o.body),
        Err(f) => {
            eprintln!("wciq: {}", f.message);
            (f.code, f.body)
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(output::render(&body, g.format).as_bytes());
    ExitCode::from(code)
}
