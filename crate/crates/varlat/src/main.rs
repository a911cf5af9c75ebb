use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use varlat::commands::{self, Outcome, Suite, SubgroupAction, VerifyOptions};
use varlat::random::DEFAULT_SEED;
use varlat_core::deduction::DEFAULT_DEPTH;
use varlat_core::DeriveOptions;

#[derive(Parser)]
#[command(version, about = "Special lattice elements, subgroup lattices and nil-semigroup varieties")]
struct Cli {
    /// Print the full result as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattices read from JSON files.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Subgroup lattice of the symmetric group S_n (n <= 5).
    Subgroups {
        n: usize,
        #[arg(value_enum)]
        action: SubgroupArg,
        /// Write the Hasse diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decisions on variety handles (T, X:m,n, Y:m,n, D:n:gens).
    Variety {
        #[command(subcommand)]
        action: VarietyAction,
    },
    /// Bounded equational deduction from a finite basis.
    Derive {
        /// Goal identity, `u = v` or `w = 0`.
        goal: String,
        /// Basis identity; repeat for several.
        #[arg(long = "basis", required = true)]
        basis: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Largest word length explored; defaults to the goal length plus two.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 5)]
        cap: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        letters: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        size: Option<usize>,
        /// Skip the deduction soundness pass of the oracle suite.
        #[arg(long)]
        no_derive: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LatticeAction {
    /// Classify every element as neutral, distributive, standard, modular, cancellable.
    Classify {
        path: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SubgroupArg {
    Build,
    Classify,
    Figure,
}

#[derive(Subcommand)]
enum VarietyAction {
    /// Whether the handle satisfies an identity.
    Check { handle: String, identity: String },
    Join { left: String, right: String },
    Meet { left: String, right: String },
    /// Permutations of k letters whose permutational identity holds.
    Permgroup { handle: String, k: usize },
    /// Multiplication table of the relatively free object on k generators.
    Free { handle: String, k: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    /// Family lattice: distributivity, low-end covers, cancellability.
    Figure1,
    /// Two subgroups with equal join and meet against a base give distinct
    /// varieties with equal join and meet.
    SubgroupWitness,
    /// Identities of the variety built from x^2 y, y x^2, x y x.
    UTheory,
    Incomparability,
    /// Word-problem decisions against free objects and bounded deduction.
    Oracles,
}

fn dispatch(command: Command) -> Result<Outcome, commands::CommandError> {
    match command {
        Command::Lattice {
            action: LatticeAction::Classify { path, dot },
        } => commands::lattice_classify(&path, dot.as_deref()),
        Command::Subgroups { n, action, dot } => {
            let action = match action {
                SubgroupArg::Build => SubgroupAction::Build,
                SubgroupArg::Classify => SubgroupAction::Classify,
                SubgroupArg::Figure => SubgroupAction::Figure,
            };
            commands::subgroups(n, action, dot.as_deref())
        }
        Command::Variety { action } => match action {
            VarietyAction::Check { handle, identity } => commands::variety_check(&handle, &identity),
            VarietyAction::Join { left, right } => commands::variety_lattice_op(&left, &right, true),
            VarietyAction::Meet { left, right } => commands::variety_lattice_op(&left, &right, false),
            VarietyAction::Permgroup { handle, k } => commands::variety_permgroup(&handle, k),
            VarietyAction::Free { handle, k } => commands::variety_free(&handle, k),
        },
        Command::Derive { goal, basis, depth, size } => {
            let opts = DeriveOptions {
                depth_bound: depth,
                size_bound: size,
                ..DeriveOptions::default()
            };
            commands::derive_goal(&basis, &goal, &opts)
        }
        Command::Verify {
            suite,
            cap,
            n,
            seed,
            samples,
            max_len,
            letters,
            depth,
            size,
            no_derive,
            dot,
        } => {
            let suite = match suite {
                SuiteArg::Figure1 => Suite::Figure1,
                SuiteArg::SubgroupWitness => Suite::SubgroupWitness,
                SuiteArg::UTheory => Suite::UTheory,
                SuiteArg::Incomparability => Suite::Incomparability,
                SuiteArg::Oracles => Suite::Oracles,
            };
            let opts = VerifyOptions {
                cap,
                n,
                seed,
                samples,
                max_len,
                letters,
                derive: DeriveOptions {
                    depth_bound: depth,
                    size_bound: size,
                    ..DeriveOptions::default()
                },
                skip_derive: no_derive,
                dot,
            };
            commands::verify(suite, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, text) = commands::run(|| dispatch(cli.command));
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&result).expect("plain data"));
    } else if result.status == commands::Status::Error {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
    ExitCode::from(result.status.exit_code() as u8)
}
