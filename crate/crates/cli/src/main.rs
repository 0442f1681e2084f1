mod commands;
mod input;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrel::{Cf64, GaussRat};

/// Quantum relations over finite-dimensional von Neumann algebras,
/// relations on finite sets, and operators on the quantum torus.
///
/// Every verb reads JSON files and prints one JSON document on standard
/// output. Exit codes: 0 success, 2 validation or usage failure, 3 missing
/// or unreadable file, 4 malformed input.
#[derive(Parser)]
#[command(name = "qrel", version, max_term_width = 100)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Global {
    /// Gaussian rational arithmetic (the default)
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,

    /// Complex double arithmetic with a rank tolerance
    #[arg(long, global = true)]
    float: bool,

    /// Tolerance for float mode and for torus computations
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for randomized procedures
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random vector pairs drawn by the reflexivity sampler
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// Print a human-readable rendering instead of JSON
    #[arg(long, global = true)]
    table: bool,
}

/// The von Neumann algebra `M` a relation lives over.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Ambient {
    /// Generators of `M` (a list of matrices)
    #[arg(long, value_name = "FILE")]
    algebra: Option<PathBuf>,

    /// The diagonal matrices in `M_n`
    #[arg(long, value_name = "N")]
    masa: Option<usize>,

    /// All of `M_n`
    #[arg(long, value_name = "N")]
    full: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    /// Every bounded coefficient function
    All,
    /// Finitely supported coefficient functions
    Finite,
    /// Constant coefficient functions
    Constants,
    /// The span of the functions in `--span`
    Span,
}

#[derive(Subcommand)]
enum Verb {
    /// Commutant `M'` of the algebra generated by the input matrices
    Commutant {
        /// Generators (list of matrices)
        input: PathBuf,
    },

    /// Von Neumann algebra generated by the input matrices, with its commutant
    GenerateAlgebra { input: PathBuf },

    /// Smallest `M'`-bimodule containing the input matrices
    GenerateRelation {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
    },

    /// Whether a quantum relation is reflexive, symmetric, antisymmetric,
    /// transitive, and its resulting class
    Classify {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
    },

    /// Product `closure(span(V·W))` of two quantum relations
    Product {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long, value_name = "FILE")]
        left: PathBuf,
        #[arg(long, value_name = "FILE")]
        right: PathBuf,
    },

    /// Transpose `V* = {A* : A ∈ V}` of a quantum relation
    Transpose {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
    },

    /// Quantum relation over the diagonal masa given by a relation on a
    /// finite set: `span{E_xy : (x, y) ∈ R}`
    FromRelation {
        /// Relation JSON: {"atoms", "pairs"}
        input: PathBuf,
    },

    /// Relation on `{0, …, n−1}` underlying a quantum relation over the
    /// diagonal masa of `M_n`
    ToRelation { input: PathBuf },

    /// Lattice of lower sets of a preorder on a finite set
    Lattice {
        /// Relation JSON of a preorder
        input: PathBuf,
    },

    /// Preorder `x ≤ y` iff every member containing `y` contains `x`
    Preorder {
        /// Lattice JSON: {"atoms", "members"}
        input: PathBuf,
    },

    /// Left ideal of `M ⊗ M^op` corresponding to a quantum relation, as a
    /// space of coefficient matrices over the listed algebra basis
    Ideal {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
    },

    /// Quantum relation corresponding to a left ideal written by `ideal`
    FromIdeal {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
    },

    /// Projection in `M ⊗ M^op` generating the ideal of a quantum
    /// relation, and its complement `1 − P`
    Projection {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
    },

    /// Projections `P, Q` in an amplification with `P(V ⊗ I)Q = 0` and
    /// `P(A ⊗ I)Q ≠ 0` when `A` lies outside `V` (exact mode only)
    Separate {
        #[command(flatten)]
        ambient: Ambient,
        input: PathBuf,
        /// The operator `A` (one matrix)
        #[arg(long, value_name = "FILE")]
        operator: PathBuf,
    },

    /// Reflexive closure of an operator space, computed from rank-one
    /// annihilators found by seeded sampling
    Reflexive {
        input: PathBuf,
        /// Closure relative to the diagonal masa instead
        #[arg(long, conflicts_with = "tensor")]
        relative: bool,
        /// Test `V ⊗ I_D` instead of `V`
        #[arg(long, value_name = "D")]
        tensor: Option<usize>,
    },

    /// Fourier term `A_{k,l}` of a quantum torus operator
    TorusFourier {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
    },

    /// Cesàro mean `σ_N(A)` with Fejér weights
    TorusCesaro {
        input: PathBuf,
        #[arg(long)]
        n: u32,
    },

    /// Whether operators lie in the quantum torus and in the
    /// translation-invariant relation of a coefficient space
    TorusCheck {
        /// One operator, a list, or {"operators": [...]}
        input: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        space: SpaceArg,
        /// Coefficient functions spanning the space, for `--space span`
        #[arg(long, value_name = "FILE", required_if_eq("space", "span"))]
        span: Option<PathBuf>,
    },

    /// Lipschitz number of a function on a finite pseudometric space
    MetricLipschitz {
        /// Pseudometric JSON
        input: PathBuf,
        /// Function values, one scalar per atom
        #[arg(long, value_name = "FILE")]
        function: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = if cli.global.float {
        commands::run::<Cf64>(&cli.verb, &cli.global)
    } else {
        commands::run::<GaussRat>(&cli.verb, &cli.global)
    };
    match result {
        Ok(v) => {
            let text = if cli.global.table { table::render(&v) } else { pretty(&v) };
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qrel: {e}");
            emit(&pretty(&e.to_json()));
            ExitCode::from(e.exit_code())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

/// Writes to stdout, ignoring a reader that has gone away.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}
