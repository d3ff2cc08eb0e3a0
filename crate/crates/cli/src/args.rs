use std::path::PathBuf;

use clap::{Args as ClapArgs, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gna", version, about = "Linear and symplectic algebra over sampled generalized numbers")]
pub struct Args {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, ClapArgs)]
pub struct GlobalArgs {
    /// Grid override, `dyadic:K_MIN:K_MAX` or `geometric:RATIO:K_MIN:K_MAX`.
    #[arg(long, global = true, value_name = "SPEC")]
    pub grid: Option<String>,

    /// Negligibility order.
    #[arg(long, global = true, value_name = "N")]
    pub m_neg: Option<u32>,

    /// Largest order accepted as strictly nonzero.
    #[arg(long, global = true, value_name = "N")]
    pub m_inv: Option<u32>,

    /// Tail fraction of the grid used by the classifier.
    #[arg(long, global = true, value_name = "F")]
    pub tail: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Pretty)]
    pub output: OutputFormat,

    /// JSON file with default classifier settings; flags take precedence.
    #[arg(long, global = true, env = "GNA_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Pretty,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Hermitian,
    Skew,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a single net expression.
    Classify { expr: String },
    /// Determinant of a matrix, optionally of `A − λI`.
    Det {
        file: PathBuf,
        #[arg(long, value_name = "EXPR")]
        shift: Option<String>,
    },
    /// Solve `Ax = b`; the right-hand side file holds one column.
    Solve { matrix: PathBuf, rhs: PathBuf },
    /// Decide invertibility from the determinant.
    Invertible { file: PathBuf },
    /// Symplectic basis of the form with the given Gramian.
    SymplecticBasis { form: PathBuf },
    /// Extend the columns of a matrix to a basis.
    Extend { vectors: PathBuf },
    /// Annihilator of the submodule spanned by the columns of a matrix.
    Annihilator { form: PathBuf, submodule: PathBuf },
    /// Isotropic, symplectic, involutive or Lagrangian.
    ClassifySubmodule { form: PathBuf, submodule: PathBuf },
    /// Distinguished eigenvalue tuple.
    Eigen {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Block normal form of a skew-symmetric matrix.
    NormalForm { file: PathBuf },
    /// Test whether `λ` is an eigenvalue.
    CheckEigenvalue {
        file: PathBuf,
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        lambda: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Det { .. } => "det",
            Command::Solve { .. } => "solve",
            Command::Invertible { .. } => "invertible",
            Command::SymplecticBasis { .. } => "symplectic-basis",
            Command::Extend { .. } => "extend",
            Command::Annihilator { .. } => "annihilator",
            Command::ClassifySubmodule { .. } => "classify-submodule",
            Command::Eigen { .. } => "eigen",
            Command::NormalForm { .. } => "normal-form",
            Command::CheckEigenvalue { .. } => "check-eigenvalue",
        }
    }
}
