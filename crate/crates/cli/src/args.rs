use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "polardec",
    version,
    about = "Equisingularity type of the general polar of an irreducible plane curve germ"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Packages, branches, polar quotients and intersection multiplicities.
    Decompose(DecomposeArgs),
    /// Intersection multiplicities only (same as `decompose --matrix-only`).
    Matrix(MatrixArgs),
    /// Enriques diagram of the curve or of its general polar.
    Enriques(EnriquesArgs),
    /// Check the closed forms against independent computations.
    Verify {
        #[command(subcommand)]
        mode: VerifyMode,
    },
    /// List the classes in a range where the polar drops genus or is smooth.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct OutputFlags {
    /// Emit JSON.
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Emit plain text (the default).
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Class as `n:m1,m2,...`.
    pub class: String,
    #[command(flatten)]
    pub output: OutputFlags,
    /// Print only the intersection data.
    #[arg(long)]
    pub matrix_only: bool,
    /// Also report the alternative written forms of the polar quotient and
    /// of the same-package intersection formula.
    #[arg(long)]
    pub diagnostics: bool,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Class as `n:m1,m2,...`.
    pub class: String,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Curve,
    Polar,
}

#[derive(Debug, Args)]
pub struct EnriquesArgs {
    /// Class as `n:m1,m2,...`.
    pub class: String,
    /// Diagram of the curve or of its general polar.
    #[arg(value_enum, default_value = "curve")]
    pub which: Which,
    /// Graphviz DOT (the default).
    #[arg(long, conflicts_with = "text")]
    pub dot: bool,
    /// One line per point.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 12)]
    pub max_n: u64,
    #[arg(long, default_value_t = 60)]
    pub max_m: u64,
    /// Largest genus enumerated.
    #[arg(long, default_value_t = 4)]
    pub genus: usize,
}

#[derive(Debug, Subcommand)]
pub enum VerifyMode {
    /// Every class in a range: decomposition identities, closed forms
    /// against Noether's formula, polar valuation, classification verdicts.
    Cluster {
        #[command(flatten)]
        bounds: BoundArgs,
        /// One line per class.
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sample members, implicitize, and compare the order of the actual
    /// polar along the branch with the predicted total.
    Series {
        /// Classes as `n:m1,m2,...`.
        #[arg(required = true)]
        classes: Vec<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Extra samples allowed after a non-generic one.
        #[arg(long, default_value_t = 5)]
        retries: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanPredicate {
    GenusDrop,
    Smooth,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(value_enum)]
    pub predicate: ScanPredicate,
    #[command(flatten)]
    pub bounds: BoundArgs,
    #[arg(long, conflicts_with = "tsv")]
    pub json: bool,
    /// Tab-separated with a header line (the default).
    #[arg(long)]
    pub tsv: bool,
}
