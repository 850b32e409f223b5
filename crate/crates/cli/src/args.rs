use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "kpoint", version, about = "Upper bounds on the independence number: k-point and copositive hierarchies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Independence number and a maximum independent set.
    Alpha(AlphaArgs),
    /// The k-point bound Δ_k.
    Delta(DeltaArgs),
    /// ξ_r*, the copositive dual bound (an LP).
    XiDual(XiArgs),
    /// ξ_r, the copositive primal bound (an LP over measures).
    XiPrimal(XiArgs),
    /// A table of Δ_k, ξ_r*, ξ_r with sandwich and monotonicity checks.
    Sweep(SweepArgs),
    /// Transfer a Δ_{r+2} solution to a ξ_r solution and check every step.
    TransferVerify(TransferArgs),
    /// Build F and Z₀ and find the smallest cone level containing Z₀.
    Certify(CertifyArgs),
    /// Write a program in sparse SDPA format.
    ExportSdpa(ExportArgs),
    /// Run the built-in invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// JSON report path; `-` for standard output.
    #[arg(long, default_value = "-")]
    pub report: String,
    /// Feasibility and residual tolerance for the verification checks.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Interior-point stopping tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub solver_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct GraphArg {
    /// `cycle:5`, `path:3`, `complete:4`, `empty:3`, `petersen`, `kneser:5,2`,
    /// `gnp:n,p,seed`, or a DIMACS file.
    #[arg(long)]
    pub graph: String,
}

#[derive(Args, Debug, Serialize)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Include the witness measure ν in the report.
    #[arg(long)]
    pub witness: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FormArg {
    Multiset,
    Tuple,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Args, Debug, Serialize)]
pub struct XiArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = FormArg::Multiset)]
    pub form: FormArg,
    /// Exact rational simplex or floating interior point.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 4)]
    pub kmax: usize,
    #[arg(long, default_value_t = 2)]
    pub rmax: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1e-5)]
    pub sandwich_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub monotone_tol: f64,
    /// Bound table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Cells solved in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct TransferArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Use the Dirac measure of a maximum independent set, in exact arithmetic,
    /// instead of a solved Δ_{r+2} witness.
    #[arg(long)]
    pub dirac: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Lower bound on the spectrum of F.
    #[arg(long, default_value_t = 1.0)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.25)]
    pub theta: f64,
    #[arg(long, default_value_t = 6)]
    pub rcap: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Certify this matrix (JSON array of rows) instead of Z₀.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ProgramArg {
    Delta,
    DeltaFull,
    XiDual,
    XiPrimal,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, value_enum)]
    pub program: ProgramArg,
    /// k for Δ programs, r for ξ programs.
    #[arg(long)]
    pub level: usize,
    #[arg(long, value_enum, default_value_t = FormArg::Multiset)]
    pub form: FormArg,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SelftestArgs {
    /// Seed for the random graphs in the suite.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random graphs per randomized check.
    #[arg(long, default_value_t = 5)]
    pub graphs: usize,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Alpha(a) => &a.common,
            Command::Delta(a) => &a.common,
            Command::XiDual(a) | Command::XiPrimal(a) => &a.common,
            Command::Sweep(a) => &a.common,
            Command::TransferVerify(a) => &a.common,
            Command::Certify(a) => &a.common,
            Command::ExportSdpa(a) => &a.common,
            Command::Selftest(a) => &a.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Alpha(_) => "alpha",
            Command::Delta(_) => "delta",
            Command::XiDual(_) => "xi-dual",
            Command::XiPrimal(_) => "xi-primal",
            Command::Sweep(_) => "sweep",
            Command::TransferVerify(_) => "transfer-verify",
            Command::Certify(_) => "certify",
            Command::ExportSdpa(_) => "export-sdpa",
            Command::Selftest(_) => "selftest",
        }
    }
}
