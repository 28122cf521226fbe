mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finite_core::{Error, InstanceKind};

#[derive(Parser, Debug)]
#[command(
    name = "finite",
    version,
    about = "Finite imaginary-time evolution by termwise LCU"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the spectrum and report norms, gap and ground overlap.
    Spectrum(Common),
    /// Sweep success probability and ground fidelity over a beta grid.
    Sweep(Common),
    /// Sweep amplified success over a beta grid and a list of query depths.
    Fpaa(Common),
    /// Closed-form plan for a target ground fidelity.
    Plan(PlanArgs),
    /// Sample joint-register measurements after one LCU pass.
    Sample(Common),
    /// Emit the gate list of the LCU program at one beta.
    Gates(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Instance file (graph edge list or Hamiltonian JSON).
    #[arg(long)]
    pub instance: PathBuf,
    /// Instance type; inferred from the extension when omitted.
    #[arg(long = "type", value_enum)]
    pub kind: Option<KindArg>,
    /// uniform | warm:p=<p>,gstar=<bits|auto> | file:<path>
    #[arg(long, default_value = "uniform")]
    pub init: String,
    /// One value, or start stop step.
    #[arg(long, num_args = 1..=3, allow_negative_numbers = true)]
    pub beta: Option<Vec<f64>>,
    /// Query depths, 0 or odd.
    #[arg(long = "L", value_delimiter = ',', num_args = 1.., default_value = "0,5,9,15")]
    pub depths: Vec<usize>,
    /// FPAA error parameter.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use circuit simulation instead of the closed form.
    #[arg(long)]
    pub gate_level: bool,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct PlanArgs {
    #[command(flatten)]
    pub common: Common,
    /// Target ground fidelity in (0, 1).
    #[arg(long)]
    pub target: f64,
    /// Use gamma_0 and the gap from enumeration, ignoring explicit values.
    #[arg(long)]
    pub measured: bool,
    #[arg(long)]
    pub gamma0: Option<f64>,
    #[arg(long)]
    pub gap: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e0: Option<f64>,
    /// Also report the beta reaching this state error.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Maxcut,
    Hubo,
}

impl From<KindArg> for InstanceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Maxcut => InstanceKind::MaxCut,
            KindArg::Hubo => InstanceKind::Hubo,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNREACHABLE: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Unbounded(_) => EXIT_UNREACHABLE,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(c) => commands::spectrum(c),
        Command::Sweep(c) => commands::sweep(c),
        Command::Fpaa(c) => commands::fpaa(c),
        Command::Plan(p) => commands::plan(p),
        Command::Sample(c) => commands::sample(c),
        Command::Gates(c) => commands::gates(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
