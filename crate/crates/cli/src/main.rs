mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact and fractional coloring of circle graphs.
#[derive(Parser, Debug)]
#[command(name = "circlecolor", version)]
pub struct Cli {
    /// Print a JSON report on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Leave wall-clock times out of every report.
    #[arg(long, global = true)]
    pub no_timing: bool,

    /// More logging (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// LP feasibility, optimality and integrality tolerance.
    #[arg(long, global = true, env = "CIRCLECOLOR_TOL")]
    pub tol: Option<f64>,

    /// Stop branch and bound after this many LP solves (0 = unlimited).
    #[arg(long, global = true, default_value_t = 0)]
    pub node_limit: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Chromatic number, fractional chromatic number and an optimal coloring.
    Solve(SolveArgs),
    /// Fractional chromatic number from the root relaxation.
    Relax(InputArgs),
    /// Maximum weight independent set.
    Mwis(MwisArgs),
    /// Minimum number of stacks of bounded height.
    Stacks(StacksArgs),
    /// Random instances from shuffled endpoint sequences.
    Gen(GenArgs),
    /// Write a model as LP, MPS, or the graph as DIMACS.
    Export(ExportArgs),
    /// Statistics over random instances, as CSV.
    Bench(BenchArgs),
    /// Cross-check the solvers against brute force on random instances.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Instance file (`n`, then `n` lines `l r`); `-` reads stdin.
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormulationArg {
    Cg,
    Cl,
    As,
    Cgh,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Integer program to build.
    #[arg(long, value_enum, default_value_t = FormulationArg::Cg)]
    pub formulation: FormulationArg,

    /// Stack height; only with `--formulation cgh`.
    #[arg(long)]
    pub height: Option<usize>,

    /// Use the linear relaxation.
    #[arg(long)]
    pub relax: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub model: ModelArgs,

    /// Write the `vertex color parent` certificate here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MwisArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Comma-separated vertex weights (default: all 1).
    #[arg(long, conflicts_with = "weights_file", allow_hyphen_values = true)]
    pub weights: Option<String>,

    /// File with one weight per vertex, whitespace separated.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StacksArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Maximum stack height.
    #[arg(long, short = 'H')]
    pub height: usize,

    /// Write the plan (one stack per line, bottom to top) here.
    #[arg(long)]
    pub plan: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Vertices per instance.
    #[arg(short)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1)]
    pub count: usize,

    /// Write `instance_<k>.txt` files here instead of printing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Lp,
    Mps,
    Dimacs,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, value_enum, default_value_t = ExportFormat::Lp)]
    pub format: ExportFormat,

    /// Output file (default stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Write the variable metadata sidecar (JSON) here.
    #[arg(long)]
    pub metadata: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Instance sizes.
    #[arg(short, long, value_delimiter = ',', default_values_t = [5, 10, 30, 50])]
    pub n: Vec<usize>,

    /// Instances per size.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    #[arg(long, default_value_t = 2024)]
    pub seed: u64,

    /// Worker threads (default: one per core).
    #[arg(long)]
    pub threads: Option<usize>,

    /// Also write the CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Largest instance size (at most 12).
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,

    #[arg(long, default_value_t = 50)]
    pub trials: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.source);
            ExitCode::from(e.kind.code())
        }
    }
}
