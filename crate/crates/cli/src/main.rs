mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Knobs, Output};

#[derive(Parser, Debug)]
#[command(
    name = "proxtile",
    version,
    about = "Proximality, coincidence rank and spectrum of Meyer substitution tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Window radius (exact field element, generator `l`).
    #[arg(long, global = true)]
    radius: Option<String>,
    /// Pair-graph node budget.
    #[arg(long, global = true, default_value_t = 100_000)]
    node_budget: usize,
    /// Gap bound B for the complete-proximality probe.
    #[arg(long, global = true, default_value = "10")]
    gap_bound: String,
    /// Tolerance for eigenvalue tests, in (0, 1).
    #[arg(long, global = true, default_value_t = 1e-3)]
    tolerance: f64,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for report.txt and the other artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Primitivity, aperiodicity, Pisot family and Meyer diagnostics.
    Analyze { spec: PathBuf },
    /// Coincidence rank and the pure discrete spectrum verdict.
    Prox { spec: PathBuf },
    /// Eigenvalue lattice, direct limit and eigenvalue tests.
    Spectrum { spec: PathBuf },
    /// Model set sample, singularity and fiber of a cut-and-project scheme.
    Modelset {
        scheme: PathBuf,
        /// Shift x as `physical ; internal`.
        #[arg(long, default_value = "0 ; 1/3")]
        shift: String,
    },
    /// Substitution punctures against the calibrated model set.
    Crosscheck { spec: PathBuf, scheme: PathBuf },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    if !(cli.tolerance > 0.0 && cli.tolerance < 1.0) {
        return Err(CliError::Input("tolerance must lie in (0, 1)".into()));
    }
    if cli.node_budget == 0 {
        return Err(CliError::Input("node budget must be positive".into()));
    }
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Input("jobs must be positive".into()));
        }
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let knobs = Knobs {
        radius: cli.radius,
        node_budget: cli.node_budget,
        gap_bound: cli.gap_bound,
        tolerance: cli.tolerance,
    };
    match cli.command {
        Command::Analyze { spec } => commands::analyze(&spec, &knobs),
        Command::Prox { spec } => commands::prox(&spec, &knobs),
        Command::Spectrum { spec } => commands::spectrum(&spec, &knobs),
        Command::Modelset { scheme, shift } => commands::modelset(&scheme, &shift, &knobs),
        Command::Crosscheck { spec, scheme } => commands::crosscheck(&spec, &scheme, &knobs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli);
    let (output, code) = match result {
        Ok(o) => (Some(o), 0),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {}", msg);
            (None, 2)
        }
        Err(CliError::Budget(msg, partial)) => {
            eprintln!("budget exhausted: {}", msg);
            (partial, 3)
        }
    };
    if let Some(o) = &output {
        print!("{}", o.report);
        if let Some(dir) = &out {
            if let Err(e) = o.write_to(dir) {
                eprintln!("error: cannot write {}: {}", dir.display(), e);
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::from(code)
}
