use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toric_qfi_cli::config::read_config_file;
use toric_qfi_cli::{run, selftest, CliError, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "toricqfi", version, about = "Wilson loops, QFI and the topological index of the perturbed toric code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state reduced Wilson loops and QFI densities
    Ground(RunArgs),
    /// Sudden quench of the uniform code, with long-time closed forms
    QuenchUniform(RunArgs),
    /// Quench with random stabilizer couplings, ensemble averaged
    QuenchDisorder(RunArgs),
    /// Finite-temperature upper bound on the QFI density
    ThermalBound(RunArgs),
    /// Topological index over a grid of fields
    PhaseDiagram(RunArgs),
    /// Run the built-in consistency checks
    Selftest {
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat TOML file with experiment parameters
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one parameter, e.g. `--set l_region=32` (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed (overrides `seed` in the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

fn set_threads(n: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run_experiment(experiment: Experiment, args: RunArgs) -> Result<(), CliError> {
    set_threads(args.threads)?;
    let text = args.config.as_deref().map(read_config_file).transpose()?;
    let config = ExperimentConfig::resolve(experiment, text.as_deref(), &args.set, args.seed)?;
    for path in run::execute(&config, &args.out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_selftest(threads: Option<usize>) -> Result<(), CliError> {
    set_threads(threads)?;
    let checks = selftest::run_all();
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Selftest(failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ground(a) => run_experiment(Experiment::Ground, a),
        Command::QuenchUniform(a) => run_experiment(Experiment::QuenchUniform, a),
        Command::QuenchDisorder(a) => run_experiment(Experiment::QuenchDisorder, a),
        Command::ThermalBound(a) => run_experiment(Experiment::ThermalBound, a),
        Command::PhaseDiagram(a) => run_experiment(Experiment::PhaseDiagram, a),
        Command::Selftest { threads } => run_selftest(threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toricqfi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
