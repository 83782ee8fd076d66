use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use raqmimo_cli::feasible::feasible_artifact;
use raqmimo_cli::figures::{figure, FigureId};
use raqmimo_cli::output::{write_atomic, CsvArtifact};
use raqmimo_cli::scenario::run_scenario;
use raqmimo_cli::verify::{run_suite, Suite};
use raqmimo_cli::{CliError, CliResult, ScenarioConfig};

#[derive(Parser)]
#[command(name = "raqmimo", version, about = "Rydberg-atomic multi-user MIMO uplink simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo rates for a scenario file.
    Run {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite; exits 2 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Minimum user distance for the linear superposition model.
    FeasibleRegion {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Data for one figure or the comparison table.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn load(path: &Path) -> CliResult<(ScenarioConfig, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Config(format!("{}: not UTF-8", path.display())))?;
    let cfg = ScenarioConfig::parse(text)?;
    Ok((cfg, bytes))
}

fn emit(artifact: &CsvArtifact, output: Option<&Path>) -> CliResult<()> {
    let text = artifact.render();
    match output {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("RAQMIMO_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Config(format!("RAQMIMO_THREADS: expected an integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("RAQMIMO_THREADS: {e}")))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Run { config, output } => {
            let (cfg, bytes) = load(&config)?;
            emit(&run_scenario(&cfg, &bytes)?, output.as_deref())
        }
        Command::FeasibleRegion { config, output } => {
            let (cfg, bytes) = load(&config)?;
            emit(&feasible_artifact(&cfg, &bytes)?, output.as_deref())
        }
        Command::Figure { id, config, output } => {
            let (cfg, bytes) = load(&config)?;
            emit(&figure(id, &cfg, &bytes)?, output.as_deref())
        }
        Command::Verify { suite } => {
            let checks = run_suite(suite)?;
            println!("name,measured,bound,verdict");
            for c in &checks {
                println!("{}", c.line());
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CliError::Verify(format!("{failed} of {} checks failed", checks.len())));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
