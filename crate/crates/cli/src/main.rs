use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rankforge::synth::SynthConfig;
use rankforge_cli::{ingest, load_config, run_experiment, synthesize, CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "rankforge", version, about = "Team rating experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a raw dataset export into canonical match CSV.
    Ingest {
        /// Adapter mapping file.
        #[arg(long)]
        adapter: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Reject matches whose teams differ in size.
        #[arg(long)]
        require_equal_team_sizes: bool,
    },
    /// Generate a synthetic match stream with known latent skills.
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Override a config entry, e.g. `--set seed=7`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run the experiment matrix and write the report.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Override a config entry, e.g. `--set systems=elo`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest {
            adapter,
            input,
            out,
            require_equal_team_sizes,
        } => {
            let report = ingest(&adapter, &input, &out, require_equal_team_sizes)?;
            eprintln!(
                "{} matches written to {} ({} rows skipped, {} matches rejected)",
                report.matches.len(),
                out.display(),
                report.rows_skipped,
                report.matches_skipped
            );
        }
        Command::Synth { config, out, overrides } => {
            let flat = load_config(config.as_deref(), &overrides)?;
            let synth = SynthConfig::from_config(&flat)?;
            let (matches, latent) = synthesize(&synth, &out)?;
            eprintln!("wrote {} and {}", matches.display(), latent.display());
        }
        Command::Run { config, out, overrides } => {
            let flat = load_config(config.as_deref(), &overrides)?;
            let experiment = ExperimentConfig::from_flat(&flat)?;
            let (dataset, results) = run_experiment(&experiment, &out)?;
            eprintln!(
                "{} matches, {} cells, metric {}; report in {}",
                dataset.matches.len(),
                results.cells.len(),
                results.metric,
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
