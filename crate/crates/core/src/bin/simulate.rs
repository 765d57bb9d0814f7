use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use usc_array::scenario::{list_scenarios, load, run_scenario, validate_config, write_outputs, Format, RunOptions};
use usc_array::{Error, Result};

#[derive(Parser)]
#[command(name = "simulate", version, about = "Ultrastrong-coupling cavity-array scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file or a canonical scenario id.
    Run {
        target: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_parser = ["csv", "json"])]
        format: Option<String>,
        /// Fixed photon truncation per mode, overriding the config.
        #[arg(long)]
        n_max: Option<usize>,
        /// Omit wall-clock time so repeated runs give byte-identical files.
        #[arg(long)]
        seedless_deterministic: bool,
    },
    /// List the canonical scenarios.
    List,
    /// Validate a config and print it with defaults filled in.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::List => {
            for e in list_scenarios() {
                println!("{:<6}  {}  [{}]", e.id, e.description(), e.anchor);
            }
            Ok(())
        }
        Command::Validate { config } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::io(config.display().to_string(), e))?;
            let cfg = validate_config(&text)?;
            let echo = toml::to_string(&cfg.echo).map_err(|e| Error::Contract(e.to_string()))?;
            print!("{echo}");
            Ok(())
        }
        Command::Run { target, out, format, n_max, seedless_deterministic } => {
            let cfg = load(&target)?;
            let format = match format {
                Some(f) => f.parse::<Format>()?,
                None => cfg.format,
            };
            if n_max == Some(0) {
                return Err(Error::Config("--n-max must be >= 1".into()));
            }
            let opts = RunOptions { n_max, deterministic: seedless_deterministic };
            let output = run_scenario(&cfg, &opts)?;
            for path in write_outputs(&output, &out, &cfg.output_path, format)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}
