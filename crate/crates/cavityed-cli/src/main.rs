use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cavityed_cli::config::RunConfig;
use cavityed_cli::{presets, runner};

/// Exact diagonalization for few-body cavity QED models.
///
/// Exit codes: 0 success, 2 partial convergence, 3 configuration error,
/// 4 runtime error. Thread count follows RAYON_NUM_THREADS.
#[derive(Parser)]
#[command(name = "cavityed", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run configuration and write results.csv + manifest.json.
    Run {
        /// Path to a TOML run configuration.
        config: PathBuf,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        config: PathBuf,
    },
    /// Shipped run configurations.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// List preset names and one-line summaries.
    List,
    /// Print a preset configuration to stdout.
    Show { name: String },
}

fn load_config(path: &PathBuf) -> Result<RunConfig, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(4);
        }
    };
    match RunConfig::parse(&text) {
        Ok(cfg) => Ok(cfg),
        Err(e) => {
            eprintln!("configuration error in {}:\n{e}", path.display());
            Err(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config } => match load_config(&config) {
            Ok(cfg) => {
                let base = std::env::current_dir().unwrap_or_else(|_| PathBuf::from("."));
                match runner::run(&cfg, &base) {
                    Ok(status) => {
                        let dir = base.join(&cfg.output.directory);
                        eprintln!(
                            "{}: results in {}",
                            if status.exit_code() == 0 { "done" } else { "partial convergence" },
                            dir.display()
                        );
                        status.exit_code()
                    }
                    Err(e) => {
                        eprintln!("runtime error: {e:#}");
                        4
                    }
                }
            }
            Err(code) => code,
        },
        Command::Validate { config } => match load_config(&config) {
            Ok(cfg) => {
                println!(
                    "ok: {} on {} ({} gauge), lambda = {:.6e}, g/omega = {:.6e}",
                    cfg.experiment.kind.name(),
                    match cfg.model.kind {
                        cavityed_cli::config::ModelKind::ShinMetiu => "shin_metiu",
                        cavityed_cli::config::ModelKind::ScreenedHydrogen => "screened_hydrogen",
                    },
                    match cfg.model.gauge {
                        cavityed_cli::config::GaugeKind::Length => "length",
                        cavityed_cli::config::GaugeKind::Coulomb => "coulomb",
                    },
                    cfg.lambda(),
                    cfg.g_over_omega(),
                );
                0
            }
            Err(code) => code,
        },
        Command::Presets { action } => match action {
            PresetAction::List => {
                for p in presets::PRESETS {
                    println!("{:<28} {}", p.name, p.summary);
                }
                0
            }
            PresetAction::Show { name } => match presets::find(&name) {
                Some(p) => {
                    print!("{}", p.text);
                    0
                }
                None => {
                    eprintln!(
                        "unknown preset {name:?}; available: {}",
                        presets::PRESETS
                            .iter()
                            .map(|p| p.name)
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    3
                }
            },
        },
    };
    ExitCode::from(code as u8)
}
