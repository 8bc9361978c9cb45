use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mhsim_cli::{execute, presets_list, presets_show, RunRequest, TraceLevel};

#[derive(Parser)]
#[command(name = "mhsim", version, about = "Simulate CCN forwarding strategies on multihomed terminals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario (`preset:NAME`).
    Run {
        config: String,
        /// Override a config value by dotted path, e.g. `consumer.pipeline=10`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Seed of the first replication.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// off, summary (trace hash per run) or full (per-run event logs).
        #[arg(long, default_value = "off")]
        trace: TraceLevel,
        /// Worker threads; results do not depend on it.
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// List or print the built-in scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    Show { name: String },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, overrides, seed, out, trace, jobs } => {
            let req = RunRequest { config, overrides, out_dir: out, seed, trace, jobs };
            match execute(&req) {
                Ok(o) => {
                    println!("{} runs, {} incomplete; summary in {}", o.runs, o.incomplete, o.summary_path.display());
                    o.exit_code()
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Presets { action: PresetAction::List } => {
            presets_list().iter().for_each(|l| println!("{l}"));
            0
        }
        Command::Presets { action: PresetAction::Show { name } } => match presets_show(&name) {
            Ok(text) => {
                println!("{text}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}
