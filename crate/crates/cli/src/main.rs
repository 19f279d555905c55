use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use drasim_cli::commands::{self, Flags};

/// Deterministic simulator for noise-robust distributed resource allocation.
#[derive(Parser)]
#[command(name = "drasim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// Directory for traces and summaries.
    #[arg(long, default_value = ".")]
    output: PathBuf,

    /// Replace the network seed with S, the init seed with S+1, and the
    /// noise seed with S+2 (cost seeds are never overridden).
    #[arg(long, value_name = "S")]
    seed_override: Option<u64>,

    /// Record full state vectors every N steps (0 disables snapshots).
    #[arg(long, value_name = "N")]
    stride: Option<u64>,

    /// Suppress progress output.
    #[arg(long)]
    quiet: bool,
}

impl CommonFlags {
    fn into_flags(self) -> Flags {
        Flags {
            output: self.output,
            seed_override: self.seed_override,
            stride: self.stride,
            quiet: self.quiet,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a single experiment document.
    Run {
        /// Experiment document (JSON).
        doc: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run several documents (or a preset) sharing everything but the
    /// dynamics, and emit a merged residual table.
    Compare {
        /// Experiment documents (JSON); omit when using --preset.
        docs: Vec<PathBuf>,
        /// Built-in preset name (see `drasim presets`).
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// List the built-in presets and their parameters.
    Presets,
    /// Validate a document without running it.
    Check {
        /// Experiment document (JSON).
        doc: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { doc, flags } => commands::cmd_run(&doc, &flags.into_flags()),
        Command::Compare {
            docs,
            preset,
            flags,
        } => commands::cmd_compare(&docs, preset.as_deref(), &flags.into_flags()),
        Command::Presets => {
            commands::cmd_presets();
            Ok(())
        }
        Command::Check { doc, flags } => commands::cmd_check(&doc, &flags.into_flags()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
