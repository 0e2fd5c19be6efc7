//! The `boardkit` command line.
//!
//! Exit codes: 0 ok, 1 invalid input, 2 I/O failure, 3 move rejected,
//! 4 analysis not supported for the game.

mod analyze;
mod play;

use std::io::Write;
use std::path::{Path, PathBuf};

use boardkit_core::{parse_game_definition, Diagnostic, GameDefinition};
use clap::{Parser, Subcommand};

pub use analyze::{AnalyzeMode, AnalyzeReport, DistanceReport, ScanEntry};
pub use play::{MoveScript, PlayTranscript, ScriptMove};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "boardkit", version, about = "Board games as data: serve, validate, play and analyze")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the game server.
    Serve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a definition file; prints one diagnostic per line.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Play a scripted game headlessly.
    Play {
        file: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive playability analysis of an ownership game.
    Analyze {
        file: PathBuf,
        #[command(subcommand)]
        mode: AnalyzeMode,
        /// Most states to explore per player count.
        #[arg(long, global = true)]
        budget: Option<u64>,
        #[arg(long, global = true)]
        json: bool,
    },
    /// Ontology distance between two definitions.
    Distance {
        a: PathBuf,
        b: PathBuf,
        /// Six comma-separated feature weights.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
}

/// A command's failure: exit code plus a message for stderr.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

type CmdResult = Result<(), Exit>;

/// Runs one command, writing its output to `out` and failures to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Serve { config } => serve(&config),
        Command::Validate { file, json } => validate(&file, json, out),
        Command::Play { file, script, seed, json } => play::run(&file, &script, seed, json, out),
        Command::Analyze { file, mode, budget, json } => analyze::analyze(&file, mode, budget, json, out),
        Command::Distance { a, b, weights, json } => analyze::distance(&a, &b, weights, json, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !e.message.is_empty() {
                let _ = writeln!(err, "{}", e.message);
            }
            e.code
        }
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

fn diagnostic_line(d: &Diagnostic) -> String {
    format!("{} {}: {}", d.code, d.location.as_deref().unwrap_or("/"), d.message)
}

/// Reads and validates a definition; diagnostics become an exit-1 message.
fn load_definition(path: &Path) -> Result<GameDefinition, Exit> {
    parse_game_definition(&read(path)?).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(diagnostic_line).collect();
        Exit::new(EXIT_INVALID, format!("{}: invalid definition\n{}", path.display(), lines.join("\n")))
    })
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> CmdResult {
    let text = serde_json::to_value(value)
        .and_then(|v| serde_json::to_string_pretty(&v))
        .map_err(|e| Exit::new(EXIT_IO, e.to_string()))?;
    emit(out, &text)
}

fn emit(out: &mut dyn Write, line: &str) -> CmdResult {
    writeln!(out, "{line}").map_err(|e| Exit::new(EXIT_IO, format!("cannot write output: {e}")))
}

fn validate(file: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let text = read(file)?;
    let diags = parse_game_definition(&text).err().unwrap_or_default();
    if json {
        emit_json(out, &diags)?;
    } else {
        for d in &diags {
            emit(out, &diagnostic_line(d))?;
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Exit::new(EXIT_INVALID, ""))
    }
}

fn serve(config: &Path) -> CmdResult {
    let config = boardkit_server::Config::load(Some(config)).map_err(|e| {
        let code = match e {
            boardkit_server::config::ConfigError::Read { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Exit::new(code, e.to_string())
    })?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Exit::new(EXIT_IO, e.to_string()))?;
    runtime
        .block_on(boardkit_server::serve(config, shutdown_signal()))
        .map_err(|e| Exit::new(EXIT_IO, e.to_string()))
}

async fn shutdown_signal() {
    #[cfg(unix)]
    {
        use tokio::signal::unix::{signal, SignalKind};
        match signal(SignalKind::terminate()) {
            Ok(mut term) => {
                tokio::select! {
                    _ = tokio::signal::ctrl_c() => {}
                    _ = term.recv() => {}
                }
            }
            Err(_) => {
                let _ = tokio::signal::ctrl_c().await;
            }
        }
    }
    #[cfg(not(unix))]
    {
        let _ = tokio::signal::ctrl_c().await;
    }
    log::info!("shutting down");
}
