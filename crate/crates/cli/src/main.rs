//! `cogh`: validate hierarchy and tree documents, check the causal-tree
//! embedding against belief propagation, and run the servo experiment.
//!
//! Exit status: 0 on success, 1 when a check fails (invalid document,
//! equivalence or dominance failure), 2 on bad input.

mod bp;
mod servo;
mod validate;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Unreadable or malformed input; exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError(e.to_string())
    }
}

/// `Ok(true)` pass, `Ok(false)` check failed.
pub type Outcome = Result<bool, InputError>;

pub fn read_file(path: &PathBuf) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &PathBuf, contents: &[u8]) -> Result<(), InputError> {
    std::fs::write(path, contents).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

#[derive(Parser)]
#[command(
    name = "cogh",
    version,
    about = "Cognitive hierarchies with top-down context"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a hierarchy or causal-tree document
    Validate(validate::Args),
    /// Compare an encoded causal tree with belief propagation
    Bp(bp::Args),
    /// Run the visual-servoing experiment
    Servo(servo::Args),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COGH_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate(args) => validate::run(&args),
        Command::Bp(args) => bp::run(&args),
        Command::Servo(args) => servo::run(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
