//! Command-line front end: `simulate`, `estimate`, `cascade` and `analyze`.
//!
//! Every run writes its result and, next to it, `<output>.config.toml` with
//! all defaults filled in. Feeding that file back through `--config`
//! reproduces the output byte for byte.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::args::Cli;
use crate::config::{resolve, ConfigFile, SEED_ENV};
use crate::error::{CliError, CliResult};

pub use config::{CommandKind, RunConfig};
pub use error::CliError as Error;

/// Path of the resolved config written next to `output`.
pub fn config_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".config.toml");
    PathBuf::from(s)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Parse arguments, execute, and write outputs.
pub fn run(cli: Cli) -> CliResult<()> {
    let (kind, flags) = cli.command.split();
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let mut cfg = resolve(kind, flags.into(), file, std::env::var(SEED_ENV).ok())?;
    let body = commands::execute(&mut cfg)?;
    let unused = cfg.unused();
    if !unused.is_empty() {
        return Err(CliError::Usage(format!(
            "{} does not use: {}",
            commands::context(&cfg),
            unused.iter().map(|k| format!("--{k}")).collect::<Vec<_>>().join(", ")
        )));
    }
    match &cfg.output {
        Some(out) => {
            write(out, &body)?;
            write(&config_path(out), &cfg.to_toml())?;
        }
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            eprint!("{}", cfg.to_toml());
        }
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("E_USAGE: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.line());
            1
        }
    }
}
