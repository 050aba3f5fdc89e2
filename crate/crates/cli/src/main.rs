mod args;
mod commands;
mod manifest;
mod render;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command, Format};
use manifest::{ManifestError, RunManifest};
use render::Output;

const EXIT_DOMAIN: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Core(#[from] qugame::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0} golden check(s) failed")]
    Verify(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Manifest(_) => EXIT_USAGE,
            CliError::Core(qugame::Error::Domain(_)) => EXIT_DOMAIN,
            CliError::Core(qugame::Error::Resource(_)) | CliError::Write { .. } => EXIT_RESOURCE,
            CliError::Verify(_) => EXIT_VERIFY,
        }
    }
}

/// Everything a run needs once flags, manifest and environment are merged.
struct Plan {
    command: Command,
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
}

fn parse(words: Vec<String>) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(words).map_err(|e| {
        let _ = e.print();
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                ExitCode::SUCCESS
            }
            _ => ExitCode::from(EXIT_USAGE),
        }
    })
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var("QUGAME_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("QUGAME_SEED must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(None),
    }
}

fn plan(cli: Cli) -> Result<Result<Plan, ExitCode>, CliError> {
    let (command, m) = match (cli.command, &cli.manifest) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either a subcommand or --manifest, not both".into())),
        (None, None) => return Err(CliError::Usage("missing subcommand (try --help)".into())),
        (Some(c), None) => (c, None),
        (None, Some(path)) => {
            let m = RunManifest::load(path)?;
            let words = std::iter::once("qugame".to_string()).chain(m.argv()?).collect();
            let inner = match parse(words) {
                Ok(inner) => inner,
                Err(code) => return Ok(Err(code)),
            };
            match inner.command {
                Some(c) => (c, Some(m)),
                None => return Err(CliError::Usage("manifest names no subcommand".into())),
            }
        }
    };
    let seed = match cli.seed.or(m.as_ref().and_then(|m| m.seed)) {
        Some(s) => s,
        None => env_seed()?.unwrap_or(0),
    };
    Ok(Ok(Plan {
        command,
        seed,
        format: cli.format.or(m.as_ref().and_then(|m| m.format)).unwrap_or_default(),
        output: cli.output.or(m.and_then(|m| m.output)),
    }))
}

fn verify_output() -> (Output, usize) {
    let results = verify::verify_all(&verify::Goldens::default());
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    let checks: Vec<_> = results
        .iter()
        .map(|(name, r)| json!({"name": name, "pass": r.is_ok(), "detail": r.as_ref().err()}))
        .collect();
    let value = json!({"checks": checks, "passed": results.len() - failed, "failed": failed});
    (Output::new(value), failed)
}

fn verify_table(out: &Output) -> String {
    let mut s = String::new();
    for c in out.value["checks"].as_array().into_iter().flatten() {
        let name = c["name"].as_str().unwrap_or("?");
        match c["detail"].as_str() {
            None => s.push_str(&format!("PASS  {name}\n")),
            Some(why) => s.push_str(&format!("FAIL  {name}: {why}\n")),
        }
    }
    s.push_str(&format!("{} passed, {} failed\n", out.value["passed"], out.value["failed"]));
    s
}

fn execute(p: Plan) -> Result<(), CliError> {
    let (out, failed) = match &p.command {
        Command::Verify => verify_output(),
        cmd => (commands::run(cmd, p.seed)?, 0),
    };
    let text = match (p.format, &p.command) {
        (Format::Json, _) => render::json(&out),
        (Format::Table, Command::Verify) => verify_table(&out),
        (Format::Table, _) => render::table(&out),
    };
    match &p.output {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    if failed > 0 {
        return Err(CliError::Verify(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match parse(std::env::args().collect()) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    let result = plan(cli).and_then(|p| match p {
        Ok(p) => execute(p).map(|_| ExitCode::SUCCESS),
        Err(code) => Ok(code),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qugame: {e}");
            ExitCode::from(e.code())
        }
    }
}
