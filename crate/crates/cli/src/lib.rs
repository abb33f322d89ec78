//! `swrbd`: run, verify and report basic-class searches from the command line.
//!
//! Exit codes: 0 success, 1 domain or validation failure, 2 usage error.

pub mod certificate;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swrbd_core::presets::{parse_document, preset_document};
use swrbd_core::search::{audit, CheckStatus, ConfigError};
use swrbd_core::{
    run_pipeline_with, ConfigDocument, LatticeError, PipelineOptions, SearchConfig, PRESET_LABELS,
};
use thiserror::Error;

pub use certificate::Certificate;

#[derive(Debug, Parser)]
#[command(
    name = "swrbd",
    version,
    about = "Exact Seiberg-Witten basic-class search under rational blow-down"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the enumeration and emit a certificate.
    Run {
        #[command(flatten)]
        source: Source,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads; the certificate does not depend on this.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Check every config invariant without enumerating.
    Verify {
        #[command(flatten)]
        source: Source,
    },
    /// Render a stored certificate.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
    },
    /// List the built-in instances.
    ListPresets,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON config document.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{path} is not a certificate: {source}")]
    Certificate {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0} does not fit in a 64-bit certificate field")]
    Overflow(String),
    #[error("{0} check(s) failed")]
    Verification(usize),
    #[error(transparent)]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        1
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load_document(source: &Source) -> Result<ConfigDocument, CliError> {
    match (&source.preset, &source.config) {
        (Some(label), _) => Ok(preset_document(label)?),
        (None, Some(path)) => Ok(parse_document(&read(path)?)?),
        (None, None) => unreachable!("clap requires one source"),
    }
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            source,
            out: path,
            format,
            threads,
        } => {
            let config = SearchConfig::from_document(&load_document(&source)?)?;
            let options = PipelineOptions {
                threads: threads.map(usize::from),
                ..PipelineOptions::default()
            };
            let start = Instant::now();
            let report = run_pipeline_with(&config, &options);
            writeln!(
                err,
                "{}: {} candidates in {:.3}s",
                config.label(),
                report.counts.candidates,
                start.elapsed().as_secs_f64()
            )?;
            let cert = Certificate::new(&config, &report)?;
            let body = match format {
                Format::Json => cert.to_json(),
                Format::Text => cert.to_text(),
            };
            match path {
                Some(path) => {
                    fs::write(&path, body).map_err(|source| CliError::Write { path, source })?
                }
                None => out.write_all(body.as_bytes())?,
            }
            Ok(())
        }
        Command::Verify { source } => {
            let doc = load_document(&source)?;
            let result = audit(&doc);
            let mut failed = 0;
            for check in &result.checks {
                let name = check.name;
                match &check.status {
                    CheckStatus::Pass => writeln!(out, "PASS {name}")?,
                    CheckStatus::Skipped => writeln!(out, "SKIP {name}")?,
                    CheckStatus::Fail(e) => {
                        failed += 1;
                        writeln!(out, "FAIL {name}: {e}")?;
                    }
                }
            }
            if failed > 0 {
                return Err(CliError::Verification(failed));
            }
            writeln!(
                out,
                "{}: all {} checks passed",
                doc.label,
                result.checks.len()
            )?;
            Ok(())
        }
        Command::Report { input, format } => {
            let text = read(&input)?;
            let cert = Certificate::from_json(&text).map_err(|source| CliError::Certificate {
                path: input.clone(),
                source,
            })?;
            match format {
                Format::Json => out.write_all(text.as_bytes())?,
                Format::Text => out.write_all(cert.to_text().as_bytes())?,
            }
            Ok(())
        }
        Command::ListPresets => {
            for label in PRESET_LABELS {
                let doc = preset_document(label)?;
                writeln!(
                    out,
                    "{label}\trank {}, C_{} chain, {} spheres, {} extension tuples",
                    doc.rank,
                    doc.chain.p,
                    doc.spheres.len(),
                    doc.chain.extension_tuples.len()
                )?;
            }
            Ok(())
        }
    }
}
