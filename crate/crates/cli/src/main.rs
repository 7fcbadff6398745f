//! `ccc`: dimension spectra and constructions of minimal cyclic codes.

mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ccc_core::audit::{self, LedgerKey};
use ccc_core::orders::hoc_status;
use ccc_core::polyfq::minimal_codes_with_budget;
use ccc_core::spectrum::{self, divisor_spectrum, hoc_count_k, Method};
use ccc_core::{Budget, Error};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ccc", version, about = "Counting and constructing minimal cyclic codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of minimal codes of every dimension.
    Spectrum {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value = "auto")]
        method: MethodArg,
    },
    /// Number of minimal codes of one dimension.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
        /// Also evaluate the homogeneous-order formula for this dimension.
        #[arg(long)]
        explain: bool,
    },
    /// Diagnose the homogeneous order condition.
    Hoc {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Generator and parity-check polynomials of every minimal code.
    Codes {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        /// Keep only codes of this dimension.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check every closed form against the divisor count over a range.
    Verify {
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        q_list: Vec<u64>,
        /// Write every discrepancy record here as JSON lines.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Known-discrepancy ledger to use instead of the shipped one.
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Write the keys of every record found as a ledger file.
        #[arg(long)]
        write_ledger: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug)]
enum MethodArg {
    Auto,
    Fixed(Method),
}

impl std::str::FromStr for MethodArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(MethodArg::Auto);
        }
        s.parse().map(MethodArg::Fixed).map_err(|_| {
            let names: Vec<&str> = Method::ALL.iter().map(|m| m.as_str()).collect();
            format!("expected auto or one of {}", names.join(", "))
        })
    }
}

enum Failure {
    Usage(String),
    Math(Error),
    Novel(usize),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Vec::new();
    let result = run(cli.command, &mut out);
    let _ = std::io::stdout().write_all(&out);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Discrepancy(_) | Error::NonIntegral { .. } => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
        Err(Failure::Novel(count)) => {
            eprintln!("error: {count} novel discrepancies");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, out: &mut Vec<u8>) -> Result<(), Failure> {
    let budget = Budget::from_env();
    match command {
        Command::Spectrum { n, q, format, method } => {
            let s = match method {
                MethodArg::Auto => spectrum::auto_spectrum(n, q)?,
                MethodArg::Fixed(m) => spectrum::spectrum_by_method(n, q, m, budget)?,
            };
            render::spectrum(out, &s, format)?;
        }
        Command::Count { n, q, k, explain } => {
            let s = divisor_spectrum(n, q)?;
            writeln!(out, "{}", s.count(k))?;
            if explain {
                explain_count(out, n, q, k)?;
            }
        }
        Command::Hoc { n, q, format } => {
            divisor_spectrum(n, q)?;
            let status = hoc_status(n, q)?;
            render::hoc(out, &status, format)?;
        }
        Command::Codes {
            n,
            q,
            k,
            seed,
            format,
        } => {
            let codes = minimal_codes_with_budget(n, q, seed, budget)?;
            let records: Vec<_> = codes
                .iter()
                .filter(|c| k.is_none_or(|k| c.dimension() as u64 == k))
                .map(|c| c.to_record())
                .collect();
            render::codes(out, &codes, &records, format)?;
        }
        Command::Verify {
            n_max,
            q_list,
            report,
            ledger,
            write_ledger,
        } => {
            if n_max == 0 {
                return Err(Failure::Usage("--n-max must be at least 1".into()));
            }
            let known = match ledger {
                Some(path) => audit::parse_ledger(&fs::read_to_string(path)?)?,
                None => audit::known_ledger(),
            };
            let rep = audit::verify_sweep(n_max, &q_list, budget)?;
            if let Some(path) = report {
                let mut text = String::new();
                for r in &rep.records {
                    text.push_str(&serde_json::to_string(r).expect("record serializes"));
                    text.push('\n');
                }
                fs::write(path, text)?;
            }
            if let Some(path) = write_ledger {
                let keys: Vec<LedgerKey> = rep.records.iter().map(|r| r.key()).collect();
                fs::write(path, audit::render_ledger(&keys))?;
            }
            let novel: Vec<_> = rep.novel(&known).collect();
            render::verify_summary(out, &rep, novel.len())?;
            for r in &novel {
                eprintln!("novel: {}", serde_json::to_string(r).expect("record serializes"));
            }
            if !novel.is_empty() {
                return Err(Failure::Novel(novel.len()));
            }
        }
    }
    Ok(())
}

fn explain_count(out: &mut Vec<u8>, n: u64, q: u64, k: u64) -> Result<(), Failure> {
    let status = match hoc_status(n, q) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out, "hoc: not applicable ({e})")?;
            return Ok(());
        }
    };
    if !status.holds {
        writeln!(out, "hoc: fails ({})", status.violations.join("; "))?;
        return Ok(());
    }
    match hoc_count_k(&status, k) {
        Ok(c) => {
            writeln!(out, "oracle: {}", c.oracle)?;
            let flag = if c.flagged { " FLAGGED" } else { "" };
            writeln!(out, "formula: {}{flag}", c.formula)?;
            match (&c.feasibility.failed_condition, &c.feasibility.reason) {
                (Some(i), Some(r)) => writeln!(out, "feasible: no (condition {i}: {r})")?,
                _ => writeln!(out, "feasible: yes")?,
            }
        }
        Err(e) => writeln!(out, "hoc: not applicable ({e})")?,
    }
    Ok(())
}
