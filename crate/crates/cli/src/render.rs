use std::io::{self, Write};

use ccc_core::audit::{Check, VerifyReport};
use ccc_core::orders::HocStatus;
use ccc_core::polyfq::{CodeRecord, Coefficient, MinimalCode};
use ccc_core::spectrum::Spectrum;
use serde::Serialize;

use crate::Format;

fn json<T: Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

pub fn spectrum(out: &mut impl Write, s: &Spectrum, format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, s),
        Format::Csv => {
            writeln!(out, "n,q,k,count,method")?;
            for (k, c) in &s.entries {
                writeln!(out, "{},{},{k},{c},{}", s.n, s.q, s.method)?;
            }
            Ok(())
        }
        Format::Table => {
            writeln!(out, "n = {}, q = {}, method = {}", s.n, s.q, s.method)?;
            writeln!(out, "{:>8}  {:>8}", "k", "count")?;
            for (k, c) in &s.entries {
                writeln!(out, "{k:>8}  {c:>8}")?;
            }
            writeln!(out, "{:>8}  {:>8}", "total", s.total())
        }
    }
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn hoc(out: &mut impl Write, status: &HocStatus, format: Format) -> io::Result<()> {
    if format == Format::Json {
        return json(out, status);
    }
    if format == Format::Csv {
        writeln!(out, "p,alpha,rho,beta")?;
        for pr in &status.profiles {
            writeln!(out, "{},{},{},{}", pr.p, pr.alpha, pr.rho, pr.beta)?;
        }
        return Ok(());
    }
    let verdict = if status.holds { "holds" } else { "fails" };
    writeln!(out, "n = {}, q = {}: {verdict}", status.n, status.q)?;
    writeln!(out, "rho = {}, R = {}", opt(status.rho), opt(status.rho_lcm))?;
    writeln!(out, "{:>8} {:>6} {:>8} {:>6}", "p", "alpha", "rho_p", "beta")?;
    for pr in &status.profiles {
        writeln!(out, "{:>8} {:>6} {:>8} {:>6}", pr.p, pr.alpha, pr.rho, pr.beta)?;
    }
    for v in &status.violations {
        writeln!(out, "violation: {v}")?;
    }
    Ok(())
}

fn joined(cs: &[Coefficient], sep: &str) -> String {
    let parts: Vec<String> = cs
        .iter()
        .map(|c| match c {
            Coefficient::Prime(v) => v.to_string(),
            Coefficient::Digits(d) => d.iter().map(u64::to_string).collect::<Vec<_>>().join(":"),
        })
        .collect();
    parts.join(sep)
}

pub fn codes(out: &mut impl Write, all: &[MinimalCode], records: &[CodeRecord], format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, &records),
        Format::Csv => {
            writeln!(out, "coset_rep,dimension,generator,parity_check")?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{},{}",
                    r.coset_rep,
                    r.dimension,
                    joined(&r.generator, ";"),
                    joined(&r.parity_check, ";")
                )?;
            }
            Ok(())
        }
        Format::Table => {
            for c in all {
                if !records.iter().any(|r| r.coset_rep == c.coset.representative) {
                    continue;
                }
                writeln!(out, "coset {} (dimension {})", c.coset.representative, c.dimension())?;
                writeln!(out, "  h(x) = {}", c.parity_check)?;
                writeln!(out, "  g(x) = {}", c.generator)?;
            }
            Ok(())
        }
    }
}

pub fn verify_summary(out: &mut impl Write, rep: &VerifyReport, novel: usize) -> io::Result<()> {
    writeln!(out, "pairs: {}", rep.pairs)?;
    writeln!(out, "{:<12} {:>8} {:>8}", "check", "applied", "agreed")?;
    for check in Check::ALL {
        let t = rep.tally(check);
        writeln!(out, "{:<12} {:>8} {:>8}", check.as_str(), t.checked, t.agreed)?;
    }
    writeln!(out, "records: {}", rep.records.len())?;
    writeln!(out, "known: {}", rep.records.len() - novel)?;
    writeln!(out, "novel: {novel}")
}
