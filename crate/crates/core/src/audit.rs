//! Differential audit of every closed form against the divisor count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, gcd};
use crate::error::{Error, Result};
use crate::orders;
use crate::spectrum::{
    candidate_dimensions, coset_spectrum_with_budget, divisor_spectrum, hoc_count_k_against,
    hoc_total_formula, prime_power_formula, radical_formula, total_kuar, total_sase, Spectrum,
};
use crate::{Budget, Rational};

/// The ledger of confirmed disagreements shipped with the crate.
pub const KNOWN_LEDGER: &str = include_str!("../data/known_discrepancies.csv");

/// Which formula a check exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Coset,
    PrimePower,
    Radical,
    Sase,
    Kuar,
    HocTotal,
    HocK,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Coset,
        Check::PrimePower,
        Check::Radical,
        Check::Sase,
        Check::Kuar,
        Check::HocTotal,
        Check::HocK,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Coset => "coset",
            Check::PrimePower => "prime-power",
            Check::Radical => "radical",
            Check::Sase => "sase",
            Check::Kuar => "kuar",
            Check::HocTotal => "hoc-total",
            Check::HocK => "hoc-k",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown check {s:?}")))
    }
}

mod rational_text {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// One disagreement between a formula and the reference count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub n: u64,
    pub q: u64,
    pub k: Option<u64>,
    pub method: Check,
    /// Exact value, written as `num/den` (or an integer).
    #[serde(with = "rational_text")]
    pub formula_value: Rational,
    pub oracle_value: u64,
    pub note: String,
}

impl DiscrepancyRecord {
    pub fn key(&self) -> LedgerKey {
        (self.n, self.q, self.k, self.method)
    }
}

pub type LedgerKey = (u64, u64, Option<u64>, Check);

/// How often a formula applied and how often it agreed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: u64,
    pub agreed: u64,
}

/// Outcome of a sweep. Records are sorted by `(n, q, k, method)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub pairs: u64,
    pub records: Vec<DiscrepancyRecord>,
    pub tallies: BTreeMap<Check, Tally>,
}

impl VerifyReport {
    /// Records whose key is missing from `known`.
    pub fn novel<'a>(&'a self, known: &'a BTreeSet<LedgerKey>) -> impl Iterator<Item = &'a DiscrepancyRecord> {
        self.records.iter().filter(move |r| !known.contains(&r.key()))
    }

    pub fn tally(&self, check: Check) -> Tally {
        self.tallies.get(&check).copied().unwrap_or_default()
    }
}

/// Parses a `n,q,k,method` CSV ledger; `k` may be empty.
pub fn parse_ledger(text: &str) -> Result<BTreeSet<LedgerKey>> {
    let mut out = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("n,")) {
            continue;
        }
        let bad = || Error::Unsupported(format!("ledger line {}: {line:?}", i + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [n, q, k, method] = fields[..] else {
            return Err(bad());
        };
        let n = n.parse().map_err(|_| bad())?;
        let q = q.parse().map_err(|_| bad())?;
        let k = if k.is_empty() {
            None
        } else {
            Some(k.parse().map_err(|_| bad())?)
        };
        out.insert((n, q, k, method.parse()?));
    }
    Ok(out)
}

pub fn known_ledger() -> BTreeSet<LedgerKey> {
    parse_ledger(KNOWN_LEDGER).expect("shipped ledger parses")
}

/// Renders keys in the ledger format, sorted.
pub fn render_ledger<'a>(keys: impl IntoIterator<Item = &'a LedgerKey>) -> String {
    let sorted: BTreeSet<&LedgerKey> = keys.into_iter().collect();
    let mut out = String::from("n,q,k,method\n");
    for (n, q, k, m) in sorted {
        let k = k.map(|k| k.to_string()).unwrap_or_default();
        out.push_str(&format!("{n},{q},{k},{m}\n"));
    }
    out
}

struct PairAudit {
    records: Vec<DiscrepancyRecord>,
    tallies: BTreeMap<Check, Tally>,
}

impl PairAudit {
    fn new() -> Self {
        PairAudit {
            records: Vec::new(),
            tallies: BTreeMap::new(),
        }
    }

    fn compare(
        &mut self,
        check: Check,
        (n, q): (u64, u64),
        k: Option<u64>,
        formula: Rational,
        oracle: u64,
        note: impl FnOnce() -> String,
    ) -> bool {
        let agreed = formula == Rational::from_integer(oracle as i128);
        if !agreed {
            self.records.push(DiscrepancyRecord {
                n,
                q,
                k,
                method: check,
                formula_value: formula,
                oracle_value: oracle,
                note: note(),
            });
        }
        agreed
    }

    fn count(&mut self, check: Check, agreed: bool) {
        let t = self.tallies.entry(check).or_default();
        t.checked += 1;
        t.agreed += agreed as u64;
    }

    // One record per differing dimension.
    fn compare_rows(
        &mut self,
        check: Check,
        reference: &Spectrum,
        rows: &BTreeMap<u64, Rational>,
        note: &str,
    ) -> bool {
        let ks: BTreeSet<u64> = rows.keys().chain(reference.entries.keys()).copied().collect();
        let mut all = true;
        for k in ks {
            let v = rows.get(&k).copied().unwrap_or_default();
            all &= self.compare(check, (reference.n, reference.q), Some(k), v, reference.count(k), || {
                note.to_string()
            });
        }
        all
    }
}

/// Audits one `(n, q)` pair. Formulas whose hypotheses fail are skipped.
pub fn audit_pair(n: u64, q: u64, budget: Budget) -> Result<(Vec<DiscrepancyRecord>, BTreeMap<Check, Tally>)> {
    let reference = divisor_spectrum(n, q)?;
    let total = reference.total();
    let mut audit = PairAudit::new();

    let (coset, _) = coset_spectrum_with_budget(n, q, budget)?;
    let rows = coset
        .entries
        .iter()
        .map(|(&k, &c)| (k, Rational::from_integer(c as i128)))
        .collect();
    let agreed = audit.compare_rows(Check::Coset, &reference, &rows, "coset walk");
    audit.count(Check::Coset, agreed);

    let fact = factorize(n)?;
    if let [(p, alpha)] = fact.factors() {
        if let Ok(rows) = prime_power_formula(*p, *alpha, q) {
            let note = if *p == 2 && q % 4 == 3 {
                format!("two-adic table, ν_2(q^2-1) = {}", ((q - 1) * (q + 1)).trailing_zeros())
            } else {
                "prime-power table".to_string()
            };
            let agreed = audit.compare_rows(Check::PrimePower, &reference, &rows, &note);
            audit.count(Check::PrimePower, agreed);
        }
    }

    if let Ok(f) = radical_formula(n, q) {
        let note = format!("{:?} case, m = {}", f.case, f.m);
        let rows_agree = audit.compare_rows(Check::Radical, &reference, &f.rows, &note);
        let total_agrees = audit.compare(Check::Radical, (n, q), None, f.total, total, || {
            format!("{note}, total")
        });
        audit.count(Check::Radical, rows_agree && total_agrees);
    }

    if let [(a, ea), (b, eb)] = fact.factors() {
        let mut orderings = Vec::new();
        if *eb == 1 {
            orderings.push((*a, *ea, *b));
        }
        if *ea == 1 {
            orderings.push((*b, *eb, *a));
        }
        let mut seen = false;
        let mut all = true;
        for (p1, alpha1, p2) in orderings {
            if let Ok(v) = total_sase(p1, alpha1, p2, q) {
                seen = true;
                all &= audit.compare(
                    Check::Sase,
                    (n, q),
                    None,
                    Rational::from_integer(v as i128),
                    total,
                    || format!("p1 = {p1}, alpha1 = {alpha1}, p2 = {p2}"),
                );
            }
        }
        if seen {
            audit.count(Check::Sase, all);
        }
    }

    if n > 1 {
        if let Ok(v) = total_kuar(&fact, q) {
            let agreed = audit.compare(Check::Kuar, (n, q), None, Rational::from_integer(v as i128), total, || {
                let pairs: Vec<String> = fact
                    .factors()
                    .iter()
                    .map(|&(p, a)| format!("{p}^{a}"))
                    .collect();
                format!("q primitive mod {}", pairs.join(", "))
            });
            audit.count(Check::Kuar, agreed);
        }
    }

    if n >= 2 {
        let status = orders::hoc_status(n, q)?;
        if let Ok(v) = hoc_total_formula(&status) {
            let agreed = audit.compare(Check::HocTotal, (n, q), None, v, total, || {
                format!("rho = {:?}, R = {:?}", status.rho, status.rho_lcm)
            });
            audit.count(Check::HocTotal, agreed);
            let mut all = true;
            for k in candidate_dimensions(n, q)? {
                let c = hoc_count_k_against(&status, k, &reference)?;
                all &= audit.compare(Check::HocK, (n, q), Some(k), c.formula, c.oracle, || {
                    match &c.feasibility.reason {
                        Some(r) => format!("infeasible: {r}"),
                        None => "feasible".to_string(),
                    }
                });
            }
            audit.count(Check::HocK, all);
        }
    }

    Ok((audit.records, audit.tallies))
}

/// Every valid pair with `1 <= n <= n_max`, `q` from `q_list`, `gcd(n, q) = 1`.
pub fn sweep_pairs(n_max: u64, q_list: &[u64]) -> Result<Vec<(u64, u64)>> {
    if n_max == 0 {
        return Err(Error::Zero);
    }
    for &q in q_list {
        orders::check_field_order(q)?;
    }
    let qs: BTreeSet<u64> = q_list.iter().copied().collect();
    Ok((1..=n_max)
        .flat_map(|n| qs.iter().map(move |&q| (n, q)))
        .filter(|&(n, q)| gcd(n, q) == 1)
        .collect())
}

/// Audits every pair of [`sweep_pairs`] in parallel and merges the result
/// deterministically.
pub fn verify_sweep(n_max: u64, q_list: &[u64], budget: Budget) -> Result<VerifyReport> {
    let pairs = sweep_pairs(n_max, q_list)?;
    let results = pairs
        .par_iter()
        .map(|&(n, q)| audit_pair(n, q, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerifyReport {
        pairs: pairs.len() as u64,
        ..VerifyReport::default()
    };
    for (records, tallies) in results {
        report.records.extend(records);
        for (check, t) in tallies {
            let e = report.tallies.entry(check).or_default();
            e.checked += t.checked;
            e.agreed += t.agreed;
        }
    }
    report.records.sort_by_key(|r| r.key());
    Ok(report)
}

/// `entries[1] = gcd(n, q - 1)` and `Σ k · count = n`.
pub fn spectrum_sanity(s: &Spectrum) -> bool {
    s.count(1) == gcd(s.n, s.q - 1) && s.degree_sum() == s.n as u128 && arith::gcd(s.n, s.q) == 1
}
