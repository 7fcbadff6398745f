//! Dimension spectra of minimal cyclic codes.
//!
//! [`divisor_spectrum`] is the reference count: every divisor `m` of `n`
//! contributes `φ(m) / ord_m q` irreducible factors of degree `ord_m q`.
//! [`coset_spectrum`] recomputes the same map by walking the `q`-cyclotomic
//! cosets of `Z_n`. Every other function here is a closed-form formula that
//! only applies under extra hypotheses; those are treated as claims to be
//! checked against the reference, never as ground truth.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, gcd, Factorization, MAX_INPUT};
use crate::error::{Error, Result};
use crate::orders::{self, HocStatus, PrimeProfile};
use crate::{Budget, Rational};

/// How a [`Spectrum`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Divisor,
    Coset,
    PrimePower,
    Radical,
    Hoc,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Divisor,
        Method::Coset,
        Method::PrimePower,
        Method::Radical,
        Method::Hoc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Divisor => "divisor",
            Method::Coset => "coset",
            Method::PrimePower => "prime-power",
            Method::Radical => "radical",
            Method::Hoc => "hoc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Map from dimension `k` to the number of minimal `[n, k; q]` codes.
///
/// Only positive counts are stored and keys iterate in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SpectrumRepr", try_from = "SpectrumRepr")]
pub struct Spectrum {
    pub n: u64,
    pub q: u64,
    pub entries: BTreeMap<u64, u64>,
    pub method: Method,
}

impl Spectrum {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn count(&self, k: u64) -> u64 {
        self.entries.get(&k).copied().unwrap_or(0)
    }

    /// `Σ k · count`, which equals `n` for any correct spectrum.
    pub fn degree_sum(&self) -> u128 {
        self.entries
            .iter()
            .map(|(&k, &c)| k as u128 * c as u128)
            .sum()
    }

    /// Same `(n, q)` and identical counts, ignoring the method label.
    pub fn same_counts(&self, other: &Spectrum) -> bool {
        self.n == other.n && self.q == other.q && self.entries == other.entries
    }

    fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumEntry {
    k: u64,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    n: u64,
    q: u64,
    method: Method,
    spectrum: Vec<SpectrumEntry>,
    total: u64,
}

impl From<Spectrum> for SpectrumRepr {
    fn from(s: Spectrum) -> Self {
        let total = s.total();
        SpectrumRepr {
            n: s.n,
            q: s.q,
            method: s.method,
            spectrum: s
                .entries
                .into_iter()
                .map(|(k, count)| SpectrumEntry { k, count })
                .collect(),
            total,
        }
    }
}

impl TryFrom<SpectrumRepr> for Spectrum {
    type Error = String;

    fn try_from(r: SpectrumRepr) -> Result<Self, Self::Error> {
        let mut entries = BTreeMap::new();
        for e in r.spectrum {
            if e.count == 0 {
                return Err(format!("zero count for k={}", e.k));
            }
            if entries.insert(e.k, e.count).is_some() {
                return Err(format!("duplicate dimension k={}", e.k));
            }
        }
        let s = Spectrum {
            n: r.n,
            q: r.q,
            entries,
            method: r.method,
        };
        if s.total() != r.total {
            return Err(format!("total {} does not match entries", r.total));
        }
        Ok(s)
    }
}

/// A `q`-cyclotomic coset of `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coset {
    pub representative: u64,
    /// Sorted residues.
    pub elements: Vec<u64>,
}

impl Coset {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

pub(crate) fn check_inputs(n: u64, q: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n > MAX_INPUT || q > MAX_INPUT {
        return Err(Error::RangeExceeded("inputs must be below 2^63".into()));
    }
    orders::check_field_order(q)?;
    if gcd(n, q) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    Ok(())
}

/// Reference spectrum from the divisor sum of `φ(m) / ord_m q`.
pub fn divisor_spectrum(n: u64, q: u64) -> Result<Spectrum> {
    check_inputs(n, q)?;
    let fact = factorize(n)?;
    let profiles: Vec<PrimeProfile> = fact
        .factors()
        .iter()
        .map(|&(p, a)| PrimeProfile::new(p, a, q))
        .collect::<Result<_>>()?;
    let orders = orders::prime_power_order_table(&profiles, q)?;
    let mut entries: BTreeMap<u64, u64> = BTreeMap::new();
    let mut exps = vec![0u32; profiles.len()];
    loop {
        let mut ord = 1u64;
        let mut phi = 1u64;
        for (i, pr) in profiles.iter().enumerate() {
            let t = exps[i];
            ord = arith::lcm(ord, orders[i][t as usize])?;
            if t > 0 {
                phi *= pr.p.pow(t - 1) * (pr.p - 1);
            }
        }
        if phi % ord != 0 {
            return Err(Error::Internal(format!("ord {ord} does not divide φ = {phi}")));
        }
        *entries.entry(ord).or_default() += phi / ord;

        // next exponent vector
        let mut i = 0;
        loop {
            if i == exps.len() {
                return Ok(Spectrum {
                    n,
                    q,
                    entries,
                    method: Method::Divisor,
                });
            }
            if exps[i] < profiles[i].alpha {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Spectrum from an explicit walk over the `q`-cyclotomic cosets of `Z_n`,
/// using the default (or `CCC_BUDGET`) enumeration budget.
pub fn coset_spectrum(n: u64, q: u64) -> Result<(Spectrum, Vec<Coset>)> {
    coset_spectrum_with_budget(n, q, Budget::from_env())
}

pub fn coset_spectrum_with_budget(n: u64, q: u64, budget: Budget) -> Result<(Spectrum, Vec<Coset>)> {
    check_inputs(n, q)?;
    if n > budget.enumeration {
        return Err(Error::EnumerationBudget {
            size: n,
            budget: budget.enumeration,
        });
    }
    let step = q % n;
    let mut seen = vec![false; n as usize];
    let mut cosets = Vec::new();
    let mut entries: BTreeMap<u64, u64> = BTreeMap::new();
    for j in 0..n {
        if seen[j as usize] {
            continue;
        }
        let mut elements = Vec::new();
        let mut x = j;
        while !seen[x as usize] {
            seen[x as usize] = true;
            elements.push(x);
            x = arith::mul_mod(x, step, n);
        }
        if x != j {
            return Err(Error::Internal(format!("orbit of {j} is not a cycle")));
        }
        *entries.entry(elements.len() as u64).or_default() += 1;
        elements.sort_unstable();
        cosets.push(Coset {
            representative: j,
            elements,
        });
    }
    let spectrum = Spectrum {
        n,
        q,
        entries,
        method: Method::Coset,
    };
    Ok((spectrum, cosets))
}

fn rational(v: u64) -> Rational {
    Rational::from_integer(v as i128)
}

fn integral_spectrum(
    n: u64,
    q: u64,
    method: Method,
    values: &BTreeMap<u64, Rational>,
) -> Result<Spectrum> {
    let mut entries = BTreeMap::new();
    for (&k, v) in values {
        if !v.is_integer() || *v < Rational::zero() {
            return Err(Error::NonIntegral {
                what: format!("{method} count at k={k}"),
                value: *v,
            });
        }
        if !v.is_zero() {
            entries.insert(k, *v.numer() as u64);
        }
    }
    Ok(Spectrum {
        n,
        q,
        entries,
        method,
    })
}

/// Per-dimension values of the prime-power closed form for `n = p^alpha`,
/// before any integrality check. Zero rows are omitted.
pub fn prime_power_formula(p: u64, alpha: u32, q: u64) -> Result<BTreeMap<u64, Rational>> {
    if !arith::is_prime(p) {
        return Err(Error::HypothesesUnmet(format!("{p} is not prime")));
    }
    if alpha == 0 {
        return Err(Error::HypothesesUnmet("exponent must be at least 1".into()));
    }
    if q % p == 0 {
        return Err(Error::OrderUndefined { p, q });
    }
    let n = arith::checked_pow(p, alpha)?;
    check_inputs(n, q)?;
    let mut rows: BTreeMap<u64, Rational> = BTreeMap::new();
    if p == 2 && q % 4 == 3 {
        rows.insert(1, rational(2));
        match alpha {
            1 => {}
            2 => {
                rows.insert(2, rational(1));
            }
            _ => {
                rows.insert(2, rational(3));
            }
        }
        for j in 2..=alpha.saturating_sub(2) {
            rows.insert(1 << j, rational(2));
        }
        return Ok(rows);
    }
    let pr = PrimeProfile::new(p, alpha, q)?;
    let (rho, beta) = (pr.rho, pr.beta);
    rows.insert(1, rational(gcd(n, q - 1)));
    if rho != 1 {
        let top = p.pow(alpha.min(beta));
        rows.insert(rho, Rational::new((top - 1) as i128, rho as i128));
    }
    if alpha > beta {
        let step = Rational::new((p.pow(beta) - p.pow(beta - 1)) as i128, rho as i128);
        let mut d = rho;
        for _ in 1..=(alpha - beta) {
            d *= p;
            rows.insert(d, step);
        }
    }
    rows.retain(|_, v| !v.is_zero());
    Ok(rows)
}

/// Closed-form spectrum for prime-power lengths `n = p^alpha`.
pub fn prime_power_spectrum(p: u64, alpha: u32, q: u64) -> Result<Spectrum> {
    let rows = prime_power_formula(p, alpha, q)?;
    integral_spectrum(p.pow(alpha), q, Method::PrimePower, &rows)
}

/// Which table of the radical-length formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadicalCase {
    /// `8 ∤ n` or `q ≢ 3 (mod 4)`.
    General,
    /// `8 | n` and `q ≡ 3 (mod 4)`.
    TwoAdic,
}

/// Raw output of the radical-length formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalFormula {
    pub case: RadicalCase,
    /// `n / gcd(n, q-1)` in the general case, `n / gcd(n, q^2-1)` otherwise.
    pub m: u64,
    /// `min(ν_2(n/2), ν_2(q+1))`, only meaningful in the two-adic case.
    pub r: Option<u32>,
    pub rows: BTreeMap<u64, Rational>,
    pub total: Rational,
}

/// `gcd(n, q^2 - 1)` without forming `q^2`.
fn gcd_with_q_squared_minus_one(n: u64, q: u64) -> u64 {
    let qm = (q % n) as u128;
    let v = ((qm * qm + n as u128 - 1) % n as u128) as u64;
    gcd(n, v)
}

fn local_factor(p: u64, e: u32) -> Rational {
    Rational::one() + Rational::new(e as i128 * (p as i128 - 1), p as i128)
}

/// Closed form for lengths whose every prime divides `q - 1`.
pub fn radical_formula(n: u64, q: u64) -> Result<RadicalFormula> {
    check_inputs(n, q)?;
    let fact = factorize(n)?;
    if let Some(p) = fact.primes().find(|&p| (q - 1) % p != 0) {
        return Err(Error::HypothesesUnmet(format!(
            "prime {p} of n={n} does not divide q-1={}",
            q - 1
        )));
    }
    let g = gcd(n, q - 1);
    let gr = rational(g);
    let phi_over = |d: u64| -> Result<Rational> {
        Ok(Rational::new(arith::euler_phi(d)? as i128, d as i128))
    };
    let mut rows = BTreeMap::new();
    if n % 8 != 0 || q % 4 != 3 {
        let m = n / g;
        let mf = factorize(m)?;
        for d in mf.divisors() {
            rows.insert(d, phi_over(d)? * gr);
        }
        let total = mf
            .factors()
            .iter()
            .fold(gr, |acc, &(p, e)| acc * local_factor(p, e));
        rows.retain(|_, v: &mut Rational| !v.is_zero());
        return Ok(RadicalFormula {
            case: RadicalCase::General,
            m,
            r: None,
            rows,
            total,
        });
    }
    let m = n / gcd_with_q_squared_minus_one(n, q);
    let r = (n / 2).trailing_zeros().min((q + 1).trailing_zeros());
    let two_r = Rational::from_integer(1i128 << r);
    let mf = factorize(m)?;
    for k in mf.divisors() {
        if k % 2 == 1 {
            rows.insert(k, phi_over(k)? * gr);
            let half = Rational::new(1, 2);
            rows.insert(2 * k, phi_over(k)? * half * (two_r - Rational::one()) * gr);
        } else {
            rows.insert(2 * k, phi_over(k)? * (two_r / 2) * gr);
        }
    }
    let nu2m = m.trailing_zeros() as i128;
    let two_adic = Rational::new(1, 2) + (two_r / 4) * Rational::from_integer(2 + nu2m);
    let total = mf
        .factors()
        .iter()
        .filter(|&&(p, _)| p != 2)
        .fold(gr * two_adic, |acc, &(p, e)| acc * local_factor(p, e));
    rows.retain(|_, v| !v.is_zero());
    Ok(RadicalFormula {
        case: RadicalCase::TwoAdic,
        m,
        r: Some(r),
        rows,
        total,
    })
}

/// Closed-form spectrum for lengths whose every prime divides `q - 1`.
pub fn radical_spectrum(n: u64, q: u64) -> Result<Spectrum> {
    let f = radical_formula(n, q)?;
    let s = integral_spectrum(n, q, Method::Radical, &f.rows)?;
    if rational(s.total()) != f.total {
        return Err(Error::Discrepancy(format!(
            "radical total {} differs from the sum of its rows {}",
            f.total,
            s.total()
        )));
    }
    Ok(s)
}

/// Total number of minimal codes for `n = p1^alpha1 · p2` when `q` is a
/// primitive root modulo both prime powers and `p1 ∤ p2 - 1`:
/// `alpha1 (d + 1) + 2` with `d = gcd(φ(p1^alpha1), p2 - 1)`.
pub fn total_sase(p1: u64, alpha1: u32, p2: u64, q: u64) -> Result<u64> {
    let unmet = |s: String| Err(Error::HypothesesUnmet(s));
    if !arith::is_prime(p1) || !arith::is_prime(p2) || p1 == p2 {
        return unmet(format!("{p1} and {p2} must be distinct primes"));
    }
    if alpha1 == 0 {
        return unmet("alpha1 must be at least 1".into());
    }
    let pa = arith::checked_pow(p1, alpha1)?;
    let n = pa
        .checked_mul(p2)
        .ok_or_else(|| Error::RangeExceeded("n overflows 64 bits".into()))?;
    check_inputs(n, q)?;
    let phi1 = pa / p1 * (p1 - 1);
    let ord1 = orders::ord_prime_power(p1, alpha1, q)?;
    if ord1 != phi1 {
        return unmet(format!(
            "q={q} is not a primitive root mod {pa} (order {ord1}, φ = {phi1})"
        ));
    }
    let ord2 = orders::ord_prime_power(p2, 1, q)?;
    if ord2 != p2 - 1 {
        return unmet(format!(
            "q={q} is not a primitive root mod {p2} (order {ord2}, φ = {})",
            p2 - 1
        ));
    }
    if (p2 - 1) % p1 == 0 {
        return unmet(format!("{p1} divides {p2} - 1"));
    }
    let d = gcd(phi1, p2 - 1);
    Ok(alpha1 as u64 * (d + 1) + 2)
}

/// Total number of minimal codes when `q` generates every `Z_{p^alpha}^*` and
/// `gcd(p_i - 1, p_j - 1) = 2` pairwise: `(∏ (2 alpha_j + 1) + 1) / 2`.
pub fn total_kuar(fact: &Factorization, q: u64) -> Result<u64> {
    check_inputs(fact.value(), q)?;
    for &(p, a) in fact.factors() {
        let pa = p.pow(a);
        let phi = pa / p * (p - 1);
        let ord = orders::ord_prime_power(p, a, q)?;
        if ord != phi {
            return Err(Error::HypothesesUnmet(format!(
                "ord_{pa}(q={q}) = {ord} ≠ φ({pa}) = {phi} (prime {p})"
            )));
        }
    }
    let f = fact.factors();
    for (i, &(pi, _)) in f.iter().enumerate() {
        for &(pj, _) in &f[i + 1..] {
            let g = gcd(pi - 1, pj - 1);
            if g != 2 {
                return Err(Error::HypothesesUnmet(format!(
                    "gcd({pi}-1, {pj}-1) = {g} ≠ 2"
                )));
            }
        }
    }
    let product: u64 = f.iter().map(|&(_, a)| 2 * a as u64 + 1).product();
    Ok((product + 1) / 2)
}

fn require_hoc(status: &HocStatus) -> Result<(u64, u64)> {
    match (status.holds, status.rho, status.rho_lcm) {
        (true, Some(rho), Some(r)) => Ok((rho, r)),
        _ => Err(Error::HypothesesUnmet(format!(
            "homogeneous order condition fails for n={}, q={}",
            status.n, status.q
        ))),
    }
}

fn require_hoc_parity(status: &HocStatus) -> Result<(u64, u64)> {
    let pair = require_hoc(status)?;
    if status.n % 2 == 0 && status.q % 4 == 3 {
        return Err(Error::HypothesesUnmet(format!(
            "n={} is even and q={} ≡ 3 (mod 4)",
            status.n, status.q
        )));
    }
    Ok(pair)
}

/// Verdict on the three necessary conditions for a dimension `k` to occur
/// under the homogeneous order condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Number (1, 2 or 3) of the first failed condition.
    pub failed_condition: Option<u8>,
    pub reason: Option<String>,
}

impl Feasibility {
    fn ok() -> Self {
        Feasibility {
            feasible: true,
            failed_condition: None,
            reason: None,
        }
    }

    fn fail(condition: u8, reason: String) -> Self {
        Feasibility {
            feasible: false,
            failed_condition: Some(condition),
            reason: Some(reason),
        }
    }
}

/// Evaluates, in order:
/// 1. `gcd(k, rho_i)` is `1` or `rho_i` for every `i`;
/// 2. `p_i | gcd(n, k)` implies `rho_i | k`;
/// 3. `gcd(n, k)` divides `n / gcd(n, q^R - 1)`.
pub fn hoc_feasible(status: &HocStatus, k: u64) -> Result<Feasibility> {
    require_hoc(status)?;
    if k == 0 {
        return Err(Error::Zero);
    }
    let n = status.n;
    for pr in &status.profiles {
        let g = gcd(k, pr.rho);
        if g != 1 && g != pr.rho {
            return Ok(Feasibility::fail(
                1,
                format!("gcd(k={k}, ρ_{}={}) = {g} is neither 1 nor ρ", pr.p, pr.rho),
            ));
        }
    }
    let t = gcd(n, k);
    for pr in &status.profiles {
        if t % pr.p == 0 && k % pr.rho != 0 {
            return Ok(Feasibility::fail(
                2,
                format!("{} divides gcd(n,k)={t} but ρ={} does not divide k={k}", pr.p, pr.rho),
            ));
        }
    }
    let quotient = n / status.gcd_with_qr_minus_one(n)?;
    if quotient % t != 0 {
        return Ok(Feasibility::fail(
            3,
            format!("gcd(n,k)={t} does not divide n/gcd(n,q^R-1)={quotient}"),
        ));
    }
    Ok(Feasibility::ok())
}

/// Auxiliary quantities from splitting a divisor `d` with `ord_d q = k` as
/// `d = d0 · d1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HocKDecomposition {
    pub k: u64,
    /// `gcd(k, n)`.
    pub t: u64,
    /// Primes `p_i` with `rho_i / rho` dividing `k`.
    pub i_set: Vec<u64>,
    /// Primes of `i_set` that divide `k`.
    pub j_set: Vec<u64>,
    /// `i_set` minus `j_set`.
    pub i0_set: Vec<u64>,
    /// `rho · ∏_{i ∈ I} rho_i / rho`.
    pub r_i: u64,
    pub n0: u64,
    pub n1: u64,
    /// `gcd(k, n) · gcd(n1, q^R - 1)`.
    pub d1: u64,
    /// Whether `k = t · r_i`.
    pub consistent: bool,
}

fn hoc_decomposition(status: &HocStatus, rho: u64, k: u64) -> Result<HocKDecomposition> {
    let n = status.n;
    let t = gcd(k, n);
    let mut i_set = Vec::new();
    let mut j_set = Vec::new();
    let mut i0_set = Vec::new();
    let mut r_i = rho as u128;
    let (mut n0, mut n1, mut n1_gcd) = (1u64, 1u64, 1u64);
    for pr in &status.profiles {
        if k % (pr.rho / rho) != 0 {
            continue;
        }
        i_set.push(pr.p);
        r_i *= (pr.rho / rho) as u128;
        let pa = pr.p.pow(pr.alpha);
        if k % pr.p == 0 {
            j_set.push(pr.p);
            n1 *= pa;
            n1_gcd *= pr.p.pow(pr.alpha.min(pr.beta));
        } else {
            i0_set.push(pr.p);
            n0 *= pa;
        }
    }
    let r_i = u64::try_from(r_i).map_err(|_| Error::RangeExceeded("R_I overflows".into()))?;
    Ok(HocKDecomposition {
        k,
        t,
        i_set,
        j_set,
        i0_set,
        r_i,
        n0,
        n1,
        d1: t * n1_gcd,
        consistent: t as u128 * r_i as u128 == k as u128,
    })
}

/// Result of the per-dimension count formula under the homogeneous order
/// condition, alongside the reference count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HocKCount {
    pub k: u64,
    /// The formula's value: `gcd(n, q-1)` for `k = 1`, `0` when `k` is not
    /// feasible, `gcd(n, q^R - 1) φ(gcd(k, n)) / k` otherwise.
    pub formula: Rational,
    pub feasibility: Feasibility,
    pub decomposition: Option<HocKDecomposition>,
    /// Count from [`divisor_spectrum`].
    pub oracle: u64,
    /// Set when the formula is non-integral or differs from `oracle`.
    pub flagged: bool,
}

/// Evaluates the per-dimension formula verbatim and flags any disagreement
/// with the reference count instead of failing.
pub fn hoc_count_k(status: &HocStatus, k: u64) -> Result<HocKCount> {
    require_hoc_parity(status)?;
    let oracle = divisor_spectrum(status.n, status.q)?;
    hoc_count_k_against(status, k, &oracle)
}

pub(crate) fn hoc_count_k_against(status: &HocStatus, k: u64, oracle: &Spectrum) -> Result<HocKCount> {
    let (rho, _) = require_hoc_parity(status)?;
    let (n, q) = (status.n, status.q);
    let feasibility = hoc_feasible(status, k)?;
    let (formula, decomposition) = if k == 1 {
        (rational(gcd(n, q - 1)), None)
    } else if !feasibility.feasible {
        (Rational::zero(), Some(hoc_decomposition(status, rho, k)?))
    } else {
        let g = status.gcd_with_qr_minus_one(n)?;
        let phi = arith::euler_phi(gcd(k, n))?;
        (
            Rational::new(g as i128 * phi as i128, k as i128),
            Some(hoc_decomposition(status, rho, k)?),
        )
    };
    let oracle = oracle.count(k);
    Ok(HocKCount {
        k,
        flagged: formula != rational(oracle),
        formula,
        feasibility,
        decomposition,
        oracle,
    })
}

/// The total-count formula under the homogeneous order condition, as an
/// exact rational.
pub fn hoc_total_formula(status: &HocStatus) -> Result<Rational> {
    let (rho, _) = require_hoc_parity(status)?;
    let rho_r = rational(rho);
    let mut product = Rational::one();
    for pr in &status.profiles {
        let (p, alpha, beta) = (pr.p, pr.alpha, pr.beta);
        let mut inner = Rational::zero();
        if alpha > beta {
            let phi_beta = p.pow(beta) - p.pow(beta - 1);
            inner += Rational::from_integer(phi_beta as i128 * (alpha - beta) as i128);
        }
        inner += rational(p.pow(alpha.min(beta)) - 1);
        product *= Rational::new(rho as i128, pr.rho as i128) * inner + Rational::one();
    }
    Ok((rho_r - Rational::one() + product) / rho_r)
}

/// Total number of minimal codes from the closed form; a non-integral value
/// is an error.
pub fn hoc_total(status: &HocStatus) -> Result<u64> {
    let v = hoc_total_formula(status)?;
    if !v.is_integer() {
        return Err(Error::NonIntegral {
            what: format!("hoc total for n={}, q={}", status.n, status.q),
            value: v,
        });
    }
    Ok(*v.numer() as u64)
}

/// Every possible dimension: the divisors of `ord_n q`.
pub fn candidate_dimensions(n: u64, q: u64) -> Result<Vec<u64>> {
    check_inputs(n, q)?;
    Ok(factorize(orders::ord_mod(n, q)?)?.divisors())
}

/// Spectrum assembled from the per-dimension formula over every candidate
/// dimension.
pub fn hoc_spectrum(status: &HocStatus) -> Result<Spectrum> {
    let oracle = divisor_spectrum(status.n, status.q)?;
    let mut rows = BTreeMap::new();
    for k in candidate_dimensions(status.n, status.q)? {
        rows.insert(k, hoc_count_k_against(status, k, &oracle)?.formula);
    }
    integral_spectrum(status.n, status.q, Method::Hoc, &rows)
}

/// Spectrum by an explicitly chosen method. Closed forms are checked against
/// the divisor count and a mismatch is returned as [`Error::Discrepancy`].
pub fn spectrum_by_method(n: u64, q: u64, method: Method, budget: Budget) -> Result<Spectrum> {
    let reference = divisor_spectrum(n, q)?;
    let candidate = match method {
        Method::Divisor => return Ok(reference),
        Method::Coset => coset_spectrum_with_budget(n, q, budget)?.0,
        Method::PrimePower => {
            let f = factorize(n)?;
            match f.factors() {
                [(p, a)] => prime_power_spectrum(*p, *a, q)?,
                _ => {
                    return Err(Error::HypothesesUnmet(format!(
                        "n={n} is not a prime power"
                    )))
                }
            }
        }
        Method::Radical => radical_spectrum(n, q)?,
        Method::Hoc => hoc_spectrum(&orders::hoc_status(n, q)?)?,
    };
    if !candidate.same_counts(&reference) {
        return Err(Error::Discrepancy(format!(
            "{method} gives {:?}, divisor count gives {:?}",
            candidate.entries, reference.entries
        )));
    }
    Ok(candidate)
}

/// Picks a closed form whose hypotheses hold and whose output matches the
/// divisor count; otherwise returns the divisor spectrum itself.
pub fn auto_spectrum(n: u64, q: u64) -> Result<Spectrum> {
    let reference = divisor_spectrum(n, q)?;
    let fact = factorize(n)?;
    let mut candidates: Vec<Result<Spectrum>> = vec![radical_spectrum(n, q)];
    if let [(p, a)] = fact.factors() {
        candidates.push(prime_power_spectrum(*p, *a, q));
    }
    if n >= 2 {
        candidates.push(orders::hoc_status(n, q).and_then(|s| hoc_spectrum(&s)));
    }
    for s in candidates.into_iter().flatten() {
        if s.same_counts(&reference) {
            let method = s.method;
            return Ok(reference.with_method(method));
        }
    }
    Ok(reference)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn divisor_examples() {
        let s = divisor_spectrum(15, 2).unwrap();
        assert_eq!(s.entries, map(&[(1, 1), (2, 1), (4, 3)]));
        assert_eq!(s.total(), 5);
        let s = divisor_spectrum(45, 2).unwrap();
        assert_eq!(s.entries, map(&[(1, 1), (2, 1), (4, 3), (6, 1), (12, 2)]));
        assert_eq!(s.total(), 8);
        assert_eq!(divisor_spectrum(1, 9).unwrap().entries, map(&[(1, 1)]));
        assert_eq!(divisor_spectrum(6, 2), Err(Error::NotCoprime { n: 6, q: 2 }));
        assert_eq!(divisor_spectrum(5, 6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn coset_examples() {
        let (s, cosets) = coset_spectrum(8, 3).unwrap();
        assert_eq!(s.entries, map(&[(1, 2), (2, 3)]));
        let els: Vec<Vec<u64>> = cosets.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(els, vec![vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]);
        let (s, _) = coset_spectrum(7, 2).unwrap();
        assert_eq!(s.entries, map(&[(1, 1), (3, 2)]));
        let (s, _) = coset_spectrum(6, 7).unwrap();
        assert_eq!(s.entries, map(&[(1, 6)]));
    }

    #[test]
    fn coset_budget() {
        let tiny = Budget {
            enumeration: 10,
            construction: 10,
        };
        assert!(matches!(
            coset_spectrum_with_budget(11, 2, tiny),
            Err(Error::EnumerationBudget { size: 11, budget: 10 })
        ));
    }

    #[test]
    fn prime_power_examples() {
        let s = prime_power_spectrum(3, 2, 2).unwrap();
        assert_eq!(s.entries, map(&[(1, 1), (2, 1), (6, 1)]));
        let s = prime_power_spectrum(2, 3, 3).unwrap();
        assert_eq!(s.entries, map(&[(1, 2), (2, 3)]));
        let s = prime_power_spectrum(2, 2, 3).unwrap();
        assert_eq!(s.entries, map(&[(1, 2), (2, 1)]));
        assert!(prime_power_spectrum(3, 2, 9).is_err());
    }

    #[test]
    fn two_adic_table_is_the_beta_three_case() {
        // q = 7: ν_2(q^2 - 1) = 4, and the fixed table no longer matches
        let formula = prime_power_spectrum(2, 4, 7).unwrap();
        let reference = divisor_spectrum(16, 7).unwrap();
        assert_eq!(reference.entries, map(&[(1, 2), (2, 7)]));
        assert!(!formula.same_counts(&reference));
    }

    #[test]
    fn radical_examples() {
        let f = radical_formula(8, 5).unwrap();
        assert_eq!(f.case, RadicalCase::General);
        assert_eq!(f.total, rational(6));
        assert_eq!(radical_spectrum(8, 5).unwrap().entries, map(&[(1, 4), (2, 2)]));
        let f = radical_formula(8, 3).unwrap();
        assert_eq!((f.case, f.r), (RadicalCase::TwoAdic, Some(2)));
        assert_eq!(f.total, rational(5));
        assert_eq!(radical_spectrum(8, 3).unwrap().entries, map(&[(1, 2), (2, 3)]));
        assert_eq!(radical_spectrum(3, 7).unwrap().entries, map(&[(1, 3)]));
        assert!(matches!(radical_spectrum(5, 2), Err(Error::HypothesesUnmet(_))));
    }

    #[test]
    fn sase_examples() {
        assert_eq!(total_sase(3, 1, 5, 2).unwrap(), 5);
        assert_eq!(total_sase(3, 2, 5, 2).unwrap(), 8);
        let err = total_sase(3, 1, 5, 7).unwrap_err();
        assert!(err.to_string().contains("primitive root mod 3"), "{err}");
    }

    #[test]
    fn kuar_examples() {
        assert_eq!(total_kuar(&factorize(45).unwrap(), 2).unwrap(), 8);
        assert_eq!(total_kuar(&factorize(15).unwrap(), 2).unwrap(), 5);
        let err = total_kuar(&factorize(105).unwrap(), 2).unwrap_err();
        assert!(err.to_string().contains("prime 7"), "{err}");
    }

    #[test]
    fn kuar_stated_hypotheses_admit_counterexamples() {
        // 63 = 9 · 7, q = 5: q generates both unit groups, gcd(2, 6) = 2,
        // yet 3 | 7 - 1 makes the true total 12
        assert_eq!(total_kuar(&factorize(63).unwrap(), 5).unwrap(), 8);
        assert_eq!(divisor_spectrum(63, 5).unwrap().total(), 12);
    }

    #[test]
    fn feasibility_examples() {
        let s = orders::hoc_status(45, 2).unwrap();
        assert!(hoc_feasible(&s, 12).unwrap().feasible);
        let f = hoc_feasible(&s, 5).unwrap();
        assert_eq!((f.feasible, f.failed_condition), (false, Some(2)));
        let f = hoc_feasible(&s, 2).unwrap();
        assert_eq!((f.feasible, f.failed_condition), (false, Some(1)));
        // dimension 2 nonetheless exists (the factor x^2 + x + 1 of x^3 - 1)
        assert_eq!(divisor_spectrum(45, 2).unwrap().count(2), 1);
    }

    #[test]
    fn hoc_count_examples() {
        let s = orders::hoc_status(45, 2).unwrap();
        let c = hoc_count_k(&s, 1).unwrap();
        assert_eq!((c.formula, c.flagged), (rational(1), false));
        let c = hoc_count_k(&s, 12).unwrap();
        assert_eq!(c.formula, Rational::new(5, 2));
        assert_eq!(c.oracle, 2);
        assert!(c.flagged);
        let d = c.decomposition.unwrap();
        assert_eq!(d.t, 3);
        assert_eq!(d.i_set, vec![3, 5]);
        assert_eq!(d.j_set, vec![3]);
        assert_eq!(d.i0_set, vec![5]);
        assert_eq!(d.r_i, 4);
        assert!(d.consistent);

        let s = orders::hoc_status(225, 2).unwrap();
        let c = hoc_count_k(&s, 20).unwrap();
        assert_eq!((c.formula, c.oracle, c.flagged), (rational(3), 3, false));
    }

    #[test]
    fn hoc_rejects_even_n_with_q_three_mod_four() {
        let s = orders::hoc_status(5, 3).unwrap();
        assert!(hoc_total(&s).is_ok());
        // build a status by hand for an even n; the condition itself fails
        // there anyway, so check the parity guard directly
        let mut forged = orders::hoc_status(5, 3).unwrap();
        forged.n = 10;
        assert!(matches!(hoc_total(&forged), Err(Error::HypothesesUnmet(_))));
    }

    #[test]
    fn hoc_total_examples() {
        for (n, want) in [(45, 8), (15, 5), (225, 13)] {
            let s = orders::hoc_status(n, 2).unwrap();
            assert_eq!(hoc_total(&s).unwrap(), want, "n={n}");
        }
    }

    #[test]
    fn auto_dispatch() {
        let s = auto_spectrum(9, 2).unwrap();
        assert_eq!(s.method, Method::PrimePower);
        assert_eq!(s.entries, map(&[(1, 1), (2, 1), (6, 1)]));
        let s = auto_spectrum(8, 5).unwrap();
        assert_eq!(s.method, Method::Radical);
        assert_eq!(s.entries, map(&[(1, 4), (2, 2)]));
        assert_eq!(auto_spectrum(14, 3).unwrap().method, Method::Divisor);
        assert_eq!(auto_spectrum(45, 2).unwrap().method, Method::Divisor);
    }

    #[test]
    fn explicit_method_reports_discrepancy() {
        let b = Budget::default();
        assert!(matches!(
            spectrum_by_method(45, 2, Method::Hoc, b),
            Err(Error::NonIntegral { .. })
        ));
        assert!(matches!(
            spectrum_by_method(16, 7, Method::PrimePower, b),
            Err(Error::Discrepancy(_))
        ));
        assert_eq!(
            spectrum_by_method(15, 2, Method::Coset, b).unwrap().method,
            Method::Coset
        );
    }

    #[test]
    fn json_shape() {
        let s = divisor_spectrum(8, 3).unwrap();
        let v = serde_json::to_string(&s).unwrap();
        assert_eq!(
            v,
            r#"{"n":8,"q":3,"method":"divisor","spectrum":[{"k":1,"count":2},{"k":2,"count":3}],"total":5}"#
        );
        let bad = r#"{"n":8,"q":3,"method":"divisor","spectrum":[{"k":1,"count":2}],"total":5}"#;
        assert!(serde_json::from_str::<Spectrum>(bad).is_err());
    }
}
