//! Residue arithmetic for `B_n = A(2, n)` and for the numerator sequence
//! `P_n = Π_{i=1}^{n} ((4i-5)^2 - 5)`, plus eventual-period detection and the
//! scans that test the open statements about these residues.
//!
//! Moduli are limited to `2..=u32::MAX` so that a product of two residues
//! fits in a `u64`. All residues are normalised to `[0, m)`.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{divides_factorial, is_prime_u64, legendre, ArithError};

/// Inner sums at least this long are split across the rayon pool.
#[cfg(feature = "parallel")]
const PARALLEL_TERMS: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("modulus must lie in 2..=4294967295, got {0}")]
    InvalidModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("need residues of B_1..B_{needed}, only {available} supplied")]
    InsufficientCoverage { needed: usize, available: usize },
    #[error("n = {n} is outside the range of {what}")]
    OutOfClass { n: u64, what: &'static str },
    #[error("scans need n_max >= {min}, got {got}")]
    TooShort { min: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn check_modulus(m: u64) -> Result<(), ModularError> {
    if (2..=u64::from(u32::MAX)).contains(&m) {
        Ok(())
    } else {
        Err(ModularError::InvalidModulus(m))
    }
}

/// One row of Pascal's triangle reduced mod `modulus`, advanced in place.
#[derive(Debug, Clone)]
pub struct ModContext {
    modulus: u64,
    row: Vec<u64>,
}

impl ModContext {
    /// Starts at row 0.
    pub fn new(modulus: u64) -> Result<Self, ModularError> {
        check_modulus(modulus)?;
        Ok(Self {
            modulus,
            row: vec![1 % modulus],
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn row_index(&self) -> usize {
        self.row.len() - 1
    }

    /// `C(r, 0..=r) mod m` for the current row `r`.
    pub fn row(&self) -> &[u64] {
        &self.row
    }

    /// `C(r, k) mod m`, zero outside `0..=r`.
    pub fn get(&self, k: usize) -> u64 {
        self.row.get(k).copied().unwrap_or(0)
    }

    /// Moves to the next row via `C(r+1, k) = C(r, k-1) + C(r, k)`.
    pub fn advance(&mut self) {
        let m = self.modulus;
        self.row.push(0);
        for k in (1..self.row.len()).rev() {
            let s = self.row[k] + self.row[k - 1];
            self.row[k] = if s >= m { s - m } else { s };
        }
    }

    pub fn advance_to(&mut self, r: usize) {
        while self.row_index() < r {
            self.advance();
        }
    }
}

/// `B_1..=B_{n_max}` reduced mod `m`, without big integers.
///
/// Dispatches to the parallel inner sum when the `parallel` feature is on.
pub fn chocolate2_mod(n_max: usize, m: u64) -> Result<Vec<u64>, ModularError> {
    #[cfg(feature = "parallel")]
    {
        chocolate2_mod_parallel(n_max, m)
    }
    #[cfg(not(feature = "parallel"))]
    {
        chocolate2_mod_sequential(n_max, m)
    }
}

/// Single-threaded [`chocolate2_mod`].
pub fn chocolate2_mod_sequential(n_max: usize, m: u64) -> Result<Vec<u64>, ModularError> {
    chocolate2_mod_with(n_max, m, |row, b, n| pair_sum(row, b, n, 1, half(n), m))
}

/// [`chocolate2_mod`] with the convolution for each `n` split over rayon.
#[cfg(feature = "parallel")]
pub fn chocolate2_mod_parallel(n_max: usize, m: u64) -> Result<Vec<u64>, ModularError> {
    use rayon::prelude::*;
    chocolate2_mod_with(n_max, m, |row, b, n| {
        let last = half(n);
        if last < PARALLEL_TERMS {
            return pair_sum(row, b, n, 1, last, m);
        }
        let chunks = last.div_ceil(PARALLEL_TERMS);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = 1 + c * PARALLEL_TERMS;
                let hi = (lo + PARALLEL_TERMS - 1).min(last);
                pair_sum(row, b, n, lo, hi, m)
            })
            .reduce(|| 0, |x, y| (x + y) % m)
    })
}

/// Largest `j` with `j < n - j`.
fn half(n: usize) -> usize {
    (n - 1) / 2
}

/// `Σ_{j=lo}^{hi} C(2n-2, 2j-1) B_j B_{n-j} mod m`, with `b` 1-based.
fn pair_sum(row: &[u64], b: &[u64], n: usize, lo: usize, hi: usize, m: u64) -> u64 {
    let mut acc: u64 = 0;
    for j in lo..=hi {
        acc += row[2 * j - 1] * b[j] % m * b[n - j] % m;
        if acc >= 1 << 62 {
            acc %= m;
        }
    }
    acc % m
}

fn chocolate2_mod_with(
    n_max: usize,
    m: u64,
    inner: impl Fn(&[u64], &[u64], usize) -> u64,
) -> Result<Vec<u64>, ModularError> {
    let mut ctx = ModContext::new(m)?;
    let mut b = vec![0u64; n_max + 1];
    let mut fact = 1 % m; // (2n-2)! mod m
    for n in 1..=n_max {
        if n >= 2 {
            if fact != 0 {
                let r = (2 * n - 2) as u64;
                fact = fact * ((r - 1) % m) % m * (r % m) % m;
            }
            ctx.advance();
            ctx.advance();
        }
        let row = ctx.row();
        // terms j and n-j coincide; count the pairs twice and the middle once
        let mut acc = 2 * inner(row, &b, n) % m;
        if n % 2 == 0 {
            let j = n / 2;
            acc += row[2 * j - 1] * b[j] % m * b[j] % m;
        }
        b[n] = (acc + fact) % m;
    }
    b.remove(0);
    Ok(b)
}

/// One factor of `P_n`, reduced mod `m`.
fn p_factor_mod(i: u64, m: u64) -> u64 {
    let x = 4 * i as i128 - 5;
    (x * x - 5).rem_euclid(m as i128) as u64
}

/// `P_1..=P_{n_max}` mod `m` as a running product.
pub fn p_sequence_mod(n_max: usize, m: u64) -> Result<Vec<u64>, ModularError> {
    check_modulus(m)?;
    let mut acc = 1 % m;
    Ok((1..=n_max as u64)
        .map(|i| {
            acc = acc * p_factor_mod(i, m) % m;
            acc
        })
        .collect())
}

/// Evidence thresholds for [`detect_eventual_period_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodThresholds {
    /// The periodic tail must span at least this many periods.
    pub min_repeats: usize,
    /// ... and at least `numer/denom` of the observed terms.
    pub min_tail_numer: usize,
    pub min_tail_denom: usize,
    /// Shorter sequences are never resolved.
    pub min_length: usize,
}

impl Default for PeriodThresholds {
    fn default() -> Self {
        Self {
            min_repeats: 3,
            min_tail_numer: 1,
            min_tail_denom: 2,
            min_length: 8,
        }
    }
}

impl PeriodThresholds {
    fn required_tail(&self, period: usize, len: usize) -> usize {
        let frac = (len * self.min_tail_numer).div_ceil(self.min_tail_denom);
        (self.min_repeats * period).max(frac)
    }
}

/// Outcome of eventual-period detection over `evidence_length` terms.
///
/// `preperiod` counts the leading terms outside the repeating tail. When
/// `resolved` is false, `preperiod` and `period` are 0 and carry no meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodReport {
    pub preperiod: usize,
    pub period: usize,
    pub eventually_zero: bool,
    pub evidence_length: usize,
    pub resolved: bool,
}

impl PeriodReport {
    fn unresolved(len: usize) -> Self {
        Self {
            preperiod: 0,
            period: 0,
            eventually_zero: false,
            evidence_length: len,
            resolved: false,
        }
    }
}

impl fmt::Display for PeriodReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.resolved {
            write!(f, "unresolved over {} terms", self.evidence_length)
        } else if self.eventually_zero {
            write!(f, "zero after {} terms (over {})", self.preperiod, self.evidence_length)
        } else {
            write!(
                f,
                "preperiod {} period {} (over {} terms)",
                self.preperiod, self.period, self.evidence_length
            )
        }
    }
}

/// Eventual period with the default thresholds.
pub fn detect_eventual_period(seq: &[u64], candidate_periods: Option<&[usize]>) -> PeriodReport {
    detect_eventual_period_with(seq, candidate_periods, PeriodThresholds::default())
}

/// Finds the smallest period whose repeating tail meets `thresholds`, and
/// the shortest preperiod for it.
///
/// Valid candidate periods only cap the search; every length below the
/// smallest valid candidate is still tried, so the result is the minimum.
pub fn detect_eventual_period_with(
    seq: &[u64],
    candidate_periods: Option<&[usize]>,
    thresholds: PeriodThresholds,
) -> PeriodReport {
    let len = seq.len();
    if len < thresholds.min_length.max(1) {
        return PeriodReport::unresolved(len);
    }
    let mut limit = len / thresholds.min_repeats.max(1);
    if let Some(cands) = candidate_periods {
        let mut cands: Vec<usize> = cands.iter().copied().filter(|&c| c >= 1 && c <= limit).collect();
        cands.sort_unstable();
        if let Some(&c) = cands.iter().find(|&&c| tail_start(seq, c, &thresholds).is_some()) {
            limit = c;
        }
    }
    for period in 1..=limit {
        if let Some(preperiod) = tail_start(seq, period, &thresholds) {
            return PeriodReport {
                preperiod,
                period,
                eventually_zero: period == 1 && seq[len - 1] == 0,
                evidence_length: len,
                resolved: true,
            };
        }
    }
    PeriodReport::unresolved(len)
}

/// Shortest preperiod for `period` if the tail it leaves is long enough.
fn tail_start(seq: &[u64], period: usize, thresholds: &PeriodThresholds) -> Option<usize> {
    let len = seq.len();
    if period == 0 || period >= len {
        return None;
    }
    let required = thresholds.required_tail(period, len);
    if required > len {
        return None;
    }
    let latest_allowed = len - required;
    for i in (0..len - period).rev() {
        if seq[i] != seq[i + period] {
            let start = i + 1;
            return (start <= latest_allowed).then_some(start);
        }
    }
    Some(0)
}

/// Primes for which `P_n` reaches zero mod `p`: 2, 5, and those where 5 is
/// a quadratic residue (equivalently `p ≡ ±1 mod 5`).
pub fn zero_tail_prime(p: u64) -> bool {
    match p {
        2 | 5 => true,
        _ => legendre(5, p) == Ok(1),
    }
}

/// Result of testing the propagation criterion for `k | B_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowReport {
    /// `k` divides every `B_i` in the window and `(2n-2)!`.
    pub hypothesis: bool,
    /// Highest index whose residue was available for the conclusion check.
    pub checked_through: usize,
    /// First `j >= n` with `k ∤ B_j`, if any. Only examined when the
    /// hypothesis holds.
    pub first_violation: Option<usize>,
}

/// Checks whether `k | B_i` for `⌊(n+1)/2⌋ <= i <= n-1` and `k | (2n-2)!`;
/// if so, confirms `k | B_j` on every supplied `j >= n`.
///
/// `b_mod[i - 1]` must hold `B_i mod k`.
pub fn divisibility_window_check(k: u64, n: usize, b_mod: &[u64]) -> Result<WindowReport, ModularError> {
    assert!(k >= 1 && n >= 1, "divisibility_window_check needs k, n >= 1");
    let lo = n.div_ceil(2).max(1);
    let hi = n - 1;
    if b_mod.len() < hi {
        return Err(ModularError::InsufficientCoverage {
            needed: hi,
            available: b_mod.len(),
        });
    }
    let window_ok = (lo..=hi).all(|i| b_mod[i - 1].is_multiple_of(k));
    let hypothesis = window_ok && divides_factorial(&BigUint::from(k), (2 * n - 2) as u64)?;
    let first_violation = if hypothesis {
        (n..=b_mod.len()).find(|&j| !b_mod[j - 1].is_multiple_of(k))
    } else {
        None
    };
    Ok(WindowReport {
        hypothesis,
        checked_through: b_mod.len(),
        first_violation,
    })
}

/// A residue that breaks an expected pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("B_{index} ≡ {residue} (mod 3), expected {expected}")]
pub struct PatternViolation {
    pub index: usize,
    pub residue: u64,
    pub expected: u64,
}

/// Expected `B_n mod 3` for `n >= 2`.
pub fn mod3_expected(n: usize) -> u64 {
    if n % 3 == 2 {
        1
    } else {
        2
    }
}

/// Checks `B_n mod 3` against the pattern for `2 <= n <= n_max`.
pub fn mod3_pattern_check(n_max: usize) -> Result<(), PatternViolation> {
    let residues = chocolate2_mod(n_max, 3).expect("3 is a valid modulus");
    mod3_pattern_check_residues(&residues)
}

/// Same as [`mod3_pattern_check`] on caller-supplied residues (`[0]` is `B_1`).
pub fn mod3_pattern_check_residues(residues: &[u64]) -> Result<(), PatternViolation> {
    for (idx, &r) in residues.iter().enumerate().skip(1) {
        let n = idx + 1;
        let expected = mod3_expected(n);
        if r != expected {
            return Err(PatternViolation {
                index: n,
                residue: r,
                expected,
            });
        }
    }
    Ok(())
}

/// `C(n, k) mod p` for prime `p` by Lucas' theorem.
pub fn binomial_mod_prime(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binomial_mod(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * crate::arith::pow_mod(den, p - 2, p) % p
}

/// `C(n,1) + C(n,7) + ... + C(n,n-1) mod 3` for `n ≡ 2 (mod 6)`, `n > 2`.
pub fn stepped_sum_from_1(n: u64) -> Result<u64, ModularError> {
    if n % 6 != 2 || n <= 2 {
        return Err(ModularError::OutOfClass {
            n,
            what: "n ≡ 2 (mod 6), n > 2",
        });
    }
    Ok(stepped_binomial_sum(n, 1, n - 1))
}

/// `C(n,5) + C(n,11) + ... + C(n,n-5) mod 3` for `n ≡ 4 (mod 6)`, `n > 4`.
pub fn stepped_sum_from_5(n: u64) -> Result<u64, ModularError> {
    if n % 6 != 4 || n <= 4 {
        return Err(ModularError::OutOfClass {
            n,
            what: "n ≡ 4 (mod 6), n > 4",
        });
    }
    Ok(stepped_binomial_sum(n, 5, n - 5))
}

fn stepped_binomial_sum(n: u64, first: u64, last: u64) -> u64 {
    (first..=last)
        .step_by(6)
        .map(|k| binomial_mod_prime(n, k, 3))
        .sum::<u64>()
        % 3
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sequence a scan runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanSequence {
    /// `B_n = A(2, n)`.
    Chocolate2,
    /// `P_n`.
    Numerators,
}

impl ScanSequence {
    pub fn residues(self, n_max: usize, m: u64) -> Result<Vec<u64>, ModularError> {
        match self {
            ScanSequence::Chocolate2 => chocolate2_mod(n_max, m),
            ScanSequence::Numerators => p_sequence_mod(n_max, m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanSequence::Chocolate2 => "B",
            ScanSequence::Numerators => "P",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjecture {
    /// Zero tail mod `p` exactly for `p ∈ {2, 5}` or `p ≡ ±1 (mod 5)`.
    ZeroTail,
    /// Eventually periodic mod every `m`.
    EventualPeriod,
    /// For the remaining primes, period related to `p(p-1)`.
    PeriodMultiple,
}

impl Conjecture {
    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Conjecture::ZeroTail),
            2 => Some(Conjecture::EventualPeriod),
            3 => Some(Conjecture::PeriodMultiple),
            _ => None,
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Conjecture::ZeroTail => 1,
            Conjecture::EventualPeriod => 2,
            Conjecture::PeriodMultiple => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScanStatus {
    Consistent,
    Unresolved,
    Inconsistent,
}

impl ScanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanStatus::Consistent => "CONSISTENT",
            ScanStatus::Inconsistent => "INCONSISTENT",
            ScanStatus::Unresolved => "UNRESOLVED",
        }
    }
}

impl fmt::Display for ScanStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One (conjecture, modulus) line of a scan. Indices are 1-based sequence
/// positions; `preperiod` counts leading terms outside the repeating tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub conjecture: u8,
    pub sequence: ScanSequence,
    pub modulus: u64,
    pub n_max: usize,
    pub status: ScanStatus,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    /// Worst status over all records (`Consistent` when empty).
    pub fn overall(&self) -> ScanStatus {
        self.records
            .iter()
            .map(|r| r.status)
            .max()
            .unwrap_or(ScanStatus::Consistent)
    }
}

/// Smallest `n_max` a scan accepts.
pub const MIN_SCAN_LENGTH: usize = 100;

/// Runs one conjecture over each modulus, records in input order.
///
/// Statuses describe whether the observed prefix agrees with the statement;
/// a scan never settles an open statement.
pub fn conjecture_scan(
    conjecture: Conjecture,
    moduli: &[u64],
    n_max: usize,
    sequence: ScanSequence,
) -> Result<ScanReport, ModularError> {
    if n_max < MIN_SCAN_LENGTH {
        return Err(ModularError::TooShort {
            min: MIN_SCAN_LENGTH,
            got: n_max,
        });
    }
    for &m in moduli {
        check_modulus(m)?;
        if conjecture != Conjecture::EventualPeriod && !is_prime_u64(m) {
            return Err(ModularError::NotPrime(m));
        }
    }
    let scan_one = |&m: &u64| scan_modulus(conjecture, m, n_max, sequence);

    #[cfg(feature = "parallel")]
    let records: Result<Vec<_>, _> = {
        use rayon::prelude::*;
        moduli.par_iter().map(scan_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let records: Result<Vec<_>, _> = moduli.iter().map(scan_one).collect();

    Ok(ScanReport { records: records? })
}

fn scan_modulus(
    conjecture: Conjecture,
    m: u64,
    n_max: usize,
    sequence: ScanSequence,
) -> Result<ScanRecord, ModularError> {
    let residues = sequence.residues(n_max, m)?;
    let hint: Vec<usize> = divisors(m * (m - 1)).into_iter().map(|d| d as usize).collect();
    let report = detect_eventual_period(&residues, Some(&hint));
    let name = sequence.name();

    let mut record = ScanRecord {
        conjecture: conjecture.id(),
        sequence,
        modulus: m,
        n_max,
        status: ScanStatus::Unresolved,
        preperiod: report.resolved.then_some(report.preperiod),
        period: report.resolved.then_some(report.period),
        notes: String::new(),
    };

    match conjecture {
        Conjecture::ZeroTail => {
            let predicted = zero_tail_prime(m);
            let zero_from = residues.iter().rposition(|&r| r != 0).map_or(0, |i| i + 1);
            let zero_run = n_max - zero_from;
            let observed_zero = report.resolved && report.eventually_zero;
            let shape = if predicted { "p ∈ {2,5} or p ≡ ±1 (mod 5)" } else { "p ∉ {2,5}, p ≢ ±1 (mod 5)" };
            (record.status, record.notes) = match (predicted, observed_zero) {
                (true, true) => (
                    ScanStatus::Consistent,
                    format!("{shape}; {name}_n ≡ 0 for n >= {} through n = {n_max}", zero_from + 1),
                ),
                (false, true) => (
                    ScanStatus::Inconsistent,
                    format!("{shape} but {name}_n ≡ 0 for n >= {} through n = {n_max}", zero_from + 1),
                ),
                (true, false) if report.resolved => (
                    ScanStatus::Inconsistent,
                    format!("{shape} but the tail repeats with nonzero period {}", report.period),
                ),
                (true, false) => (
                    ScanStatus::Consistent,
                    if zero_run > 0 {
                        format!("{shape}; zero run from n = {} too short to count as a tail; not contradicted", zero_from + 1)
                    } else {
                        format!("{shape}; no zero tail by n = {n_max}; not contradicted")
                    },
                ),
                (false, false) if zero_run == 0 => (
                    ScanStatus::Consistent,
                    format!("{shape}; {name}_{n_max} nonzero; {report}"),
                ),
                (false, false) => (
                    ScanStatus::Unresolved,
                    format!("{shape}; trailing zero run of {zero_run} terms below the evidence threshold"),
                ),
            };
        }
        Conjecture::EventualPeriod => {
            (record.status, record.notes) = if report.resolved {
                (ScanStatus::Consistent, report.to_string())
            } else {
                (ScanStatus::Unresolved, format!("no period within thresholds over {n_max} terms"))
            };
        }
        Conjecture::PeriodMultiple => {
            let pp = m * (m - 1);
            if zero_tail_prime(m) {
                record.status = ScanStatus::Consistent;
                record.notes = format!("p = {m} is outside the statement's hypothesis; vacuous");
            } else if !report.resolved {
                record.status = ScanStatus::Unresolved;
                record.notes = format!("no period within thresholds over {n_max} terms; p(p-1) = {pp}");
            } else {
                let period = report.period as u64;
                let divides = pp.is_multiple_of(period);
                let multiple = period.is_multiple_of(pp);
                record.status = if divides || multiple {
                    ScanStatus::Consistent
                } else {
                    ScanStatus::Inconsistent
                };
                record.notes = format!(
                    "period {period}, p(p-1) = {pp}; period | p(p-1): {}; p(p-1) | period: {}",
                    yes_no(divides),
                    yes_no(multiple)
                );
            }
        }
    }
    Ok(record)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binomial, primes_up_to};
    use crate::chocolate::{chocolate2_prefix, ChocolateTable};
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn exact_b(n: u32) -> Vec<BigUint> {
        chocolate2_prefix(n, &mut ChocolateTable::new()).unwrap()
    }

    #[test]
    fn pascal_rows_match_exact_binomials() {
        for m in [2u64, 3, 4, 6, 7, 10, 12, 1_000_003] {
            let mut ctx = ModContext::new(m).unwrap();
            for r in 0..=40usize {
                ctx.advance_to(r);
                assert_eq!(ctx.row_index(), r);
                for k in 0..=r {
                    let exact = binomial(r as u64, k as i64) % m;
                    assert_eq!(BigUint::from(ctx.get(k)), exact, "C({r},{k}) mod {m}");
                }
                assert_eq!(ctx.get(r + 1), 0);
            }
        }
        assert!(ModContext::new(1).is_err());
        assert!(ModContext::new(1 << 33).is_err());
    }

    #[test]
    fn chocolate2_mod_examples() {
        assert_eq!(chocolate2_mod(4, 3).unwrap(), [1, 1, 2, 2]);
        assert_eq!(chocolate2_mod(3, 5).unwrap(), [1, 4, 1]);
        assert_eq!(chocolate2_mod(8, 11).unwrap()[5..], [0, 0, 0]);
    }

    #[test]
    fn chocolate2_mod_matches_exact() {
        let exact = exact_b(25);
        for m in [2u64, 3, 4, 5, 7, 9, 11, 12, 13] {
            let res = chocolate2_mod_sequential(25, m).unwrap();
            for (n, (r, e)) in res.iter().zip(&exact).enumerate() {
                assert_eq!(BigUint::from(*r), e % m, "B_{} mod {m}", n + 1);
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        for m in [7u64, 1_000_003] {
            assert_eq!(
                chocolate2_mod_parallel(6000, m).unwrap(),
                chocolate2_mod_sequential(6000, m).unwrap()
            );
        }
    }

    #[test]
    fn p_sequence_examples() {
        assert_eq!(p_sequence_mod(1, 7).unwrap(), [3]);
        assert_eq!(p_sequence_mod(2, 100).unwrap(), [96, 84]);
        assert_eq!(p_sequence_mod(5, 5).unwrap()[4], 0);
        assert_eq!(p_sequence_mod(6, 3).unwrap(), [2, 2, 1, 2, 2, 1]);
    }

    #[test]
    fn p_sequence_period_p_times_p_minus_one() {
        for p in primes_up_to(60) {
            let zero = zero_tail_prime(p);
            let res = p_sequence_mod(4 * (p * (p - 1)) as usize + 10, p).unwrap();
            if zero {
                assert_eq!(*res.last().unwrap(), 0, "p={p}");
            } else {
                assert!(res.iter().all(|&r| r != 0), "p={p}");
                let shift = (p * (p - 1)) as usize;
                for i in 0..res.len() - shift {
                    assert_eq!(res[i], res[i + shift], "p={p} i={i}");
                }
            }
        }
    }

    #[test]
    fn period_examples() {
        let p3 = p_sequence_mod(30, 3).unwrap();
        let r = detect_eventual_period(&p3, Some(&[1, 2, 3, 6]));
        assert!(r.resolved && !r.eventually_zero);
        assert_eq!((r.preperiod, r.period), (0, 3));

        let r = detect_eventual_period(&[5, 0, 0, 0, 0, 0, 0, 0], None);
        assert!(r.resolved && r.eventually_zero);
        assert_eq!((r.preperiod, r.period), (1, 1));

        let r = detect_eventual_period(&[4; 8], None);
        assert!(r.resolved && !r.eventually_zero);
        assert_eq!((r.preperiod, r.period), (0, 1));

        assert!(!detect_eventual_period(&[1, 2, 3], None).resolved);
        assert!(!detect_eventual_period(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10], None).resolved);
    }

    #[test]
    fn period_respects_tail_fraction() {
        // zero tail of 4 out of 10 terms: below half the evidence
        let seq = [1, 2, 3, 4, 5, 6, 0, 0, 0, 0];
        assert!(!detect_eventual_period(&seq, None).resolved);
        let loose = PeriodThresholds {
            min_tail_numer: 1,
            min_tail_denom: 3,
            ..Default::default()
        };
        let r = detect_eventual_period_with(&seq, None, loose);
        assert!(r.resolved && r.eventually_zero);
        assert_eq!(r.preperiod, 6);
    }

    #[test]
    fn candidate_hint_does_not_change_minimum() {
        let seq: Vec<u64> = (0..120).map(|i| [3, 1, 4, 1, 5, 9][i % 6]).collect();
        let plain = detect_eventual_period(&seq, None);
        let hinted = detect_eventual_period(&seq, Some(&[12, 24, 6]));
        assert_eq!(plain, hinted);
        assert_eq!(plain.period, 6);
    }

    #[test]
    fn classifier() {
        assert!(zero_tail_prime(11));
        assert!(!zero_tail_prime(3));
        assert!(zero_tail_prime(5));
        assert!(zero_tail_prime(2));
        for p in primes_up_to(1000).into_iter().filter(|&p| p != 2 && p != 5) {
            assert_eq!(zero_tail_prime(p), p % 5 == 1 || p % 5 == 4, "p={p}");
        }
    }

    #[test]
    fn divisibility_window_examples() {
        let b11 = chocolate2_mod(40, 11).unwrap();
        // the hypothesis fails at n = 6: 11 ∤ B_3 = 56 and 11 ∤ 10!
        let r = divisibility_window_check(11, 6, &b11).unwrap();
        assert!(!r.hypothesis);
        let r = divisibility_window_check(11, 11, &b11).unwrap();
        assert!(r.hypothesis);
        assert_eq!(r.first_violation, None);
        assert_eq!(r.checked_through, 40);

        let b5 = chocolate2_mod(60, 5).unwrap();
        let r = divisibility_window_check(5, 25, &b5).unwrap();
        assert!(r.hypothesis && r.first_violation.is_none());

        let b3 = chocolate2_mod(60, 3).unwrap();
        for n in 1..=60 {
            assert!(!divisibility_window_check(3, n, &b3).unwrap().hypothesis, "n={n}");
        }

        assert_eq!(
            divisibility_window_check(5, 25, &b5[..10]),
            Err(ModularError::InsufficientCoverage { needed: 24, available: 10 })
        );
    }

    #[test]
    fn window_reports_broken_conclusion() {
        let mut b5 = chocolate2_mod(60, 5).unwrap();
        b5[40] = 1;
        let r = divisibility_window_check(5, 25, &b5).unwrap();
        assert_eq!(r.first_violation, Some(41));
    }

    #[test]
    fn mod3_pattern_examples() {
        let res = chocolate2_mod(5, 3).unwrap();
        assert_eq!((res[1], res[2], res[4]), (1, 2, 1));
        assert_eq!(mod3_pattern_check(500), Ok(()));
        let mut bad = chocolate2_mod(50, 3).unwrap();
        bad[30] = 0;
        assert_eq!(
            mod3_pattern_check_residues(&bad),
            Err(PatternViolation { index: 31, residue: 0, expected: 2 })
        );
    }

    #[test]
    fn stepped_sums() {
        assert_eq!(stepped_sum_from_1(8), Ok(1));
        assert_eq!(stepped_sum_from_5(10), Ok(0));
        assert_eq!(stepped_sum_from_1(14), Ok(1));
        assert!(stepped_sum_from_1(2).is_err());
        assert!(stepped_sum_from_1(9).is_err());
        assert!(stepped_sum_from_5(4).is_err());
        assert!(stepped_sum_from_5(8).is_err());
    }

    #[test]
    fn lucas_matches_exact() {
        for n in 0..=60u64 {
            for k in 0..=n {
                for p in [2u64, 3, 5, 7] {
                    let exact = (binomial(n, k as i64) % p).to_u64().unwrap();
                    assert_eq!(binomial_mod_prime(n, k, p), exact);
                }
            }
        }
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(6), [1, 2, 3, 6]);
        assert_eq!(divisors(1), [1]);
        assert_eq!(divisors(36), [1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn scan_examples() {
        let r = conjecture_scan(Conjecture::ZeroTail, &[11, 3], 200, ScanSequence::Chocolate2).unwrap();
        assert_eq!(r.records[0].status, ScanStatus::Consistent);
        assert!(r.records[0].notes.contains("n >= 6"), "{}", r.records[0].notes);
        assert_eq!(r.records[1].status, ScanStatus::Consistent);
        assert_eq!(r.records[1].modulus, 3);

        let r = conjecture_scan(Conjecture::PeriodMultiple, &[3], 200, ScanSequence::Numerators).unwrap();
        assert_eq!(r.records[0].period, Some(3));
        assert!(r.records[0].notes.contains("period | p(p-1): yes"));

        assert!(conjecture_scan(Conjecture::ZeroTail, &[9], 200, ScanSequence::Chocolate2).is_err());
        assert!(conjecture_scan(Conjecture::EventualPeriod, &[9], 99, ScanSequence::Chocolate2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn resolved_reports_survive_extension(pi in 0usize..8, extra in 0usize..400) {
            let p = [3u64, 7, 13, 17, 23, 37, 43, 47][pi];
            let base = 8 * (p * (p - 1)) as usize;
            let full = p_sequence_mod(base + extra, p).unwrap();
            let short = detect_eventual_period(&full[..base], None);
            prop_assume!(short.resolved);
            for i in short.preperiod..full.len() - short.period {
                prop_assert_eq!(full[i], full[i + short.period]);
            }
            let long = detect_eventual_period(&full, None);
            prop_assert_eq!((long.preperiod, long.period), (short.preperiod, short.period));
        }

        #[test]
        fn periodic_sequences_are_found(
            pre in proptest::collection::vec(0u64..5, 0..10),
            cycle in proptest::collection::vec(0u64..5, 1..8),
            reps in 12usize..20,
        ) {
            let mut seq = pre.clone();
            for _ in 0..reps {
                seq.extend(&cycle);
            }
            let r = detect_eventual_period(&seq, None);
            prop_assert!(r.resolved);
            prop_assert!(r.period <= cycle.len());
            prop_assert!(cycle.len() % r.period == 0);
            prop_assert!(r.preperiod <= pre.len());
            for i in r.preperiod..seq.len() - r.period {
                prop_assert_eq!(seq[i], seq[i + r.period]);
            }
        }
    }
}
