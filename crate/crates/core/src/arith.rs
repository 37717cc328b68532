//! Exact integer helpers: factorials, binomials, p-adic valuations,
//! trial-division factoring, Legendre symbols and a divisibility test for
//! factorials that never materialises the factorial.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Trial-division bound used when callers have no better choice.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Miller-Rabin with the first 13 primes as bases is deterministic below
/// this value (3.317e24).
const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the Legendre symbol needs an odd prime, got {0}")]
    EvenModulus(u64),
    #[error("{value} could not be fully factored: cofactor {cofactor} is {status}")]
    Unresolved {
        value: BigUint,
        cofactor: BigUint,
        status: CofactorStatus,
    },
}

/// `n!` computed exactly.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
///
/// Uses the multiplicative formula with a running exact division, so every
/// intermediate value is itself a binomial coefficient.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Largest `e` such that `p^e` divides `value`.
pub fn nu_p(value: &BigUint, p: u64) -> Result<u32, ArithError> {
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    if value.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    if p == 2 {
        // trailing_zeros is Some for any nonzero value
        return Ok(value.trailing_zeros().unwrap_or(0) as u32);
    }
    let p_big = BigUint::from(p);
    let mut rest = value.clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(&p_big);
        if !r.is_zero() {
            return Ok(e);
        }
        rest = q;
        e += 1;
    }
}

/// Exponent of `p` in `n!` by Legendre's formula.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

/// Classification of whatever is left over after trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CofactorStatus {
    /// Cofactor is 1; the factorization is complete.
    Unit,
    /// Cofactor passed Miller-Rabin above the deterministic range.
    ProbablePrime,
    /// Cofactor is known composite (or unclassified) and was not split.
    CompositeUnresolved,
}

impl fmt::Display for CofactorStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CofactorStatus::Unit => "unit",
            CofactorStatus::ProbablePrime => "probable_prime",
            CofactorStatus::CompositeUnresolved => "composite_unresolved",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Primes in strictly increasing order, exponents at least 1.
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub cofactor_status: CofactorStatus,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor_status == CofactorStatus::Unit
    }

    /// Multiplies everything back together.
    pub fn value(&self) -> BigUint {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    /// Exponent of `p` among the listed factors (0 if absent).
    pub fn exponent_of(&self, p: u64) -> u32 {
        let p = BigUint::from(p);
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// Small-prime view of the factor list, `None` if some prime exceeds u64.
    pub fn as_u64_pairs(&self) -> Option<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
            .collect()
    }
}

impl fmt::Display for Factorization {
    /// Renders as `2^4·107`; a unit renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("[{}:{}]", self.cofactor, self.cofactor_status));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

/// Trial division by every integer up to `trial_bound`, then Miller-Rabin
/// classification of the remaining cofactor.
///
/// A cofactor below `trial_bound^2`, or one proven prime by the
/// deterministic witness set, is moved into the factor list.
pub fn factor(value: &BigUint, trial_bound: u64) -> Factorization {
    assert!(!value.is_zero(), "factor: value must be positive");
    let mut factors: Vec<(BigUint, u32)> = Vec::new();

    let mut rest = value.clone();
    let mut d: u64 = 2;
    while d <= trial_bound && !rest.is_one() {
        if let Some(small) = rest.to_u128() {
            let (found, left, next_d) = trial_divide_u128(small, d, trial_bound);
            factors.extend(found.into_iter().map(|(p, e)| (BigUint::from(p), e)));
            rest = BigUint::from(left);
            d = next_d;
            break;
        }
        if (&rest % d).is_zero() {
            let mut e = 0;
            while (&rest % d).is_zero() {
                rest /= d;
                e += 1;
            }
            factors.push((BigUint::from(d), e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    // Every prime below d has been removed.
    let d_big = BigUint::from(d);
    if rest.is_one() {
        return Factorization {
            factors,
            cofactor: rest,
            cofactor_status: CofactorStatus::Unit,
        };
    }
    if &d_big * &d_big > rest {
        factors.push((rest, 1));
        return Factorization {
            factors,
            cofactor: BigUint::one(),
            cofactor_status: CofactorStatus::Unit,
        };
    }
    let deterministic = rest.to_u128().is_some_and(|r| r < MR_DETERMINISTIC_LIMIT);
    let probable = miller_rabin(&rest);
    if probable && deterministic {
        factors.push((rest, 1));
        Factorization {
            factors,
            cofactor: BigUint::one(),
            cofactor_status: CofactorStatus::Unit,
        }
    } else {
        Factorization {
            factors,
            cofactor: rest,
            cofactor_status: if probable {
                CofactorStatus::ProbablePrime
            } else {
                CofactorStatus::CompositeUnresolved
            },
        }
    }
}

/// Returns (found prime powers, remaining cofactor, next untested divisor).
fn trial_divide_u128(mut n: u128, mut d: u64, bound: u64) -> (Vec<(u64, u32)>, u128, u64) {
    let mut found = Vec::new();
    while d <= bound && n > 1 {
        let dd = d as u128;
        if dd * dd > n {
            break;
        }
        if n.is_multiple_of(dd) {
            let mut e = 0;
            while n.is_multiple_of(dd) {
                n /= dd;
                e += 1;
            }
            found.push((d, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    (found, n, d)
}

fn miller_rabin(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for any `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &is_p)| is_p.then_some(i as u64))
        .collect()
}

/// Legendre symbol `(a|p)` via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8, ArithError> {
    if p == 2 {
        return Err(ArithError::EvenModulus(p));
    }
    if !is_prime_u64(p) {
        return Err(ArithError::NotPrime(p));
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Whether `k` divides `n!`, decided prime by prime with Legendre's formula.
pub fn divides_factorial(k: &BigUint, n: u64) -> Result<bool, ArithError> {
    assert!(!k.is_zero(), "divides_factorial: k must be positive");
    let fac = factor(k, DEFAULT_TRIAL_BOUND);
    if !fac.is_complete() {
        return Err(ArithError::Unresolved {
            value: k.clone(),
            cofactor: fac.cofactor,
            status: fac.cofactor_status,
        });
    }
    for (p, e) in &fac.factors {
        let Some(p) = p.to_u64() else {
            return Ok(false);
        };
        if p > n || factorial_valuation(n, p) < u64::from(*e) {
            return Ok(false);
        }
    }
    Ok(true)
}
