//! Exact chocolate-bar break counting and the arithmetic around it.
//!
//! - [`chocolate`]: `A(m, n)` and `B_n = A(2, n)` by recursion, the four
//!   derived integer sequences, and a plain-text memo cache.
//! - [`oracle`]: brute-force state enumeration used to validate the recursion.
//! - [`arith`]: binomials, valuations, factoring, Legendre symbols.
//! - [`modular`]: residues of `B_n` and `P_n` at large `n`, period detection
//!   and conjecture scans.
//! - [`series`]: exact rational power series and generating-function checks.
//!
//! With the default `parallel` feature, inner sums and multi-modulus scans
//! run on rayon; without it everything is sequential and gives identical
//! results.

pub mod arith;
pub mod chocolate;
pub mod modular;
pub mod oracle;
pub mod series;

pub use arith::{binomial, divides_factorial, factor, factorial, legendre, nu_p, Factorization};
pub use chocolate::{
    chocolate2, chocolate_number, generate, ChocolateTable, SequenceBound, SequenceKind, SequenceSpec,
    SequenceTerm, TermIndex,
};
pub use modular::{
    chocolate2_mod, zero_tail_prime, conjecture_scan, detect_eventual_period, p_sequence_mod,
    Conjecture, ModContext, PeriodReport, ScanReport, ScanSequence, ScanStatus,
};
pub use oracle::{count_breaks, count_sequences, Oracle};
pub use series::{RationalSeries, Rational};
