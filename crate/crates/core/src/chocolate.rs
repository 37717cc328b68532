//! Chocolate numbers `A(m, n)`: the number of ordered ways to break an
//! `m × n` bar into unit squares, one piece and one grid line per break.
//!
//! Values are memoised in a [`ChocolateTable`] keyed by the normalised pair
//! `(min, max)`; `A(m, n) = A(n, m)`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{binomial, factorial};

/// First line of every cache file.
pub const CACHE_HEADER: &str = "# chocolate-table v1";

/// Rectangles at least this large sum their recursion terms in parallel.
#[cfg(feature = "parallel")]
const PARALLEL_AREA: u64 = 64;

#[derive(Debug, Error)]
pub enum ChocolateError {
    #[error("bar dimensions must be positive, got {m}×{n}")]
    ZeroDimension { m: u32, n: u32 },
    #[error("invalid sequence request: {0}")]
    InvalidSpec(String),
    #[error(
        "row {m} is not monotone at n = {n}: A({m},{n}) = {prev} > A({m},{next}) = {value}; \
         cannot certify the distinct-value listing",
        next = n + 1
    )]
    NotMonotone {
        m: u32,
        n: u32,
        prev: BigUint,
        value: BigUint,
    },
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cache header {found:?} does not match {expected:?}")]
    Version { found: String, expected: &'static str },
}

/// Memo of exact chocolate numbers.
///
/// Reads through `&self` are safe to share; computing needs `&mut self`, so
/// concurrent writers either hold a lock or work on private tables that are
/// [`merge`](ChocolateTable::merge)d afterwards.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChocolateTable {
    memo: BTreeMap<(u32, u32), BigUint>,
    evaluations: u64,
}

fn key(m: u32, n: u32) -> (u32, u32) {
    if m <= n {
        (m, n)
    } else {
        (n, m)
    }
}

impl ChocolateTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Memoised value, if present.
    pub fn get(&self, m: u32, n: u32) -> Option<&BigUint> {
        self.memo.get(&key(m, n))
    }

    /// Number of values this table has produced by recursion (not by lookup
    /// or by loading from a cache).
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Entries in normalised key order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &BigUint)> {
        self.memo.iter().map(|(&(m, n), v)| (m, n, v))
    }

    /// Inserts a known value under the normalised key.
    pub fn insert(&mut self, m: u32, n: u32, value: BigUint) {
        self.memo.insert(key(m, n), value);
    }

    /// Absorbs another table's entries; existing entries win.
    pub fn merge(&mut self, other: ChocolateTable) {
        for (k, v) in other.memo {
            self.memo.entry(k).or_insert(v);
        }
    }

    /// `A(m, n)`, computing and memoising every sub-rectangle it needs.
    pub fn chocolate_number(&mut self, m: u32, n: u32) -> Result<BigUint, ChocolateError> {
        if m == 0 || n == 0 {
            return Err(ChocolateError::ZeroDimension { m, n });
        }
        let (m, n) = key(m, n);
        self.ensure(m, n);
        Ok(self.memo[&(m, n)].clone())
    }

    fn ensure(&mut self, m: u32, n: u32) {
        let k = key(m, n);
        if self.memo.contains_key(&k) {
            return;
        }
        let (m, n) = k;
        let value = if m == 1 {
            factorial(u64::from(n) - 1)
        } else {
            for i in 1..m {
                self.ensure(i, n);
            }
            for i in 1..n {
                self.ensure(i, m);
            }
            self.split_sum(m, n)
        };
        self.evaluations += 1;
        self.memo.insert(k, value);
    }

    /// Sum over the first break: a cut after row `i` leaves `i × n` and
    /// `(m-i) × n`, whose `in-1` and `(m-i)n-1` remaining breaks interleave in
    /// `C(mn-2, in-1)` ways; likewise for the column cuts.
    fn split_sum(&self, m: u32, n: u32) -> BigUint {
        let total = u64::from(m) * u64::from(n) - 2;
        let mut terms: Vec<(u64, &BigUint, &BigUint)> = Vec::with_capacity((m + n) as usize);
        for i in 1..m {
            let left = u64::from(i) * u64::from(n) - 1;
            terms.push((left, &self.memo[&key(i, n)], &self.memo[&key(m - i, n)]));
        }
        for i in 1..n {
            let left = u64::from(i) * u64::from(m) - 1;
            terms.push((left, &self.memo[&key(i, m)], &self.memo[&key(n - i, m)]));
        }
        let term = |&(left, a, b): &(u64, &BigUint, &BigUint)| binomial(total, left as i64) * a * b;

        #[cfg(feature = "parallel")]
        if total + 2 >= PARALLEL_AREA {
            use rayon::prelude::*;
            return terms.par_iter().map(term).sum();
        }
        terms.iter().map(term).sum()
    }

    /// `B_n = A(2, n)` through the dedicated 2×n recursion
    /// `B_n = (2n-2)! + Σ_{j=1}^{n-1} C(2n-2, 2j-1) B_j B_{n-j}`.
    ///
    /// Reuses any `A(2, j)` already in the table and stores every `B_j` it
    /// computes.
    pub fn chocolate2(&mut self, n: u32) -> Result<BigUint, ChocolateError> {
        if n == 0 {
            return Err(ChocolateError::ZeroDimension { m: 2, n });
        }
        let mut b: Vec<BigUint> = Vec::with_capacity(n as usize + 1);
        b.push(BigUint::zero());
        for k in 1..=n {
            if let Some(v) = self.get(2, k) {
                b.push(v.clone());
                continue;
            }
            let r = 2 * u64::from(k) - 2;
            let mut acc = factorial(r);
            for j in 1..k {
                acc += binomial(r, 2 * i64::from(j) - 1) * &b[j as usize] * &b[(k - j) as usize];
            }
            self.evaluations += 1;
            self.insert(2, k, acc.clone());
            b.push(acc);
        }
        Ok(b.pop().expect("n >= 1"))
    }

    /// Writes `m n value` lines under the version header.
    pub fn save_cache(&self, path: &Path) -> Result<(), ChocolateError> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        writeln!(out, "{CACHE_HEADER}")?;
        for (m, n, v) in self.entries() {
            writeln!(out, "{m} {n} {v}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load_cache(path: &Path) -> Result<Self, ChocolateError> {
        let reader = io::BufReader::new(fs::File::open(path)?);
        let mut lines = reader.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim_end() != CACHE_HEADER {
            return Err(ChocolateError::Version {
                found: header,
                expected: CACHE_HEADER,
            });
        }
        let mut table = ChocolateTable::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let line_no = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |reason: &str| ChocolateError::Malformed {
                line: line_no,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [m, n, v] = fields[..] else {
                return Err(malformed("expected three fields `m n value`"));
            };
            let m: u32 = m.parse().map_err(|_| malformed("bad row count"))?;
            let n: u32 = n.parse().map_err(|_| malformed("bad column count"))?;
            if m == 0 || n == 0 {
                return Err(malformed("dimensions must be positive"));
            }
            let v: BigUint = v.parse().map_err(|_| malformed("bad decimal value"))?;
            table.insert(m, n, v);
        }
        Ok(table)
    }
}

/// Free-function form of [`ChocolateTable::chocolate_number`].
pub fn chocolate_number(m: u32, n: u32, table: &mut ChocolateTable) -> Result<BigUint, ChocolateError> {
    table.chocolate_number(m, n)
}

/// Free-function form of [`ChocolateTable::chocolate2`].
pub fn chocolate2(n: u32, table: &mut ChocolateTable) -> Result<BigUint, ChocolateError> {
    table.chocolate2(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// `A(m, n)` read by antidiagonals: row `s` holds `A(i, s+1-i)`.
    TriangleRows,
    /// Every distinct value of `A(m, n)` up to a value bound, increasing.
    DistinctSorted,
    /// `B_1, B_2, ...`
    TwoByN,
    /// `A(n, n)`.
    Square,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceBound {
    /// Number of rows (triangle) or largest index.
    Index(u32),
    /// Largest value to emit.
    Value(BigUint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    kind: SequenceKind,
    bound: SequenceBound,
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind, bound: SequenceBound) -> Result<Self, ChocolateError> {
        match (&kind, &bound) {
            (SequenceKind::DistinctSorted, SequenceBound::Value(v)) if !v.is_zero() => {}
            (SequenceKind::DistinctSorted, _) => {
                return Err(ChocolateError::InvalidSpec(
                    "distinct values need a positive value bound".into(),
                ))
            }
            (_, SequenceBound::Index(i)) if *i > 0 => {}
            _ => {
                return Err(ChocolateError::InvalidSpec(format!(
                    "{kind:?} needs a positive index bound"
                )))
            }
        }
        Ok(Self { kind, bound })
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn bound(&self) -> &SequenceBound {
        &self.bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermIndex {
    /// 1-based position in a value-sorted listing.
    Position(usize),
    Single(u32),
    Pair(u32, u32),
}

impl fmt::Display for TermIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermIndex::Position(k) => write!(f, "{k}"),
            TermIndex::Single(n) => write!(f, "{n}"),
            TermIndex::Pair(m, n) => write!(f, "{m} {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTerm {
    pub index: TermIndex,
    pub value: BigUint,
}

/// Generates one of the four chocolate sequences.
pub fn generate(spec: &SequenceSpec, table: &mut ChocolateTable) -> Result<Vec<SequenceTerm>, ChocolateError> {
    let index_bound = match spec.bound {
        SequenceBound::Index(i) => i,
        SequenceBound::Value(_) => 0,
    };
    let mut out = Vec::new();
    match spec.kind {
        SequenceKind::TriangleRows => {
            for s in 1..=index_bound {
                for i in 1..=s {
                    let value = table.chocolate_number(i, s + 1 - i)?;
                    out.push(SequenceTerm {
                        index: TermIndex::Pair(i, s + 1 - i),
                        value,
                    });
                }
            }
        }
        SequenceKind::TwoByN => {
            table.chocolate2(index_bound)?;
            for n in 1..=index_bound {
                let value = table.chocolate2(n)?;
                out.push(SequenceTerm {
                    index: TermIndex::Single(n),
                    value,
                });
            }
        }
        SequenceKind::Square => {
            for n in 1..=index_bound {
                let value = table.chocolate_number(n, n)?;
                out.push(SequenceTerm {
                    index: TermIndex::Single(n),
                    value,
                });
            }
        }
        SequenceKind::DistinctSorted => {
            let SequenceBound::Value(limit) = &spec.bound else {
                unreachable!("validated in SequenceSpec::new");
            };
            let mut values = distinct_up_to(limit, table)?;
            values.sort();
            values.dedup();
            out.extend(values.into_iter().enumerate().map(|(k, value)| SequenceTerm {
                index: TermIndex::Position(k + 1),
                value,
            }));
        }
    }
    Ok(out)
}

/// Walks rows `m = 1, 2, ...` over `n >= m`, extending each row while the
/// value stays within `limit` and stopping at the first row whose diagonal
/// exceeds it. Each step checks `A(m, n+1) >= A(m, n)`; completeness rests on
/// that monotonicity.
fn distinct_up_to(limit: &BigUint, table: &mut ChocolateTable) -> Result<Vec<BigUint>, ChocolateError> {
    let mut found = Vec::new();
    let mut m = 1u32;
    loop {
        let diag = table.chocolate_number(m, m)?;
        if &diag > limit {
            // rows beyond m start at their own diagonal, which must not dip
            let next = table.chocolate_number(m + 1, m + 1)?;
            if next < diag {
                return Err(ChocolateError::NotMonotone {
                    m,
                    n: m,
                    prev: diag,
                    value: next,
                });
            }
            break;
        }
        let mut prev = diag;
        let mut n = m;
        loop {
            found.push(prev.clone());
            let next = table.chocolate_number(m, n + 1)?;
            if next < prev {
                return Err(ChocolateError::NotMonotone {
                    m,
                    n,
                    prev,
                    value: next,
                });
            }
            if &next > limit {
                break;
            }
            prev = next;
            n += 1;
        }
        m += 1;
    }
    Ok(found)
}

/// `B_1..=B_n` as a vector, index 0 holding `B_1`.
pub fn chocolate2_prefix(n: u32, table: &mut ChocolateTable) -> Result<Vec<BigUint>, ChocolateError> {
    table.chocolate2(n.max(1))?;
    (1..=n).map(|k| table.chocolate2(k)).collect()
}

/// Convenience for tests and reports: `A(m, n)` for `1 <= m, n <= side`.
pub fn square_table(side: u32, table: &mut ChocolateTable) -> Result<Vec<Vec<BigUint>>, ChocolateError> {
    (1..=side)
        .map(|m| (1..=side).map(|n| table.chocolate_number(m, n)).collect())
        .collect()
}
