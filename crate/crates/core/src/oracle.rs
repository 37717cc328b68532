//! Brute-force counting of break sequences by recursion over game states.
//!
//! A state is the multiset of pieces on the table. Any piece can be broken
//! along any of its internal grid lines; two pieces of equal shape are still
//! different pieces, so a shape with multiplicity `k` contributes `k` times.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest bar area counted unless the caller raises it.
pub const DEFAULT_AREA_LIMIT: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("bar dimensions must be positive, got {m}×{n}")]
    ZeroDimension { m: u32, n: u32 },
    #[error("area {area} exceeds the oracle limit {limit}")]
    AreaTooLarge { area: u64, limit: u32 },
}

/// Pieces keyed by `(w, h)` with `w <= h`, mapped to multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PieceMultiset {
    pieces: BTreeMap<(u32, u32), u32>,
}

fn orient(w: u32, h: u32) -> (u32, u32) {
    if w <= h {
        (w, h)
    } else {
        (h, w)
    }
}

impl PieceMultiset {
    pub fn bar(m: u32, n: u32) -> Self {
        let mut pieces = BTreeMap::new();
        pieces.insert(orient(m, n), 1);
        Self { pieces }
    }

    pub fn area(&self) -> u64 {
        self.pieces
            .iter()
            .map(|(&(w, h), &k)| u64::from(w) * u64::from(h) * u64::from(k))
            .sum()
    }

    pub fn piece_count(&self) -> u64 {
        self.pieces.values().map(|&k| u64::from(k)).sum()
    }

    pub fn is_terminal(&self) -> bool {
        self.pieces.keys().all(|&d| d == (1, 1))
    }

    /// Shapes present with their multiplicities.
    pub fn shapes(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.pieces.iter().map(|(&d, &k)| (d, k))
    }

    /// Every distinct single break: the shape broken, how many pieces of that
    /// shape could take it, and the resulting state.
    pub fn breaks(&self) -> Vec<(u32, PieceMultiset)> {
        let mut out = Vec::new();
        for (&(w, h), &mult) in &self.pieces {
            for i in 1..w {
                out.push((mult, self.replace((w, h), (i, h), (w - i, h))));
            }
            for j in 1..h {
                out.push((mult, self.replace((w, h), (w, j), (w, h - j))));
            }
        }
        out
    }

    fn replace(&self, whole: (u32, u32), a: (u32, u32), b: (u32, u32)) -> PieceMultiset {
        let mut pieces = self.pieces.clone();
        match pieces.get_mut(&whole) {
            Some(k) if *k > 1 => *k -= 1,
            _ => {
                pieces.remove(&whole);
            }
        }
        *pieces.entry(orient(a.0, a.1)).or_insert(0) += 1;
        *pieces.entry(orient(b.0, b.1)).or_insert(0) += 1;
        PieceMultiset { pieces }
    }
}

/// Memoising counter; one per thread of work.
#[derive(Debug)]
pub struct Oracle {
    limit: u32,
    memo: HashMap<PieceMultiset, BigUint>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::with_limit(DEFAULT_AREA_LIMIT)
    }
}

impl Oracle {
    pub fn with_limit(limit: u32) -> Self {
        Self {
            limit,
            memo: HashMap::new(),
        }
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    /// Number of ordered break sequences taking the `m × n` bar to unit squares.
    pub fn count_sequences(&mut self, m: u32, n: u32) -> Result<BigUint, OracleError> {
        check_dims(m, n, self.limit)?;
        let start = PieceMultiset::bar(m, n);
        let area = start.area();
        Ok(self.ways(&start, area))
    }

    fn ways(&mut self, state: &PieceMultiset, area: u64) -> BigUint {
        debug_assert_eq!(state.area(), area, "area not conserved");
        if state.is_terminal() {
            return BigUint::one();
        }
        if let Some(v) = self.memo.get(state) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for (mult, next) in state.breaks() {
            debug_assert_eq!(next.piece_count(), state.piece_count() + 1);
            total += self.ways(&next, area) * mult;
        }
        self.memo.insert(state.clone(), total.clone());
        total
    }
}

fn check_dims(m: u32, n: u32, limit: u32) -> Result<(), OracleError> {
    if m == 0 || n == 0 {
        return Err(OracleError::ZeroDimension { m, n });
    }
    let area = u64::from(m) * u64::from(n);
    if area > u64::from(limit) {
        return Err(OracleError::AreaTooLarge { area, limit });
    }
    Ok(())
}

/// [`Oracle::count_sequences`] with a fresh memo and the default limit.
pub fn count_sequences(m: u32, n: u32) -> Result<BigUint, OracleError> {
    Oracle::default().count_sequences(m, n)
}

/// Breaks needed to reach unit squares: each break adds one piece.
pub fn count_breaks(m: u32, n: u32) -> u64 {
    u64::from(m) * u64::from(n) - 1
}

/// Walks every break sequence of a small bar without memoisation, handing
/// the length of each complete sequence to `visit`. Returns how many
/// sequences were visited.
///
/// Each individual piece is tracked, so equal-shaped pieces are visited
/// separately rather than weighted by multiplicity.
pub fn for_each_sequence_length(
    m: u32,
    n: u32,
    limit: u32,
    mut visit: impl FnMut(u64),
) -> Result<u64, OracleError> {
    check_dims(m, n, limit)?;
    fn walk(pieces: &mut Vec<(u32, u32)>, depth: u64, visit: &mut dyn FnMut(u64)) -> u64 {
        let mut count = 0;
        let mut any = false;
        for idx in 0..pieces.len() {
            let (w, h) = pieces[idx];
            let cuts: Vec<((u32, u32), (u32, u32))> = (1..w)
                .map(|i| ((i, h), (w - i, h)))
                .chain((1..h).map(|j| ((w, j), (w, h - j))))
                .collect();
            for (a, b) in cuts {
                any = true;
                pieces[idx] = a;
                pieces.push(b);
                count += walk(pieces, depth + 1, visit);
                pieces.pop();
                pieces[idx] = (w, h);
            }
        }
        if !any {
            visit(depth);
            return 1;
        }
        count
    }
    let mut pieces = vec![(m, n)];
    Ok(walk(&mut pieces, 0, &mut visit))
}
