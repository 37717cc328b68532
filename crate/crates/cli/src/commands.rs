use std::fs::OpenOptions;
use std::path::PathBuf;

use chocolate_core::arith::{self, factor};
use chocolate_core::chocolate::{
    generate, ChocolateTable, SequenceBound, SequenceKind, SequenceSpec, TermIndex,
};
use chocolate_core::modular::{
    conjecture_scan, detect_eventual_period, divisors, Conjecture, ScanSequence, ScanStatus,
};
use chocolate_core::oracle::Oracle;
use chocolate_core::series::{self, RationalSeries};
use num_bigint::BigUint;

use crate::args::{CacheArg, FactorSeq, GenSeq, ModSeq, NuSeq, SeriesCheck};
use crate::output::Table;

const CACHE_FILE: &str = "chocolate-table.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Unresolved = 3,
    Failed = 1,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or environment; exit 2.
    Usage(String),
    /// A computation refused its input after validation; exit 1.
    Check(String),
}

pub type Outcome = Result<(Table, Status), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: impl std::fmt::Display) -> Failure {
    Failure::Check(e.to_string())
}

/// Memo table optionally backed by a file in a cache directory.
pub struct Cache {
    path: Option<PathBuf>,
    pub table: ChocolateTable,
}

impl Cache {
    pub fn open(arg: &CacheArg) -> Result<Self, Failure> {
        let Some(dir) = &arg.cache else {
            return Ok(Self {
                path: None,
                table: ChocolateTable::new(),
            });
        };
        std::fs::create_dir_all(dir)
            .map_err(|e| usage(format!("cache directory {}: {e}", dir.display())))?;
        let path = dir.join(CACHE_FILE);
        let table = if path.exists() {
            OpenOptions::new()
                .append(true)
                .open(&path)
                .map_err(|e| usage(format!("cache file {}: {e}", path.display())))?;
            ChocolateTable::load_cache(&path)
                .map_err(|e| usage(format!("cache file {}: {e}", path.display())))?
        } else {
            let empty = ChocolateTable::new();
            empty
                .save_cache(&path)
                .map_err(|e| usage(format!("cache file {}: {e}", path.display())))?;
            empty
        };
        Ok(Self {
            path: Some(path),
            table,
        })
    }

    pub fn save(&self) -> Result<(), Failure> {
        match &self.path {
            Some(path) => self
                .table
                .save_cache(path)
                .map_err(|e| usage(format!("cache file {}: {e}", path.display()))),
            None => Ok(()),
        }
    }
}

fn scan_sequence(seq: ModSeq) -> ScanSequence {
    match seq {
        ModSeq::B => ScanSequence::Chocolate2,
        ModSeq::P => ScanSequence::Numerators,
    }
}

fn positive(name: &str, v: Option<u32>) -> Result<u32, Failure> {
    match v {
        Some(v) if v > 0 => Ok(v),
        Some(_) => Err(usage(format!("--{name} must be positive"))),
        None => Err(usage(format!("--{name} is required here"))),
    }
}

pub fn gen(seq: GenSeq, max: Option<u32>, limit: Option<&str>, cache: &mut Cache) -> Outcome {
    let t = &mut cache.table;
    let mut out = match seq {
        GenSeq::Table | GenSeq::Triangle => Table::new(vec!["m", "n", "value"]),
        GenSeq::B | GenSeq::Square => Table::new(vec!["n", "value"]),
        GenSeq::Distinct => Table::new(vec!["k", "value"]),
    };
    if seq != GenSeq::Distinct && limit.is_some() {
        return Err(usage("--limit applies only to --seq distinct"));
    }
    if seq == GenSeq::Table {
        let side = positive("max", max)?;
        for m in 1..=side {
            for n in 1..=side {
                let v = t.chocolate_number(m, n).map_err(check)?;
                out.push(vec![m.to_string(), n.to_string(), v.to_string()]);
            }
        }
        return Ok((out, Status::Ok));
    }
    let (kind, bound) = match seq {
        GenSeq::Triangle => (SequenceKind::TriangleRows, SequenceBound::Index(positive("max", max)?)),
        GenSeq::B => (SequenceKind::TwoByN, SequenceBound::Index(positive("max", max)?)),
        GenSeq::Square => (SequenceKind::Square, SequenceBound::Index(positive("max", max)?)),
        GenSeq::Distinct => {
            let raw = limit.ok_or_else(|| usage("--seq distinct needs --limit"))?;
            let v: BigUint = raw
                .parse()
                .map_err(|_| usage(format!("--limit must be a positive integer, got {raw:?}")))?;
            (SequenceKind::DistinctSorted, SequenceBound::Value(v))
        }
        GenSeq::Table => unreachable!(),
    };
    let spec = SequenceSpec::new(kind, bound).map_err(usage)?;
    for term in generate(&spec, t).map_err(check)? {
        let mut row = match term.index {
            TermIndex::Pair(m, n) => vec![m.to_string(), n.to_string()],
            TermIndex::Single(n) => vec![n.to_string()],
            TermIndex::Position(k) => vec![k.to_string()],
        };
        row.push(term.value.to_string());
        out.push(row);
    }
    Ok((out, Status::Ok))
}

pub fn oracle(m: u32, n: u32, compare: bool, area_limit: u32, cache: &mut Cache) -> Outcome {
    if m == 0 || n == 0 {
        return Err(usage("--m and --n must be positive"));
    }
    let count = Oracle::with_limit(area_limit)
        .count_sequences(m, n)
        .map_err(usage)?;
    if !compare {
        let mut out = Table::new(vec!["m", "n", "oracle"]);
        out.plain = Some(vec![count.to_string()]);
        out.push(vec![m.to_string(), n.to_string(), count.to_string()]);
        return Ok((out, Status::Ok));
    }
    let rec = cache.table.chocolate_number(m, n).map_err(check)?;
    let matched = rec == count;
    let mut out = Table::new(vec!["m", "n", "oracle", "recursion", "match"]);
    let op = if matched { "==" } else { "!=" };
    out.plain = Some(vec![format!("{count} {op} {rec}")]);
    out.push(vec![
        m.to_string(),
        n.to_string(),
        count.to_string(),
        rec.to_string(),
        matched.to_string(),
    ]);
    Ok((out, if matched { Status::Ok } else { Status::Failed }))
}

fn parse_pair(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once(['x', 'X'])?;
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a > 0 && b > 0).then_some((a, b))
}

pub fn factor_cmd(
    seq: FactorSeq,
    index: &[String],
    max: Option<u32>,
    trial_bound: u64,
    cache: &mut Cache,
) -> Outcome {
    let t = &mut cache.table;
    let mut status = Status::Ok;
    let note = |f: &arith::Factorization, status: &mut Status| {
        if !f.is_complete() {
            *status = Status::Unresolved;
        }
    };
    match seq {
        FactorSeq::B => {
            let ns: Vec<u32> = match max {
                Some(max) => (1..=max).collect(),
                None => index
                    .iter()
                    .map(|s| match s.trim().parse::<u32>() {
                        Ok(n) if n > 0 => Ok(n),
                        _ => Err(usage(format!("bad index {s:?}: expected a positive integer"))),
                    })
                    .collect::<Result<_, _>>()?,
            };
            let mut out = Table::new(vec!["n", "value", "factorization"]);
            for n in ns {
                let v = t.chocolate2(n).map_err(check)?;
                let f = factor(&v, trial_bound);
                note(&f, &mut status);
                out.push(vec![n.to_string(), v.to_string(), f.to_string()]);
            }
            Ok((out, status))
        }
        FactorSeq::Table => {
            let pairs: Vec<(u32, u32)> = match max {
                Some(max) => (1..=max)
                    .flat_map(|m| (1..=max).map(move |n| (m, n)))
                    .collect(),
                None => index
                    .iter()
                    .map(|s| parse_pair(s).ok_or_else(|| usage(format!("bad index {s:?}: expected MxN"))))
                    .collect::<Result<_, _>>()?,
            };
            let mut out = Table::new(vec!["m", "n", "value", "factorization"]);
            for (m, n) in pairs {
                let v = t.chocolate_number(m, n).map_err(check)?;
                let f = factor(&v, trial_bound);
                note(&f, &mut status);
                out.push(vec![m.to_string(), n.to_string(), v.to_string(), f.to_string()]);
            }
            Ok((out, status))
        }
    }
}

pub fn nu(p: u64, seq: NuSeq, max: u32, check_bound: bool, cache: &mut Cache) -> Outcome {
    if !arith::is_prime_u64(p) {
        return Err(usage(format!("--p must be prime, got {p}")));
    }
    if check_bound && p != 2 {
        return Err(usage("--check-bound applies only to p = 2"));
    }
    if max == 0 {
        return Err(usage("--max must be positive"));
    }
    let t = &mut cache.table;
    // (index fields, value, lower bound if any)
    let mut items: Vec<(Vec<u32>, BigUint, Option<u32>)> = Vec::new();
    match seq {
        NuSeq::B => {
            t.chocolate2(max).map_err(check)?;
            for n in 1..=max {
                let v = t.chocolate2(n).map_err(check)?;
                items.push((vec![n], v, (n > 1).then_some(n)));
            }
        }
        NuSeq::Square => {
            for n in 1..=max {
                let v = t.chocolate_number(n, n).map_err(check)?;
                items.push((vec![n], v, Some(2 * n - 2)));
            }
        }
        NuSeq::Table => {
            for m in 1..=max {
                for n in 1..=max {
                    let v = t.chocolate_number(m, n).map_err(check)?;
                    items.push((vec![m, n], v, (m > 1 && n > 1).then_some(m + n - 2)));
                }
            }
        }
    }
    let mut header = match seq {
        NuSeq::Table => vec!["m", "n", "nu"],
        _ => vec!["n", "nu"],
    };
    if check_bound {
        header.extend(["bound", "holds"]);
    }
    let mut out = Table::new(header);
    let mut status = Status::Ok;
    for (idx, v, bound) in items {
        let val = arith::nu_p(&v, p).map_err(check)?;
        let mut row: Vec<String> = idx.iter().map(u32::to_string).collect();
        row.push(val.to_string());
        if check_bound {
            let holds = bound.is_none_or(|b| val >= b);
            if !holds {
                status = Status::Failed;
            }
            row.push(bound.map_or_else(|| "-".to_string(), |b| b.to_string()));
            row.push(holds.to_string());
        }
        out.push(row);
    }
    Ok((out, status))
}

pub fn modulo(seq: ModSeq, moduli: &[u64], max: usize) -> Outcome {
    if max == 0 {
        return Err(usage("--max must be positive"));
    }
    let seq = scan_sequence(seq);
    let compute = |&m: &u64| seq.residues(max, m).map_err(usage);

    #[cfg(feature = "parallel")]
    let all: Vec<Vec<u64>> = {
        use rayon::prelude::*;
        moduli.par_iter().map(compute).collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let all: Vec<Vec<u64>> = moduli.iter().map(compute).collect::<Result<_, _>>()?;

    let mut out = Table::new(vec!["modulus", "n", "residue"]);
    let single = moduli.len() == 1;
    let mut plain = Vec::new();
    for (&m, residues) in moduli.iter().zip(&all) {
        for (i, r) in residues.iter().enumerate() {
            let n = i + 1;
            if single {
                plain.push(format!("{n} {r}"));
            } else {
                plain.push(format!("{m} {n} {r}"));
            }
            out.push(vec![m.to_string(), n.to_string(), r.to_string()]);
        }
    }
    out.plain = Some(plain);
    Ok((out, Status::Ok))
}

pub fn period(seq: ModSeq, modulus: u64, max: usize, hint_pp1: bool) -> Outcome {
    let residues = scan_sequence(seq).residues(max, modulus).map_err(usage)?;
    let hints: Option<Vec<usize>> = hint_pp1.then(|| {
        divisors(modulus * (modulus - 1))
            .into_iter()
            .map(|d| d as usize)
            .collect()
    });
    let report = detect_eventual_period(&residues, hints.as_deref());
    let mut out = Table::new(vec![
        "modulus",
        "n_max",
        "resolved",
        "preperiod",
        "period",
        "eventually_zero",
    ]);
    out.plain = Some(vec![report.to_string()]);
    let opt = |v: usize| if report.resolved { v.to_string() } else { String::new() };
    out.push(vec![
        modulus.to_string(),
        max.to_string(),
        report.resolved.to_string(),
        opt(report.preperiod),
        opt(report.period),
        report.eventually_zero.to_string(),
    ]);
    let status = if report.resolved { Status::Ok } else { Status::Unresolved };
    Ok((out, status))
}

pub fn series_cmd(which: SeriesCheck, order: usize) -> Outcome {
    let mut residuals: Vec<(&'static str, RationalSeries)> = Vec::new();
    let mut table = ChocolateTable::new();
    match which {
        SeriesCheck::Riccati => {
            if order < 3 {
                return Err(usage("--order must be at least 3 for riccati"));
            }
            let r = series::riccati_residual(order, &mut table).map_err(check)?;
            residuals.push(("riccati", r));
        }
        SeriesCheck::Ode => {
            if order < 4 {
                return Err(usage("--order must be at least 4 for ode"));
            }
            residuals.push(("ode", series::verify_linear_ode(order).map_err(check)?.1));
        }
        SeriesCheck::Hypergeom => {
            if order < 3 {
                return Err(usage("--order must be at least 3 for hypergeom"));
            }
            let (_, r) = series::verify_log_derivative(order, &mut table).map_err(check)?;
            residuals.push(("logderiv", r));
            let ratio = series::hypergeometric_ratio_residual(&series::u_series(order)).map_err(check)?;
            residuals.push(("ratio", ratio));
        }
    }
    let mut out = Table::new(vec!["check", "degree", "numerator", "denominator"]);
    let mut plain = Vec::new();
    let mut through = usize::MAX;
    let mut first_bad: Option<(&str, usize)> = None;
    for (name, r) in &residuals {
        through = through.min(r.order());
        if first_bad.is_none() {
            first_bad = r.first_nonzero().map(|k| (*name, k));
        }
        for (k, c) in r.coeffs().iter().enumerate() {
            let (num, den) = (c.numer().to_string(), c.denom().to_string());
            plain.push(if residuals.len() == 1 {
                format!("{k} {num}/{den}")
            } else {
                format!("{name} {k} {num}/{den}")
            });
            out.push(vec![name.to_string(), k.to_string(), num, den]);
        }
    }
    out.plain = Some(plain);
    let status = match first_bad {
        None => {
            out.summary = Some(format!("residual zero through order {through}"));
            Status::Ok
        }
        Some((name, k)) => {
            out.summary = Some(format!("{name} residual nonzero at degree {k}"));
            Status::Failed
        }
    };
    Ok((out, status))
}

pub fn conjecture(id: u8, moduli: &[u64], max: usize, seq: ModSeq) -> Outcome {
    let conj = Conjecture::from_id(id).ok_or_else(|| usage(format!("unknown conjecture {id}")))?;
    let report = conjecture_scan(conj, moduli, max, scan_sequence(seq)).map_err(usage)?;
    let mut out = Table::new(vec![
        "conjecture",
        "sequence",
        "modulus",
        "n_max",
        "status",
        "preperiod",
        "period",
        "notes",
    ]);
    let mut plain = Vec::new();
    let show = |v: Option<usize>| v.map_or_else(String::new, |v| v.to_string());
    for r in &report.records {
        plain.push(format!(
            "{} {} mod {}: {} ({})",
            r.conjecture,
            r.sequence.name(),
            r.modulus,
            r.status,
            r.notes
        ));
        out.push(vec![
            r.conjecture.to_string(),
            r.sequence.name().to_string(),
            r.modulus.to_string(),
            r.n_max.to_string(),
            r.status.to_string(),
            show(r.preperiod),
            show(r.period),
            r.notes.clone(),
        ]);
    }
    out.plain = Some(plain);
    out.summary = Some(format!("overall {}", report.overall()));
    let status = match report.overall() {
        ScanStatus::Consistent => Status::Ok,
        ScanStatus::Unresolved => Status::Unresolved,
        ScanStatus::Inconsistent => Status::Failed,
    };
    Ok((out, status))
}
