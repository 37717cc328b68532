//! Acceptance criteria, one PASS/FAIL line each. For the report alone:
//! `cargo test -p chocolate-core --test acceptance -- --nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use chocolate_core::arith::{factor, nu_p, primes_up_to, DEFAULT_TRIAL_BOUND};
use chocolate_core::chocolate::{chocolate2_prefix, generate, ChocolateTable, SequenceBound, SequenceKind, SequenceSpec};
use chocolate_core::modular::{
    chocolate2_mod, zero_tail_prime, conjecture_scan, detect_eventual_period, divisors, stepped_sum_from_1,
    stepped_sum_from_5, p_sequence_mod, mod3_pattern_check, mod3_expected, Conjecture, ScanSequence, ScanStatus,
};
use chocolate_core::oracle::Oracle;
use chocolate_core::series::{
    f_series_from, linear_ode_residual, p_numerators, riccati_residual, riccati_residual_of, log_derivative_residual,
    u_series, u_series_from, verify_linear_ode, verify_log_derivative,
};
use num_bigint::BigUint;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;
type Index = (u32, u32);
type Factors = &'static [(u64, u32)];

fn big(s: &str) -> BigUint {
    s.parse().expect("decimal literal")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

const TABLE_1: [[&str; 5]; 5] = [
    ["1", "1", "2", "6", "24"],
    ["1", "4", "56", "1712", "92800"],
    ["2", "56", "9408", "4948992", "6085088256"],
    ["6", "1712", "4948992", "63352393728", "2472100837326848"],
    ["24", "92800", "6085088256", "2472100837326848", "3947339798331748515840"],
];

fn ac01_small_table() -> Outcome {
    let start = Instant::now();
    let mut t = ChocolateTable::new();
    for m in 1..=5u32 {
        for n in 1..=5u32 {
            let got = t.chocolate_number(m, n).map_err(|e| e.to_string())?;
            let want = big(TABLE_1[m as usize - 1][n as usize - 1]);
            ensure(got == want, || format!("A({m},{n}) = {got}, expected {want}"))?;
        }
    }
    let took = within(start, Duration::from_secs(1), "5x5 table")?;
    Ok(format!("25 entries exact, A(5,5) = {}, {took:?}", TABLE_1[4][4]))
}

fn ac02_oracle() -> Outcome {
    let start = Instant::now();
    let mut oracle = Oracle::default();
    let mut t = ChocolateTable::new();
    let mut pairs = 0;
    for m in 1..=12u32 {
        for n in 1..=12 / m {
            let brute = oracle.count_sequences(m, n).map_err(|e| e.to_string())?;
            let rec = t.chocolate_number(m, n).map_err(|e| e.to_string())?;
            ensure(brute == rec, || format!("{m}×{n}: oracle {brute} vs recursion {rec}"))?;
            pairs += 1;
        }
    }
    for (m, n, want) in [(2, 2, "4"), (2, 3, "56"), (3, 4, "4948992"), (2, 6, "7918592")] {
        let got = oracle.count_sequences(m, n).map_err(|e| e.to_string())?;
        ensure(got == big(want), || format!("oracle {m}×{n} = {got}, expected {want}"))?;
    }
    let took = within(start, Duration::from_secs(60), "oracle sweep")?;
    Ok(format!("{pairs} pairs with m·n <= 12 agree, {took:?}"))
}

fn ac03_factorizations() -> Outcome {
    let expected: [(Index, Factors); 10] = [
        ((1, 1), &[]),
        ((1, 2), &[]),
        ((1, 3), &[(2, 1)]),
        ((1, 4), &[(2, 1), (3, 1)]),
        ((2, 2), &[(2, 2)]),
        ((2, 3), &[(2, 3), (7, 1)]),
        ((2, 4), &[(2, 4), (107, 1)]),
        ((3, 3), &[(2, 6), (3, 1), (7, 2)]),
        ((3, 4), &[(2, 10), (3, 3), (179, 1)]),
        ((4, 4), &[(2, 12), (3, 1), (13, 1), (19, 1), (20873, 1)]),
    ];
    let mut t = ChocolateTable::new();
    for ((m, n), want) in expected {
        for (a, b) in [(m, n), (n, m)] {
            let value = t.chocolate_number(a, b).map_err(|e| e.to_string())?;
            let f = factor(&value, DEFAULT_TRIAL_BOUND);
            ensure(f.is_complete(), || format!("A({a},{b}) not fully factored: {f}"))?;
            let got = f.as_u64_pairs().unwrap_or_default();
            ensure(got == want, || format!("A({a},{b}) = {f}, expected {want:?}"))?;
        }
    }
    let a44 = factor(&t.chocolate_number(4, 4).unwrap(), DEFAULT_TRIAL_BOUND);
    Ok(format!("16 entries match; A(4,4) = {a44}"))
}

fn ac04_valuations() -> Outcome {
    let mut t = ChocolateTable::new();
    for m in 2..=6u32 {
        for n in 2..=6u32 {
            let v = nu_p(&t.chocolate_number(m, n).unwrap(), 2).map_err(|e| e.to_string())?;
            ensure(v >= m + n - 2, || format!("ν2(A({m},{n})) = {v} < {}", m + n - 2))?;
        }
    }
    let want = [2u32, 3, 4, 7, 10, 10, 12, 15, 17, 18];
    let b = chocolate2_prefix(11, &mut t).map_err(|e| e.to_string())?;
    let got: Vec<u32> = b[1..].iter().map(|x| nu_p(x, 2).unwrap()).collect();
    ensure(got == want, || format!("ν2(B_2..B_11) = {got:?}, expected {want:?}"))?;
    Ok(format!("bound holds on 2..6 × 2..6; ν2(B_2..B_11) = {got:?}"))
}

fn ac05_sequences() -> Outcome {
    let a261746 = [
        "1", "2", "4", "6", "24", "56", "120", "720", "1712", "5040", "9408", "40320", "92800", "362880", "3628800",
        "4948992", "7918592", "39916800", "479001600", "984237056", "6085088256",
    ];
    let a261964 = [
        "1", "1", "1", "2", "4", "2", "6", "56", "56", "6", "24", "1712", "9408", "1712", "24", "120", "92800",
        "4948992", "4948992", "92800", "120", "720", "7918592", "6085088256", "63352393728", "6085088256",
        "7918592", "720",
    ];
    let a261747 = [
        "1",
        "4",
        "56",
        "1712",
        "92800",
        "7918592",
        "984237056",
        "168662855680",
        "38238313152512",
        "11106033743298560",
        "4026844843819663360",
    ];
    let a257281 = [
        "1",
        "4",
        "9408",
        "63352393728",
        "3947339798331748515840",
        "5732998662938820430255187886059028480",
        "417673987760293241182652126617960927525362518081132298240",
    ];
    let mut t = ChocolateTable::new();
    let cases: [(&str, SequenceKind, SequenceBound, &[&str]); 4] = [
        (
            "A261746",
            SequenceKind::DistinctSorted,
            SequenceBound::Value(big(a261746[20])),
            &a261746,
        ),
        ("A261964", SequenceKind::TriangleRows, SequenceBound::Index(7), &a261964),
        ("A261747", SequenceKind::TwoByN, SequenceBound::Index(11), &a261747),
        ("A257281", SequenceKind::Square, SequenceBound::Index(7), &a257281),
    ];
    let mut summary = Vec::new();
    for (name, kind, bound, want) in cases {
        let spec = SequenceSpec::new(kind, bound).map_err(|e| e.to_string())?;
        let got: Vec<String> = generate(&spec, &mut t)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|term| term.value.to_string())
            .collect();
        ensure(got == want, || format!("{name}: got {got:?}"))?;
        summary.push(format!("{name} {} terms", want.len()));
    }
    Ok(summary.join(", "))
}

fn ac06_mod3_pattern() -> Outcome {
    mod3_pattern_check(500).map_err(|e| e.to_string())?;
    let residues = chocolate2_mod(500, 3).map_err(|e| e.to_string())?;
    let exact = chocolate2_prefix(25, &mut ChocolateTable::new()).map_err(|e| e.to_string())?;
    for (idx, b) in exact.iter().enumerate().skip(1) {
        let n = idx + 1;
        let r = b % 3u32;
        ensure(r == BigUint::from(mod3_expected(n)), || format!("exact B_{n} ≡ {r} (mod 3)"))?;
        ensure(r == BigUint::from(residues[idx]), || format!("modular B_{n} disagrees"))?;
    }
    Ok("pattern holds for 2 <= n <= 500; exact agreement through n = 25".into())
}

fn ac07_divisibility() -> Outcome {
    let b11 = chocolate2_mod(300, 11).map_err(|e| e.to_string())?;
    let b5 = chocolate2_mod(300, 5).map_err(|e| e.to_string())?;
    for i in 6..=300 {
        ensure(b11[i - 1] == 0, || format!("11 ∤ B_{i}"))?;
    }
    for i in 13..=300 {
        ensure(b5[i - 1] == 0, || format!("5 ∤ B_{i}"))?;
    }
    let exact = chocolate2_prefix(12, &mut ChocolateTable::new()).map_err(|e| e.to_string())?;
    let divisible: Vec<usize> = (1..=12).filter(|&i| (&exact[i - 1] % 5u32) == BigUint::from(0u32)).collect();
    ensure(divisible == [5, 8, 10, 11], || format!("5 | B_i for i <= 12 at {divisible:?}"))?;
    Ok("11 | B_6..B_300, 5 | B_13..B_300, 5 | B_i (i <= 12) only at 5, 8, 10, 11".into())
}

fn ac08_stepped_sums() -> Outcome {
    let mut count = 0;
    for n in (8..=2000u64).step_by(6) {
        let s = stepped_sum_from_1(n).map_err(|e| e.to_string())?;
        ensure(s == 1, || format!("sum from C(n,1) at n = {n} is {s}"))?;
        count += 1;
    }
    for n in (10..=2000u64).step_by(6) {
        let s = stepped_sum_from_5(n).map_err(|e| e.to_string())?;
        ensure(s == 0, || format!("sum from C(n,5) at n = {n} is {s}"))?;
        count += 1;
    }
    Ok(format!("{count} values of n checked"))
}

fn ac09_classifier() -> Outcome {
    let want = [2u64, 5, 11, 19, 29, 31, 41, 59, 61, 71, 79, 89];
    let primes = primes_up_to(100);
    let classified: Vec<u64> = primes.iter().copied().filter(|&p| zero_tail_prime(p)).collect();
    ensure(classified == want, || format!("classifier true-set {classified:?}"))?;
    let zero_tails: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| {
            // one full period plus a cycle covers every residue of 4i - 5
            let res = p_sequence_mod((p * (p - 1) + p) as usize, p).unwrap();
            *res.last().unwrap() == 0
        })
        .collect();
    ensure(zero_tails == want, || format!("P_n zero tails at {zero_tails:?}"))?;
    let prefix: Vec<u64> = classified.iter().copied().filter(|&p| p != 2 && p != 5).take(6).collect();
    ensure(prefix == [11, 19, 29, 31, 41, 59], || format!("A045468 prefix {prefix:?}"))?;
    Ok(format!("true exactly for {want:?}; P_n zero tails agree"))
}

fn ac10_periods() -> Outcome {
    let mut notes = Vec::new();
    for p in [3u64, 7, 13, 23, 37, 43] {
        let pp = p * (p - 1);
        let res = p_sequence_mod(10 * pp as usize, p).map_err(|e| e.to_string())?;
        let hint: Vec<usize> = divisors(pp).into_iter().map(|d| d as usize).collect();
        let r = detect_eventual_period(&res, Some(&hint));
        ensure(r.resolved, || format!("P_n mod {p} unresolved"))?;
        ensure(pp % r.period as u64 == 0, || format!("P_n mod {p}: period {} ∤ {pp}", r.period))?;
        notes.push(format!("{p}:{}", r.period));
    }
    for m in [9u64, 12, 21] {
        let res = p_sequence_mod(10 * (m * (m - 1)) as usize, m).map_err(|e| e.to_string())?;
        let r = detect_eventual_period(&res, None);
        ensure(r.resolved, || format!("P_n mod {m} unresolved"))?;
        notes.push(if r.eventually_zero {
            format!("{m}:zero@{}", r.preperiod)
        } else {
            format!("{m}:{}", r.period)
        });
    }
    Ok(format!("periods {}", notes.join(" ")))
}

fn ac11_series() -> Outcome {
    const N: usize = 30;
    let mut t = ChocolateTable::new();
    ensure(riccati_residual(N, &mut t).map_err(|e| e.to_string())?.is_zero(), || "Riccati residual nonzero".into())?;
    ensure(verify_linear_ode(N).map_err(|e| e.to_string())?.0, || "linear ODE residual nonzero".into())?;
    ensure(verify_log_derivative(N, &mut t).map_err(|e| e.to_string())?.0, || "log-derivative residual nonzero".into())?;

    let b = chocolate2_prefix(N as u32, &mut t).map_err(|e| e.to_string())?;
    let u = u_series(N);
    for k in 0..N {
        let mut bad = b.clone();
        bad[k] += 1u32;
        let f = f_series_from(&bad);
        ensure(!riccati_residual_of(&f).unwrap().is_zero(), || format!("Riccati blind to B_{}", k + 1))?;
        ensure(!log_derivative_residual(&f, &u).unwrap().is_zero(), || format!("log-derivative blind to B_{}", k + 1))?;
    }
    let f = f_series_from(&b);
    let p = p_numerators(N);
    for k in 0..=N {
        let mut bad = p.clone();
        bad[k] += 1;
        let u = u_series_from(&bad);
        ensure(!log_derivative_residual(&f, &u).unwrap().is_zero(), || format!("log-derivative blind to P_{k}"))?;
        ensure(!linear_ode_residual(&u).unwrap().is_zero(), || format!("ODE blind to P_{k}"))?;
    }
    Ok(format!("all three identities exact through order {N}; every single B_n / P_n mutation detected"))
}

fn ac12_conjectures() -> Outcome {
    let start = Instant::now();
    let banned = ["proof", "proven", "proved", "theorem"];
    let mut lines = Vec::new();

    let primes = primes_up_to(49);
    let r1 = conjecture_scan(Conjecture::ZeroTail, &primes, 300, ScanSequence::Chocolate2).map_err(|e| e.to_string())?;
    let r2 = conjecture_scan(Conjecture::EventualPeriod, &[3, 7, 9], 10_000, ScanSequence::Chocolate2)
        .map_err(|e| e.to_string())?;
    let r3 = conjecture_scan(Conjecture::PeriodMultiple, &[3, 7, 13], 10_000, ScanSequence::Chocolate2)
        .map_err(|e| e.to_string())?;

    for rec in r1.records.iter().chain(&r2.records) {
        ensure(rec.status == ScanStatus::Consistent, || {
            format!("conjecture {} mod {}: {} ({})", rec.conjecture, rec.modulus, rec.status, rec.notes)
        })?;
    }
    for rec in &r3.records {
        let period = rec.period.ok_or_else(|| format!("conjecture 3 mod {}: no period", rec.modulus))?;
        ensure(
            rec.notes.contains("period | p(p-1):") && rec.notes.contains("p(p-1) | period:"),
            || format!("conjecture 3 mod {} lacks both directions: {}", rec.modulus, rec.notes),
        )?;
        lines.push(format!("p={} period {period} [{}]", rec.modulus, rec.status));
    }
    for rec in r1.records.iter().chain(&r2.records).chain(&r3.records) {
        let lower = rec.notes.to_lowercase();
        ensure(!banned.iter().any(|w| lower.contains(w)), || format!("record claims too much: {}", rec.notes))?;
    }
    let took = within(start, Duration::from_secs(300), "conjecture harness")?;
    Ok(format!(
        "C1 {} primes and C2 m ∈ {{3,7,9}} CONSISTENT; C3 {}; {took:?}",
        primes.len(),
        lines.join(", ")
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Check); 12] = [
        ("AC01 A(m,n) for m,n <= 5", ac01_small_table),
        ("AC02 oracle equivalence", ac02_oracle),
        ("AC03 factorizations", ac03_factorizations),
        ("AC04 2-adic bounds and B_n valuations", ac04_valuations),
        ("AC05 sequence prefixes", ac05_sequences),
        ("AC06 B_n mod 3 pattern", ac06_mod3_pattern),
        ("AC07 divisibility by 11 and 5", ac07_divisibility),
        ("AC08 stepped binomial sums mod 3", ac08_stepped_sums),
        ("AC09 prime classifier", ac09_classifier),
        ("AC10 P_n periodicity", ac10_periods),
        ("AC11 series identities", ac11_series),
        ("AC12 conjecture harness", ac12_conjectures),
    ];
    // raw handle so the report shows without --nocapture
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let line = match check() {
            Ok(detail) => format!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed.push(name);
                format!("[FAIL] {name}: {why}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
