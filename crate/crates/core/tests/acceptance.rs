//! Exit criteria. Every comparison is exact; runtime limits are checked where
//! a criterion states one. Run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see one
//! PASS/FAIL line per criterion.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use qbracket::arith::{build_table, divisor_sum_transform, FunctionSpec};
use qbracket::bracket::{Engine, IdentityCase, IdentityId, VerificationReport, CATALOG_FUNCTIONS, RANDOM_TABLES};
use qbracket::partitions::{enumerate_partitions, stat_all_parts_fast, stat_distinct_parts_fast, stat_oracle, Mode};
use qbracket::series::partition_numbers;

const SEED: u64 = 20170101;

fn criterion(name: &str, ok: bool, elapsed: Duration, limit: Option<Duration>) {
    let in_time = limit.is_none_or(|l| elapsed < l);
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let limit = limit
        .map(|l| format!(" (limit {:.0}s)", l.as_secs_f64()))
        .unwrap_or_default();
    println!("[{verdict}] {name}: {:.3}s{limit}", elapsed.as_secs_f64());
    assert!(ok, "{name}: identity check failed");
    assert!(in_time, "{name}: exceeded runtime limit");
}

fn run_cases(cases: &[IdentityCase]) -> Vec<VerificationReport> {
    let engine = Engine::for_cases(cases);
    engine
        .verify_all(cases)
        .into_iter()
        .map(|r| r.expect("well-formed case"))
        .collect()
}

fn all_pass(reports: &[VerificationReport]) -> bool {
    for r in reports {
        if let Some(row) = r.failures().next() {
            eprintln!(
                "{:?} failed at n={} ({}): {} != {}",
                r.case, row.n, row.check, row.lhs, row.rhs
            );
            return false;
        }
    }
    reports.iter().all(|r| r.overall && !r.per_n.is_empty())
}

fn max_n(r: &VerificationReport, check_prefix: &str) -> usize {
    r.per_n
        .iter()
        .filter(|row| row.check.starts_with(check_prefix))
        .map(|row| row.n)
        .max()
        .unwrap_or(0)
}

#[test]
fn all_parts_bracket_equals_lambert() {
    let start = Instant::now();
    let cases: Vec<_> = CATALOG_FUNCTIONS
        .iter()
        .map(|&f| IdentityCase::new(IdentityId::Theorem1, 200, 30).with_function(f))
        .collect();
    let reports = run_cases(&cases);
    let covered = reports
        .iter()
        .all(|r| max_n(r, "bracket(convolution)") == 200 && max_n(r, "bracket(enumeration)") == 30);
    criterion(
        "all-parts bracket = Lambert series, n<=200 fast, n<=30 enumeration",
        all_pass(&reports) && covered,
        start.elapsed(),
        Some(Duration::from_secs(10)),
    );
}

#[test]
fn distinct_parts_bracket_equals_power_series() {
    let start = Instant::now();
    let cases: Vec<_> = CATALOG_FUNCTIONS
        .iter()
        .map(|&f| IdentityCase::new(IdentityId::Theorem3, 200, 30).with_function(f))
        .collect();
    let reports = run_cases(&cases);
    let covered = reports
        .iter()
        .all(|r| max_n(r, "bracket(convolution)") == 200 && max_n(r, "bracket(enumeration)") == 30);
    criterion(
        "distinct-parts bracket = plain series, n<=200 fast, n<=30 enumeration",
        all_pass(&reports) && covered,
        start.elapsed(),
        Some(Duration::from_secs(10)),
    );
}

#[test]
fn partition_convolutions_match_enumeration() {
    let start = Instant::now();
    let mut ok = true;
    for spec in CATALOG_FUNCTIONS {
        let f = build_table(spec, 200);
        let all = stat_all_parts_fast(&f, 200).unwrap();
        let distinct = stat_distinct_parts_fast(&f, 200).unwrap();
        // direct enumeration, one partition at a time
        for n in 0..=30u32 {
            ok &= stat_oracle(&f, Mode::AllParts, n).unwrap() == *all.entry(n as usize);
            ok &= stat_oracle(&f, Mode::DistinctParts, n).unwrap() == *distinct.entry(n as usize);
        }
        let through_divisor_sum = stat_distinct_parts_fast(&divisor_sum_transform(&f), 200).unwrap();
        for n in 0..=200 {
            ok &= all.entry(n) == through_divisor_sum.entry(n);
        }
    }
    criterion(
        "all-parts and distinct-parts convolutions = enumeration (n<=30), linked by divisor sums (n<=200)",
        ok,
        start.elapsed(),
        None,
    );
}

#[test]
fn divisor_sum_link_randomized() {
    let start = Instant::now();
    let case = IdentityCase::new(IdentityId::Multcor, 40, 40).with_random(SEED, RANDOM_TABLES);
    let reports = run_cases(&[case]);
    let r = &reports[0];
    let tables: HashSet<&str> = r.per_n.iter().filter_map(|row| row.check.split(':').next()).collect();
    let three_way_rows = r.per_n.iter().filter(|row| row.check.contains("enum")).count();
    let covered = tables.len() == 100 && three_way_rows == 100 * 40 * 2 && max_n(r, "table 99") == 40;
    criterion(
        "divisor-sum link, randomized: 100 tables in [-9,9], three-way equality for n<=40",
        all_pass(&reports) && covered,
        start.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn euler_sigma_identity_to_1000() {
    let start = Instant::now();
    let n_max = 1000;
    let p = partition_numbers(n_max);
    let sigma = build_table(FunctionSpec::Sigma(1), n_max);
    let mut ok = true;
    for n in 1..=n_max {
        let rhs: BigInt = (1..=n).map(|k| sigma.get(k) * &p[n - k]).sum();
        ok &= BigInt::from(n) * &p[n] == rhs;
    }
    criterion(
        "n p(n) = sum sigma_1(k) p(n-k) for n<=1000",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn containing_one_corollary() {
    let start = Instant::now();
    let p = partition_numbers(30);
    let mut ok = true;
    for n in 1..=30u32 {
        let count = enumerate_partitions(n).filter(|part| part.parts().contains(&1)).count();
        ok &= BigInt::from(count) == p[n as usize - 1];
    }
    let reports = run_cases(&[IdentityCase::new(IdentityId::ContainingOne, 30, 30)]);
    criterion(
        "Partitions containing 1 = p(n-1), 1<=n<=30",
        ok && all_pass(&reports),
        start.elapsed(),
        None,
    );
}

#[test]
fn squarefree_parts_corollary() {
    let start = Instant::now();
    let reports = run_cases(&[IdentityCase::new(IdentityId::SquarefreeParity, 500, 30)]);
    let r = &reports[0];
    let covered =
        max_n(r, "Q(n) by enumeration") == 30 && max_n(r, "fast Q(n)") == 500 && max_n(r, "Q(n) mod 2") == 500;
    criterion(
        "Q(n) = sum p(n-k) 2^omega(k) (n<=30 enum, n<=500 fast); Q(n) = p(n-1) mod 2 (n<=500)",
        all_pass(&reports) && covered,
        start.elapsed(),
        None,
    );
}

#[test]
fn distinct_squares_corollary() {
    let start = Instant::now();
    let p = partition_numbers(30);
    let mut ok = true;
    for n in 1..=30u32 {
        let direct: usize = enumerate_partitions(n)
            .map(|part| {
                part.distinct_parts()
                    .filter(|&k| (k as usize).isqrt().pow(2) == k as usize)
                    .count()
            })
            .sum();
        let formula: BigInt = (1..)
            .take_while(|k| k * k <= n as usize)
            .map(|k| &p[n as usize - k * k])
            .sum();
        ok &= BigInt::from(direct) == formula;
    }
    let reports = run_cases(&[IdentityCase::new(IdentityId::DistinctSquares, 30, 30)]);
    criterion(
        "Distinct squares over all partitions = sum p(n-k^2), n<=30",
        ok && all_pass(&reports),
        start.elapsed(),
        None,
    );
}

#[test]
fn von_mangoldt_corollary() {
    let start = Instant::now();
    let reports = run_cases(&[IdentityCase::new(IdentityId::MangoldtProduct, 30, 30).with_product_bound(25)]);
    let r = &reports[0];
    let covered = max_n(r, "enum all-parts Lambda") == 30 && max_n(r, "prod k^p(n-k)") == 25;
    criterion(
        "Log-vector identity (n<=30) and prod k^p(n-k) = product of distinct parts (n<=25)",
        all_pass(&reports) && covered,
        start.elapsed(),
        None,
    );
}

#[test]
fn eisenstein_moment_coefficients() {
    let start = Instant::now();
    let cases: Vec<_> = (1..=3)
        .map(|k| IdentityCase::new(IdentityId::EisensteinMoment, 200, 30).with_alpha(k))
        .collect();
    let reports = run_cases(&cases);
    let covered = reports.iter().all(|r| max_n(r, "[q^n] bracket(convolution)") == 200);
    criterion(
        "Moment bracket coefficients = sigma_{2k-1}(n), k in {1,2,3}, n<=200",
        all_pass(&reports) && covered,
        start.elapsed(),
        None,
    );
}

#[test]
fn enumeration_oracle_integrity() {
    let start = Instant::now();
    let p = partition_numbers(40);
    let mut ok = true;
    for n in 0..=40u32 {
        let mut seen = HashSet::new();
        for part in enumerate_partitions(n) {
            ok &= part.is_valid() && part.size() == n as u64;
            ok &= seen.insert(part.parts().to_vec());
        }
        ok &= BigInt::from(seen.len()) == p[n as usize];
    }
    criterion(
        "Enumeration yields exactly p(n) valid distinct partitions, n<=40",
        ok,
        start.elapsed(),
        None,
    );
}

#[test]
fn cli_verify_all_is_deterministic() {
    let start = Instant::now();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_qbracket"))
            .args(["verify", "--identity", "all", "--format", "json"])
            .env_remove("QBRACKET_OUTPUT_DIR")
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0), "verify --identity all must pass");
        out.stdout
    };
    let (a, b) = (run(), run());
    criterion(
        "CLI determinism: two `verify --identity all` runs give byte-identical JSON",
        !a.is_empty() && a == b,
        start.elapsed(),
        None,
    );
}
