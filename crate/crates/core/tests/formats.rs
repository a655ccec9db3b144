use std::process::{Command, Output};

use bchkit::basis::BasisKind;
use bchkit::bch::bch_series;
use bchkit::golden;
use bchkit::rational::Rational;
use bchkit::report::{parse_jsonl, parse_tsv, records, write_jsonl, write_pretty, write_tsv, OutputRecord, SeriesKind, TableInfo};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn bchkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bchkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(tsv: &str) -> Vec<OutputRecord> {
    parse_tsv(tsv).unwrap().0
}

#[test]
fn pretty_hall_table_matches_reference_transcription() {
    let c = bch_series(BasisKind::Hall, 9).unwrap();
    let mut out = Vec::new();
    write_pretty(&mut out, &TableInfo::complete(BasisKind::Hall, SeriesKind::Bch, 9), &records(&c)).unwrap();
    let reference = include_str!("../data/hall_bch_pretty.txt");
    let got = String::from_utf8(out).unwrap();
    for (k, (a, b)) in got.lines().zip(reference.lines()).enumerate() {
        assert_eq!(a, b, "line {}", k + 1);
    }
    assert_eq!(got.lines().count(), reference.lines().count());
    assert_eq!(got.lines().count(), 3 + 43);
}

#[test]
fn jsonl_keeps_huge_integers_exact() {
    let c = bch_series(BasisKind::Hall, 14).unwrap();
    let mut rows = records(&c);
    let big: BigInt = "-123456789012345678901234567890".parse().unwrap();
    rows.push(OutputRecord { i: 9999, degree: 15, i_prime: 5, i_dprime: 4, word: "xy".into(), numerator: big.clone(), denominator: big.abs() + 1 });
    let info = TableInfo::complete(BasisKind::Hall, SeriesKind::Bch, 14);
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &info, &rows).unwrap();
    let (info2, rows2) = parse_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(info2, info);
    assert_eq!(rows2, rows);
    assert!(std::str::from_utf8(&buf).unwrap().contains("\"-123456789012345678901234567890\""));
}

fn record_strategy() -> impl Strategy<Value = OutputRecord> {
    (1usize..10_000, 1usize..30, any::<i64>(), 1i64..i64::MAX, "[xy]{1,20}").prop_map(|(i, degree, n, d, word)| {
        let v = Rational::new(BigInt::from(n), BigInt::from(d));
        OutputRecord { i, degree, i_prime: i / 2, i_dprime: i / 3, word, numerator: v.numer().clone(), denominator: v.denom().clone() }
    })
}

proptest! {
    #[test]
    fn tsv_round_trip(rows in proptest::collection::vec(record_strategy(), 0..40), reached in 1usize..5) {
        let info = TableInfo { basis: BasisKind::Lyndon, series: SeriesKind::Sbch, requested_degree: 5, degree_reached: reached, memory_cap_mb: Some(7) };
        let mut buf = Vec::new();
        write_tsv(&mut buf, &info, &rows).unwrap();
        let (back, comments) = parse_tsv(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, rows);
        prop_assert_eq!(comments.iter().any(|c| c.starts_with("PARTIAL OUTPUT")), reached < 5);
    }
}

#[test]
fn cli_tables() {
    let o = bchkit(&["bch", "--basis", "hall", "--max-degree", "9", "--format", "tsv"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 127);
    assert!(rows.windows(2).all(|w| (w[0].degree, w[0].i) < (w[1].degree, w[1].i)));
    assert!(rows.iter().all(|r| r.denominator.is_positive()));

    let o = bchkit(&["bch", "--basis", "hall", "--max-degree", "1"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.numerator == BigInt::from(1) && r.denominator == BigInt::from(1)));

    // z column of the Lyndon reference rows; xyyyy is tabulated with the opposite sign
    let o = bchkit(&["bch", "--basis", "lyndon", "--max-degree", "5", "--series", "bch"]);
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 14);
    for g in golden::lyndon_elements() {
        let w = g.word.unwrap().to_string();
        let r = rows.iter().find(|r| r.word == w).unwrap();
        let want = if w == "xyyyy" { -g.z } else { g.z };
        assert_eq!(r.value(), want, "{w}");
    }
}

#[test]
fn cli_out_file_and_formats() {
    let dir = std::env::temp_dir().join(format!("bchkit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.jsonl");
    let o = bchkit(&["bch", "--series", "sbch", "--max-degree", "7", "--format", "jsonl", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let (info, rows) = parse_jsonl(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(info.series, SeriesKind::Sbch);
    assert_eq!(rows.len(), 2 + 1 + 2 + 3 + 6 + 9 + 18);
    let o = bchkit(&["bch", "--series", "sbch", "--max-degree", "5", "--format", "pretty"]);
    assert!(stdout(&o).lines().nth(1).unwrap().contains("w_i"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cli_exit_codes() {
    assert_eq!(bchkit(&["bch", "--basis", "grassmann"]).status.code(), Some(2));
    assert_eq!(bchkit(&["bch", "--max-degree", "0"]).status.code(), Some(2));
    assert_eq!(bchkit(&["bch", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(bchkit(&["radius"]).status.code(), Some(2));
    assert_eq!(bchkit(&["frobnicate"]).status.code(), Some(2));

    let o = bchkit(&["bch", "--max-degree", "14", "--max-memory", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    let (rows, comments) = parse_tsv(&text).unwrap();
    assert!(comments.iter().any(|c| c.starts_with("PARTIAL OUTPUT")));
    let reached = rows.iter().map(|r| r.degree).max().unwrap();
    assert!(reached < 14);
    assert_eq!(rows.len(), records(&bch_series(BasisKind::Hall, reached).unwrap()).len());
}

#[test]
fn cli_checks_and_radius() {
    for suite in ["tables", "thompson"] {
        let o = bchkit(&["check", "--suite", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
    }
    let o = bchkit(&["check", "--suite", "oracle", "--max-degree", "8"]);
    assert!(o.status.success());
    let o = bchkit(&["lyndon-zero-check", "--max-degree", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let o = bchkit(&["radius", "--example", "2", "--alpha", "2"]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    let r: f64 = first.strip_prefix("r = ").unwrap().parse().unwrap();
    assert!((r - 1.0).abs() < 1e-6);

    let dir = std::env::temp_dir().join(format!("bchkit-radius-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("x.txt"), "2\n2 0\n0 -2\n").unwrap();
    std::fs::write(dir.join("y.txt"), "2\n0 1\n0 0\n").unwrap();
    let o = bchkit(&["radius", "--x", dir.join("x.txt").to_str().unwrap(), "--y", dir.join("y.txt").to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["radius"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    std::fs::write(dir.join("bad.txt"), "2\n1 2\n3\n").unwrap();
    let o = bchkit(&["radius", "--x", dir.join("bad.txt").to_str().unwrap(), "--y", dir.join("y.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn thompson_command_writes_rho() {
    let o = bchkit(&["thompson", "--max-degree", "6"]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[1].value(), Rational::new(BigInt::from(-1), BigInt::from(4)));
}

#[test]
fn threads_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_bchkit")).env("BCHKIT_THREADS", "zero").args(["bch", "--max-degree", "3"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_bchkit")).env("BCHKIT_THREADS", "1").args(["bch", "--max-degree", "8"]).output().unwrap();
    assert!(o.status.success());
    assert_eq!(data_rows(&stdout(&o)).len(), 71);
}
