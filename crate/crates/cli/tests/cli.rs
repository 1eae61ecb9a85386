use std::process::{Command, Output};

use qcc_cli::{exit, Cell, Format, OutputRecord};

fn qcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc"))
        .args(args)
        .env_remove("QCC_THREADS")
        .output()
        .expect("binary runs")
}

fn record(args: &[&str]) -> OutputRecord {
    let out = qcc(args);
    assert!(
        out.status.success(),
        "qcc {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let format = if args.contains(&"json") {
        Format::Json
    } else {
        Format::Csv
    };
    let rec = OutputRecord::parse(&text, format).unwrap();
    assert_eq!(rec.render(format), text, "re-rendering changes the bytes");
    rec
}

fn column<'a>(rec: &'a OutputRecord, name: &str) -> Vec<&'a Cell> {
    let i = rec.columns.iter().position(|c| c.name == name).unwrap();
    rec.rows.iter().map(|r| &r[i]).collect()
}

fn float(cell: &Cell) -> f64 {
    match cell {
        Cell::Float(x) => *x,
        other => panic!("not a float: {other:?}"),
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn table_examples() {
    let rec = record(&["table", "--n", "3", "--d", "2", "--scheme", "extended"]);
    assert_eq!(rec.schema_version, "1");
    assert_eq!(column(&rec, "p_exact"), vec![&Cell::Rational("5/6".into())]);
    assert_eq!(float(column(&rec, "p_float")[0]), 5.0 / 6.0);

    let rec = record(&["table", "--n", "1", "--d", "1", "--scheme", "classical"]);
    assert_eq!(column(&rec, "p_exact"), vec![&Cell::Rational("1".into())]);

    let rec = record(&[
        "table",
        "--n",
        "2..4",
        "--d",
        "2",
        "--scheme",
        "nonextended",
    ]);
    let exact: Vec<_> = column(&rec, "p_exact").into_iter().cloned().collect();
    assert_eq!(
        exact,
        ["1", "5/6", "1/2"]
            .map(|s| Cell::Rational(s.into()))
            .to_vec()
    );
}

#[test]
fn csv_and_json_carry_identical_values() {
    let base = [
        "table",
        "--n",
        "1..9",
        "--d",
        "2..3",
        "--scheme",
        "extended-limited",
        "--ancilla",
        "2",
    ];
    let csv = record(&base);
    let json = record(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(csv, json);
    assert_eq!(csv.rows.len(), 18);

    let sample = [
        "sample", "--n", "30", "--d", "8", "--trials", "5000", "--seed", "4",
    ];
    assert_eq!(
        record(&sample),
        record(&[&sample[..], &["--format", "json"]].concat())
    );
}

#[test]
fn breakdown_terms_sum_to_the_total() {
    let rec = record(&[
        "table",
        "--n",
        "6",
        "--d",
        "2",
        "--scheme",
        "nonextended",
        "--breakdown",
    ]);
    let total: f64 = column(&rec, "term_float").into_iter().map(float).sum();
    let whole = record(&["table", "--n", "6", "--d", "2", "--scheme", "nonextended"]);
    assert!((total - float(column(&whole, "p_float")[0])).abs() < 1e-15);
    // only shapes with at most d rows contribute: [6], [5,1], [4,2], [3,3]
    assert_eq!(rec.rows.len(), 4);
    assert_eq!(
        code(&qcc(&[
            "table",
            "--n",
            "3",
            "--d",
            "2",
            "--scheme",
            "classical",
            "--breakdown"
        ])),
        exit::USAGE
    );
}

#[test]
fn table_exit_codes() {
    let out = qcc(&["table", "--n", "300", "--d", "5"]);
    assert_eq!(code(&out), exit::INFEASIBLE);
    assert!(String::from_utf8_lossy(&out.stderr).contains("qcc sample"));
    assert!(out.stdout.is_empty());
    assert_eq!(code(&qcc(&["table", "--n", "0", "--d", "2"])), exit::USAGE);
    assert_eq!(
        code(&qcc(&["table", "--n", "4..2", "--d", "2"])),
        exit::USAGE
    );
    assert_eq!(
        code(&qcc(&[
            "table", "--n", "3", "--d", "2", "--scheme", "quantum"
        ])),
        exit::USAGE
    );
    assert_eq!(
        code(&qcc(&["table", "--n", "3", "--d", "2", "--ancilla", "2"])),
        exit::USAGE
    );
    assert_eq!(
        code(&qcc(&[
            "table",
            "--n",
            "3",
            "--d",
            "2",
            "--scheme",
            "extended-limited",
            "--ancilla",
            "0"
        ])),
        exit::USAGE
    );
}

#[test]
fn sample_examples() {
    let args = [
        "sample",
        "--n",
        "3",
        "--d",
        "2",
        "--trials",
        "100000",
        "--seed",
        "7",
        "--estimator",
        "extended",
    ];
    let rec = record(&args);
    let est = float(column(&rec, "estimate")[0]);
    let (lo, hi) = (
        float(column(&rec, "ci95_low")[0]),
        float(column(&rec, "ci95_high")[0]),
    );
    assert!((est - 5.0 / 6.0).abs() < 0.005);
    assert!(lo < 5.0 / 6.0 && 5.0 / 6.0 < hi);
    assert_eq!(rec.provenance.seed, Some(7));
    assert_eq!(qcc(&args).stdout, qcc(&args).stdout);

    let rec = record(&[
        "sample", "--n", "10", "--d", "10", "--trials", "100", "--seed", "1",
    ]);
    assert_eq!(float(column(&rec, "estimate")[0]), 1.0);
    assert_eq!(float(column(&rec, "stderr")[0]), 0.0);

    assert_eq!(
        code(&qcc(&["sample", "--n", "10", "--d", "0", "--trials", "10"])),
        exit::USAGE
    );
    assert_eq!(
        code(&qcc(&["sample", "--n", "10", "--d", "3", "--trials", "0"])),
        exit::USAGE
    );
}

#[test]
fn thread_setting_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_qcc"))
        .args(["sample", "--n", "5", "--d", "2", "--trials", "10"])
        .env("QCC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), exit::USAGE);
}

#[test]
fn tw_eval_examples() {
    let rec = record(&["tw", "eval", "--x", "4", "--method", "painleve"]);
    let f = float(column(&rec, "f_tw")[0]);
    // 1 − F_TW(4) ≈ 4.96e-8
    assert!((1.0 - 1e-7..1.0).contains(&f), "{f}");

    let rec = record(&["tw", "eval", "--x=-6:4:0.5", "--format", "json"]);
    let fs: Vec<f64> = column(&rec, "f_tw").into_iter().map(float).collect();
    assert_eq!(fs.len(), 21);
    assert!(fs.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(code(&qcc(&["tw", "eval", "--x", "1:0:1"])), exit::USAGE);
    assert_eq!(
        code(&qcc(&["tw", "eval", "--x", "0", "--method", "exact"])),
        exit::USAGE
    );
}

#[test]
fn tw_selftest_passes() {
    let out = qcc(&["tw", "selftest"]);
    assert_eq!(
        code(&out),
        exit::OK,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rec = OutputRecord::parse(&String::from_utf8(out.stdout).unwrap(), Format::Csv).unwrap();
    assert!(column(&rec, "passed")
        .iter()
        .all(|c| **c == Cell::Bool(true)));
}

#[test]
fn theorem_b_example_and_range_errors() {
    let rec = record(&[
        "tw", "theoremB", "--n", "900", "--x", "0", "--trials", "200000", "--seed", "11",
    ]);
    assert_eq!(column(&rec, "d")[0], &Cell::Integer("60".into()));
    assert_eq!(column(&rec, "p_exact")[0], &Cell::Null);
    assert!(float(column(&rec, "gap")[0]) <= 0.03);

    // small n is computed exactly
    let rec = record(&["tw", "theoremB", "--n", "30", "--x", "0", "--trials", "10"]);
    assert!(matches!(column(&rec, "p_exact")[0], Cell::Rational(_)));

    assert_eq!(
        code(&qcc(&[
            "tw", "theoremB", "--n", "4", "--x=-5", "--trials", "10"
        ])),
        exit::D_OUT_OF_RANGE
    );
    assert_eq!(
        code(&qcc(&[
            "tw", "theoremB", "--n", "4", "--x", "9", "--trials", "10"
        ])),
        exit::D_OUT_OF_RANGE
    );
}

#[test]
fn verify_examples() {
    let out = qcc(&["verify", "--n", "3", "--d", "2", "--ancilla", "1"]);
    assert_eq!(code(&out), exit::OK);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[2,1]") && stderr.contains("verify passed"));
    let rec = OutputRecord::parse(&String::from_utf8(out.stdout).unwrap(), Format::Csv).unwrap();
    assert!(float(column(&rec, "deviation")[0]) <= 1e-10);

    let rec = record(&[
        "verify",
        "--n",
        "1",
        "--d",
        "2",
        "--ancilla",
        "1",
        "--format",
        "json",
    ]);
    assert!((float(column(&rec, "probability")[0]) - 1.0).abs() < 1e-12);

    let out = qcc(&["verify", "--n", "5", "--d", "3", "--ancilla", "1"]);
    assert_eq!(code(&out), exit::USAGE);
    assert!(String::from_utf8_lossy(&out.stderr).contains("size guard"));
    assert!(out.stdout.is_empty());
    assert_eq!(
        code(&qcc(&["verify", "--n", "2", "--d", "2", "--ancilla", "0"])),
        exit::USAGE
    );
}
