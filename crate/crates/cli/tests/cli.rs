//! End-to-end checks of the binary: determinism, format agreement, exit
//! codes, and config precedence.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_wqed"));
    assert!(p.exists(), "{p:?}");
    p = p.canonicalize().unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let (code, _, err) = run(&[
            "entropy",
            "--rabi",
            "4",
            "--tau-points",
            "41",
            "--T",
            "inf",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let json = dir.path().join("q.json");
    let base = [
        "qfactor",
        "--delta",
        "0",
        "--rabi",
        "1.4142135623730951",
        "--tau",
        "200",
        "--T",
        "inf",
        "--kappa",
        "transmitted",
    ];
    let (c1, _, e1) = run(&[&base[..], &["--output", csv.to_str().unwrap()]].concat());
    let (c2, _, e2) = run(&[
        &base[..],
        &["--format", "json", "--output", json.to_str().unwrap()],
    ]
    .concat());
    assert_eq!((c1, c2), (0, 0), "{e1} {e2}");
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let iq = header.iter().position(|&h| h == "q_closed").unwrap();
    assert!((row[iq] - 0.625).abs() < 1e-11);
    // the JSON row carries the same numbers at full precision
    let json_text = std::fs::read_to_string(&json).unwrap();
    let row_line = json_text
        .lines()
        .skip_while(|l| !l.contains("\"rows\""))
        .nth(1)
        .unwrap();
    let json_row: Vec<f64> = row_line
        .trim()
        .trim_start_matches('[')
        .trim_end_matches([']', ','])
        .split(',')
        .map(|v| v.trim().parse().unwrap())
        .collect();
    for (a, b) in row.iter().zip(&json_row) {
        assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

#[test]
fn validation_failure_exits_one() {
    let (code, _, err) = run(&["pn", "--tau", "-3"]);
    assert_eq!(code, 1, "stderr: {err}");
    let (code2, _, _) = run(&["fcs", "--kappa", "sideways"]);
    assert_eq!(code2, 1);
    let (code3, _, _) = run(&["mollow", "--omega-min", "5", "--omega-max", "-5"]);
    assert_eq!(code3, 1);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "rabi = 1.4142135623730951\ndelta = 0\ntau = 200\nT = inf\nkappa = transmitted\n# comment\n").unwrap();
    let out_a = dir.path().join("a.csv");
    let (code, _, err) = run(&[
        "qfactor",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out_a.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out_a).unwrap();
    let row = text.lines().nth(1).unwrap();
    // config kappa=transmitted gives Q_closed = 0.625
    assert!(row.contains("6.25"), "{row}");
    // a flag overrides the config value
    let out_b = dir.path().join("b.csv");
    let (code, _, _) = run(&[
        "qfactor",
        "--config",
        cfg.to_str().unwrap(),
        "--kappa",
        "chiral",
        "--output",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text_b = std::fs::read_to_string(&out_b).unwrap();
    let qcol = text_b.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert_eq!(qcol.parse::<f64>().unwrap(), 0.0);
}

#[test]
fn sweep_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let (code, _, err) = run(&[
            "sweep",
            "--vary",
            "delta=0:5:13",
            "--vary2",
            "rabi=0.5:4:7",
            "--observable",
            "qfactor",
            "--jobs",
            jobs,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn selftest_reports_all_pass() {
    let (code, stdout, _) = run(&["selftest"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn correlators_schema() {
    let (code, stdout, _) = run(&[
        "correlators",
        "--rabi",
        "1.4142135623730951",
        "--tau-points",
        "3",
    ]);
    assert_eq!(code, 0);
    let header = stdout.lines().next().unwrap();
    assert_eq!(header, "tau,re_r,im_r,re_c,im_c,re_m,im_m,re_n,im_n");
    assert_eq!(stdout.lines().count(), 4);
}

#[test]
fn pn_example_values() {
    // pmf whose mean is about 50 with Q about 0.625
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pn.csv");
    let (code, _, err) = run(&[
        "pn",
        "--delta",
        "0",
        "--rabi",
        "1.4142135623730951",
        "--tau",
        "200",
        "--T",
        "inf",
        "--kappa",
        "transmitted",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut mass = 0.0;
    for line in text.lines().skip(1) {
        let mut it = line.split(',');
        let n: f64 = it.next().unwrap().parse().unwrap();
        let p: f64 = it.next().unwrap().parse().unwrap();
        mean += n * p;
        m2 += n * n * p;
        mass += p;
    }
    assert!((mass - 1.0).abs() < 1e-6);
    assert!((mean - 50.0).abs() < 0.5, "mean {mean}");
    let q = (m2 - mean * mean) / mean - 1.0;
    assert!((q - 0.625).abs() < 0.02, "q {q}");
}

#[test]
fn mollow_triplet_from_cli() {
    let (code, stdout, _) = run(&[
        "mollow",
        "--rabi",
        "10",
        "--delta",
        "0",
        "--T",
        "inf",
        "--omega-points",
        "801",
    ]);
    assert_eq!(code, 0);
    let vals: Vec<(f64, f64)> = stdout
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let mut peaks = 0;
    for i in 1..vals.len() - 1 {
        if vals[i].1 > vals[i - 1].1 && vals[i].1 > vals[i + 1].1 {
            peaks += 1;
        }
    }
    assert_eq!(peaks, 3, "expected a triplet");
}

#[test]
fn gamma_rescaling_is_transparent() {
    // the same physics in different units gives identical dimensionless rows
    let (c1, out1, _) = run(&["qfactor", "--delta", "1", "--rabi", "2", "--tau", "50"]);
    let (c2, out2, _) = run(&[
        "qfactor",
        "--delta",
        "3",
        "--gamma",
        "3",
        "--rabi",
        "6",
        "--tau",
        "16.666666666666668",
    ]);
    assert_eq!((c1, c2), (0, 0));
    let q1: f64 = out1
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let q2: f64 = out2
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((q1 - q2).abs() < 1e-12);
}
