use std::f64::consts::SQRT_2;
use std::process::Command as Process;

use gauge_curves_cli::registry::GaugeSpec;
use gauge_curves_cli::{exit, run, Outcome};
use proptest::prelude::*;
use serde_json::Value;

fn gc(args: &[&str]) -> Outcome {
    run(std::iter::once("gauge-curves").chain(args.iter().copied()))
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const EX1: [&str; 6] = [
    "--gauge",
    "randers:0.5",
    "--curve",
    "helix1:0.5",
    "--range",
    "0:6.283185307179586:21",
];

fn with(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = EX1.to_vec();
    v.extend_from_slice(extra);
    v
}

#[test]
fn invariants_csv_matches_randers_helix() {
    let mut args = vec!["invariants"];
    args.extend(EX1);
    let out = gc(&args);
    assert_eq!(out.code, exit::SUCCESS, "{}", out.stderr);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("t,s,I1,I2,I3,I4"));
    let want_i1 = ((2.0f64 - 0.25).sqrt() + 0.5) / (2.0 * (SQRT_2 + 0.5));
    let table = rows(&out.stdout);
    assert_eq!(table.len(), 21);
    for r in table {
        let v: Vec<f64> = r.iter().map(|c| c.parse().unwrap()).collect();
        assert!((v[2] - want_i1).abs() < 1e-7);
        assert!(v[3].abs() < 1e-7 && (v[4] - 1.0).abs() < 1e-7 && v[5].abs() < 1e-7);
        // 17 significant digits
        assert_eq!(
            r[2].split('e')
                .next()
                .unwrap()
                .replace(['.', '-'], "")
                .len(),
            17
        );
    }
}

#[test]
fn json_output_echoes_config() {
    let mut args = vec!["invariants"];
    args.extend(with(&["--format", "json"]));
    let out = gc(&args);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["config"]["gauge_spec"]["kind"], "randers");
    assert_eq!(doc["config"]["range"]["samples"], 21);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 21);
    assert!(doc["rows"][0]["I3"].as_f64().unwrap() > 0.99);
}

#[test]
fn repeated_runs_are_bit_identical() {
    for cmd in ["invariants", "frame", "classify"] {
        for format in ["csv", "json"] {
            let mut args = vec![cmd];
            args.extend(with(&["--format", format]));
            let first = gc(&args);
            assert_eq!(first.code, 0);
            assert_eq!(first.stdout, gc(&args).stdout, "{cmd} {format}");
        }
    }
}

#[test]
fn frame_rows_for_randers_helix() {
    let mut args = vec!["frame"];
    args.extend(with(&["--c1", "1", "--c2", "0"]));
    let out = gc(&args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let header: Vec<&str> = out.stdout.lines().next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for r in rows(&out.stdout) {
        let num = |name: &str| r[col(name)].parse::<f64>().unwrap();
        assert!((num("k") - 1.0).abs() < 1e-9);
        assert!(num("t") >= 0.0 && num("s") >= 0.0);
    }
}

#[test]
fn exit_codes() {
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["--help"], exit::SUCCESS),
        (vec!["bogus"], exit::CONFIG),
        ([vec!["frame"], with(&["--c1", "0"])].concat(), exit::CONFIG),
        (
            [vec!["invariants"], with(&["--range", "0:1:3"])].concat(),
            exit::CONFIG,
        ),
        (
            vec![
                "invariants",
                "--gauge",
                "randers:1.5",
                "--curve",
                "helix1:0.5",
            ],
            exit::CONFIG,
        ),
        (
            vec!["invariants", "--gauge", "nope:1", "--curve", "helix1:0.5"],
            exit::CONFIG,
        ),
        (
            vec!["invariants", "--gauge", "randers:0.5", "--curve", "nope"],
            exit::CONFIG,
        ),
        (
            [vec!["translate-check"], EX1.to_vec()].concat(),
            exit::CONFIG,
        ),
        (
            [vec!["translate-check"], with(&["--a0", "0,0,-5"])].concat(),
            exit::INADMISSIBLE_TRANSLATION,
        ),
        (
            [
                vec!["translate-check"],
                with(&["--a0", "0,0,0.6666666666666666"]),
            ]
            .concat(),
            exit::SUCCESS,
        ),
        (
            vec!["verify-gauge", "--gauge", "randers:0.5"],
            exit::SUCCESS,
        ),
        (
            vec![
                "verify-gauge",
                "--gauge",
                "translated:0,0,0.6666666666666666:randers:0.5",
            ],
            exit::SUCCESS,
        ),
        (
            vec!["verify-gauge", "--gauge", "dented:0.5"],
            exit::NUMERICAL,
        ),
        (vec!["verify-gauge", "--gauge", "randers:"], exit::CONFIG),
    ];
    for (args, code) in cases {
        let out = gc(&args);
        assert_eq!(out.code, code, "{args:?}: {}", out.stderr);
    }
}

#[test]
fn translate_check_report() {
    let mut args = vec!["translate-check"];
    args.extend(with(&["--a0", "0,0,0.6666666666666666"]));
    let out = gc(&args);
    let status: Vec<(String, String)> = rows(&out.stdout)
        .into_iter()
        .map(|r| (r[0].clone(), r[3].clone()))
        .collect();
    assert_eq!(status[0], ("I1".into(), "CHANGED".into()));
    assert_eq!(status[2], ("I3".into(), "CHANGED".into()));
    assert_eq!(status[3], ("I4".into(), "PASS".into()));

    let mut args = vec!["translate-check"];
    args.extend(with(&["--a0", "0,0,0"]));
    let out = gc(&args);
    assert_eq!(out.code, 0);
    let r = rows(&out.stdout);
    assert!(r[..3].iter().all(|r| r[3] == "UNCHANGED"), "{r:?}");
    assert_eq!(r[3][3], "PASS");
}

#[test]
fn dented_gauge_reports_subadditivity() {
    let out = gc(&["verify-gauge", "--gauge", "dented:0.5", "--samples", "200"]);
    let sub = rows(&out.stdout)
        .into_iter()
        .find(|r| r[0] == "subadditivity")
        .unwrap();
    assert!(sub[1].parse::<f64>().unwrap() > 0.0);
    assert_eq!(sub[2], "FAIL");
    assert!(!out.stderr.is_empty());
}

#[test]
fn classify_verdicts() {
    let mut args = vec!["classify"];
    args.extend(EX1);
    assert!(gc(&args).stdout.contains("CylindricalHelix"));
    let out = gc(&[
        "classify",
        "--gauge",
        "randers:0.5",
        "--curve",
        "perturbed_helix:0.5:0.2",
    ]);
    assert!(out.stdout.contains("Generic"));
}

#[test]
fn files_in_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let gauge = dir.path().join("gauge.json");
    std::fs::write(
        &gauge,
        r#"{"kind": "translated", "a0": [0.0, 0.0, 0.1], "base": {"kind": "randers", "b": 0.5}}"#,
    )
    .unwrap();
    let curve = dir.path().join("helix.csv");
    let mut text = String::from("t,x,y,z\n");
    for i in 0..400 {
        let t = 0.02 * i as f64;
        text.push_str(&format!("{t},{},{},{}\n", t.cos(), t.sin(), 0.5 * t));
    }
    std::fs::write(&curve, text).unwrap();
    let out_path = dir.path().join("out.csv");
    let out = gc(&[
        "classify",
        "--gauge",
        gauge.to_str().unwrap(),
        "--curve",
        curve.to_str().unwrap(),
        "--range",
        "1:6:26",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("verdict,"));
    // a circular helix under any gauge has vanishing I4
    assert!(written.contains("CylindricalHelix"), "{written}");
    assert!(written.contains("1.0000000000000000e-3"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t,x,y\n0,1,2\n").unwrap();
    let out = gc(&[
        "invariants",
        "--gauge",
        "randers:0.5",
        "--curve",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.code, exit::CONFIG);
}

#[test]
fn binary_runs() {
    let out = Process::new(env!("CARGO_BIN_EXE_gauge-curves"))
        .args([
            "verify-gauge",
            "--gauge",
            "ellipsoid:0.5",
            "--samples",
            "50",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("check,max_violation,status"));
    let out = Process::new(env!("CARGO_BIN_EXE_gauge-curves"))
        .args(["verify-gauge", "--gauge", "dented:0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inline_and_json_specs_agree(b in 0.01..0.99f64, x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let inline = GaugeSpec::parse_inline(&format!("ellipsoid:{b}")).unwrap();
        let json = serde_json::to_string(&inline).unwrap();
        let back: GaugeSpec = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &inline);
        let p = gauge_curves::Vec3::new(x, y, z);
        prop_assert_eq!(inline.build().unwrap().eval(p).unwrap(), back.build().unwrap().eval(p).unwrap());
    }
}
