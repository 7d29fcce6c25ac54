use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use julia_sym_cli::{run, Cli, RunConfig, Status};
use serde_json::Value;

fn invoke(args: &[&str]) -> julia_sym::Result<julia_sym_cli::Outcome> {
    let argv = std::iter::once("julia-sym").chain(args.iter().copied());
    let cli = Cli::try_parse_from(argv).expect("arguments parse");
    run(&RunConfig::from_cli(cli)?)
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Same shape, same strings, numbers within `1e-9` relative.
fn assert_close(path: &str, got: &Value, want: &Value) {
    match (got, want) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0), "{path}: {a} vs {b}");
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "{path}: length");
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                assert_close(&format!("{path}[{i}]"), x, y);
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            let keys_a: Vec<_> = a.keys().collect();
            let keys_b: Vec<_> = b.keys().collect();
            assert_eq!(keys_a, keys_b, "{path}: keys");
            for (k, x) in a {
                assert_close(&format!("{path}.{k}"), x, &b[k]);
            }
        }
        _ => assert_eq!(got, want, "{path}"),
    }
}

const SMALL: [&str; 2] = ["--pixels", "128"];

fn golden_cases() -> Vec<(&'static str, Vec<&'static str>, Status)> {
    let analyze = |input| vec!["analyze", input];
    vec![
        ("example1_shifted_cubic", analyze("z^3+3z^2+3z-1/3"), Status::Success),
        ("example1_order_two", analyze("z^3 - 1.2i*z"), Status::Success),
        ("example1_trivial", analyze("z^3 - z - 0.5i"), Status::Success),
        ("cubic_order_three", analyze("z^3 - 1/3"), Status::Success),
        ("single_exceptional_point", analyze("3z^3/(3-z^3)"), Status::Success),
        ("form1_order_two", analyze("z^2(z^2-2)/(z^2+1)"), Status::Success),
        ("form1_order_three", analyze("z^3(z^3+1)/(z^6+1)"), Status::Success),
        ("no_exceptional_point", analyze("(z^2-2)/z^2"), Status::HypothesisFailed),
        ("mcmullen_2_1", vec!["mcmullen", "2", "1", "0.01"], Status::Success),
        ("mcmullen_3_3_i", vec!["mcmullen", "3", "3", "i"], Status::Success),
        ("newton_z4_minus_z", vec!["newton", "z*(z^3-1)"], Status::Success),
        ("chebyshev_z4_minus_z", vec!["chebyshev", "z*(z^3-1)"], Status::Success),
        ("konig3_z4_minus_z", vec!["konig", "z*(z^3-1)", "--n", "3"], Status::Success),
        ("verify_cubic", vec!["verify-symmetry", "z^3 - 1/3", "--order", "3"], Status::Success),
    ]
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, mut args, status) in golden_cases() {
        args.extend(SMALL);
        let outcome = invoke(&args).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(outcome.status, status, "{name}");
        let path = golden_dir().join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &outcome.document).unwrap();
            continue;
        }
        let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let got: Value = serde_json::from_str(&outcome.document).unwrap();
        assert_close(name, &got, &want);
    }
}

#[test]
fn example_reports_carry_expected_values() {
    let report: Value = serde_json::from_str(&invoke(&["analyze", "z^3 - 1/3", "--pixels", "64"]).unwrap().document).unwrap();
    assert_eq!(report["beta"], 3);
    assert_eq!(report["center"]["re"], 0.0);
    let mc: Value = serde_json::from_str(&invoke(&["mcmullen", "2", "1", "0.01"]).unwrap().document).unwrap();
    assert_eq!((mc["predictedOrder"].as_u64(), mc["detectedOrder"].as_u64()), (Some(3), Some(3)));
    let shifted: Value =
        serde_json::from_str(&invoke(&["analyze", "z^3+3z^2+3z-1/3", "--pixels", "64"]).unwrap().document).unwrap();
    assert_eq!((shifted["center"]["re"].as_f64(), shifted["order"].as_u64()), (Some(-1.0), Some(3)));
}

#[test]
fn newton_render_writes_an_image() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("newton.ppm");
    let report = dir.path().join("newton.json");
    let outcome = invoke(&[
        "newton",
        "z*(z^3-1)",
        "--render",
        "--pixels",
        "64",
        "--out",
        out.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ])
    .unwrap();
    let doc: Value = serde_json::from_str(&outcome.document).unwrap();
    assert_eq!(doc["method"]["relation"], "equal");
    assert_eq!(doc["method"]["verifiedOrder"], 3);
    let img = julia_sym::render::read_ppm(&out).unwrap();
    assert_eq!((img.width, img.height), (64, 64));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), outcome.document);
}

#[test]
fn errors_and_validation() {
    let parse = invoke(&["analyze", "z^3 + * 2"]).unwrap_err();
    assert!(matches!(parse, julia_sym::Error::Parse { position: 6, .. }), "{parse}");
    assert!(invoke(&["render", "z^2", "--pixels", "8"]).is_err());
    assert!(invoke(&["render", "z^2", "--width=-1"]).is_err());
    assert!(invoke(&["konig", "z^3-1", "--n", "12"]).is_err());
    assert!(invoke(&["analyze", "z^2", "--tol", "2"]).is_err());
    assert!(invoke(&["verify-symmetry", "z^2", "--order", "0"]).is_err());
    let failed = invoke(&["verify-symmetry", "z^3 - 1/3", "--order", "2", "--pixels", "32"]).unwrap();
    assert_eq!(failed.status, Status::HypothesisFailed);
}

fn binary(args: &[&str], threads: &str, cwd: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_julia-sym"))
        .args(args)
        .env("JULIA_SYM_THREADS", threads)
        .current_dir(cwd)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = binary(&["mcmullen", "2", "1", "0.01"], "1", dir.path());
    assert_eq!(ok.status.code(), Some(0));
    let hyp = binary(&["analyze", "(z^2-2)/z^2", "--pixels", "32"], "1", dir.path());
    assert_eq!(hyp.status.code(), Some(2));
    assert!(!hyp.stdout.is_empty());
    let err = binary(&["analyze", "z^3 +"], "1", dir.path());
    assert_eq!(err.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&err.stderr).contains("position 5"));
    let usage = binary(&["frobnicate"], "1", dir.path());
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen: Option<(Vec<u8>, Vec<u8>, Vec<u8>)> = None;
    for threads in ["1", "4", "8"] {
        let render = binary(
            &["render", "(z^2-1)/(2z)", "--pixels", "128", "--out", "b.ppm", "--boundary", "m.ppm"],
            threads,
            dir.path(),
        );
        assert_eq!(render.status.code(), Some(0));
        let analysis = binary(&["analyze", "2z^2-1", "--pixels", "128"], threads, dir.path());
        assert_eq!(analysis.status.code(), Some(0));
        let now = (
            std::fs::read(dir.path().join("b.ppm")).unwrap(),
            std::fs::read(dir.path().join("m.ppm")).unwrap(),
            analysis.stdout,
        );
        if let Some(prev) = &seen {
            assert!(prev == &now, "output differs with {threads} threads");
        }
        seen = Some(now);
    }
}
