use std::path::PathBuf;
use std::process::{Command as Process, Output};

use purespin::lie::ModelKind;
use purespin_cli::{run, CliError, Command, RunConfig, Space, THREADS_VAR};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_purespin"))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn purespin(args: &[&str]) -> Output {
    bin().args(args).env_remove(THREADS_VAR).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<serde_json::Value> {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("report is JSON");
    v["records"].as_array().unwrap().clone()
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["qham", "verify", "--space", "fused-double", "--group", "su2", "--samples", "3", "--seed", "11"];
    let a = purespin(&args);
    let b = purespin(&args);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let threaded = bin().args(args).env(THREADS_VAR, "3").output().unwrap();
    assert_eq!(a.stdout, threaded.stdout);
}

#[test]
fn different_seeds_draw_different_points() {
    let a = purespin(&["conjugacy-volume", "--class-trace", "0.5", "--samples", "2", "--seed", "1"]);
    let b = purespin(&["conjugacy-volume", "--class-trace", "0.5", "--samples", "2", "--seed", "2"]);
    assert_ne!(records(&a)[0]["point"], records(&b)[0]["point"]);
}

#[test]
fn unknown_group_is_a_usage_error() {
    let out = purespin(&["conjugacy-volume", "--group", "sl2", "--class-trace", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown group"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_command_is_a_usage_error() {
    assert_eq!(purespin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_json_is_rejected() {
    let out = purespin(&["clifford", "product", "--input", &data("malformed.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed input"));
}

#[test]
fn central_classes_have_unit_density() {
    for (t, sign) in [(2.0, 1.0), (-2.0, -1.0)] {
        let mut c = RunConfig::new(Command::ConjugacyVolume { class_trace: t }, ModelKind::Su2);
        c.samples = 3;
        let r = run(&c).unwrap();
        assert!(r.passed);
        for rec in &r.records {
            assert_eq!(rec["class_dim"], 0);
            assert_eq!(rec["ghjw_rank"], 0);
            let d: f64 = rec["density"].as_str().unwrap().parse().unwrap();
            assert_eq!(d, sign);
        }
    }
}

#[test]
fn regular_class_records_are_nondegenerate() {
    let out = purespin(&["conjugacy-volume", "--group", "so3", "--class-trace", "0.2", "--samples", "4"]);
    assert!(out.status.success());
    for rec in records(&out) {
        assert_eq!(rec["class_dim"], 2);
        assert_eq!(rec["ghjw_rank"], 2);
    }
}

#[test]
fn traces_outside_the_group_are_usage_errors() {
    let c = RunConfig::new(Command::ConjugacyVolume { class_trace: 2.5 }, ModelKind::Su2);
    assert!(matches!(run(&c), Err(CliError::Usage(_))));
    let c = RunConfig::new(Command::ConjugacyVolume { class_trace: 1.0 }, ModelKind::Su3);
    assert!(matches!(run(&c), Err(CliError::Usage(_))));
}

#[test]
fn exact_clifford_product() {
    let out = purespin(&["clifford", "product", "--input", &data("product.json")]);
    assert!(out.status.success());
    let terms = &records(&out)[0]["product"]["terms"];
    let expected = serde_json::json!([
        {"idx": [], "c": "6"},
        {"idx": [2], "c": "-3"},
        {"idx": [1, 2], "c": "-6"}
    ]);
    assert_eq!(terms, &expected);
}

#[test]
fn reflections_compose_to_the_input() {
    let out = purespin(&["clifford", "reflections", "--input", &data("reflections.json")]);
    assert!(out.status.success());
    assert_eq!(records(&out)[0]["reflections"].as_array().unwrap().len(), 1);
}

#[test]
fn spinor_of_a_rotation_round_trips() {
    let out = purespin(&["spinor", "from-orthogonal", "--input", &data("orthogonal.json")]);
    assert!(out.status.success());
    let rec = &records(&out)[0];
    assert_eq!(rec["n"], 2);
    assert_eq!(rec["null_space"].as_array().unwrap().len(), 4);
}

#[test]
fn projection_is_a_strong_dirac_map() {
    let out = purespin(&["dirac", "strong", "--input", &data("dirac.json")]);
    assert!(out.status.success());
    let rec = &records(&out)[0];
    assert_eq!(rec["dirac_map"], true);
    assert_eq!(rec["strong"], true);
}

#[test]
fn output_file_matches_stdout() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("class-report.json");
    let args = ["qham", "verify", "--space", "class", "--samples", "2"];
    let stdout = purespin(&args).stdout;
    let out = purespin(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn every_space_verifies() {
    for space in [Space::Class, Space::Double, Space::FusedDouble, Space::Exp] {
        let mut c = RunConfig::new(Command::Qham { space }, ModelKind::Su2);
        c.samples = 3;
        let r = run(&c).unwrap();
        assert!(r.passed, "{space:?} {:?}", r.checks);
        assert_eq!(r.records.len(), 3);
    }
}

#[test]
fn integrability_table_has_one_row_per_point() {
    let out = purespin(&["integrability", "--group", "su2", "--points", "2"]);
    assert!(out.status.success());
    assert_eq!(records(&out).len(), 2);
}

#[test]
fn verify_all_passes_on_su2() {
    let mut c = RunConfig::new(Command::VerifyAll, ModelKind::Su2);
    c.seed = 7;
    let r = run(&c).unwrap();
    assert_eq!(r.checks.len(), 12);
    assert!(r.passed, "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    assert_eq!(r.provenance.seed, "7");
    assert!(r.version.starts_with('v'));
}

#[test]
fn verify_all_rejects_other_groups() {
    let c = RunConfig::new(Command::VerifyAll, ModelKind::So3);
    assert!(matches!(run(&c), Err(CliError::Usage(_))));
}
