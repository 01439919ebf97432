use loop_alg::LaurentMatrixLoop;
use lorentz_core::{MinkowskiSignature, C64};
use potentials::{PotentialKind, PotentialSpec};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use symmetry::EquivariantGenerator;

const GRID: &str = r#"
resolution = [6, 10]
base_point = [0.0, 0.0]
lambda_samples = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]

[annulus]
inner = 0.5
outer = 2.0
"#;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn willmore(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_willmore")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rotation_potential(dir: &Path, frequencies: [f64; 2]) -> PathBuf {
    let sig = MinkowskiSignature::new(2).unwrap();
    let gen = EquivariantGenerator::rotation(sig, frequencies, C64::new(0.5, 0.3)).unwrap();
    write(dir, "d.json", &gen.constant_potential().unwrap().to_json())
}

#[test]
fn factor_of_the_identity_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "id.json", &LaurentMatrixLoop::identity(6).to_json());
    for split in ["birkhoff", "iwasawa"] {
        let run = willmore(&["factor", "--loop", s(&path), "--split", split]);
        assert_eq!(run.code, 0, "{}", run.stdout);
        let report = run.json();
        assert_eq!(report["cell"], "big_cell");
        for side in ["left", "right"] {
            let doc: loop_alg::LoopJson = serde_json::from_value(report[side].clone()).unwrap();
            let factor = LaurentMatrixLoop::try_from(doc).unwrap();
            assert!(factor.distance(&LaurentMatrixLoop::identity(6)) < 1e-12, "{split} {side}");
        }
    }
}

#[test]
fn verify_symmetry_accepts_the_catalog_and_refutes_a_wrong_angle() {
    let run = willmore(&["verify-symmetry", "--potential", "threefold"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let report = run.json();
    assert!(report["potential_residual"].as_f64().unwrap() <= 1e-10);
    assert!(report["frame_residual"].as_f64().unwrap() <= 1e-6);

    let wrong = willmore(&["verify-symmetry", "--potential", "threefold", "--gamma", "rotation:-2.0943951023931953"]);
    assert_eq!(wrong.code, 1, "{}", wrong.stdout);
    assert_eq!(wrong.json()["pass"], false);
}

fn generate(dir: &Path, out: &str, extra: &[&str]) -> Run {
    let grid = write(dir, "grid.toml", GRID);
    let out = dir.join(out);
    let mut args = vec!["generate", "--potential", "quadratic", "--grid", s(&grid), "--out", s(&out)];
    args.extend_from_slice(extra);
    willmore(&args)
}

#[test]
fn exported_points_are_unit_vectors_after_reading_back() {
    let dir = tempfile::tempdir().unwrap();
    let run = generate(dir.path(), "run", &["--canonical", "--reference", "closed-form"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let manifest = run.json();
    assert_eq!(manifest["complete"], true);
    let surfaces = manifest["surfaces"].as_array().unwrap();
    assert_eq!(surfaces.len(), 3);
    for entry in surfaces {
        assert!(entry["reference_deviation"].as_f64().unwrap() < 1e-5);
        let csv = std::fs::read_to_string(dir.path().join("run").join(entry["csv"].as_str().unwrap())).unwrap();
        let mut rows = 0;
        for line in csv.lines().skip(1) {
            let y: Vec<f64> = line.split(',').skip(3).map(|t| t.parse().unwrap()).collect();
            assert_eq!(y.len(), 5);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() <= 1e-8, "{norm}");
            rows += 1;
        }
        assert_eq!(rows, 60);
        let obj = std::fs::read_to_string(dir.path().join("run").join(entry["obj"].as_str().unwrap())).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 60);
        assert!(obj.lines().any(|l| l.starts_with("f ")));
    }
}

#[test]
fn canonical_manifests_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(generate(dir.path(), "a", &["--canonical"]).code, 0);
    assert_eq!(generate(dir.path(), "b", &["--canonical", "--sequential"]).code, 0);
    let read = |d: &str, f: &str| std::fs::read(dir.path().join(d).join(f)).unwrap();
    assert_eq!(read("a", "manifest.json"), read("b", "manifest.json"));
    assert_eq!(read("a", "surface_01.csv"), read("b", "surface_01.csv"));

    assert_eq!(generate(dir.path(), "c", &[]).code, 0);
    let stamped: Value = serde_json::from_slice(&read("c", "manifest.json")).unwrap();
    assert!(stamped["generated_at_unix"].is_u64());
}

#[test]
fn zero_potential_is_flagged_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let zero = PotentialSpec::zero(PotentialKind::Normalized, MinkowskiSignature::new(2).unwrap());
    let pot = write(dir.path(), "zero.json", &zero.to_json());
    let grid = write(dir.path(), "grid.toml", GRID);
    let out = dir.path().join("out");
    let run = willmore(&["generate", "--potential", s(&pot), "--grid", s(&grid), "--out", s(&out)]);
    assert_eq!(run.code, 2);
    let err = run.json();
    assert_eq!(err["error"], "degenerate");
    assert_eq!(err["message"], "degenerate: not an immersion");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "degenerate: not an immersion");
}

#[test]
fn invalid_configurations_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    // the q-annulus potential has a pole at the origin, where this grid starts
    let gen = EquivariantGenerator::rotation(MinkowskiSignature::new(2).unwrap(), [1.0, 2.0], C64::new(0.5, 0.0)).unwrap();
    let pot = write(dir.path(), "annulus.json", &gen.annulus_potential().unwrap().to_json());
    let grid = write(dir.path(), "grid.toml", GRID);
    let out = dir.path().join("out");
    let run = willmore(&["generate", "--potential", s(&pot), "--grid", s(&grid), "--out", s(&out)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"], "config");
    assert!(run.json()["message"].as_str().unwrap().contains("pole"));

    let off = willmore(&["generate", "--potential", "quadratic", "--grid", s(&grid), "--out", s(&out), "--lambda", "1.0000001,0"]);
    assert_eq!(off.code, 2);
    assert_eq!(off.json()["error"], "config");

    let coarse = write(dir.path(), "coarse.json", r#"{"rectangle": {"x": [0, 1], "y": [0, 1]}, "resolution": [2, 5], "base_point": [0, 0]}"#);
    let run = willmore(&["generate", "--potential", "quadratic", "--grid", s(&coarse), "--out", s(&out)]);
    assert_eq!(run.code, 2);

    let missing = willmore(&["energy", "--potential", "no-such-potential"]);
    assert_eq!(missing.code, 2);
    assert_eq!(missing.json()["error"], "input");
}

#[test]
fn translation_monodromy_closes_exactly_at_a_full_period() {
    let dir = tempfile::tempdir().unwrap();
    let pot = rotation_potential(dir.path(), [1.0, 2.0]);
    let pi = std::f64::consts::PI;
    let shifts = [pi / 2.0, pi, 2.0 * pi].map(|t| t.to_string());
    let mut args = vec!["monodromy", "--potential", s(&pot), "--truncation", "24", "--anchor", "0.1,0.05"];
    for t in &shifts {
        args.extend(["--shift", t.as_str()]);
    }
    let run = willmore(&args);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let report = run.json();
    let entries = report["transforms"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert!(e["exponential_deviation"].as_f64().unwrap() < 1e-6, "{e}");
        // the solved monodromy detects closing exactly when the exponential predicts it
        assert_eq!(e["closes_at_one"], e["exponential_closes"], "{e}");
    }
    let closes: Vec<bool> = entries.iter().map(|e| e["closes_at_one"].as_bool().unwrap()).collect();
    assert_eq!(closes, vec![false, false, true]);
}

#[test]
fn closing_scan_of_exponentials() {
    let dir = tempfile::tempdir().unwrap();
    let pot = rotation_potential(dir.path(), [1.0, 2.0]);
    let run = willmore(&["closing", "--potential", s(&pot)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.json()["closes_at_one"], true);

    let sub = tempfile::tempdir().unwrap();
    let pot = rotation_potential(sub.path(), [1.0, std::f64::consts::SQRT_2]);
    let run = willmore(&["closing", "--potential", s(&pot)]);
    assert_eq!(run.json()["closes_at_one"], false);
    assert!(run.json()["candidates"].as_array().unwrap().is_empty());
}

#[test]
fn energy_checks_the_expected_value() {
    let ok = willmore(&["energy", "--potential", "quadratic", "--expect", "12.566370614359172", "--lambda", "1", "--lambda", "-1"]);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    let off = willmore(&["energy", "--potential", "quadratic", "--expect", "10", "--lambda", "1"]);
    assert_eq!(off.code, 1, "{}", off.stdout);
}
