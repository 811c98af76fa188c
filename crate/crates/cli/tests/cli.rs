use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;
use tempfile::TempDir;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke13")).arg("--out").arg(out).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// `build` and `gram` run once; tests copy the results.
fn shared() -> &'static Path {
    static DIR: OnceLock<TempDir> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let o = run(dir.path(), &["gram"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        dir
    })
    .path()
}

fn copy_of_shared() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["matrices.json", "gram.json"] {
        fs::copy(shared().join(f), dir.path().join(f)).unwrap();
    }
    dir
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn verify_passes() {
    let dir = copy_of_shared();
    let o = run(dir.path(), &["verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("overall: PASS"), "{text}");
    let report = read_json(dir.path().join("report.json"));
    assert_eq!(report["schema"], "hecke13.report/1");
    assert_eq!(report["payload"]["oracle_pairs"], 200);
    assert!(dir.path().join("report.txt").exists());
}

#[test]
fn build_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--seed", "7", "build"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let ours = fs::read(dir.path().join("matrices.json")).unwrap();
    assert_eq!(ours, fs::read(shared().join("matrices.json")).unwrap());
    assert!(fs::read_to_string(dir.path().join("rules.txt")).unwrap().contains("# derived rules"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--budget", "1", "build"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(!dir.path().join("matrices.json").exists());
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["--points", "0", "verify"])), 2);
    assert_eq!(code(&run(dir.path(), &["--det-mode", "fast", "verify"])), 2);
    assert_eq!(code(&run(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&run(dir.path(), &["export", "--format", "xml"])), 2);
}

#[test]
fn tampered_gram_is_refused() {
    let dir = copy_of_shared();
    let path = dir.path().join("gram.json");
    let mut v = read_json(path.clone());
    v["payload"]["gram"][0][0][0]["coeff"] = Value::from("2");
    fs::write(&path, v.to_string()).unwrap();
    let o = run(dir.path(), &["verify"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("content hash"), "{}", stderr(&o));
}

#[test]
fn stale_gram_is_refused() {
    let dir = copy_of_shared();
    let path = dir.path().join("gram.json");
    let mut v = read_json(path.clone());
    v["input_hash"] = Value::from("0".repeat(64));
    fs::write(&path, v.to_string()).unwrap();
    let o = run(dir.path(), &["export"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("stale"), "{}", stderr(&o));
}

#[test]
fn wrong_schema_is_refused() {
    let dir = copy_of_shared();
    fs::copy(dir.path().join("gram.json"), dir.path().join("matrices.json")).unwrap();
    let o = run(dir.path(), &["export"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("schema"), "{}", stderr(&o));
}

#[test]
fn export_formats() {
    let dir = copy_of_shared();
    assert_eq!(code(&run(dir.path(), &["export"])), 0);
    assert_eq!(code(&run(dir.path(), &["export", "--format", "text"])), 0);
    let ex = dir.path().join("export");
    for name in ["lambda_s", "lambda_t", "lambda_u", "lambda_z", "gram"] {
        let v = read_json(ex.join(format!("{name}.json")));
        assert_eq!(v["schema"], "hecke13.matrix/1");
        assert_eq!(v["payload"]["name"], name);
        assert_eq!(v["payload"]["rows"].as_array().unwrap().len(), 96);
        let text = fs::read_to_string(ex.join(format!("{name}.txt"))).unwrap();
        assert!(text.starts_with(&format!("# {name}\n")));
    }
    // A[1][1] = τ(1) = 1
    let gram = fs::read_to_string(ex.join("gram.txt")).unwrap();
    assert!(gram.lines().any(|l| l == "1 1 1"));
}

#[test]
fn exact_determinant_mode() {
    let dir = copy_of_shared();
    let o = run(dir.path(), &["--det-mode", "exact", "--jobs", "1", "verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read_json(dir.path().join("report.json"))["payload"]["det_mode"], "exact");
}

#[test]
fn full_oracle() {
    let dir = copy_of_shared();
    let o = run(dir.path(), &["--oracle", "gram"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("9216 Gram entries agree"));
    assert_eq!(fs::read(dir.path().join("gram.json")).unwrap(), fs::read(shared().join("gram.json")).unwrap());
}

#[test]
fn wrong_tables_exit_1() {
    use hecke13::algebra::HeckeAlgebra;
    use hecke13::basis::Gen;
    use hecke13::io::{self, Artifact, MatricesPayload, MATRICES_SCHEMA};

    let dir = tempfile::tempdir().unwrap();
    let path = shared().join("matrices.json");
    let art = Artifact::<MatricesPayload>::read(&path, MATRICES_SCHEMA, "build").unwrap();
    let alg = art.payload.algebra(&path).unwrap();
    let mut ms = alg.generator(Gen::S).entries.clone();
    ms[(95, 95)] = &ms[(95, 95)] + &hecke13::LaurentPoly::a();
    let bad = HeckeAlgebra::new(ms, alg.generator(Gen::T).entries.clone(), alg.generator(Gen::U).entries.clone());
    // hashes are recomputed, so only the mathematics can reject this file
    Artifact::new(MATRICES_SCHEMA, io::build_input_hash(), MatricesPayload::new(art.payload.build.clone(), &bad))
        .write(&dir.path().join("matrices.json"))
        .unwrap();
    let o = run(dir.path(), &["verify"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).starts_with("verification failure"), "{}", stderr(&o));
}
