use std::path::Path;

use utaylor_cli::{run, EXIT_CERTIFICATE, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

const SMALL: &str = r#"
domain = "disc"

[a]
shape = "disc"
center = [0.5, 0.0]
radius = 0.5

[weight]
kind = "inv_sqrt_distance"

[build]
max_degree = MAXDEG

[build.density]
boundary = 64
interior = 16

[[steps]]
target = [[-1.0, 0.0], [1.0, 0.0]]
tau = 1e-3

[steps.set]
shape = "disc"
center = [-1.1, 0.0]
radius = 0.02

[[steps]]
target = [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
tau = 1e-4

[steps.set]
shape = "disc"
center = [-1.08, 0.06]
radius = 0.02
"#;

fn schedule(dir: &Path, max_degree: usize) -> String {
    let p = dir.join(format!("small-{max_degree}.toml"));
    std::fs::write(&p, SMALL.replace("MAXDEG", &max_degree.to_string())).unwrap();
    p.to_string_lossy().into_owned()
}

fn utaylor(args: &[&str]) -> i32 {
    run(std::iter::once("utaylor").chain(args.iter().copied()))
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn build_then_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let sched = schedule(tmp.path(), 40);
    let out = tmp.path().join("b");
    let o = out.to_str().unwrap();
    assert_eq!(utaylor(&["build", "--schedule", &sched, "--mode", "empirical", "--kmax", "2", "--out", o]), EXIT_OK);
    let certs = read(out.join("certificates.toml"));
    assert_eq!(certs.matches("[[report.steps]]").count(), 2);
    assert!(read(out.join("summary.txt")).contains("relaxations: "));
    let artifact = out.join("series.utaylor");
    let a = artifact.to_str().unwrap();
    let v = tmp.path().join("v");
    for suite in ["growth", "targets", "uk", "plessner", "radial"] {
        assert_eq!(utaylor(&["verify", a, "--suite", suite, "--out", v.to_str().unwrap()]), EXIT_OK, "{suite}");
        assert!(v.join(format!("verify-{suite}.toml")).exists());
    }
    let margins = read(v.join("uk-margins.csv"));
    assert!(margins.starts_with("# config_hash = "));
    assert!(margins.lines().any(|l| l == "k,n,re,im,u,margin,status"));
}

#[test]
fn strict_failure_names_the_step() {
    let tmp = tempfile::tempdir().unwrap();
    // Degree 2 cannot reach the step-1 tolerance.
    let sched = schedule(tmp.path(), 2);
    let out = tmp.path().join("b");
    let code = utaylor(&["build", "--schedule", &sched, "--mode", "strict", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_CERTIFICATE);
    let summary = read(out.join("summary.txt"));
    assert!(summary.contains("FAILED: certificate violation at step 1"), "{summary}");
}

#[test]
fn validation_and_io_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x");
    let o = out.to_str().unwrap();
    assert_eq!(utaylor(&["build", "--schedule", "/nonexistent.toml", "--out", o]), EXIT_IO);
    assert_eq!(utaylor(&["build", "--schedule", "builtin:none", "--out", o]), EXIT_VALIDATION);
    // 64 boundary samples cannot pin down degree 80.
    let sched = schedule(tmp.path(), 80);
    assert_eq!(utaylor(&["build", "--schedule", &sched, "--out", o]), EXIT_VALIDATION);
    assert_eq!(utaylor(&["build", "--schedule", "builtin:disc-default", "--kmax", "9", "--out", o]), EXIT_VALIDATION);
    assert_eq!(
        utaylor(&["build", "--precision", "20", "--schedule", "builtin:disc-default", "--out", o]),
        EXIT_VALIDATION
    );
    assert_eq!(utaylor(&["frobnicate"]), EXIT_VALIDATION);

    let bad = tmp.path().join("bad.utaylor");
    std::fs::write(&bad, "not an artifact\n").unwrap();
    assert_eq!(utaylor(&["verify", bad.to_str().unwrap(), "--suite", "growth", "--out", o]), EXIT_VALIDATION);
    let missing = tmp.path().join("missing.utaylor");
    assert_eq!(utaylor(&["verify", missing.to_str().unwrap(), "--suite", "growth", "--out", o]), EXIT_IO);
}

#[test]
fn verify_rejects_a_foreign_schedule() {
    let tmp = tempfile::tempdir().unwrap();
    let sched = schedule(tmp.path(), 40);
    let out = tmp.path().join("b");
    assert_eq!(utaylor(&["build", "--schedule", &sched, "--kmax", "1", "--out", out.to_str().unwrap()]), EXIT_OK);
    let a = out.join("series.utaylor");
    let code = utaylor(&["verify", a.to_str().unwrap(), "--suite", "growth", "--schedule", "builtin:disc-default"]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn config_file_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("p");
    let cfg = tmp.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!("precision_bits = 128\nmode = \"empirical\"\nseed = 7\nout = {:?}\n\n[params]\nwalks = 500\n", out),
    )
    .unwrap();
    assert_eq!(utaylor(&["potential", "hmeasure", "--z", "0.1", "0.2", "--config", cfg.to_str().unwrap()]), EXIT_OK);
    let r = read(out.join("potential-hmeasure.toml"));
    assert!(r.contains("precision_bits = 128") && r.contains("seed = 7") && r.contains("walks = 500"), "{r}");
    assert_eq!(
        utaylor(&["potential", "hmeasure", "--z", "0.1", "0.2", "--config", cfg.to_str().unwrap(), "--seed", "8"]),
        EXIT_OK
    );
    assert!(read(out.join("potential-hmeasure.toml")).contains("seed = 8"));
    std::fs::write(&cfg, "precision_bits = 128\nbogus = 1\n").unwrap();
    assert_eq!(utaylor(&["potential", "minthin", "--a", "2", "--config", cfg.to_str().unwrap()]), EXIT_VALIDATION);
}

#[test]
fn potential_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    assert_eq!(utaylor(&["potential", "minthin", "--a", "2", "--out", o]), EXIT_OK);
    assert!(read(tmp.path().join("potential-minthin.toml")).contains("verdict = \"minimally_thin\""));
    assert_eq!(utaylor(&["potential", "minthin", "--a", "0.5", "--out", o]), EXIT_OK);
    assert!(read(tmp.path().join("potential-minthin.toml")).contains("verdict = \"not_minimally_thin\""));

    assert_eq!(
        utaylor(&["potential", "hmeasure", "--z", "0.3", "-0.4", "--walks", "10000", "--seed", "3", "--out", o]),
        EXIT_OK
    );
    assert!(read(tmp.path().join("potential-hmeasure.toml")).contains("functional_value = 1.0"));

    assert_eq!(utaylor(&["potential", "green-arc", "--beta", "1.0", "--r", "1e6", "--out", o]), EXIT_OK);
    let g = read(tmp.path().join("potential-green-arc.toml"));
    assert!(g.contains("capacity = ") && g.contains("max_deviation = "));

    assert_eq!(utaylor(&["potential", "tangent-disc", "--c", "0.5", "--out", o]), EXIT_OK);
    assert_eq!(utaylor(&["potential", "poisson", "--z", "0.2", "0.1", "--theta", "-1.0", "--out", o]), EXIT_OK);
    // A point outside the disc is a validation error.
    assert_eq!(utaylor(&["potential", "poisson", "--z", "2.0", "0.0", "--theta", "0.0", "--out", o]), EXIT_VALIDATION);
}
