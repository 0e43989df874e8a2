use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn cccs(args: &[&str], workers: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cccs"));
    cmd.args(args);
    match workers {
        Some(n) => cmd.env("CCCS_WORKERS", n.to_string()),
        None => cmd.env_remove("CCCS_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn manifest_of(p: &Path) -> Value {
    let mut name = p.file_name().unwrap().to_os_string();
    name.push(".manifest.json");
    json_file(&p.with_file_name(name))
}

#[test]
fn lattice_dumps_match_graph_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = cccs(&["lattice", "--code", "cccs-488", "--size", "2x2", "--layers", "3", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_file(&out)["qubits"].as_array().unwrap().len(), 72);
    let m = manifest_of(&out);
    assert_eq!(m["command"], "lattice");
    assert_eq!(m["outputs"][0]["bytes"].as_u64().unwrap() as usize, std::fs::read(&out).unwrap().len());

    let o = cccs(&["lattice", "--code", "rtcs", "--size", "2x2x2"], None);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["qubits"].as_array().unwrap().len(), 48);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["lattice", "--size", "2x2"],
        vec!["lattice", "--code", "cccs-488", "--size", "2by2"],
        vec!["lattice", "--code", "hexagons", "--size", "2x2"],
        vec!["simulate", "--code", "rtcs", "--distances", "4", "--pphys", "0.01", "--cycles", "1000", "--out", "/dev/null"],
        vec!["threshold", "--in", "/nonexistent/curves.csv"],
        vec!["frobnicate"],
    ] {
        let o = cccs(&args, None);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = cccs(&["resources"], Some(0));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(cccs(&["--help"], None).status.code(), Some(0));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = cccs(&["verify", "--seed", "7", "--out", p.to_str().unwrap()], None);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(json_file(&a)["passed"], true);
    assert_eq!(manifest_of(&a)["seeds"][0], 7);
}

#[test]
fn corrupted_boundary_is_a_contract_violation() {
    let o = cccs(&["verify", "--corrupt-boundary", "--samples", "5"], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("∂∘∂ ≠ 0"), "{err}");
    assert!(err.contains("boundary-squared-zero"));
}

#[test]
fn simulate_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in [1, 4, 8] {
        let csv = dir.path().join(format!("w{workers}.csv"));
        let args = ["simulate", "--code", "rtcs", "--distances", "3,5", "--pphys", "0.01,0.03", "--cycles", "1000", "--seed", "1", "--quiet", "--out", csv.to_str().unwrap()];
        let o = cccs(&args, Some(workers));
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(manifest_of(&csv)["workers"], workers);
        let thr = dir.path().join(format!("w{workers}.json"));
        let o = cccs(&["threshold", "--in", csv.to_str().unwrap(), "--layer-model", "cycle", "--out", thr.to_str().unwrap()], Some(workers));
        let thr_bytes = if o.status.success() { std::fs::read(&thr).unwrap() } else { o.stderr.clone() };
        outputs.push((std::fs::read(&csv).unwrap(), thr_bytes));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(text.starts_with("code,d,p_phys,cycles,failures,p_cycle,p_log,ci_low,ci_high\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn threshold_of_synthetic_power_law_curves() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("synthetic.csv");
    let mut text = String::from("code,d,p_phys,cycles,failures,p_cycle,p_log,ci_low,ci_high\n");
    for d in [3, 5, 7] {
        for p in [0.02, 0.025, 0.028, 0.032, 0.035, 0.04] {
            let v: f64 = (p / 0.03f64).powi(d) * 0.01;
            text += &format!("rtcs,{d},{p},100000,0,{v},{v},{v},{v}\n");
        }
    }
    std::fs::write(&csv, text).unwrap();
    let out = dir.path().join("t.json");
    let o = cccs(&["threshold", "--in", csv.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(&out);
    assert!((v["p_thrs"].as_f64().unwrap() - 0.03).abs() < 1e-9);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    for key in ["code", "pairs", "p_thrs", "spread"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn threshold_without_bracketing_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flat.csv");
    let mut text = String::from("code,d,p_phys,cycles,failures,p_cycle,p_log,ci_low,ci_high\n");
    for (d, v) in [(3, 0.2), (5, 0.1)] {
        for p in [0.01, 0.02] {
            text += &format!("cccs-488,{d},{p},100,1,{v},{v},{v},{v}\n");
        }
    }
    std::fs::write(&csv, text).unwrap();
    let o = cccs(&["threshold", "--in", csv.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no crossing"));
}

#[test]
fn resources_table_and_json() {
    let o = cccs(&["resources"], None);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for row in ["rtcs", "cccs-488", "cccs-666"] {
        assert!(text.lines().any(|l| l.starts_with(row)), "{text}");
    }
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = cccs(&["resources", "--json", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success());
    let v = json_file(&out);
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(serde_json::from_slice::<Value>(&o.stdout).unwrap(), v);
}
