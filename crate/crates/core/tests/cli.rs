use std::path::PathBuf;
use std::process::{Command, Output};

use commsim::circuit::parse_circuit;
use commsim::oracle::{Observable, OracleConfig, StateVector};
use commsim::transformers::exact_p0;
use commsim::PauliOperator;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn commsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commsim"))
        .args(args)
        .env_remove("COMMSIM_MAX_AMPLITUDES")
        .output()
        .expect("binary runs")
}

fn json_line(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1);
    serde_json::from_str(text.trim()).unwrap()
}

fn oracle_z(path: &str, q: usize) -> f64 {
    let c = parse_circuit(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut s = StateVector::zero(c.num_qudits(), 2, &OracleConfig::default()).unwrap();
    s.apply_circuit(&c).unwrap();
    s.expectation(&Observable::z(q)).unwrap()
}

#[test]
fn oracle_on_bell_pair() {
    let v = json_line(&commsim(&["oracle", "--input", "00", "--obs", "Z1", &data("bell.qc")]));
    assert_eq!(v["value"].as_f64(), Some(0.0));
    let zz = json_line(&commsim(&["oracle", "--obs", "+ZZ", &data("bell.qc")]));
    assert!((zz["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn paulisim_cluster_within_epsilon() {
    let out = commsim(&["paulisim", "--qubit", "1", "--epsilon", "0.05", "--delta", "0.01", "--seed", "7", &data("cluster10.qc")]);
    let v = json_line(&out);
    let want = oracle_z(&data("cluster10.qc"), 0);
    assert!((v["value"].as_f64().unwrap() - want).abs() <= 0.05);
    assert_eq!(v["K"].as_u64(), Some(8478));
    assert_eq!(v["seed"].as_u64(), Some(7));
    assert_eq!(v["epsilon"].as_f64(), Some(0.05));
    assert_eq!(v["delta"].as_f64(), Some(0.01));
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn paulisim_is_reproducible_across_workers() {
    let base = ["paulisim", "--qubit", "3", "--seed", "11"];
    let runs: Vec<Vec<u8>> = ["1", "4", "8"]
        .iter()
        .map(|w| {
            let mut args = base.to_vec();
            args.extend(["--workers", w]);
            let path = data("cluster10.qc");
            args.push(&path);
            commsim(&args).stdout
        })
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn missing_seed_is_reported() {
    let v = json_line(&commsim(&["paulisim", "--shots", "64", &data("cluster10.qc")]));
    assert!(v["seed"].is_u64());
}

#[test]
fn diagonalize_cluster_then_recheck_with_oracle() {
    let dir = std::env::temp_dir().join(format!("commsim-diag-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let clifford = dir.join("diag.qc");
    let out = commsim(&["diagonalize", "--output", clifford.to_str().unwrap(), &data("cluster_stabs.pauli")]);
    let v = json_line(&out);
    let diagonal: Vec<PauliOperator> = v["diagonal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| PauliOperator::parse(s.as_str().unwrap()).unwrap())
        .collect();
    assert!(diagonal.iter().all(|q| q.is_z_type()));
    let stabs: Vec<String> = std::fs::read_to_string(data("cluster_stabs.pauli"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(String::from)
        .collect();
    // ⟨x|C†P_iC|x⟩ must equal ⟨x|Q_i|x⟩ = ±(−1)^{b·x}
    for x in ["000000", "101100", "111111"] {
        let bits = commsim::BitString::parse(x).unwrap();
        for (p, q) in stabs.iter().zip(&diagonal) {
            let r = json_line(&commsim(&["oracle", "--input", x, "--obs", p, clifford.to_str().unwrap()]));
            let act = q.act_on_basis(&bits);
            let want = if act.phase == 0 { 1.0 } else { -1.0 };
            assert!((r["value"].as_f64().unwrap() - want).abs() < 1e-9, "{p} on {x}");
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn failures_exit_1_with_diagnostics() {
    let dir = std::env::temp_dir().join(format!("commsim-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let nc = dir.join("nc.qc");
    std::fs::write(&nc, "circuit 2\nexppauli 0.1 +XI\nexppauli 0.2 +IZ\nexppauli 0.3 +ZI\n").unwrap();
    let out = commsim(&["paulisim", nc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gates 1 and 3 do not commute"));

    let bad = dir.join("bad.qc");
    std::fs::write(&bad, "circuit 2\nh 1\ncz 1 7\n").unwrap();
    let out = commsim(&["oracle", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(commsim(&["nonsense"]).status.code(), Some(2));
    assert_eq!(commsim(&["oracle", "--epsilon", "x", &data("bell.qc")]).status.code(), Some(2));
}

#[test]
fn extras_file_adds_noncommuting_gates() {
    let dir = std::env::temp_dir().join(format!("commsim-extra-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x.qc");
    let extras = dir.join("x.extras");
    std::fs::write(&path, "circuit 2\nexppauli 0.4 +XI\nexppauli -0.2 +XX\n").unwrap();
    std::fs::write(&extras, "# after the first gate\n1 0.7 +ZZ\n").unwrap();
    let v = json_line(&commsim(&["paulisim", "--extras", extras.to_str().unwrap(), "--seed", "3", path.to_str().unwrap()]));
    assert_eq!(v["extras"].as_u64(), Some(1));
    let full = dir.join("full.qc");
    std::fs::write(&full, "circuit 2\nexppauli 0.4 +XI\nexppauli 0.7 +ZZ\nexppauli -0.2 +XX\n").unwrap();
    let want = oracle_z(full.to_str().unwrap(), 0);
    assert!((v["value"].as_f64().unwrap() - want).abs() <= 0.05);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sim2local_matches_oracle() {
    let dir = std::env::temp_dir().join(format!("commsim-s2l-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.qc");
    std::fs::write(&path, "circuit 3\ncz 1 2\ncz 1 3\nexppauli 0.3 +IZZ\n").unwrap();
    let obs = dir.join("x1.obs");
    std::fs::write(&obs, "1\n0 0 1 0\n1 0 0 0\n").unwrap();
    let h = "0.7071067811865476";
    let input = format!("{h},{h};{h},{h};1,0");
    let a = json_line(&commsim(&["sim2local", "--input", &input, "--obs", obs.to_str().unwrap(), path.to_str().unwrap()]));
    let b = json_line(&commsim(&["sim2local", "--input", &input, "--obs", "X1", path.to_str().unwrap()]));
    // X₁ picks up Z₂Z₃ and ⟨+|Z|+⟩ = 0
    assert!(a["value"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(a["value"], b["value"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn emitted_hadamard_test_round_trips() {
    let v = json_line(&commsim(&["hadamard-test", "--part", "re", &data("cluster10.qc")]));
    let c = parse_circuit(v["circuit"].as_str().unwrap()).unwrap();
    assert_eq!(c.num_qudits(), 11);
    let v = json_line(&commsim(&["alt-hadamard-test", &data("bell.qc")]));
    let c = parse_circuit(v["circuit"].as_str().unwrap()).unwrap();
    assert_eq!(c.len(), 3);
    // ⟨00|CNOT·H|00⟩ = 1/√2
    let p0 = exact_p0(&c, &OracleConfig::default()).unwrap();
    assert!((p0 - 0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-9);
    let v = json_line(&commsim(&["merge-layers", &data("cluster10.qc"), &data("cluster10.qc")]));
    assert!(v["gates"].as_u64().unwrap() >= 1);
}

#[test]
fn depth_overlap_on_ladder() {
    let v = json_line(&commsim(&["depth-overlap", "--seed", "5", "--delta", "0.05", &data("ladder.qc")]));
    let c = parse_circuit(&std::fs::read_to_string(data("ladder.qc")).unwrap()).unwrap();
    let s = commsim::oracle::run_from_zero(&c, &OracleConfig::default()).unwrap();
    let want = s.amplitudes()[0].norm_sqr();
    assert!((v["value"].as_f64().unwrap() - want).abs() <= 0.05);
}
