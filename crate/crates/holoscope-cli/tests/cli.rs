//! End-to-end runs of the binary: exit codes, JSON output, determinism.

use std::process::{Command, Output};

fn holoscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holoscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout is JSON lines"))
        .collect()
}

#[test]
fn construct_r1_passes() {
    let out = holoscope(&["construct", "--r", "1"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    let last = lines.last().unwrap();
    assert_eq!(last["pass"], true);
    assert!(lines
        .iter()
        .any(|l| l["name"] == "group_order" && l["observed"] == "168"));
}

#[test]
fn construct_rejects_bad_h() {
    let out = holoscope(&["construct", "--r", "1", "--h", "S2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("transitive subgroup of S_1"), "{err}");
}

#[test]
fn construct_writes_group_file() {
    let dir = std::env::temp_dir().join("holoscope_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g168.txt");
    let out = holoscope(&[
        "construct",
        "--r",
        "1",
        "--group-out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("affine 2 3\n"));
    assert_eq!(text.lines().count(), 5); // header + 4 generators
}

#[test]
fn classify_default_bound_passes() {
    let out = holoscope(&["classify"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert!(lines
        .iter()
        .any(|l| l["name"] == "b_3_1" && l["observed"] == "3/5"));
    assert!(lines
        .iter()
        .any(|l| l["name"] == "tj_survivors" && l["pass"] == true));
    // the transcript carries every candidate and exact evaluation
    assert!(lines
        .iter()
        .any(|l| l["kind"] == "candidate" && l["name"] == "PSL2(8191)"));
    assert!(lines
        .iter()
        .any(|l| l["kind"] == "evaluation" && l["lhs"] == "9/2" && l["holds"] == true));
    assert!(lines.iter().any(|l| l["kind"] == "survivors"));
}

#[test]
fn conjecture_scan_small_orders() {
    let out = holoscope(&["conjecture-scan", "--max-order", "4"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert!(lines
        .iter()
        .any(|l| l["name"] == "klein_regular_count" && l["observed"] == "4"));
}

#[test]
fn enumerate_168_counts() {
    let out = holoscope(&["enumerate-168", "--jobs", "2"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert!(lines
        .iter()
        .any(|l| l["name"] == "hopf_galois_count" && l["observed"] == "2"));
    assert!(lines
        .iter()
        .any(|l| l["name"] == "aut_g" && l["observed"] == "336"));
}

#[test]
fn normalizer_r1() {
    let out = holoscope(&["normalizer", "--r", "1"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert!(lines
        .iter()
        .any(|l| l["name"] == "normalizer_order" && l["observed"] == "21"));
}

#[test]
fn admissibility_and_brace_round_trip() {
    let dir = std::env::temp_dir().join("holoscope_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let gpath = dir.join("trans.txt");
    std::fs::write(&gpath, "affine 2 2\n1 0 0 1 1 0\n1 0 0 1 0 1\n").unwrap();
    let mpath = dir.join("m.txt");
    std::fs::write(&mpath, "2 1 2\n1 0\n").unwrap();

    let out = holoscope(&[
        "admissibility",
        "--group",
        gpath.to_str().unwrap(),
        "--m",
        mpath.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    // first line is the admissibility report itself
    assert_eq!(lines[0]["admissible"], true);
    assert_eq!(lines[0]["m_star_order"], 2);

    let json_path = dir.join("brace.json");
    let out = holoscope(&[
        "brace",
        "--group",
        gpath.to_str().unwrap(),
        "--json-out",
        json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines[0]["brace_mult_type"], "C2xC2");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["report"]["pass"], true);
    assert!(doc["data"]["add"].is_array());
}

#[test]
fn brace_of_the_sylow2_regular_subgroup_is_dihedral() {
    // the hatted C, D generate an order-8 subgroup acting regularly on
    // F_2^3; its skew brace has elementary abelian addition and dihedral
    // multiplication
    let dir = std::env::temp_dir().join("holoscope_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let gpath = dir.join("cd.txt");
    std::fs::write(
        &gpath,
        "affine 2 3\n1 1 0 0 1 1 0 0 1 0 1 1\n1 0 0 0 1 1 0 0 1 1 0 0\n",
    )
    .unwrap();
    let out = holoscope(&["brace", "--group", gpath.to_str().unwrap()]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines[0]["order"], 8);
    assert_eq!(lines[0]["soluble"], true);
    assert_eq!(lines[0]["brace_mult_type"], "D4");
}

#[test]
fn brace_rejects_non_regular_group() {
    let dir = std::env::temp_dir().join("holoscope_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let gpath = dir.join("nonreg.txt");
    // the stabilizer <A, B> alone is not transitive
    std::fs::write(
        &gpath,
        "affine 2 3\n0 0 1 1 0 1 0 1 0 0 0 0\n1 0 0 0 0 1 0 1 1 0 0 0\n",
    )
    .unwrap();
    let out = holoscope(&["brace", "--group", gpath.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = holoscope(&["conjecture-scan", "--max-order", "6"]);
    let b = holoscope(&["conjecture-scan", "--max-order", "6"]);
    assert_eq!(a.stdout, b.stdout);
    let a = holoscope(&["classify", "--bound", "200"]);
    let b = holoscope(&["classify", "--bound", "200"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jobs_flag_does_not_change_output() {
    let a = holoscope(&["enumerate-168", "--jobs", "1"]);
    let b = holoscope(&["enumerate-168", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_env_var_is_ignored() {
    let with_seed = Command::new(env!("CARGO_BIN_EXE_holoscope"))
        .args(["classify", "--bound", "200"])
        .env("HOLOSCOPE_SEED", "12345")
        .output()
        .unwrap();
    let without = holoscope(&["classify", "--bound", "200"]);
    assert_eq!(with_seed.stdout, without.stdout);
}

#[test]
fn group_file_round_trips_through_construct_and_brace_pipeline() {
    // construct r=1, extract the regular <C, D> part manually: instead,
    // verify the emitted generators parse and regenerate the same file
    let dir = std::env::temp_dir().join("holoscope_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("round.txt");
    holoscope(&[
        "construct",
        "--r",
        "1",
        "--group-out",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = holoscope::textio::parse_group_file(&text).unwrap();
    match parsed {
        holoscope::textio::ParsedGroup::Affine { p, n, generators } => {
            assert_eq!(
                holoscope::textio::write_affine_group(p, n, &generators),
                text
            );
        }
        _ => panic!("expected affine kind"),
    }
}
