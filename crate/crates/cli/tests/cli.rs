//! End-to-end tests of the installed command surface: every subcommand,
//! the four exit codes, and the report format contract.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use nervelab_core::cat2::{embed1as2, Arrow};
use nervelab_core::{fin2cat_to_value, FinCat};
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nervelab"));
    cmd.args(args).env_remove("NERVELAB_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn records(stdout: &str) -> Vec<Value> {
    stdout
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("report line is JSON"))
        .collect()
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["nerve", "street"]); // missing --input
    assert_eq!(code, 2);
    let (code, _, _) = run(&["--help"]);
    assert_eq!(code, 0);
    let (code, _, stderr) = run(&["homology", "--input", "/nonexistent/x.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cannot read"));
}

#[test]
fn oriental_dump_chains_homology() {
    let dir = tempfile::tempdir().unwrap();
    let chains = dir.path().join("o3.json");
    let (code, stdout, _) = run(&["oriental", "3", "--chains", chains.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("d((0,1,2,3)) = -1·(0,1,2) +1·(0,1,3) -1·(0,2,3) +1·(1,2,3)"));

    let (code, stdout, _) = run(&["homology", "--input", chains.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0, 0]));
    assert_eq!(v["complete"], serde_json::json!(true));

    let (code, stdout, _) = run(&["homology", "--input", chains.to_str().unwrap(), "--dmax", "1", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 0]));
}

#[test]
fn theta_counts_dual_compose() {
    let (code, stdout, _) = run(&["theta", "counts", "(Δ2; Δ1, Δ3)"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "[3, 6, 4]");

    let (code, once, _) = run(&["theta", "dual", "(Δ2; Δ1, Δ3)", "--levels", "1"]);
    assert_eq!(code, 0);
    let (code, twice, _) = run(&["theta", "dual", once.trim(), "--levels", "1"]);
    assert_eq!(code, 0);
    assert_eq!(twice.trim(), "(Δ2; Δ1, Δ3)");
    let (code, _, _) = run(&["theta", "dual", "(Δ2; Δ1, Δ3)", "--levels", "7"]);
    assert_eq!(code, 2);

    let (code, stdout, _) = run(&[
        "theta",
        "compose",
        &fixture("morphism_g.json"),
        &fixture("morphism_f.json"),
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["source"], serde_json::json!("(Δ1; Δ2)"));
    assert_eq!(v["target"], serde_json::json!("(Δ1; Δ1)"));
    // wrong order: endpoints do not line up
    let (code, _, _) = run(&[
        "theta",
        "compose",
        &fixture("morphism_f.json"),
        &fixture("morphism_g.json"),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn cat2_validate_export_realize() {
    let (code, stdout, _) = run(&["cat2", "validate", "--input", &fixture("oriental2.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("3 object(s), 18 cell(s)"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{").unwrap();
    let (code, _, _) = run(&["cat2", "validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 2);

    // structurally broken but parseable: a dangling hom key
    let garbled = dir.path().join("garbled.json");
    let mut v: Value =
        serde_json::from_str(&fs::read_to_string(fixture("oriental2.json")).unwrap()).unwrap();
    v["hcomp"]["0->1->2"]["objects"] = serde_json::json!([[0, 0, 7]]);
    fs::write(&garbled, serde_json::to_string(&v).unwrap()).unwrap();
    let (code, stdout, _) = run(&["cat2", "validate", "--input", garbled.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("invalid"));

    let realized = dir.path().join("m12.json");
    let (code, _, _) = run(&["cat2", "realize", "(Δ1; Δ2)", "--out", realized.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["cat2", "validate", "--input", realized.to_str().unwrap()]);
    assert_eq!(code, 0);

    for builtin in ["oriental2", "two-disc", "point"] {
        let out = dir.path().join(format!("{builtin}.json"));
        let (code, _, _) = run(&["cat2", "realize", builtin, "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0);
    }

    // canonical export is a fixed point
    let once = dir.path().join("once.json");
    let (code, _, _) = run(&[
        "cat2",
        "export",
        "--input",
        &fixture("oriental2.json"),
        "--out",
        once.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, twice, _) = run(&["cat2", "export", "--input", once.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&once).unwrap().trim(), twice.trim());
}

#[test]
fn nerve_cards_match_known_counts() {
    let (code, stdout, _) = run(&[
        "nerve",
        "street",
        "--input",
        &fixture("oriental2.json"),
        "--dmax",
        "3",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["cells"], serde_json::json!([3, 7, 15, 31]));
    assert_eq!(v["nondegenerate"], serde_json::json!([3, 4, 4, 4]));

    let (code, stdout, _) = run(&[
        "nerve",
        "multi",
        "--input",
        &fixture("oriental2.json"),
        "--pmax",
        "2",
        "--dmax",
        "2",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["cells"], serde_json::json!([[3, 3, 3], [7, 8, 9], [12, 14, 16]]));

    let dir = tempfile::tempdir().unwrap();
    let chains = dir.path().join("diag.json");
    let (code, stdout, _) = run(&[
        "nerve",
        "diag",
        "--input",
        &fixture("oriental2.json"),
        "--dmax",
        "3",
        "--chains",
        chains.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["cells"], serde_json::json!([3, 8, 16, 27]));

    let (code, stdout, _) = run(&["homology", "--input", chains.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["complete"], serde_json::json!(false));
}

#[test]
fn homotopy_report_matches_stored_fixture() {
    let (code, stdout, stderr) = run(&["verify", "homotopy", "--n", "4", "--json"]);
    assert_eq!(code, 0);
    assert!(stderr.contains("5 check(s), all passed"));
    let mut got = records(&stdout);
    let mut want = records(&fs::read_to_string(fixture("homotopy_n4.jsonl")).unwrap());
    for v in got.iter_mut().chain(want.iter_mut()) {
        v["elapsed_ms"] = serde_json::json!(0);
    }
    assert_eq!(got, want);
}

#[test]
fn perturbed_homotopy_fails_with_witness() {
    let (code, stdout, _) = run(&["verify", "homotopy", "--n", "3", "--perturb", "--json"]);
    assert_eq!(code, 1);
    let recs = records(&stdout);
    let failed: Vec<&Value> = recs.iter().filter(|r| r["status"] == "fail").collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["outputs"]["perturbed"], serde_json::json!(true));
    assert!(failed[0]["outputs"]["reason"].as_str().unwrap().len() > 0);
    assert!(failed[0]["outputs"]["lhs"].is_string());

    // same seed, same witness
    let (_, again, _) = run(&["verify", "homotopy", "--n", "3", "--perturb", "--json"]);
    let mut a = records(&stdout);
    let mut b = records(&again);
    for v in a.iter_mut().chain(b.iter_mut()) {
        v["elapsed_ms"] = serde_json::json!(0);
    }
    assert_eq!(a, b);
}

#[test]
fn compare_nerves_agreement_and_gate() {
    let (code, stdout, _) = run(&[
        "verify",
        "compare-nerves",
        "--input",
        &fixture("oriental2.json"),
        "--json",
    ]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    assert_eq!(recs.len(), 2);
    for r in &recs {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["outputs"]["street"], serde_json::json!([1, 0, 0]));
    }
    // canonical order: sorted by (suite, check)
    assert_eq!(recs[0]["check"], "street_vs_diagonal");
    assert_eq!(recs[1]["check"], "street_vs_total");

    let (code, _, _) = run(&["verify", "compare-nerves", "--input", &fixture("point2.json")]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "compare-nerves", "--input", &fixture("theta3302.json"), "--dmax", "2"]);
    assert_eq!(code, 0);

    // a category with a cycle has no safe default truncation
    let dir = tempfile::tempdir().unwrap();
    let loopy = dir.path().join("loopy.json");
    fs::write(&loopy, serde_json::to_string(&fin2cat_to_value(&walking_iso_2cat())).unwrap())
        .unwrap();
    let (code, _, stderr) = run(&["verify", "compare-nerves", "--input", loopy.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not loop-free"));
    let (code, _, _) = run(&[
        "verify",
        "compare-nerves",
        "--input",
        loopy.to_str().unwrap(),
        "--dmax",
        "2",
    ]);
    assert_eq!(code, 0);
}

fn walking_iso_2cat() -> nervelab_core::Fin2Cat {
    let arr = |src, tgt, label: &str| Arrow { src, tgt, label: label.to_string() };
    let arrows = vec![arr(0, 0, "1_0"), arr(1, 1, "1_1"), arr(0, 1, "u"), arr(1, 0, "v")];
    let comp: HashMap<(usize, usize), usize> = [
        ((0, 0), 0),
        ((1, 1), 1),
        ((2, 0), 2),
        ((1, 2), 2),
        ((3, 1), 3),
        ((0, 3), 3),
        ((3, 2), 0),
        ((2, 3), 1),
    ]
    .into_iter()
    .collect();
    let c = FinCat::new(
        vec!["0".to_string(), "1".to_string()],
        arrows,
        vec![0, 1],
        comp,
    )
    .unwrap();
    c.validate().unwrap();
    embed1as2(&c)
}

#[test]
fn duality_preserves_nerve_betti() {
    let (code, stdout, _) = run(&[
        "verify",
        "duality",
        "--input",
        &fixture("oriental2.json"),
        "--dmax",
        "2",
        "--json",
    ]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    assert_eq!(recs.len(), 4);
    let names: Vec<&str> = recs.iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["J={1,2}", "J={1}", "J={2}", "J={}"]);

    let (code, stdout, _) = run(&[
        "verify",
        "duality",
        "--input",
        &fixture("m2_23.json"),
        "--levels",
        "1",
        "--dmax",
        "2",
        "--json",
    ]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["check"], "J={1}");
    assert_eq!(recs[0]["outputs"]["original"], recs[0]["outputs"]["dual"]);
}

#[test]
fn pu_sc_counts_and_connectivity_gate() {
    let (code, stdout, _) = run(&[
        "verify",
        "pu-sc",
        "--t",
        &fixture("arrow2.json"),
        "--input",
        &fixture("m2_11.json"),
        "--json",
    ]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    assert_eq!(recs.len(), 3);
    for r in &recs {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["outputs"]["into_path_category"], r["outputs"]["from_wreath"]);
    }

    let (code, stdout, _) = run(&[
        "verify",
        "pu-sc",
        "--t",
        &fixture("point2.json"),
        "--input",
        &fixture("oriental2.json"),
        "--pmax",
        "1",
        "--json",
    ]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    // maps out of the point count the objects of each path category
    assert_eq!(recs[0]["outputs"]["into_path_category"], serde_json::json!(3));
    assert_eq!(recs[1]["outputs"]["into_path_category"], serde_json::json!(7));

    let (code, _, stderr) = run(&[
        "verify",
        "pu-sc",
        "--t",
        &fixture("discrete2.json"),
        "--input",
        &fixture("m2_11.json"),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("disconnected"));
}

#[test]
fn dwyer_kan_modes() {
    let (code, stdout, _) = run(&["verify", "dwyer-kan", "--input", &fixture("dk_iso.json"), "--json"]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    assert!(recs.iter().any(|r| r["check"] == "conclusion_nerve_betti"));

    let (code, stdout, _) = run(&[
        "verify",
        "dwyer-kan",
        "--input",
        &fixture("dk_collapse.json"),
        "--json",
    ]);
    assert_eq!(code, 0);
    let recs = records(&stdout);
    let conclusion = recs.iter().find(|r| r["check"] == "conclusion_nerve_betti").unwrap();
    assert_eq!(conclusion["status"], "pass");

    let (code, stdout, stderr) = run(&[
        "verify",
        "dwyer-kan",
        "--input",
        &fixture("dk_broken.json"),
        "--json",
    ]);
    assert_eq!(code, 1);
    let recs = records(&stdout);
    assert!(recs.iter().all(|r| r["check"] != "conclusion_nerve_betti"));
    let bij = recs.iter().find(|r| r["check"] == "object_bijection").unwrap();
    assert_eq!(bij["status"], "fail");
    assert!(stderr.contains("not asserted"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let (code, _, stderr) = run(&[
        "nerve",
        "street",
        "--input",
        &fixture("oriental2.json"),
        "--dmax",
        "3",
        "--budget",
        "40",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("budget"));

    let (code, _, _) = run_env(
        &["nerve", "street", "--input", &fixture("oriental2.json"), "--dmax", "3"],
        &[("NERVELAB_BUDGET", "40")],
    );
    assert_eq!(code, 3);
}

#[test]
fn report_lines_reparse_and_sort() {
    let (_, stdout, _) = run(&[
        "verify",
        "duality",
        "--input",
        &fixture("oriental2.json"),
        "--dmax",
        "2",
        "--json",
    ]);
    let recs = records(&stdout);
    for r in &recs {
        for key in ["suite", "check", "status", "inputs", "elapsed_ms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
    let mut keys: Vec<(String, String)> = recs
        .iter()
        .map(|r| {
            (
                r["suite"].as_str().unwrap().to_string(),
                r["check"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let sorted = {
        let mut s = keys.clone();
        s.sort();
        s
    };
    assert_eq!(keys, sorted);
    keys.dedup();
    assert_eq!(keys.len(), recs.len());
}
