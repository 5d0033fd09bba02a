mod common;

use std::fs;

use common::{data_dir, ppdsp, stdout};

fn data(name: &str) -> String {
    data_dir().join(name).display().to_string()
}

#[test]
fn gen_writes_one_file_per_k() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let args = ["gen", "--tsplib", &data("burma14.tsp"), "--k", "1,1.5,2,2.5,3", "--m", "2", "--seed", "3", "--out", &out];
    let run = ppdsp(&args);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = stdout(&run);
    let ns: Vec<&str> = text.lines().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(ns, ["n=7", "n=10", "n=13", "n=16", "n=20"]);
    let first = fs::read(dir.path().join("burma14_k1_m2_s3.instance")).unwrap();
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 5);

    assert!(ppdsp(&args).status.success());
    assert_eq!(fs::read(dir.path().join("burma14_k1_m2_s3.instance")).unwrap(), first);
}

#[test]
fn gen_on_a_four_node_sample() {
    let dir = tempfile::tempdir().unwrap();
    let tsp = dir.path().join("square.tsp");
    fs::write(
        &tsp,
        "NAME: square\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 10 0\n3 10 10\n4 0 10\nEOF\n",
    )
    .unwrap();
    let out = dir.path().join("out").display().to_string();
    let run = ppdsp(&["gen", "--tsplib", &tsp.display().to_string(), "--k", "1", "--m", "2", "--seed", "1", "--out", &out]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout(&run).starts_with("k=1 n=2 "), "{}", stdout(&run));
}

#[test]
fn build_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let gen_dir = dir.path().display().to_string();
    let run = ppdsp(&["gen", "--tsplib", &data("burma14.tsp"), "--k", "1", "--m", "2", "--seed", "1", "--out", &gen_dir]);
    assert!(run.status.success());
    let inst = dir.path().join("burma14_k1_m2_s1.instance").display().to_string();
    let lp = dir.path().join("m.lp").display().to_string();
    for (f, want) in [("loc", "vars=458 rows=1041"), ("req", "vars=576 rows=1027")] {
        let run = ppdsp(&["build", "--instance", &inst, "--formulation", f, "--lp", &lp]);
        assert!(run.status.success());
        assert_eq!(stdout(&run).trim(), want);
        assert!(fs::read_to_string(&lp).unwrap().contains("Subject To"));
    }
    let run = ppdsp(&["build", "--instance", &data("example1.instance"), "--formulation", "loc", "--lp", &lp]);
    assert!(stdout(&run).starts_with("vars=50 "), "{}", stdout(&run));
}

#[test]
fn oracle_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let sol_s = sol.display().to_string();
    let inst = data("example1.instance");
    let run = ppdsp(&["oracle", "--instance", &inst, "--solution-out", &sol_s]);
    assert!(run.status.success());
    assert_eq!(stdout(&run), "value 11\nt0: {r0, r1} 0 -> 1 -> 2 -> 3 -> 0\nt1: {r2} 0 -> 2 -> 3 -> 0\n");

    let run = ppdsp(&["validate", "--instance", &inst, "--solution", &sol_s]);
    assert!(run.status.success());
    assert_eq!(stdout(&run), "valid\nxi 11\n");

    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    json["plans"][1]["delivery"] = serde_json::json!([1, 2]);
    fs::write(&sol, json.to_string()).unwrap();
    let run = ppdsp(&["validate", "--instance", &inst, "--solution", &sol_s]);
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains("DuplicateAssignment"));
}

#[test]
fn bench_and_report_encode_only() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv").display().to_string();
    let md = dir.path().join("b.md").display().to_string();
    let run = ppdsp(&[
        "bench", "--tsplib", &data("burma14.tsp"), "--k", "1", "--m", "2", "--seed", "1", "--csv", &csv,
        "--markdown", &md,
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains("burma14,1,2,7,request,576,1027,NotSolved,,,1"), "{text}");
    assert!(text.contains("burma14,1,2,7,location,458,1041,NotSolved,,,1"), "{text}");
    let table = fs::read_to_string(&md).unwrap();
    assert!(table.contains("| 2 | #Var. | 576 | **458** |"), "{table}");

    let run = ppdsp(&["report", "--csv", &csv]);
    assert!(run.status.success());
    assert!(stdout(&run).contains("not solved (encode-only)"));
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.instance").display().to_string();
    let lp = dir.path().join("m.lp").display().to_string();
    let run = ppdsp(&["build", "--instance", &missing, "--formulation", "loc", "--lp", &lp]);
    assert_eq!(run.status.code(), Some(2));
    let bad = dir.path().join("bad.instance");
    fs::write(&bad, "not an instance\n").unwrap();
    let run = ppdsp(&["oracle", "--instance", &bad.display().to_string()]);
    assert_eq!(run.status.code(), Some(2));
}
