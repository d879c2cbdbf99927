use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn papal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_papal")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CHI: &str = "(L a q & K a (K b q | K b ~q))";

#[test]
fn check_prints_verdict_and_witness_chain() {
    let model = fixture("compose9.epml");
    let o = papal(&["check", model.to_str().unwrap(), &format!("dia+ dia+ {CHI}")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("true\n"));
    assert!(out.contains("witness: {"));
    assert!(out.contains("then: {"));

    let o = papal(&["check", model.to_str().unwrap(), &format!("dia+ {CHI}")]);
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn check_reads_formula_from_file_and_alternate_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "K a p\n").unwrap();
    let model = fixture("compose9.epml");
    let at = format!("@{}", path.display());
    assert_eq!(stdout(&papal(&["check", model.to_str().unwrap(), &at])), "true\n");
    assert_eq!(stdout(&papal(&["check", model.to_str().unwrap(), &at, "-s", "v"])), "false\n");
}

#[test]
fn check_json_schema() {
    let model = fixture("compose9.epml");
    let o = papal(&["--json", "check", model.to_str().unwrap(), &format!("dia+ dia+ {CHI}")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], true);
    let chain = v["witness_chain"].as_array().unwrap();
    assert_eq!(chain.len(), 2);
    assert_eq!(chain[0]["states"], v["witness_states"]);
    assert_eq!(chain[0]["formula"], v["witness_formula"]);
    for key in ["nodes_visited", "cache_hits", "restrictions_enumerated"] {
        assert!(v["stats"][key].is_u64(), "{key}");
    }
}

#[test]
fn parse_errors_exit_one() {
    let model = fixture("compose9.epml");
    let o = papal(&["check", model.to_str().unwrap(), "K a (p &"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn validate_reports_overlapping_classes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.epml");
    std::fs::write(&path, "agents: a\natoms: p\nstates: s t\nrel a: {s t} {t}\npoint: s\n").unwrap();
    let o = papal(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(stdout(&papal(&["validate", fixture("compose9.epml").to_str().unwrap()])), "ok\n");
}

#[test]
fn qbf_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unsat = dir.path().join("u.qbf");
    std::fs::write(&unsat, "forall x1\nmatrix: x1\n").unwrap();
    let o = papal(&["qbf", unsat.to_str().unwrap()]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(20), "UNSAT\n"));

    let sat = dir.path().join("s.qdimacs");
    std::fs::write(&sat, "c forall x1 exists x2. x1 <-> x2\np cnf 2 2\na 1 0\ne 2 0\n1 -2 0\n-1 2 0\n").unwrap();
    let o = papal(&["qbf", sat.to_str().unwrap()]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(10), "SAT\n"));
}

#[test]
fn qbf_dump_encoding_is_checkable() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.qbf");
    std::fs::write(&q, "exists x1\nforall x2\nmatrix: x1 | x2\n").unwrap();
    let prefix = dir.path().join("enc");
    let o = papal(&["qbf", q.to_str().unwrap(), "--dump-encoding", prefix.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    let model = prefix.with_extension("epml");
    let formula = format!("@{}", prefix.with_extension("formula").display());
    assert!(stdout(&papal(&["check", model.to_str().unwrap(), &formula])).starts_with("true\n"));
}

#[test]
fn props_output_is_deterministic() {
    let a = papal(&["props", "--trials", "20", "--seed", "3"]);
    let b = papal(&["props", "--trials", "20", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_matches_fixture_files() {
    for (name, file) in [
        ("compose9", "compose9.epml"),
        ("expr_M", "expr_M.epml"),
        ("expr_Mprime", "expr_Mprime.epml"),
        ("two_leg_chain(4,6)", "two_leg_chain_4_6.epml"),
        ("left_edge_chain(1,6)", "left_edge_chain_1_6.epml"),
        ("right_edge_chain(2,6)", "right_edge_chain_2_6.epml"),
    ] {
        let expected = std::fs::read_to_string(fixture(file)).unwrap();
        assert_eq!(stdout(&papal(&["gen", name])), expected, "{name}");
    }
}

#[test]
fn define_positive_rejects_open_sets() {
    let model = fixture("compose9.epml");
    let o = papal(&["define-positive", model.to_str().unwrap(), "s"]);
    assert_eq!(o.status.code(), Some(2));
    let o = papal(&["define-positive", model.to_str().unwrap(), "s", "u'"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bundled_qbf_examples() {
    for (file, code, verdict) in [("alternating3.qbf", 10, "SAT\n"), ("unsat2.qdimacs", 20, "UNSAT\n")] {
        let o = papal(&["qbf", fixture(file).to_str().unwrap()]);
        assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(code), verdict), "{file}");
    }
}
