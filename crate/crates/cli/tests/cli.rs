use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn trinity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinity")).args(args).env_remove("TRINITY_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn theta_group() {
    let o = trinity(&["group", &fixture("theta.trinity"), "--color", "V"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "order=3 factors=[3]\n");
    for c in ["R", "E"] {
        assert_eq!(stdout(&trinity(&["group", &fixture("theta.trinity"), "--color", c])), "order=3 factors=[3]\n");
    }
}

#[test]
fn k2_group_is_trivial() {
    let o = trinity(&["group", &fixture("k2.trinity"), "--color", "V"]);
    assert_eq!(stdout(&o), "order=1 factors=[]\n");
}

#[test]
fn jaeger_example_has_seven_hypertrees_and_trees() {
    let o = trinity(&["hypertrees", &fixture("jaeger_example.trinity"), "--class", "E", "--host", "R"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = trinity(&["jaeger", &fixture("jaeger_example.trinity"), "--base", "A:ea:A-ea"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    assert!(out.contains("tree: C-ec ec-A C-ed ea-B B-eb B-ed | ec=1 ed=1 eb=0 ea=0"), "{out}");
}

#[test]
fn bernardi_methods_agree() {
    let mut outs = Vec::new();
    for method in ["canonical", "classical", "rotor"] {
        let o = trinity(&[
            "bernardi",
            "act",
            &fixture("theta.trinity"),
            "--chips",
            &fixture("theta_unit.chips"),
            "--hypertree",
            &fixture("theta.hypertree"),
            "--method",
            method,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outs.push(stdout(&o));
    }
    assert_eq!(outs[0], "hypertree side=E: e1=0 e2=1 e3=0\n");
    assert!(outs.iter().all(|o| o == &outs[0]));
    let bad = trinity(&[
        "bernardi",
        "act",
        &fixture("theta.trinity"),
        "--chips",
        &fixture("theta_unit.chips"),
        "--hypertree",
        &fixture("theta.hypertree"),
        "--method",
        "psychic",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn rotor_act_cycles_back() {
    let dir = tempfile::tempdir().unwrap();
    let mut arb = fixture("theta.arborescence");
    let start = std::fs::read_to_string(&arb).unwrap();
    for i in 0..3 {
        let o = trinity(&["rotor", "act", &fixture("theta.trinity"), "--root", "v1", "--chips", &fixture("theta_unit.chips"), "--arb", &arb]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let next = dir.path().join(format!("a{i}.arborescence"));
        std::fs::write(&next, stdout(&o)).unwrap();
        arb = next.display().to_string();
    }
    assert_eq!(std::fs::read_to_string(&arb).unwrap(), start);
    let o = trinity(&["rotor", "list", &fixture("theta.trinity"), "--root", "v1"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn build_reproduces_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("theta.trinity");
    let o = trinity(&["build", "--from", "planegraph", &fixture("theta.planegraph"), "-o", &out.display().to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(fixture("theta.trinity")).unwrap());

    let digraph = dir.path().join("k2.planedigraph");
    std::fs::write(&digraph, "planedigraph v1\nvertex v1: a1t a2h\nvertex v2: a1h a2t\narc a1: a1t a1h\narc a2: a2t a2h\n").unwrap();
    let o = trinity(&["build", "--from", "digraph", &digraph.display().to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("trinity v1\n"));
}

#[test]
fn validation_errors_name_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.trinity");
    std::fs::write(&bad, "trinity v1\nnode a V\nnode b Q\n").unwrap();
    let o = trinity(&["validate", &bad.display().to_string()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3, column 8"), "{}", stderr(&o));

    let dangling = dir.path().join("dangling.trinity");
    std::fs::write(
        &dangling,
        "trinity v1\nnode a V\nnode b E\nnode c R\nedge x: a b\nedge y: b c\nedge z: c a\ntriangle: x y w W\ntriangle: x y z B\n",
    )
    .unwrap();
    let o = trinity(&["validate", &dangling.display().to_string()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid trinity"), "{}", stderr(&o));

    let o = trinity(&["group", &fixture("theta.trinity"), "--color", "X"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_small_corpus_passes() {
    let o = trinity(&["verify", "--seed", "7", "--instances", "50", "--max-vertices", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.ends_with("all checks passed\n"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_is_deterministic_and_reads_the_seed_from_the_environment() {
    let args = ["verify", "--instances", "12", "--max-vertices", "5", "--max-edges", "8"];
    let one = trinity(&[&args[..], &["--seed", "3", "--jobs", "1"]].concat());
    let four = trinity(&[&args[..], &["--seed", "3", "--jobs", "4"]].concat());
    assert_eq!(stdout(&one), stdout(&four));
    let env = Command::new(env!("CARGO_BIN_EXE_trinity")).args(args).env("TRINITY_SEED", "3").output().unwrap();
    assert_eq!(stdout(&env), stdout(&one));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_trinity"))
        .args(args)
        .args(["--seed", "3"])
        .env("TRINITY_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(stdout(&flag_wins), stdout(&one));
}

#[test]
fn verify_single_trinity_file() {
    let o = trinity(&["verify", &fixture("jaeger_example.trinity")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = trinity(&["verify", &fixture("theta.trinity"), "--checks", "phi-psi,rotor-bernardi"]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn dot_export() {
    let o = trinity(&["export", "dot", &fixture("theta.trinity")]);
    let out = stdout(&o);
    assert!(out.starts_with("graph trinity {"));
    assert!(out.contains("fillcolor=violet") && out.contains("fillcolor=green") && out.contains("fillcolor=red"));
    assert_eq!(out.matches("style=dashed").count(), 3 * 6);
    let o = trinity(&["export", "dot", &fixture("tour_example.planegraph")]);
    assert!(stdout(&o).contains("\"v1\" -- \"v2\" [label=\"e1\"];"));
}
