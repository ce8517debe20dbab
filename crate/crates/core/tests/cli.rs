use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn catml(ws: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catml")).arg("--workspace").arg(ws).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn w1_congruence_drops_a_morphism() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["pipeline", &data("w1.json"), "--congruence", &data("like_love.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hom(I, apples): 3 → 2"), "{}", stdout(&o));
}

#[test]
fn empty_congruence_is_an_isomorphism() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["pipeline", &data("w1.json"), "--congruence", &data("empty_congruence.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("quotient: isomorphism"));
}

#[test]
fn cycle_reports_the_hom_set_past_the_bound() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["--bound", "3", "pipeline", &data("loop.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("hom(a, a)"), "{}", stderr(&o));
}

#[test]
fn pipeline_writes_dot_per_stage() {
    let ws = tempfile::tempdir().unwrap();
    let dot = ws.path().join("dot");
    let o = catml(
        ws.path(),
        &["pipeline", &data("w1.json"), "--congruence", &data("like_love.json"), "--dot", dot.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let mut files: Vec<String> =
        fs::read_dir(&dot).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().to_string()).collect();
    files.sort();
    assert!(files.len() >= 2, "{files:?}");
    assert!(fs::read_to_string(dot.join(&files[0])).unwrap().starts_with("digraph"));
}

#[test]
fn verify_suites() {
    let ws = tempfile::tempdir().unwrap();
    for (suite, file) in [("adjunction", "identity.adj"), ("monad", "powerset3.mnd"), ("functor", "good_functor.json")] {
        let o = catml(ws.path(), &["verify", suite, &data(file)]);
        assert_eq!(o.status.code(), Some(0), "{suite} {file}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn mutated_functor_is_located() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["verify", "functor", &data("bad_functor.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation [identity] at x"), "{}", stdout(&o));

    // mutate the good functor so the identity goes to a non-identity
    let mut f: Value = serde_json::from_str(&fs::read_to_string(data("good_functor.json")).unwrap()).unwrap();
    f["source"] = Value::String(data("involution.json"));
    f["target"] = Value::String(data("involution.json"));
    f["functor"]["morphisms"] = serde_json::json!([["1_x", "[e]"], ["[e]", "[e]"]]);
    let path = ws.path().join("mutated.json");
    fs::write(&path, f.to_string()).unwrap();
    let o = catml(ws.path(), &["--json", "verify", "functor", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["reports"][0]["violations"][0]["at"], "x");
}

#[test]
fn input_errors_exit_two() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["verify", "bogus", &data("identity.adj")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite `bogus`"));
    let o = catml(ws.path(), &["verify", "monad", &data("no_such_file.json")]);
    assert_eq!(o.status.code(), Some(2));
    // a category file given where a monad spec is expected
    let o = catml(ws.path(), &["verify", "monad", &data("chain3.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn incompatible_partition_with_witness() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["quotient", &data("mod3_system.json"), &data("bad_partition.json"), "--witness"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: 0 ∘ 0 = 0 but 1 ∘ 1 = 2"), "{}", stdout(&o));
}

#[test]
fn fruit_quotient() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["--json", "quotient", &data("fruit_system.json"), &data("fruit_kinds.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["map"]["nodes"]["Plantain"], "bananas");
}

#[test]
fn workspace_round_trip() {
    let ws = tempfile::tempdir().unwrap();
    let o = catml(ws.path(), &["ingest", &data("apples.txt"), "--name", "apples"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("5 nodes, 6 edges"));
    let o = catml(ws.path(), &["pipeline", "apples"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = catml(ws.path(), &["export-dot", "apples"]);
    assert!(stdout(&o).starts_with("digraph \"apples\""));
    let root = ws.path().to_str().unwrap();
    assert_eq!(catml(ws.path(), &["verify", "workspace", root]).status.code(), Some(0));

    // corrupt the stored object
    let objects: Vec<PathBuf> = fs::read_dir(ws.path().join("objects")).unwrap().map(|e| e.unwrap().path()).collect();
    for p in &objects {
        let text = fs::read_to_string(p).unwrap().replace("apples", "pears");
        fs::write(p, text).unwrap();
    }
    assert_eq!(catml(ws.path(), &["verify", "workspace", root]).status.code(), Some(1));
    assert_eq!(catml(ws.path(), &["verify", "workspace", &format!("{root}/missing")]).status.code(), Some(2));
}

#[test]
fn limits_slices_and_adjoints() {
    let ws = tempfile::tempdir().unwrap();
    for args in [
        vec!["limit".to_string(), data("cospan.json")],
        vec!["limit".into(), data("cospan.json"), "--colimit".into()],
        vec!["slice".into(), data("chain3.json"), "2".into()],
        vec!["slice".into(), data("chain3.json"), "0".into(), "--co".into()],
        vec!["adjoint".into(), data("to_terminal.json")],
        vec!["yoneda".into(), data("involution.json")],
        vec!["yoneda".into(), data("chain3.json"), "--presheaf".into(), data("chain3_presheaf.json"), "--at".into(), "0".into()],
        vec!["monad".into(), data("z2.mnd")],
        vec!["monad".into(), data("upath.mnd")],
        vec!["em".into(), data("z2.mnd")],
        vec!["beck".into(), data("z2.adj")],
        vec!["verify".into(), "adjunction".into(), data("path_forget.adj")],
        vec!["verify".into(), "adjunction".into(), data("change_of_base.adj")],
    ] {
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let o = catml(ws.path(), &refs);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}{}", stdout(&o), stderr(&o));
    }
    let o = catml(ws.path(), &["beck", &data("z2.adj")]);
    assert!(stdout(&o).contains("monadic"), "{}", stdout(&o));
}

#[test]
fn reports_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for args in [
        vec!["--json", "pipeline", "W", "--congruence", "C"],
        vec!["--json", "verify", "monad", "M"],
        vec!["em", "Z"],
    ] {
        let subst = |s: &&str| match *s {
            "W" => data("w1.json"),
            "C" => data("like_love.json"),
            "M" => data("powerset3.mnd"),
            "Z" => data("z2.mnd"),
            s => s.to_string(),
        };
        let args: Vec<String> = args.iter().map(subst).collect();
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        assert_eq!(catml(a.path(), &refs).stdout, catml(b.path(), &refs).stdout);
    }
}
