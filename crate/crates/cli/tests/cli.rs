use std::io::Write;
use std::process::Command;

use tplog_cli::{run, run_interactive, Engine, RunConfig, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};

fn program(name: &str) -> String {
    format!("{}/../core/programs/{name}.pl", env!("CARGO_MANIFEST_DIR"))
}

fn exec(config: &RunConfig) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(config, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn p1_answers_then_no() {
    let (code, out, _) = exec(&RunConfig::new(program("p1"), "reach(a,X)"));
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "X = a\nX = b\nX = d\nX = e\nno\n");
}

#[test]
fn p1_dump_tables() {
    let cfg = RunConfig { dump_tables: true, ..RunConfig::new(program("p1"), "reach(a,X)") };
    let (_, out, _) = exec(&cfg);
    assert!(out.ends_with("no\nTB(reach(a,_0)): answers=[(a),(b),(d),(e)] status=[1,0,0] comp=1\n"));
}

#[test]
fn ground_queries_print_yes_or_no() {
    assert_eq!(exec(&RunConfig::new(program("p5_3"), "not_p(a)")).1, "yes\n");
    assert_eq!(exec(&RunConfig::new(program("p5_2"), "not_p(a)")).1, "no\n");
}

#[test]
fn sld_depth_limit_exits_2() {
    let cfg = RunConfig { engine: Engine::Sld, depth_bound: 50, ..RunConfig::new(program("p1"), "reach(a,X)") };
    let (code, out, _) = exec(&cfg);
    assert_eq!(code, EXIT_RESOURCE);
    assert_eq!(out, "resource-limit: depth bound exceeded\n");
}

#[test]
fn step_budget_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nat.pl");
    std::fs::write(&path, "n(z).\nn(s(X)) :- n(X).\n").unwrap();
    let cfg = RunConfig { step_budget: 500, ..RunConfig::new(&path, "n(X)") };
    let (code, out, _) = exec(&cfg);
    assert_eq!(code, EXIT_RESOURCE);
    assert!(out.ends_with("resource-limit: step budget exceeded\n"));
}

#[test]
fn engines_agree_on_p2() {
    let mut outs = Vec::new();
    for engine in [Engine::Tp, Engine::Bottomup] {
        let (code, out, _) = exec(&RunConfig { engine, ..RunConfig::new(program("p2"), "p(X,Y,Z)") });
        assert_eq!(code, EXIT_OK);
        let mut lines: Vec<String> = out.lines().map(String::from).collect();
        lines.sort();
        outs.push(lines);
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0].len(), 4);
}

#[test]
fn unknown_predicate_is_no() {
    assert_eq!(exec(&RunConfig::new(program("p1"), "missing(X)")), (EXIT_OK, "no\n".into(), String::new()));
}

#[test]
fn parse_errors_report_position() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "p(a).\nq(X :- p(X).\n").unwrap();
    let (code, out, err) = exec(&RunConfig::new(file.path(), "q(X)"));
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains(&format!("{}:2:5:", file.path().display())), "{err}");
}

#[test]
fn bad_query_is_usage_error() {
    assert_eq!(exec(&RunConfig::new(program("p1"), "reach(a,")).0, EXIT_USAGE);
}

#[test]
fn trace_goes_to_stderr() {
    let cfg = RunConfig { trace: true, ..RunConfig::new(program("p1"), "reach(a,X)") };
    let (_, out, err) = exec(&cfg);
    assert!(!out.contains("EVENT"));
    assert!(err.lines().all(|l| l.starts_with("EVENT kind=")));
    assert!(err.contains("kind=iteration-end node=0 pass=1 new=0 comp=1"));
}

#[test]
fn output_is_deterministic() {
    let cfg = RunConfig::new(program("p3"), "p(X,Y)");
    assert_eq!(exec(&cfg), exec(&cfg));
}

#[test]
fn interactive_session() {
    let cfg = RunConfig::new(program("p1"), "");
    let mut input = "reach(a,X)\n;\n.\nreach(b,X)\n;\n;\n;\n".as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_interactive(&cfg, &mut input, &mut out, &mut err);
    assert_eq!(code, EXIT_OK);
    let out = String::from_utf8(out).unwrap();
    assert_eq!(out, "?- X = a\nX = b\n?- X = b\nX = d\nX = e\nno\n?- ");
}

#[test]
fn binary_exit_codes() {
    let tp = env!("CARGO_BIN_EXE_tp");
    let ok = Command::new(tp).args(["run", &program("p1"), "-q", "reach(a,X)"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "X = a\nX = b\nX = d\nX = e\nno\n");
    let limit = Command::new(tp)
        .args(["run", &program("p1"), "-q", "reach(a,X)", "--engine", "sld", "--depth-bound", "50"])
        .output()
        .unwrap();
    assert_eq!(limit.status.code(), Some(2));
    let usage = Command::new(tp).args(["run", &program("p1"), "--engine", "nope", "-q", "p"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let missing = Command::new(tp).args(["run", "/nonexistent.pl", "-q", "p"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}
