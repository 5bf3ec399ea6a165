use std::path::Path;
use std::process::{Command, Output};

use polypart::io::read_instance;
use polypart::Point;

fn polypart(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polypart"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn gen_extremal_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = polypart(&["gen", "extremal-grid", "k=2", "--out", "eg.json"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let inst = read_instance(&std::fs::read_to_string(dir.path().join("eg.json")).unwrap()).unwrap();
    assert_eq!(inst.points.len(), 16);
    assert_eq!(inst.lines.unwrap().len(), 8);
}

#[test]
fn gen_grid_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = polypart(&["gen", "grid", "4x4"], dir.path());
    assert!(out.status.success());
    let inst = read_instance(&stdout(&out)).unwrap();
    assert_eq!(inst.points.len(), 16);
    assert!(inst.points.iter().all(|p| p.coords().iter().all(|c| c.is_integer())));
    assert_eq!(inst.points[15], Point::from_ints(&[3, 3]));
}

#[test]
fn gen_random_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = polypart(&["gen", "random", "n=64", "--seed", "7"], dir.path());
    let b = polypart(&["gen", "random", "n=64", "--seed", "7"], dir.path());
    let c = polypart(&["gen", "random", "n=64", "--seed", "8"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["experiment", "bogus"],
        vec!["gen", "nonsense"],
        vec!["gen", "extremal-grid", "k=0"],
        vec!["gen", "grid", "size=4"],
        vec!["partition", "missing.json", "--r", "4"],
        vec!["crossings", "missing.json", "--mode", "diagonal"],
        vec!["frobnicate"],
    ] {
        let out = polypart(&args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
    let out = polypart(&["experiment", "bogus"], dir.path());
    assert!(stderr(&out).contains("unknown suite"));
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(polypart(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(polypart(&["--version"], dir.path()).status.code(), Some(0));
}

#[test]
fn failing_audit_exits_two_and_names_the_check() {
    let dir = tempfile::tempdir().unwrap();
    // two lines through one point, declared as a family where any point
    // lies on at most one curve
    let inst = r#"{
  "format": "polypart-instance/1",
  "kind": "fixture",
  "params": {},
  "dim": 2,
  "points": [[0,1,0,1]],
  "curves": {"k": 1, "c": 1, "b": 1, "polys": ["1 0 : 1", "0 1 : 1"]}
}"#;
    std::fs::write(dir.path().join("bad.json"), inst).unwrap();
    let out = polypart(&["audit", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("points_bound"), "{}", stderr(&out));
    assert!(stdout(&out).contains("points_bound,2,1,false"));
}

#[test]
fn pipeline_and_reports_echo_config() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let out = polypart(args, dir.path());
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        out
    };
    run(&["gen", "random", "n=40", "--seed", "3", "--out", "p.json"]);
    let part = stdout(&run(&["partition", "p.json", "--r", "4", "--seed", "5"]));
    assert!(part.contains("# seed=5"));
    assert!(part.contains("# r=4"));
    run(&["tree", "p.json", "--c", "4", "--seed", "5", "--out", "t.json", "--svg", "t.svg"]);
    let tree = std::fs::read_to_string(dir.path().join("t.json")).unwrap();
    assert!(tree.contains("\"seed\": \"5\""));
    let cross = stdout(&run(&["crossings", "t.json", "--mode", "sampled", "--samples", "200", "--svg", "w.svg"]));
    assert!(cross.contains("\"lower_bound\": true"));
    let svg = std::fs::read_to_string(dir.path().join("w.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<line"));
    let audit = stdout(&run(&["audit", "p.json", "--r", "4", "--lines", "20"]));
    assert!(audit.contains("line_sign_classes[19]"));
    run(&["gen", "circle", "g=3", "--out", "c.json"]);
    let inc = stdout(&run(&["incidences", "c.json"]));
    assert!(inc.contains("incidences "));
}

#[test]
fn experiment_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = polypart(&["experiment", "st", "sizes=16,32", "seeds=3"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("1,st,")).collect();
    assert_eq!(rows.len(), 6);
    // (size, seed) order
    assert!(rows[0].contains("st-random-16-s0") && rows[2].contains("st-random-16-s2"));
    assert!(rows[3].contains("st-random-32-s0"));
    assert!(rows.iter().all(|r| r.contains(",~") && r.ends_with(",true,")));
    assert!(!text.contains("runtime_ms"));

    let out = polypart(&["experiment", "tree2d", "--sizes", "64", "--kind", "grid", "--timing"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let header = text.lines().find(|l| l.starts_with("schema")).unwrap();
    assert!(header.contains("max_crossing") && header.contains("crossing_ratio") && header.contains("runtime_ms"));
    let row = text.lines().find(|l| l.starts_with("1,tree2d")).unwrap();
    assert!(row.contains(",exact,"));

    let out = polypart(&["experiment", "tree2d", "--sizes", "60", "--kind", "grid"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("not a perfect power"));
}
