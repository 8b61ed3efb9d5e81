use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use heesch::construct::{premise_search, PremiseSearchOptions};
use heesch::subgroup::FiniteHom;
use heesch::GroupSpec;
use tempfile::TempDir;

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        let d = Dir(TempDir::new().unwrap());
        d.write("grid2.json", r#"{"model":"grid","dim":2}"#);
        d.write("f2.json", r#"{"model":"free","rank":2}"#);
        d.write("domino.json", r#"{"group":"grid2.json","cells":["","a"]}"#);
        d.write(
            "ring.json",
            r#"{"group":"grid2.json","cells":["a","a'","b","b'","ab","ab'","a'b","a'b'"]}"#,
        );
        d.write("diag.json", r#"{"cells":["","ab"]}"#);
        d.write("v4.json", r#"{"degree":4,"images":{"a":[1,0,3,2],"b":[2,3,0,1]}}"#);
        d
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_heesch"))
            .current_dir(self.0.path())
            .args(args)
            .output()
            .unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn diagnostic(o: &Output) -> serde_json::Value {
    let err = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(err.lines().last().unwrap_or_default()).expect("stderr carries a JSON diagnostic")
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn group_validate() {
    let d = Dir::new();
    assert_eq!(code(&d.run(&["group", "validate", "grid2.json"])), 0);
    d.write("bad.json", r#"{"model":"grid","dim":0}"#);
    // an invalid spec is a "false" answer, not a usage error
    let o = d.run(&["group", "validate", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(diagnostic(&o)["error"], "invalid_spec");
}

#[test]
fn tile_check_flags_disconnected_tiles() {
    let d = Dir::new();
    assert_eq!(code(&d.run(&["tile", "check", "domino.json"])), 0);
    let o = d.run(&["tile", "check", "diag.json", "--group", "grid2.json"]);
    assert_eq!(code(&o), 1);
    // no group anywhere
    assert_eq!(code(&d.run(&["tile", "check", "diag.json"])), 2);
}

#[test]
fn eval_verify_and_tamper() {
    let d = Dir::new();
    let o = d.run(&["--deterministic", "eval", "--tile", "domino.json", "-o", "cert.json"]);
    assert_eq!(code(&o), 0);
    let cert = json(&d.read("cert.json"));
    assert_eq!(cert["verdict"]["kind"], "tiles_periodic");
    assert_eq!(code(&d.run(&["verify", "--cert", "cert.json"])), 0);

    let mut bad = cert.clone();
    bad["tile"][1] = "b".into();
    d.write("bad.json", &bad.to_string());
    assert_eq!(code(&d.run(&["verify", "--cert", "bad.json"])), 1);

    let again = d.run(&["--deterministic", "eval", "--tile", "domino.json"]);
    assert_eq!(stdout(&again).trim(), d.read("cert.json").trim());
}

#[test]
fn ge_exit_codes() {
    let d = Dir::new();
    let o = d.run(&["ge", "--tile", "domino.json", "-N", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&stdout(&o))["verdict"]["n"], 2);
    // the ring has no surround: a conclusive refutation
    assert_eq!(code(&d.run(&["--deterministic", "ge", "--tile", "ring.json", "-N", "1"])), 1);
    // a node limit of one cannot finish
    let o = d.run(&["--deterministic", "--node-limit", "1", "ge", "--tile", "domino.json", "-N", "3"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn caps_come_from_the_environment() {
    let d = Dir::new();
    let o = Command::new(env!("CARGO_BIN_EXE_heesch"))
        .current_dir(d.0.path())
        .env("HEESCH_NODE_LIMIT", "1")
        .args(["--deterministic", "ge", "--tile", "domino.json", "-N", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn lift_diagonal_domino() {
    let d = Dir::new();
    let o = d.run(&[
        "lift", "--tile", "diag.json", "--group", "grid2.json", "--hom", "v4.json", "--centers", ",a", "--box=-5,6,-5,6",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = json(&stdout(&o));
    assert!(out.to_string().contains("144"), "region of 144 cells: {out}");
}

#[test]
fn export_polygon_and_svg() {
    let d = Dir::new();
    let o = d.run(&["export", "polygon", "ring.json"]);
    assert_eq!(code(&o), 0);
    d.write("ring_poly.json", &stdout(&o));
    let poly = json(&stdout(&o));
    assert_eq!(poly["loops"].as_array().unwrap().len(), 2);

    let o = d.run(&["export", "svg", "--polygon", "ring_poly.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("<path").count(), 2);

    assert_eq!(code(&d.run(&["--deterministic", "ge", "--tile", "domino.json", "-N", "1", "-o", "c.json"])), 0);
    let o = d.run(&["export", "svg", "--cert", "c.json", "-o", "c.svg"]);
    assert_eq!(code(&o), 0);
    assert!(d.read("c.svg").contains("data-layer=\"1\""));
    let o = d.run(&["export", "svg", "--tile", "domino.json"]);
    assert!(stdout(&o).starts_with("<?xml"));

    d.write("f2tile.json", r#"{"group":"f2.json","cells":["","a"]}"#);
    let o = d.run(&["export", "svg", "--tile", "f2tile.json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(diagnostic(&o)["error"], "unsupported");
}

#[test]
fn construct_premises() {
    let d = Dir::new();
    let o = d.run(&["construct", "premises", "--group", "f2.json"]);
    assert_eq!(code(&o), 1);
    let o = d.run(&["construct", "premises", "--search", "--limit", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("relator"));
}

/// A premise-passing group and a cyclic quotient `a -> 1, b -> j` of it.
fn fixture(d: &Dir) -> String {
    let found = premise_search(&PremiseSearchOptions {
        limit: 1,
        ..PremiseSearchOptions::default()
    })
    .unwrap();
    let spec = GroupSpec::from_doc(found[0].group.clone()).unwrap();
    d.write("g.json", &serde_json::to_string(&found[0].group).unwrap());
    for q in 3..=12usize {
        for j in 1..q {
            let shift = |k: usize| (0..q).map(|p| (p + k) % q).collect::<Vec<_>>();
            if FiniteHom::from_perms(&spec, &[("a", shift(1)), ("b", shift(j))]).is_ok() {
                return format!(r#"{{"degree":{q},"images":{{"a":{:?},"b":{:?}}}}}"#, shift(1), shift(j));
            }
        }
    }
    panic!("no cyclic quotient of order <= 12");
}

#[test]
fn construct_pipeline_reports_the_failing_step() {
    let d = Dir::new();
    let hom = fixture(&d);
    d.write("cfg.json", &format!(r#"{{"group":"g.json","hom":{hom},"rho":1}}"#));
    let o = d.run(&["construct", "pipeline", "--config", "cfg.json", "--out-dir", "out"]);
    assert!(matches!(code(&o), 0 | 1), "{}", String::from_utf8_lossy(&o.stderr));
    if code(&o) == 1 {
        let diag = diagnostic(&o);
        assert!(diag["report"].is_object());
        assert!(Path::new(&d.path("out/report.json")).exists());
    } else {
        assert_eq!(code(&d.run(&["verify", "--cert", "out/cert.json"])), 0);
    }
}

#[test]
fn construct_stage_keeps_its_bookkeeping() {
    let d = Dir::new();
    d.write("cfg.json", r#"{"group":"f2.json","hom":{"degree":1,"images":{"a":[0],"b":[0]}},"p_n":7}"#);
    let o = d.run(&["construct", "stage", "--config", "cfg.json", "--injectivity-cap", "4"]);
    assert_eq!(code(&o), 1);
    let diag = diagnostic(&o);
    assert_eq!(diag["error"], "premise");
    assert_eq!(diag["report"]["layer_ball_radius"], 81);
}

#[test]
fn usage_errors() {
    let d = Dir::new();
    let o = d.run(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    assert_eq!(diagnostic(&o)["error"], "usage");
    assert_eq!(code(&d.run(&["--help"])), 0);
    assert_eq!(code(&d.run(&["eval", "--tile", "missing.json"])), 2);
}
