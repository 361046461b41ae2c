use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regreal::formats::write_dfa;
use regreal::verify::golden_suite;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn regreal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regreal"))
        .args(args)
        .current_dir(data(""))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn fibonacci_term() {
    let o = regreal(&["lrs", "eval", "fib.lrs", "10"]);
    assert_eq!(stdout(&o), "55\n");
    assert_eq!(code(&o), 0);
    let o = regreal(&["lrs", "eval", "fib.lrs", "1", "--count", "3"]);
    assert_eq!(stdout(&o), "1\nx_2 1\nx_3 2\n");
}

#[test]
fn filter_check_exit_codes() {
    let o = regreal(&["filter", "check", "pb", "#0#1#"]);
    assert!(stdout(&o).starts_with("yes\n"));
    assert_eq!(code(&o), 0);
    let o = regreal(&["filter", "check", "pb", "#0#0#"]);
    assert!(stdout(&o).starts_with("no\n"));
    assert_eq!(code(&o), 1);
    assert_eq!(code(&regreal(&["filter", "check", "inj", "#0#11#"])), 1);
}

#[test]
fn decide_all_words() {
    let o = regreal(&["decide", "sur", "all.dfa"]);
    let out = stdout(&o);
    assert!(out.starts_with("yes\n"));
    assert!(out.lines().any(|l| l == "witness #0#1#"), "{out}");
    assert_eq!(code(&o), 0);
    assert_eq!(code(&regreal(&["decide", "sur", "start0.dfa"])), 1);
    assert_eq!(code(&regreal(&["decide", "inj", "start0.dfa"])), 0);
}

#[test]
fn exit_codes_on_golden_suite() {
    let dir = tempfile::tempdir().unwrap();
    for g in golden_suite() {
        let p = dir.path().join(format!("{}.dfa", g.name));
        std::fs::write(&p, write_dfa(&g.automaton)).unwrap();
        let p = p.to_str().unwrap();
        for (cmd, want) in [("sur", g.surjective), ("inj", g.injective)] {
            let o = regreal(&["decide", cmd, p]);
            assert_eq!(
                code(&o),
                if want { 0 } else { 1 },
                "{} {cmd}: {}",
                g.name,
                stdout(&o)
            );
        }
    }
}

#[test]
fn usage_and_refusal_codes() {
    assert_eq!(code(&regreal(&["frobnicate"])), 64);
    assert_eq!(code(&regreal(&["filter", "check", "xyz", "#0#"])), 64);
    // budgets are mandatory on semi-deciders
    assert_eq!(
        code(&regreal(&[
            "filter",
            "brute",
            "sur",
            "all.dfa",
            "--max-rank",
            "2"
        ])),
        64
    );
    assert_eq!(code(&regreal(&["hit", "scan", "fib8.hit"])), 64);
    assert_eq!(code(&regreal(&["lrs", "eval", "missing.lrs", "3"])), 64);
    let o = regreal(&[
        "filter",
        "brute",
        "sur",
        "start0.dfa",
        "--max-rank",
        "6",
        "--budget",
        "50",
    ]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("refused"));
}

#[test]
fn unknown_when_bound_runs_out() {
    let o = regreal(&["hit", "scan", "fib8.hit", "--bound", "2"]);
    assert_eq!(stdout(&o), "unknown\nno-hit-within 2\n");
    assert_eq!(code(&o), 2);
    let o = regreal(&["hit", "scan", "fib8.hit", "--bound", "10"]);
    assert_eq!(stdout(&o), "yes\nn 4\n");
    let o = regreal(&["hit", "scan", "double.plp", "--bound", "10"]);
    assert_eq!(stdout(&o), "no\nviolation 0\n");
}

#[test]
fn thread_count_does_not_change_output() {
    let one = regreal(&["hit", "scan", "fib8.hit", "--bound", "40", "--threads", "1"]);
    let four = regreal(&["hit", "scan", "fib8.hit", "--bound", "40", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn lines_format_carries_the_same_fields() {
    let text = stdout(&regreal(&["decide", "inj", "start0.dfa"]));
    let lines = stdout(&regreal(&[
        "decide",
        "inj",
        "start0.dfa",
        "--format",
        "lines",
    ]));
    let mut rebuilt = String::new();
    for l in lines.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        let (k, val) = (v["key"].as_str().unwrap(), v["value"].as_str().unwrap());
        rebuilt += &if k == "result" {
            format!("{val}\n")
        } else {
            format!("{k} {val}\n")
        };
    }
    assert_eq!(rebuilt, text);
}

#[test]
fn manifest_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = regreal(&[
        "reduce",
        "chp-to-pb",
        "fib8.chp",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(out.join("pb.dfa").exists() && out.join("reduction.txt").exists());
    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["inputs"][0]["path"], "fib8.chp");
    assert!(m["parameters"]["ell"].is_string() && m["parameters"]["M_1"].is_string());
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
    let r = regreal(&["replay", out.join("manifest.json").to_str().unwrap()]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));
    assert!(stdout(&r).lines().all(|l| l.ends_with("identical")));

    // a tampered digest is reported
    let mut bad = m.clone();
    bad["outputs"][0]["sha256"] = Value::String("0".repeat(64));
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, bad.to_string()).unwrap();
    let r = regreal(&["replay", bad_path.to_str().unwrap()]);
    assert_eq!(code(&r), 1);
    assert!(stdout(&r).contains("output pb.dfa differs"));
}

#[test]
fn manifest_on_stderr_by_default() {
    let o = regreal(&["dfa", "count", "all.dfa", "3"]);
    assert_eq!(stdout(&o), "27\n");
    let err = String::from_utf8(o.stderr).unwrap();
    let line = err
        .lines()
        .find(|l| l.starts_with("manifest "))
        .expect("manifest line");
    let m: Value = serde_json::from_str(&line["manifest ".len()..]).unwrap();
    assert_eq!(m["command"][0], "dfa");
    assert_eq!(m["exit"], 0);
}

#[test]
fn reverse_pipeline_files_chain() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w");
    assert_eq!(
        code(&regreal(&[
            "reduce",
            "pb-to-wwhp",
            "start0.dfa",
            "--out-dir",
            w.to_str().unwrap()
        ])),
        0
    );
    let inst = w.join("wwhp-2.txt");
    let inst = inst.to_str().unwrap();
    assert_eq!(code(&regreal(&["decide", "down", inst])), 0);
    assert_eq!(code(&regreal(&["decide", "up", inst])), 1);
    let i = dir.path().join("i");
    let o = regreal(&[
        "reduce",
        "wwhp-to-ihp",
        inst,
        "--out-dir",
        i.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let ihp = i.join("ihp-1.txt");
    let o = regreal(&[
        "reduce",
        "ihp-to-php",
        ihp.to_str().unwrap(),
        "--bound",
        "10",
        "--budget",
        "100000",
    ]);
    assert!([0, 1, 2].contains(&code(&o)));
}

#[test]
fn lattice_and_forward_commands() {
    assert_eq!(
        stdout(&regreal(&["lattice", "snf", "m.mat"]))
            .lines()
            .next(),
        Some("2 6")
    );
    let h = stdout(&regreal(&[
        "lattice",
        "hilbert",
        "simplicial.txt",
        "--budget",
        "1000",
    ]));
    assert!(h.starts_with("points 5\n"), "{h}");
    let c = stdout(&regreal(&[
        "lattice",
        "caratheodory",
        "cone.txt",
        "--budget",
        "100000",
    ]));
    assert!(c.contains("# artifact decomposition.txt"));
    let s = stdout(&regreal(&["lattice", "hitset", "swap.orbit"]));
    assert!(s.contains("prog 1 2"), "{s}");
    let z = regreal(&["reduce", "zurc-to-pepe", "swap.mats"]);
    assert_eq!(code(&z), 0);
    let p = stdout(&regreal(&["lrs", "to-pair", "fib.lrs"]));
    assert!(p.contains("# artifact a.dfa") && p.contains("# artifact b.dfa"));
    let g = stdout(&regreal(&["digraph", "build-count", "11", "4"]));
    assert!(g.contains("digraph "));
    let r = stdout(&regreal(&["hit", "roundtrip", "fib8.hit"]));
    assert!(r.starts_with("patterns 2\n"));
}

#[test]
fn verify_suite_passes() {
    let o = regreal(&["verify", "smith"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("criterion 8 PASS smith"));
    assert_eq!(code(&regreal(&["verify", "nope"])), 64);
}

#[test]
fn same_inputs_same_bytes() {
    let a = regreal(&["reduce", "pb-to-wwhp", "start0.dfa"]);
    let b = regreal(&["reduce", "pb-to-wwhp", "start0.dfa"]);
    assert_eq!(a.stdout, b.stdout);
}
