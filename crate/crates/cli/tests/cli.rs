mod common;

use std::fs;

use common::{locality, stdout, workdir};
use serde_json::Value;

fn report(dir: &std::path::Path, args: &[&str]) -> (i32, Value) {
    let out = locality(dir, args);
    let code = out.status.code().unwrap();
    let text = stdout(&out);
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (code, value)
}

#[test]
fn adversary_trace_replays_through_simulate() {
    let dir = workdir();
    let (code, adv) = report(
        dir.path(),
        &[
            "adversary",
            "--policy",
            "lru",
            "--f",
            "table:witness.f",
            "--k",
            "4",
            "--reps",
            "10",
            "--out",
            "afg.txt",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(adv["results"]["fault_rate"], "3/5");
    assert_eq!(adv["results"]["fault_rate_value"], 0.6);
    assert_eq!(adv["results"]["alpha"], "3/5");
    assert_eq!(adv["results"]["conforms"], true);
    assert_eq!(adv["pass"], true);

    let (code, sim) = report(
        dir.path(),
        &[
            "simulate", "--policy", "lru", "--k", "4", "--warm", "1,2,3,4", "--trace", "afg.txt",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(sim["results"]["fault_rate"], "3/5");
    assert_eq!(sim["results"]["total_requests"], 50);

    let (_, opt) = report(
        dir.path(),
        &[
            "simulate", "--policy", "opt", "--k", "4", "--warm", "1,2,3,4", "--trace", "afg.txt",
        ],
    );
    assert_eq!(opt["results"]["policy"], "opt");
    assert!(opt["results"]["faults"].as_u64().unwrap() <= 30);
}

#[test]
fn adversary_rates_for_builtins() {
    let dir = workdir();
    let (code, id) = report(
        dir.path(),
        &[
            "adversary",
            "--policy",
            "fifo",
            "--f",
            "identity",
            "--k",
            "8",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(id["results"]["fault_rate"], "1/1");
    assert_eq!(id["results"]["fault_rate_value"], 1.0);
    let (_, log) = report(
        dir.path(),
        &["adversary", "--f", "log2", "--k", "5", "--policy", "fifo"],
    );
    assert_eq!(log["results"]["fault_rate"], "4/15");
    assert_eq!(log["results"]["predicted_length"], 15);
}

#[test]
fn bounds_for_table_function() {
    let dir = workdir();
    let (code, b) = report(
        dir.path(),
        &["bounds", "--f", "table:witness.f", "--k", "4"],
    );
    assert_eq!(code, 0);
    assert_eq!(b["results"]["alpha"], "3/5");
    assert_eq!(b["results"]["fifo_bound"], "2/3");
    assert_eq!(b["schema_version"], "1");
    assert!(b.get("pass").is_none());
}

#[test]
fn conformance_verdicts() {
    let dir = workdir();
    let (code, c) = report(
        dir.path(),
        &["conform", "--f", "identity", "--trace", "web.trace"],
    );
    assert_eq!((code, &c["results"]["conforms"]), (0, &Value::Bool(true)));
    let (code, c) = report(
        dir.path(),
        &["conform", "--f", "log2", "--trace", "web.trace"],
    );
    assert_eq!(code, 1);
    let v = &c["results"]["first_violation"];
    assert!(v["distinct"].as_u64().unwrap() > v["allowed"].as_u64().unwrap());
    let (_, naive) = report(
        dir.path(),
        &["conform", "--f", "log2", "--trace", "web.trace", "--naive"],
    );
    assert_eq!(naive["results"], c["results"]);
}

#[test]
fn profile_table_round_trips() {
    let dir = workdir();
    let (code, p) = report(
        dir.path(),
        &["profile", "--trace", "witness.trace", "--out", "w.f"],
    );
    assert_eq!(code, 0);
    let head: Vec<u64> = (0..8)
        .map(|i| p["results"]["profile"][i].as_u64().unwrap())
        .collect();
    assert_eq!(head, [1, 2, 3, 3, 4, 4, 5, 5]);
    // The trace conforms to its own normalized profile.
    let (code, c) = report(
        dir.path(),
        &["conform", "--f", "table:w.f", "--trace", "witness.trace"],
    );
    assert_eq!(code, 0);
    assert_eq!(c["results"]["conforms"], true);

    // web.trace's closure has a multiplicity dip, so no table is written.
    let (code, p) = report(dir.path(), &["profile", "--trace", "web.trace"]);
    assert_eq!(code, 0);
    assert_eq!(p["results"]["normalized"]["nondecreasing_table"], false);
    let out = locality(
        dir.path(),
        &["profile", "--trace", "web.trace", "--out", "web.f"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("web.f").exists());

    fs::write(dir.path().join("one.trace"), "x x x\n").unwrap();
    let (code, p) = report(dir.path(), &["profile", "--trace", "one.trace"]);
    assert_eq!(code, 0);
    assert_eq!(p["results"]["normalized"], Value::Null);
}

#[test]
fn verify_lru_upper_on_sqrt() {
    let dir = workdir();
    let (code, v) = report(
        dir.path(),
        &[
            "verify",
            "lru-upper",
            "--f",
            "sqrt",
            "--k",
            "16",
            "--trials",
            "100",
            "--len",
            "10000",
            "--seed",
            "1",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"]["violations"], 0);
    assert_eq!(v["results"]["bound_value"], "1/17");
}

#[test]
fn verify_lower_reports_exact_rate() {
    let dir = workdir();
    let (code, v) = report(
        dir.path(),
        &[
            "verify", "lower", "--policy", "lru", "--f", "identity", "--k", "8", "--reps", "3",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["results"]["max_observed_rate"], "1/1");
}

#[test]
fn knapsack_solvers() {
    let dir = workdir();
    let (_, g) = report(
        dir.path(),
        &["knapsack", "greedy", "--instance", "knap.txt"],
    );
    let (_, e) = report(dir.path(), &["knapsack", "exact", "--instance", "knap.txt"]);
    let (gv, ev) = (
        g["results"]["total_value"].as_f64().unwrap(),
        e["results"]["total_value"].as_f64().unwrap(),
    );
    let alpha = g["results"]["alpha"].as_f64().unwrap();
    assert!(gv <= ev && gv >= (1.0 - alpha) * ev);
}

#[test]
fn perceptron_gen_then_train() {
    let dir = workdir();
    let (code, _) = report(
        dir.path(),
        &[
            "perceptron",
            "gen",
            "--d",
            "5",
            "--n",
            "50",
            "--mu",
            "0.2",
            "--seed",
            "3",
            "--out",
            "p.txt",
        ],
    );
    assert_eq!(code, 0);
    let (code, t) = report(
        dir.path(),
        &["perceptron", "train", "--data", "p.txt", "--mu", "0.2"],
    );
    assert_eq!(code, 0);
    assert!(t["results"]["updates"].as_u64().unwrap() <= 25);
    assert!(t["results"]["margin_lower_bound"].as_f64().unwrap() > 0.0);

    fs::write(dir.path().join("xor.txt"), "+1 1 0\n-1 1 0\n").unwrap();
    let (code, t) = report(
        dir.path(),
        &[
            "perceptron",
            "train",
            "--data",
            "xor.txt",
            "--max-updates",
            "40",
        ],
    );
    assert_eq!(code, 1);
    assert_eq!(t["results"]["converged"], false);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = workdir();
    let cases: &[&[&str]] = &[
        &["simulate", "--policy", "lru", "--trace", "web.trace"],
        &[
            "simulate",
            "--policy",
            "mru",
            "--k",
            "2",
            "--trace",
            "web.trace",
        ],
        &[
            "simulate",
            "--policy",
            "lru",
            "--k",
            "2",
            "--warm",
            "/index",
            "--trace",
            "web.trace",
        ],
        &[
            "simulate",
            "--policy",
            "lru",
            "--k",
            "2",
            "--trace",
            "missing.trace",
        ],
        &["bounds", "--f", "cubic", "--k", "4"],
        &["bounds", "--f", "identity", "--k", "1"],
        &[
            "adversary",
            "--policy",
            "lru",
            "--f",
            "table:knap.txt",
            "--k",
            "4",
        ],
        &["knapsack", "greedy", "--instance", "web.trace"],
        &[
            "perceptron",
            "gen",
            "--d",
            "2",
            "--n",
            "5",
            "--mu",
            "1.5",
            "--out",
            "x.txt",
        ],
    ];
    for args in cases {
        let out = locality(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_trace_names_the_line() {
    let dir = workdir();
    let out = locality(
        dir.path(),
        &["conform", "--f", "identity", "--trace", "bad.trace"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.trace: line 3"), "{err}");
}

#[test]
fn no_color_output_is_plain() {
    let dir = workdir();
    let out = locality(dir.path(), &["simulate", "--policy"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.contains(&0x1b));
}
