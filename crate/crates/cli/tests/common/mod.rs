#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    manifest_dir().join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("tests/golden")
}

/// A scratch directory holding a copy of every fixture, so commands can use
/// short relative paths and reports do not depend on where the repo lives.
pub fn workdir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().expect("temp dir");
    for entry in fs::read_dir(fixtures()).expect("fixtures dir") {
        let path = entry.unwrap().path();
        fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    dir
}

pub fn locality(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locality"))
        .args(args)
        .current_dir(dir)
        .env("NO_COLOR", "1")
        .output()
        .expect("run locality binary")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 report")
}

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Files the command writes, compared under `<name>.<file>`.
    pub files: &'static [&'static str],
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "simulate_lru_warm",
        args: &[
            "simulate",
            "--policy",
            "lru",
            "--k",
            "3",
            "--warm",
            "/index,/about,/news",
            "--trace",
            "web.trace",
            "--detail",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "simulate_fifo",
        args: &[
            "simulate",
            "--policy",
            "fifo",
            "--k",
            "3",
            "--trace",
            "web.trace",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "simulate_opt",
        args: &[
            "simulate",
            "--policy",
            "opt",
            "--k",
            "3",
            "--trace",
            "web.trace",
            "--detail",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "adversary_lru_table",
        args: &[
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
            "afg.trace",
        ],
        exit: 0,
        files: &["afg.trace"],
    },
    GoldenCase {
        name: "adversary_fifo_log2",
        args: &["adversary", "--policy", "fifo", "--f", "log2", "--k", "5"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "adversary_always_miss",
        args: &[
            "adversary",
            "--policy",
            "fifo",
            "--k",
            "3",
            "--always-miss",
            "12",
            "--out",
            "miss.trace",
        ],
        exit: 0,
        files: &["miss.trace"],
    },
    GoldenCase {
        name: "bounds_table",
        args: &["bounds", "--f", "table:witness.f", "--k", "4"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "bounds_sqrt",
        args: &["bounds", "--f", "sqrt", "--k", "16"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "conform_identity",
        args: &["conform", "--f", "identity", "--trace", "web.trace"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "conform_witness",
        args: &[
            "conform",
            "--f",
            "witness",
            "--trace",
            "witness.trace",
            "--naive",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "conform_violation",
        args: &["conform", "--f", "log2", "--trace", "web.trace"],
        exit: 1,
        files: &[],
    },
    GoldenCase {
        name: "profile",
        args: &["profile", "--trace", "web.trace"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "profile_witness",
        args: &[
            "profile",
            "--trace",
            "witness.trace",
            "--max-window",
            "12",
            "--out",
            "witness.f",
        ],
        exit: 0,
        files: &["witness.f"],
    },
    GoldenCase {
        name: "verify_lower",
        args: &[
            "verify", "lower", "--policy", "fifo", "--f", "log2", "--k", "5", "--reps", "10",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "verify_lru_upper",
        args: &[
            "verify",
            "lru-upper",
            "--f",
            "witness",
            "--k",
            "4",
            "--trials",
            "20",
            "--len",
            "2000",
            "--seed",
            "7",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "verify_fifo_upper",
        args: &[
            "verify",
            "fifo-upper",
            "--f",
            "sqrt",
            "--k",
            "4",
            "--trials",
            "20",
            "--len",
            "2000",
            "--pages",
            "7",
            "--seed",
            "7",
        ],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "verify_separation",
        args: &["verify", "separation", "--reps", "100"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "verify_separation_short",
        args: &["verify", "separation", "--reps", "1"],
        exit: 1,
        files: &[],
    },
    GoldenCase {
        name: "knapsack_greedy",
        args: &["knapsack", "greedy", "--instance", "knap.txt"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "knapsack_exact",
        args: &["knapsack", "exact", "--instance", "knap.txt"],
        exit: 0,
        files: &[],
    },
    GoldenCase {
        name: "perceptron_gen",
        args: &[
            "perceptron",
            "gen",
            "--d",
            "3",
            "--n",
            "12",
            "--mu",
            "0.1",
            "--seed",
            "4",
            "--out",
            "points.txt",
        ],
        exit: 0,
        files: &["points.txt"],
    },
    GoldenCase {
        name: "perceptron_train",
        args: &[
            "perceptron",
            "train",
            "--data",
            "points.txt",
            "--mu",
            "0.1",
            "--log",
        ],
        exit: 0,
        files: &[],
    },
];

/// Runs every case in order in one working directory (later cases may read
/// files written by earlier ones) and compares against the golden files.
/// With `LOCALITY_BLESS=1` the golden files are rewritten instead.
pub fn check_golden() -> Result<usize, String> {
    let bless = std::env::var_os("LOCALITY_BLESS").is_some();
    let dir = workdir();
    let mut mismatches = Vec::new();
    for case in GOLDEN_CASES {
        let out = locality(dir.path(), case.args);
        let code = out.status.code().unwrap_or(-1);
        if code != case.exit {
            mismatches.push(format!(
                "{}: exit {code}, expected {} ({})",
                case.name,
                case.exit,
                String::from_utf8_lossy(&out.stderr).trim()
            ));
            continue;
        }
        // The same command again must give identical bytes.
        if locality(dir.path(), case.args).stdout != out.stdout {
            mismatches.push(format!("{}: output differs between runs", case.name));
        }
        let mut produced = vec![(format!("{}.json", case.name), out.stdout.clone())];
        for file in case.files {
            let bytes = fs::read(dir.path().join(file)).unwrap_or_default();
            produced.push((format!("{}.{file}", case.name), bytes));
        }
        for (golden_name, bytes) in produced {
            let path = golden_dir().join(&golden_name);
            if bless {
                fs::write(&path, &bytes).unwrap();
            } else if fs::read(&path).ok().as_deref() != Some(&bytes[..]) {
                mismatches.push(format!("{golden_name}: differs from golden file"));
            }
        }
    }
    if mismatches.is_empty() {
        Ok(GOLDEN_CASES.len())
    } else {
        Err(mismatches.join("; "))
    }
}
