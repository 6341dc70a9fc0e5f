use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TWO_TRIANGLES: &str = "#nodes 6\n0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n";

fn sgforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgforge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_at_full_rank_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.el"), TWO_TRIANGLES).unwrap();
    let out = sgforge(
        &[
            "generate", "--input", "g.el", "--alpha", "1.0", "--rule", "truncate", "--seed", "7",
        ],
        dir.path(),
    );
    assert_eq!(ok(&out), TWO_TRIANGLES);
}

#[test]
fn generate_writes_into_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.el"), TWO_TRIANGLES).unwrap();
    let out = sgforge(
        &["generate", "--input", "g.el", "--alpha", "0.5", "--output-dir", "res"],
        dir.path(),
    );
    ok(&out);
    let text = fs::read_to_string(dir.path().join("res/generated.el")).unwrap();
    assert!(text.starts_with("#nodes 6\n"));
}

#[test]
fn eval_and_attack_on_identical_graphs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.el"), TWO_TRIANGLES).unwrap();
    fs::write(
        dir.path().join("attrs.csv"),
        "node,side\n0,a\n1,a\n2,a\n3,b\n4,b\n5,b\n",
    )
    .unwrap();
    let metrics = ok(&sgforge(
        &[
            "eval",
            "--input",
            "g.el",
            "--compare-to",
            "g.el",
            "--attrs",
            "attrs.csv",
        ],
        dir.path(),
    ));
    assert_eq!(
        metrics,
        "metric,value\nmodularity_ratio,1\npartition_number_ratio,1\nclustering_ratio,1\ndegree_correlation,1\nattr:side,1\n"
    );
    let attack = ok(&sgforge(
        &[
            "attack",
            "--input",
            "g.el",
            "--compare-to",
            "g.el",
            "--seed-fraction",
            "1",
        ],
        dir.path(),
    ));
    assert_eq!(attack, "identification_rate,random_guess_rate,seed_nodes\n1,1,6\n");
}

#[test]
fn bench_emits_one_block_per_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&sgforge(
        &[
            "bench",
            "--preset",
            "girvan",
            "--graphs",
            "2",
            "--strategies",
            "sgf:0.9,dcsbm",
            "--runs",
            "2",
        ],
        dir.path(),
    ));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("strategy,dataset,metric,mean,std,ci99,runs"));
    let strategies: std::collections::BTreeSet<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(strategies.into_iter().collect::<Vec<_>>(), ["dcsbm", "sgf:0.9"]);
}

#[test]
fn sweep_entropy_decreases_with_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&sgforge(
        &[
            "sweep",
            "--preset",
            "planted",
            "--nodes",
            "120",
            "--communities",
            "4",
            "--p-in",
            "0.2",
            "--p-out",
            "0.02",
            "--alphas",
            "0.1:1.0:0.1",
            "--runs",
            "2",
            "--seed",
            "3",
        ],
        dir.path(),
    ));
    let rows: Vec<Vec<String>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    let entropy: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(entropy[9], 0.0);
    let rising = entropy.windows(2).filter(|w| w[1] > w[0]).count();
    assert!(rising <= 1, "entropy {entropy:?}");
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.el"), TWO_TRIANGLES).unwrap();
    fs::write(
        dir.path().join("ok.toml"),
        "seed = 4\n[sgf]\nalpha = 1.0\nrule = \"truncate\"\n",
    )
    .unwrap();
    assert_eq!(
        ok(&sgforge(
            &["generate", "--config", "ok.toml", "--input", "g.el"],
            dir.path()
        )),
        TWO_TRIANGLES
    );

    fs::write(dir.path().join("bad.toml"), "[sgf]\nalpha = 1.0\nspeed = 3\n").unwrap();
    let out = sgforge(&["generate", "--config", "bad.toml", "--input", "g.el"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field `speed`"));
}

#[test]
fn errors_are_reported_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("loop.el"), "0 1\n2 2\n").unwrap();
    let cases: [&[&str]; 4] = [
        &["generate", "--input", "missing.el"],
        &["generate", "--input", "loop.el"],
        &["bench", "--preset", "nowhere"],
        &["sweep", "--input", "loop.el", "--alphas", "0.5:0.1:0.1"],
    ];
    for args in cases {
        let out = sgforge(args, dir.path());
        assert!(!out.status.success(), "{args:?} should fail");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("error: "), "{args:?}: {err}");
    }
    let err = String::from_utf8_lossy(&sgforge(&["generate", "--input", "loop.el"], dir.path()).stderr).into_owned();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn repeated_runs_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bench",
        "--preset",
        "girvan",
        "--graphs",
        "2",
        "--strategies",
        "sgf:0.5,trajanovski",
        "--runs",
        "3",
        "--seed",
        "9",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_sgforge"))
        .args(args)
        .env("SGF_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_sgforge"))
        .args(args)
        .env("SGF_THREADS", "4")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(ok(&one), ok(&many));
}
