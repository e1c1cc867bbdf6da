use std::process::{Command, Output};

fn chipfire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chipfire"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = chipfire(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let text = stdout(&full);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        value.to_string() + "\n",
        text,
        "json re-renders identically"
    );
    value
}

#[test]
fn stable_examples() {
    let v = json(&["stable", "-N", "9", "-k", "3"]);
    assert_eq!(v["layers"], serde_json::json!([3, 2]));
    assert_eq!(v["height"], 2);
    assert_eq!(v["digits"], "12");

    assert_eq!(
        json(&["stable", "-N", "1", "-k", "7"])["layers"],
        serde_json::json!([1])
    );
    assert_eq!(
        json(&["stable", "-N", "15", "-k", "2"])["layers"],
        serde_json::json!([1, 1, 1, 1])
    );
    assert_eq!(
        stdout(&["stable", "-N", "9", "-k", "3", "--format", "csv"]),
        "layer,chips\n1,3\n2,2\n"
    );
}

#[test]
fn fires_examples() {
    let v = json(&["fires", "-N", "9", "-k", "3"]);
    assert_eq!(v["fires"], serde_json::json!([2, 0]));
    assert_eq!(v["F"], 2);

    let v = json(&["fires", "-N", "16", "-k", "2"]);
    assert_eq!(v["f0"], 11);
    assert_eq!(v["F"], 23);

    let v = json(&["fires", "-N", "3", "-k", "3"]);
    assert_eq!(v["fires"], serde_json::json!([0]));
    assert_eq!(v["F"], 0);
}

#[test]
fn fires_engines_agree() {
    let formula = stdout(&["fires", "-N", "777", "-k", "3", "--format", "json"]);
    for engine in ["layers", "nodes"] {
        let out = stdout(&[
            "fires", "-N", "777", "-k", "3", "--engine", engine, "--format", "json",
        ]);
        assert_eq!(out, formula, "{engine}");
    }
    let random = stdout(&[
        "fires",
        "-N",
        "777",
        "-k",
        "3",
        "--engine",
        "nodes",
        "--strategy",
        "random",
        "--seed",
        "9",
        "--format",
        "json",
    ]);
    assert_eq!(random, formula);
}

#[test]
fn fires_exact_for_huge_piles() {
    let pile = "1".repeat(60);
    let v = json(&["fires", "-N", &pile, "-k", "10", "--engine", "layers"]);
    let f = json(&["fires", "-N", &pile, "-k", "10"]);
    assert_eq!(v, f);
    assert_eq!(f["height"], 60);
}

#[test]
fn node_guard_needs_force() {
    let out = chipfire(&["fires", "-N", "100000000", "-k", "2", "--engine", "nodes"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
}

#[test]
fn seq_examples() {
    let d0 = stdout(&["seq", "d0", "-k", "2", "-n", "18", "--format", "bfile"]);
    let values: Vec<&str> = d0.lines().map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(
        values,
        [
            "1", "1", "2", "1", "2", "1", "3", "1", "2", "1", "3", "1", "2", "1", "4", "1", "2",
            "1"
        ]
    );
    assert!(d0.starts_with("1 1\n2 1\n3 2\n"));

    assert_eq!(
        json(&["seq", "a", "-k", "10", "-n", "7"]),
        serde_json::json!([
            [1, 1],
            [2, 12],
            [3, 123],
            [4, 1234],
            [5, 12345],
            [6, 123456],
            [7, 1234567]
        ])
    );

    let csv = stdout(&[
        "seq", "b", "-k", "2", "-n", "3", "--format", "csv", "--header",
    ]);
    assert_eq!(csv, "index,value\n1,1\n2,5\n3,17\n");
}

#[test]
fn seq_start_offsets_indices() {
    assert_eq!(
        stdout(&["seq", "a", "-k", "10", "-n", "2", "--start", "3", "--format", "bfile"]),
        "3 123\n4 1234\n"
    );
}

#[test]
fn unknown_sequence_lists_ids() {
    let out = chipfire(&["seq", "nope", "-k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for id in ["g0", "G", "d0", "D", "a", "b"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn bfile_only_for_sequences() {
    for args in [
        &["stable", "-N", "9", "-k", "3"][..],
        &["fires", "-N", "9", "-k", "3"],
        &["schizo", "-k", "10", "-n", "3", "-p", "5"],
    ] {
        let mut full = args.to_vec();
        full.extend(["--format", "bfile"]);
        assert_eq!(chipfire(&full).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_rejects_empty_ranges() {
    let out = stdout(&["verify", "-k", "2..4", "-N", "500"]);
    assert!(out.starts_with("PASS k=2..4 N=1..500: 1500 cells"), "{out}");

    let v = json(&[
        "verify",
        "-k",
        "2..3",
        "-N",
        "60",
        "--strategies",
        "all",
        "--seeds",
        "3",
    ]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["node_runs_per_cell"], 5);
    assert_eq!(v["mismatch"], serde_json::Value::Null);

    assert_eq!(
        chipfire(&["verify", "-k", "2", "-N", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        chipfire(&["verify", "-k", "4..2", "-N", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        chipfire(&["verify", "-k", "1..3", "-N", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        chipfire(&["verify", "-k", "2", "-N", "5", "--strategies", "dfs"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn schizo_examples() {
    let v = json(&["schizo", "-k", "10", "-n", "11", "-p", "59"]);
    let digits = v["digits"].as_str().unwrap();
    assert!(digits.starts_with("111111.11110505555555539054166665767340972160955659283519805"));
    assert_eq!(digits.len(), "111111.".len() + 59);

    let v = json(&["schizo", "-k", "10", "-n", "11", "-p", "64", "--inverse"]);
    assert_eq!(
        v["digits"],
        "0.0000090000000004905000000400983750036422690628473814118700156165"
    );

    let table = stdout(&["schizo", "-k", "10", "-n", "1", "-p", "5"]);
    assert!(table.contains("sqrt(1) = 1.00000\n"), "{table}");
}

#[test]
fn schizo_blocks_in_csv() {
    let csv = stdout(&[
        "schizo", "-k", "10", "-n", "11", "-p", "59", "--format", "csv",
    ]);
    assert_eq!(csv, "digit,offset,length\n1,0,4\n5,7,8\n6,21,4\n");
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["stable", "-N", "0", "-k", "3"][..],
        &["stable", "-N", "9", "-k", "1"],
        &["stable", "-N", "-4", "-k", "3"],
        &["schizo", "-k", "10", "-n", "0", "-p", "5"],
        &["schizo", "-k", "10", "-n", "3", "-p", "0"],
        &["schizo", "-k", "10", "-n", "3", "-p", "5", "--radix", "40"],
    ] {
        assert_eq!(chipfire(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "fires",
        "-N",
        "500",
        "-k",
        "2",
        "--engine",
        "nodes",
        "--strategy",
        "random",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn seq_reproduces_every_reference_window() {
    for fixture in chipfire::sequences::reference_fixtures() {
        let w = &fixture.window;
        let (k, n, start) = (
            w.id.k.k().to_string(),
            w.values.len().to_string(),
            w.start.to_string(),
        );
        let out = stdout(&[
            "seq",
            w.id.kind.name(),
            "-k",
            &k,
            "-n",
            &n,
            "--start",
            &start,
            "--format",
            "bfile",
        ]);
        let mut expected = Vec::new();
        chipfire::sequences::emit_bfile(w, &mut expected).unwrap();
        assert_eq!(out.as_bytes(), expected, "{} {}", fixture.origin, w.id);
    }
}
