use std::process::{Command, Output};

fn looplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_looplab"))
        .args(args)
        .env("LOOPLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn main1_passes_and_fault_fails() {
    let ok = looplab(&[
        "verify",
        "main1",
        "--n",
        "1",
        "--m",
        "2",
        "--max-level",
        "3",
        "--dims-only",
    ]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    let bad = looplab(&[
        "verify",
        "main1",
        "--n",
        "1",
        "--m",
        "2",
        "--max-level",
        "3",
        "--dims-only",
        "--inject-fault",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        looplab(&["compare", "--space", "rp2", "--coeff", "z"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        looplab(&["verify", "main1", "--n", "0", "--m", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(looplab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn ez_is_reproducible_from_the_seed() {
    let args = [
        "verify", "ez", "--n", "2", "--m", "2", "--trials", "20", "--seed", "7", "--format", "json",
    ];
    let mut a = json(&looplab(&args));
    let mut b = json(&looplab(&args));
    a["wall_time_ms"] = 0.into();
    b["wall_time_ms"] = 0.into();
    assert_eq!(a, b);
    assert_eq!(a["failed"], 0);
}

#[test]
fn zero_trials_is_a_vacuous_pass() {
    let out = looplab(&["verify", "ez", "--trials", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["checked"], 0);
    }
}

#[test]
fn compare_and_steenrod_commands() {
    for args in [
        vec![
            "compare",
            "--space",
            "cp2",
            "--coeff",
            "f2",
            "--max-degree",
            "100",
        ],
        vec![
            "compare",
            "--space",
            "cayley",
            "--coeff",
            "z",
            "--max-degree",
            "120",
        ],
        vec!["compare", "--space", "s2", "--coeff", "z"],
        vec!["verify", "steenrod", "--space", "cp3", "--max-degree", "80"],
        vec!["verify", "steenrod", "--space", "cayley"],
    ] {
        let out = looplab(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn report_is_written_to_the_output_file() {
    let dir = std::env::temp_dir().join(format!("looplab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = looplab(&[
        "compare",
        "--space",
        "hp2",
        "--coeff",
        "z",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["command"], "compare z");
    std::fs::remove_dir_all(&dir).unwrap();
}
