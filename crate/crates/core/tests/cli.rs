//! End-to-end CLI tests: every command path, exit statuses, artifact schemas
//! and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_higgsmorse"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("higgsmorse-e2e-{}-{name}", std::process::id()))
}

#[test]
fn census_maximal_totals_48() {
    let out = run(&[
        "census", "--group", "sp(2n,R)", "--n", "3", "--genus", "2", "--toledo", "max",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("group,g,d,label,count,provenance\n"));
    assert!(text.contains("TOTAL,48"));
}

#[test]
fn census_sp4_and_nonmaximal() {
    let out = run(&[
        "census", "--group", "sp(4,R)", "--genus", "2", "--toledo", "max",
    ]);
    assert!(stdout(&out).contains("TOTAL,48"));
    let out = run(&[
        "census", "--group", "sp(4,R)", "--genus", "2", "--toledo", "1",
    ]);
    assert!(stdout(&out).contains("TOTAL,1"));
    let out = run(&[
        "census", "--group", "sp(2n,R)", "--n", "3", "--genus", "2", "--toledo", "1",
    ]);
    assert!(stdout(&out).contains("TOTAL,UNKNOWN"));
    assert!(stdout(&out).contains("conjectured 1"));
}

#[test]
fn enumerate_gl2_records_and_formats() {
    let out = run(&[
        "enumerate",
        "--group",
        "gl(2)",
        "--genus",
        "2",
        "--degree",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2); // N0 plus the single admissible ell
    assert!(text.contains("class=N0_moduli_of_bundles"));
    assert!(text.contains("class=gl2_hodge"));

    let out = run(&[
        "enumerate",
        "--group",
        "gl(3)",
        "--genus",
        "2",
        "--degree",
        "1",
        "--format",
        "json-lines",
    ]);
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json line");
        assert!(v.get("class").is_some());
        assert!(v.get("summands").is_some());
    }

    let out = run(&[
        "enumerate",
        "--group",
        "sp(2n,R)",
        "--n",
        "3",
        "--genus",
        "2",
        "--toledo",
        "-max",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("group,class,label,mult,phi_zero,total_degree,summands,routes\n"));
    assert!(text.contains("isolated_hodge_point"));
    assert!(text.contains(",16,")); // 2^{2g} discrete labels at g=2
}

#[test]
fn validation_errors_exit_2() {
    let out = run(&[
        "enumerate",
        "--group",
        "gl(2)",
        "--genus",
        "2",
        "--degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error code=2 message="));

    let out = run(&[
        "enumerate",
        "--group",
        "so(5)",
        "--genus",
        "2",
        "--degree",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "census", "--group", "sp(2n,R)", "--n", "3", "--genus", "1", "--toledo", "max",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["dwww", "--genus", "2", "--ell", "-5", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "flow", "--size", "8", "--rank", "1", "--seed", "1", "--tol", "-3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "enumerate",
        "--group",
        "gl(2)",
        "--genus",
        "2",
        "--degree",
        "1",
        "--format",
        "yaml",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn index_and_assemble() {
    let out = run(&["index", "--group", "gl(2)", "--genus", "2", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("morse_index=0 minimum=true"));
    assert!(text.contains("morse_index=4 minimum=false"));

    let out = run(&[
        "assemble", "--group", "gl(2)", "--genus", "2", "--degree", "1", "--n0", "1 + 2*t",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // N0 term plus t^4 * P(S^1 X x Jac): (1+4t+t^2)(1+t)^4 shifted by t^4
    assert!(text.contains("assembled"), "{text}");
    assert!(text.contains("term index=4"));
}

#[test]
fn dwww_artifact_schema() {
    let out = run(&[
        "dwww", "--genus", "2", "--ell", "1", "--degree", "1", "--trunc", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("first ")));
    assert!(text.lines().any(|l| l.starts_with("second ")));
    assert!(text.lines().any(|l| l.starts_with("difference ")));
    assert!(text.contains("shift 2"));
    assert!(text.contains("1*t^2 + 8*t^3 + 30*t^4"));
}

#[test]
fn flow_trace_schema_monotone_and_deterministic() {
    let out_path = tmp("trace-a.csv");
    let args = [
        "flow",
        "--size",
        "8",
        "--rank",
        "1",
        "--seed",
        "7",
        "--tol",
        "1e-5",
        "--max-steps",
        "4000",
        "--out",
        out_path.to_str().unwrap(),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("time,energy,gradient_norm,step\n"));
    let energies: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .collect();
    assert!(energies.len() >= 2);
    for w in energies.windows(2) {
        assert!(w[1] <= w[0], "energy column must be non-increasing");
    }
    // identical config + seed => bit-identical artifact
    let out_path_b = tmp("trace-b.csv");
    let mut args_b: Vec<&str> = args.to_vec();
    let pos = args_b.len() - 1;
    args_b[pos] = out_path_b.to_str().unwrap();
    let out = run(&args_b);
    assert_eq!(out.status.code(), Some(0));
    let text_b = std::fs::read_to_string(&out_path_b).unwrap();
    assert_eq!(text, text_b);
    std::fs::remove_file(out_path).ok();
    std::fs::remove_file(out_path_b).ok();
}

#[test]
fn flow_numerical_failure_exits_3() {
    // an unattainable tolerance drives the backtracking to underflow once the
    // objective reaches its floating-point floor
    let out = run(&[
        "flow",
        "--size",
        "6",
        "--rank",
        "1",
        "--seed",
        "3",
        "--tol",
        "1e-300",
        "--max-steps",
        "200000",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{:?}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.starts_with("error code=3"));
}

#[test]
fn flow_accepts_real_form_tags() {
    let out = run(&[
        "flow",
        "--group",
        "sl(2,R)",
        "--size",
        "6",
        "--rank",
        "2",
        "--seed",
        "2",
        "--tol",
        "1e-4",
        "--max-steps",
        "3000",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{:?}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).starts_with("time,energy,gradient_norm,step\n"));
}

#[test]
fn assemble_rejects_bad_n0_polynomial() {
    let out = run(&[
        "assemble", "--group", "gl(2)", "--genus", "2", "--degree", "1", "--n0", "1 + t^^2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_command_passes() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("hitchin_base_dim: ok"));
    assert!(text.contains("milnor_wood symmetry: ok"));
    assert!(text.contains("census breakdown sums: ok"));
}

#[test]
fn config_file_with_flag_override() {
    let cfg_path = tmp("census.cfg");
    std::fs::write(
        &cfg_path,
        "command = census\n[census]\ngroup = sp(2n,R)\nn = 3\ngenus = 2\ntoledo = max\n",
    )
    .unwrap();
    let out = run(&["census", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("TOTAL,48"));
    // flag overrides the file: n = 4 gives 3*2^{2g} = 48 still, genus=3 gives 192
    let out = run(&[
        "census",
        "--config",
        cfg_path.to_str().unwrap(),
        "--genus",
        "3",
        "--n",
        "4",
    ]);
    assert!(stdout(&out).contains("TOTAL,192"));
    std::fs::remove_file(cfg_path).ok();
}
