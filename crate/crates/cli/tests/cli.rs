use std::io::Write;
use std::process::{Command, Output, Stdio};

/// Runs `edom` with `args`, feeding `input` on stdin.
fn run(args: &[&str], input: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_edom"));
    cmd.args(args).env_remove("EDOM_WORKERS").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(args: &[&str], input: &str) -> (i32, String, String) {
    let out = run(args, input, &[]);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (c, out, err) = code(args, "");
    assert_eq!(c, 0, "{args:?}: {err}");
    out
}

#[test]
fn gen_counts_and_lines() {
    assert_eq!(ok(&["gen", "6", "--count"]).trim(), "112");
    assert_eq!(ok(&["gen", "7", "-c", "tf", "--count"]).trim(), "59");
    let lines = ok(&["gen", "5"]);
    assert_eq!(lines.lines().count(), 21);
    assert!(lines.lines().all(|l| l.len() == 3 && l.starts_with('D')));
}

#[test]
fn gen_budget_exit_code() {
    assert_eq!(code(&["gen", "11"], "").0, 3);
}

#[test]
fn analyze_emits_records() {
    let (c, out, _) = code(&["analyze"], "DUW\nD~{\n");
    assert_eq!(c, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("graph6:DUW\tn:5\talpha:2\tgamma:2\ttheta:3\tgamma_inf:3\t"));
    assert!(lines[1].contains("gamma_inf:1 (=theta, implied)"));
}

#[test]
fn analyze_rejects_bad_lines() {
    let (c, out, err) = code(&["analyze"], "DUW\nD!W\nDUW\n");
    assert_eq!((c, out.lines().count()), (2, 1));
    assert!(err.contains("line 2"), "{err}");
    let (c, out, _) = code(&["analyze", "--on-error", "skip"], "DUW\nD!W\nDUW\n");
    assert_eq!((c, out.lines().count()), (2, 2));
}

#[test]
fn filter_stream_and_generated() {
    let graphs = ok(&["gen", "7"]);
    let (c, out, report) = code(&["filter", "--chain", "critical,alpha_lt_theta"], &graphs);
    assert_eq!(c, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(report.contains("source\tn\ttotal\tcritical\talpha_lt_theta"));
    assert!(report.contains("stream\t7\t853\t"));

    assert_eq!(ok(&["filter", "--gen", "8", "--chain", "alpha_lt_theta,critical"]).lines().count(), 4);
}

#[test]
fn filter_workers_from_env() {
    let a = run(&["filter", "--gen", "7", "--chain", "alpha_lt_theta"], "", &[("EDOM_WORKERS", "1")]);
    assert!(a.status.success());
    let b = ok(&["filter", "--gen", "7", "--chain", "alpha_lt_theta", "--workers", "2"]);
    assert_eq!(String::from_utf8(a.stdout).unwrap(), b);
    assert_eq!(b.lines().count(), 33);
}

#[test]
fn filter_unknown_predicate() {
    let (c, _, err) = code(&["filter", "--gen", "5", "--chain", "connected,bogus"], "");
    assert_eq!(c, 2);
    assert!(err.contains("bogus"));
}

#[test]
fn table_output_and_skip_code() {
    assert!(ok(&["table", "T6", "--max-n", "10"]).contains("10\t19\t9\t0\tok"));
    let (c, out, _) = code(&["table", "T7", "--max-n", "9"], "");
    assert_eq!(c, 3);
    assert!(out.contains("skipped (needs --large)"));
}

#[test]
fn appendix_checks() {
    assert!(ok(&["appendix", "T9"]).contains("10\t2\t2\t-"));
    let dir = std::env::temp_dir().join(format!("edom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.g6");
    std::fs::write(&bad, "DUW\nD~{\n").unwrap();
    let (c, _, err) = code(&["appendix", "T8", "--file", bad.to_str().unwrap()], "");
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(c, 1);
    assert!(err.contains("line 2: D~{"), "{err}");
}

#[test]
fn construct_kinds() {
    assert_eq!(ok(&["construct", "mycielski", "4"]).trim(), "JkLTAQGK?N_");
    let rec = ok(&["construct", "circulant", "18", "1,3,8", "--record"]);
    assert!(rec.contains("theta:9\tgamma_inf:8\t"));
    let g6 = ok(&["construct", "bowtie-k2", "13", "1,3,4"]);
    assert_eq!(g6.trim().len(), 1 + (26 * 25 / 2usize).div_ceil(6));
    assert_eq!(code(&["construct", "circulant", "5", "x"], "").0, 2);
    assert_eq!(code(&["construct", "mycielski", "7"], "").0, 2);
}

#[test]
fn eternal_trace_is_seeded() {
    let args = ["eternal", "IEhbtj{ro", "--trace", "20", "--seed", "3"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    assert!(a.starts_with("gamma_inf\t3\n"));
    assert_eq!(a.lines().filter(|l| l.starts_with("attack")).count(), 20);
    assert_eq!(code(&["eternal", "bogus!"], "").0, 2);
}
