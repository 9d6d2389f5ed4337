//! Acceptance suite: every criterion, one line each, non-zero exit on any
//! failure. Criterion 13 also runs the binary and compares its bytes.

use std::process::{Command, ExitCode};

use centered_gamma::verify::{run_criterion, VerifyOptions, CRITERIA};

fn verify_all_json(threads: usize) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_centered-gamma"))
        .args(["verify-all", "--json", "--threads", &threads.to_string()])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "verify-all failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let mut r = run_criterion(id, &opts).expect("criterion id is valid");
        if id == CRITERIA {
            let (a, b, c) = (verify_all_json(1), verify_all_json(1), verify_all_json(4));
            let same = a == b && b == c;
            r.passed &= same;
            r.summary.push_str(&format!("; binary output identical across runs and 1 vs 4 threads: {same}"));
        }
        let mark = if r.passed { "PASS" } else { "FAIL" };
        println!("acceptance {:>2} [{mark}] {}: {}", r.id, r.name, r.summary);
        if !r.passed {
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {CRITERIA} criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
