//! Acceptance criteria. Criteria 1 to 9 run in process; criterion 10 runs
//! the `suite` command and checks that it reproduces the same results.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ppcalc::suite::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    // Without the default harness, `--list` has to be answered by hand.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut ok = true;
    let mut details = Vec::new();
    for &(id, _, _) in CRITERIA {
        match run_criterion(id) {
            Ok(o) => {
                println!(
                    "criterion {id}: {} {} ({:.1}s, limit {}s): {}",
                    if o.passed() { "PASS" } else { "FAIL" },
                    o.title,
                    o.elapsed.as_secs_f64(),
                    o.limit.as_secs(),
                    o.detail
                );
                ok &= o.passed();
                details.push(o.detail);
            }
            Err(e) => {
                println!("criterion {id}: FAIL error: {e}");
                ok = false;
            }
        }
    }

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ppcalc")).arg("suite").output().expect("run ppcalc suite");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let same = details.iter().all(|d| stdout.contains(d.as_str()));
    let passed = out.status.success() && same && stdout.contains("suite: PASS") && elapsed < Duration::from_secs(15 * 60);
    println!(
        "criterion 10: {} suite command ({:.1}s, limit 900s): exit {:?}, results identical to the in-process run: {same}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        out.status.code()
    );
    ok &= passed;

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
