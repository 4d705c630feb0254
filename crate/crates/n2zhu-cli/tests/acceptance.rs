//! Acceptance criteria 1-8, one line per criterion.

use n2zhu_cli::reproduce;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=8u8 {
        let t = Instant::now();
        let r = reproduce::run(id);
        let secs = t.elapsed().as_secs_f64();
        println!("criterion {id} {}: {} ({secs:.1} s)", r.name, if r.passed { "PASS" } else { "FAIL" });
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("    failed: {}", c.what);
        }
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
