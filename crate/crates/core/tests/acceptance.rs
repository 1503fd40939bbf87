//! Acceptance gate: runs all ten reproduction criteria at their stated
//! tolerances, prints one line per criterion, and fails if any fails.

use std::process::ExitCode;
use std::time::Instant;

use nonloc_core::suite::{run_suite, SuiteOptions, CRITERIA};

fn main() -> ExitCode {
    let start = Instant::now();
    let report = run_suite(&SuiteOptions::default());
    println!("acceptance criteria");
    for line in &report.results {
        println!("{line}");
    }
    let passed = report.results.iter().filter(|r| r.passed).count();
    println!("{passed}/{CRITERIA} passed in {:.1} s", start.elapsed().as_secs_f64());
    if report.results.len() == CRITERIA && report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
