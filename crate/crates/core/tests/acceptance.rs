//! Runs with its own harness so the criterion lines are never captured.

use std::process::ExitCode;

use fcell_core::selftest::{run_criterion, DEFAULT_SEED};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=10 {
        let r = run_criterion(id, DEFAULT_SEED);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    println!("acceptance: {}/10 criteria passed", 10 - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
