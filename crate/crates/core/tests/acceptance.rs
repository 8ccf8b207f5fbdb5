//! One line per criterion; exits non-zero if any fails or the suite is slow.

use std::process::ExitCode;
use std::time::Instant;

use multres::selftest::{run_criterion, Catalog, DEFAULT_SEED};

const TIME_LIMIT_SECS: f64 = 60.0;

fn main() -> ExitCode {
    let catalog = Catalog::builtin();
    let start = Instant::now();
    let mut failed = Vec::new();
    for id in 1..=10 {
        let c = run_criterion(id, DEFAULT_SEED, &catalog).expect("ten criteria");
        println!("{}", c.line());
        if !c.passed {
            failed.push(c.id);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let in_time = elapsed < TIME_LIMIT_SECS;
    println!("[{}] time: {elapsed:.1}s (limit {TIME_LIMIT_SECS}s)", if in_time { "PASS" } else { "FAIL" });
    if failed.is_empty() && in_time {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
