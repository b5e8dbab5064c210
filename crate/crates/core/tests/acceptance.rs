//! Runs every acceptance criterion and prints one line per criterion.
//! Built without the libtest harness so the table is always shown.

use std::process::ExitCode;
use std::time::Instant;

use mcg_core::acceptance::{run, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let o = run(id).expect("known criterion");
        let elapsed = start.elapsed();
        let ok = o.passed && elapsed <= o.budget;
        println!(
            "[{}] criterion {id} {}: {} ({:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            o.name,
            o.detail,
            elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
        if !ok {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
