//! Run every closure suite on a few seeded instances and summarize.
//!
//! `cargo run --release --example closure_suites -- 40 7`

use pie_workbench::harness::{run_suite, Suite};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    for suite in Suite::ALL {
        let r = run_suite(suite, n, seed);
        println!(
            "{:<9} attempted {:>4}  passed {:>4}  failed {:>4}  skipped {:>4}  {:>6} ms",
            suite.name(),
            r.attempted,
            r.passed,
            r.failed,
            r.skipped,
            r.wall_time_ms
        );
        for (check, count) in r.failing_checks() {
            println!("          {count} instance(s) fail `{check}`");
        }
    }
}
