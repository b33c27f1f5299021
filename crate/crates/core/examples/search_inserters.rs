//! Bounded search for inserters of structure categories whose canonical
//! embedding is not iso-full.
//!
//! `cargo run --release --example search_inserters -- 500 10`

use std::time::Duration;

use pie_workbench::harness::search29;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let secs: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let r = search29::run(n, 0, Some(Duration::from_secs(secs)));
    println!(
        "{} instances in {} ms, {} candidates, {} skipped{}",
        r.attempted,
        r.wall_time_ms,
        r.failed,
        r.skipped,
        if r.complete { "" } else { " (budget exhausted)" }
    );
    let mut kinds = std::collections::BTreeMap::new();
    for c in r.failures() {
        *kinds.entry(c.kind.as_str()).or_insert(0) += 1;
    }
    println!("candidates by functor kind: {kinds:?}");
    if let Some(first) = r.failures().next() {
        println!("first candidate, instance {}:", first.index);
        for c in &first.checks {
            println!("  {c}");
        }
    }
    println!("{}", search29::CAVEAT);
}
