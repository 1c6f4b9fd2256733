//! Runs a seeded verification suite and prints a summary of the report.

use hcalc::verify::{run_suite, Config};

fn main() {
    let suite = std::env::args().nth(1).unwrap_or_else(|| "crossed".into());
    let report = run_suite(&suite, 42, &Config::default()).expect("known suite");
    for p in &report.properties {
        println!(
            "{:<28} {:>4} cases  {} failures",
            p.property,
            p.cases,
            p.failures.len()
        );
    }
    println!("{} cases in {} ms", report.cases_run, report.wall_time_ms);
}
