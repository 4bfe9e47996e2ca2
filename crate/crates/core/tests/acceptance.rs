//! Prints one line per acceptance criterion.
//!
//! Criterion 9 stays red at d = 3 (see `suite::EXPECTED_RED`); the target fails if
//! anything else is red, or if that check turns green.

use morava_core::suite::{run_acceptance, unexpected, SuiteOptions};

fn main() {
    let results = run_acceptance(&SuiteOptions::default());
    for r in &results {
        println!("{}", r.line());
    }
    let passed = results.iter().filter(|r| r.pass()).count();
    println!("{passed}/{} criteria pass", results.len());
    let bad = unexpected(&results);
    if !bad.is_empty() {
        for u in &bad {
            eprintln!("unexpected: {u}");
        }
        std::process::exit(1);
    }
}
