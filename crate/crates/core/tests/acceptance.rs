//! Runs the ten criteria of the small battery and prints one line each.

use eqalg::cli::DEFAULT_SEED;
use eqalg::verify::{run_criterion, Battery};
use eqalg::Caps;

fn main() {
    // `cargo test -- <filter>` passes a filter; only criterion numbers are honored
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for i in 1..=10 {
        if !only.is_empty() && !only.contains(&i) {
            continue;
        }
        let outcome = run_criterion(i, Battery::Small, &Caps::default(), DEFAULT_SEED);
        println!("{}", outcome.line());
        if !outcome.passed {
            failed.push(i);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
