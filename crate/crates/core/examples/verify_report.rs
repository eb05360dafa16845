//! Runs every claim family and prints the JSON report.
//!
//! `cargo run --release --example verify_report -- [seed]`

use qml_core::verify::{report_json, run_all};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let results = run_all(&[], seed).expect("all families are known");
    for r in &results {
        eprintln!("{:?}\t{}\t{}", r.status, r.claim_id, r.detail);
    }
    println!("{}", serde_json::to_string_pretty(&report_json(&results, seed)).expect("serializable"));
}
