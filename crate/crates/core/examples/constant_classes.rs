//! Classes with a constant number of arrows: representatives, their counts,
//! and which vertex counts admit one.
//!
//! `cargo run --example constant_classes`

use qml_core::class::random_mutation_walk;
use qml_core::generators::{exists_constant_class, expected_counts, qg0_quiver, qgb_quiver};

fn main() {
    let sigs = [(1, 0), (2, 0), (3, 0), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2), (2, 1), (3, 2)];
    for (g, b) in sigs {
        let q = if b == 0 { qg0_quiver(g) } else { qgb_quiver(g, b) }.unwrap();
        let w = random_mutation_walk(&q, 10_000, 7).unwrap();
        println!(
            "(g,b)=({g},{b}): {} vertices, {} arrows (expected {:?}); walk range {}..={}",
            q.n(),
            q.arrow_count(),
            expected_counts(g, b),
            w.arrow_count_min,
            w.arrow_count_max
        );
    }
    let line: Vec<String> = (1..=30)
        .map(|n| match exists_constant_class(n) {
            (true, Some(w)) => format!("{n}:{w}"),
            _ => format!("{n}:-"),
        })
        .collect();
    println!("{}", line.join(" "));
}
