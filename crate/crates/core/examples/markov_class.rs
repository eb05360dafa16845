//! Enumerates small mutation classes up to isomorphism.
//!
//! `cargo run --example markov_class`

use qml_core::class::{enumerate_class_default, is_closed};
use qml_core::generators::{a_n_quiver, markov_quiver};
use qml_core::Quiver;

fn show(name: &str, q: &Quiver) {
    let r = enumerate_class_default(q).expect("valid budget");
    println!(
        "{name:<12} {:?}: {} classes, arrow counts {:?}, closed under mutation: {}",
        r.verdict,
        r.class_count(),
        r.arrow_count_set(),
        is_closed(&r).expect("mutations stay in range"),
    );
}

fn main() {
    show("Markov", &markov_quiver());
    for n in 2..=5 {
        show(&format!("A_{n}"), &a_n_quiver(n).unwrap());
    }
    // a triple arrow inside a triangle has an infinite class
    let wild = Quiver::from_arrows(3, &[(0, 1, 3), (1, 2, 1), (2, 0, 1)]).unwrap();
    show("wild", &wild);
}
