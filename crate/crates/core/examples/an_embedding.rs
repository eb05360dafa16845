//! Longest oriented path appearing as a full subquiver of the closed
//! genus-g quiver, and a sampled search for a longer one in its class.
//!
//! `cargo run --release --example an_embedding`

use qml_core::canon::find_full_subquiver;
use qml_core::generators::{a_n_quiver, qg0_quiver};
use qml_core::verify::verify_an_embedding;

fn main() {
    for g in 1..=3 {
        let q = qg0_quiver(g).unwrap();
        let path = a_n_quiver(4 * g - 3).unwrap();
        println!("g={g}: A_{} sits on vertices {:?}", 4 * g - 3, find_full_subquiver(&path, &q).unwrap());
        println!("      {}", verify_an_embedding(g, 1).detail);
    }
}
