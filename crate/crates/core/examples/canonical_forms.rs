//! Canonical relabeling and isomorphism testing.
//!
//! `cargo run --example canonical_forms`

use qml_core::canon::canonical_form;
use qml_core::{are_isomorphic, Quiver};

fn main() {
    let q = Quiver::from_arrows(4, &[(0, 1, 1), (1, 2, 2), (2, 0, 1), (2, 3, 1)]).unwrap();
    let shuffled = q.relabel(&[2, 0, 3, 1]).unwrap();
    let c = canonical_form(&q);
    println!("input      {}", q.to_json());
    println!("shuffled   {}", shuffled.to_json());
    println!("canonical  {}", c.quiver.to_json());
    println!("labeling   {:?}", c.labeling);
    println!("key        {}", c.key.to_hex());
    println!("isomorphic: {}", are_isomorphic(&q, &shuffled));
    println!("isomorphic to opposite: {}", are_isomorphic(&q, &q.opposite()));
    print!("{}", c.quiver.to_dot());
}
