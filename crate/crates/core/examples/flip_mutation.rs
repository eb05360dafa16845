//! Flipping an arc of a triangulation mutates its quiver at that arc.
//!
//! `cargo run --example flip_mutation`

use qml_core::generators::{polygon_fan_triangulation, qg0_triangulation, qgb_triangulation};
use qml_core::verify::verify_flip_mutation;

fn main() {
    let t = qg0_triangulation(2).unwrap();
    let q = t.quiver().unwrap();
    println!("genus-2 triangulation: {} arcs, quiver with {} arrows", t.arcs().len(), q.arrow_count());
    for k in t.arcs() {
        let f = t.flip(k).unwrap();
        let same = f.quiver().unwrap() == q.mutate(t.arc_vertex(k).unwrap()).unwrap();
        println!("  flip arc {k}: triangles {:?} -> matches mutation: {same}", f.triangles());
    }
    for (label, t) in [
        ("octagon", polygon_fan_triangulation(8).unwrap()),
        ("annulus", qgb_triangulation(0, 2).unwrap()),
        ("torus with hole", qgb_triangulation(1, 1).unwrap()),
    ] {
        println!("{label:<16} {}", verify_flip_mutation(&t).detail);
    }
}
