//! Neighborhood case of every arc, next to its degrees and whether mutation
//! there changes the number of arrows.
//!
//! `cargo run --example neighborhood_cases`

use qml_core::generators::{polygon_fan_triangulation, qg0_triangulation, qgb_triangulation};
use qml_core::Triangulation;

fn table(label: &str, t: &Triangulation) {
    let q = t.quiver().unwrap();
    println!("{label}");
    for k in t.arcs() {
        let v = t.arc_vertex(k).unwrap();
        let delta = q.mutate(v).unwrap().arrow_count() as i64 - q.arrow_count() as i64;
        println!(
            "  arc {k:<2} case {:<3} degrees {} arrow change {delta:+}",
            t.classify_arc(k).unwrap().as_str(),
            q.degrees(v).unwrap()
        );
    }
}

fn main() {
    table("hexagon fan", &polygon_fan_triangulation(6).unwrap());
    table("three-holed sphere", &qgb_triangulation(0, 3).unwrap());
    table("punctured torus", &qg0_triangulation(1).unwrap());
    table("punctured genus 2", &qg0_triangulation(2).unwrap());
}
