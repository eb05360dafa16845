//! Adding a puncture or a boundary marked point creates an arc of degrees
//! (1,1), so the new class has two different arrow counts.
//!
//! `cargo run --example lemma_constructions`

use qml_core::generators::{polygon_fan_triangulation, qg0_triangulation};
use qml_core::Triangulation;

fn report(label: &str, t: &Triangulation, arc: usize) {
    let q = t.quiver().unwrap();
    let v = t.arc_vertex(arc).unwrap();
    println!(
        "{label}: surface {:?}, {} arcs; arc {arc} has degrees {}; arrows {} -> {} after mutating there",
        t.surface(),
        t.arcs().len(),
        q.degrees(v).unwrap(),
        q.arrow_count(),
        q.mutate(v).unwrap().arrow_count()
    );
}

fn main() {
    let pentagon = polygon_fan_triangulation(5).unwrap();
    let (punctured, arc) = pentagon.add_puncture_on_arc(0).unwrap();
    report("pentagon + puncture", &punctured, arc);

    let tri = pentagon.has_spade_triangle().expect("fan has a triangle with one boundary side");
    let (grown, arc) = pentagon.add_boundary_marked_point(tri).unwrap();
    report("pentagon + boundary point", &grown, arc);
    println!("  still has a triangle with one boundary side: {:?}", grown.has_spade_triangle());

    // both endpoints of every torus arc are the single puncture
    let (twice, arc) = qg0_triangulation(1).unwrap().add_puncture_on_arc(2).unwrap();
    report("torus + puncture", &twice, arc);
}
