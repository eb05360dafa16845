use proptest::prelude::*;
use qml_core::generators::{polygon_fan_triangulation, qg0_triangulation, qgb_triangulation};
use qml_core::{are_isomorphic, canonical_key, DegreePair, Quiver, Triangulation};

fn quiver(max_n: usize, max_entry: i64) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(-max_entry..=max_entry, n * (n - 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().unwrap();
                    rows[i][j] = v;
                    rows[j][i] = -v;
                }
            }
            Quiver::from_matrix(&rows).unwrap()
        })
    })
}

fn with_perm(max_n: usize, max_entry: i64) -> impl Strategy<Value = (Quiver, Vec<usize>)> {
    quiver(max_n, max_entry).prop_flat_map(|q| {
        let n = q.n();
        (Just(q), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut p2 = p.clone();
            p2.insert(pos, n - 1);
            out.push(p2);
        }
    }
    out
}

fn brute_isomorphic(a: &Quiver, b: &Quiver) -> bool {
    a.n() == b.n() && permutations(a.n()).iter().any(|p| a.relabel(p).unwrap() == *b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mutation_is_an_involution(q in quiver(7, 3), k in 0usize..7) {
        let k = k % q.n();
        prop_assert_eq!(q.mutate(k).unwrap().mutate(k).unwrap(), q);
    }

    #[test]
    fn mutation_keeps_skew_symmetry(q in quiver(7, 3), k in 0usize..7) {
        let m = q.mutate(k % q.n()).unwrap();
        for i in 0..m.n() {
            prop_assert_eq!(m.get(i, i), 0);
            for j in 0..m.n() {
                prop_assert_eq!(m.get(i, j), -m.get(j, i));
            }
        }
    }

    #[test]
    fn relabeling_commutes_with_mutation((q, p) in with_perm(7, 3), k in 0usize..7) {
        let k = k % q.n();
        let lhs = q.relabel(&p).unwrap().mutate(p[k]).unwrap();
        let rhs = q.mutate(k).unwrap().relabel(&p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_key_is_a_relabeling_invariant((q, p) in with_perm(9, 3)) {
        prop_assert_eq!(canonical_key(&q), canonical_key(&q.relabel(&p).unwrap()));
    }

    #[test]
    fn canonical_key_matches_brute_force(a in quiver(6, 2), b in quiver(6, 2)) {
        prop_assert_eq!(canonical_key(&a) == canonical_key(&b), brute_isomorphic(&a, &b));
        prop_assert_eq!(are_isomorphic(&a, &b), brute_isomorphic(&a, &b));
    }

    #[test]
    fn sinks_and_sources_keep_the_arrow_count(q in quiver(7, 3)) {
        for v in 0..q.n() {
            let d = q.degrees(v).unwrap();
            if d.in_degree == 0 || d.out_degree == 0 {
                prop_assert_eq!(q.mutate(v).unwrap().arrow_count(), q.arrow_count());
            }
        }
    }

    #[test]
    fn one_one_vertices_change_the_count_by_one(q in quiver(7, 2)) {
        for v in 0..q.n() {
            if q.degrees(v).unwrap() == DegreePair::new(1, 1) {
                let after = q.mutate(v).unwrap().arrow_count();
                prop_assert_eq!(after.abs_diff(q.arrow_count()), 1);
            }
        }
    }

    #[test]
    fn json_round_trip(q in quiver(8, 4)) {
        prop_assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn flips_are_involutions_and_track_mutation(
        which in 0usize..4,
        path in proptest::collection::vec(0usize..64, 0..12),
    ) {
        let mut t: Triangulation = match which {
            0 => polygon_fan_triangulation(9).unwrap(),
            1 => qg0_triangulation(2).unwrap(),
            2 => qgb_triangulation(1, 2).unwrap(),
            _ => qgb_triangulation(0, 3).unwrap(),
        };
        for step in path {
            let arcs = t.arcs();
            let k = arcs[step % arcs.len()];
            let Ok(f) = t.flip(k) else { continue };
            prop_assert_eq!(f.flip(k).unwrap().triangle_multiset(), t.triangle_multiset());
            let v = t.arc_vertex(k).unwrap();
            prop_assert_eq!(f.quiver().unwrap(), t.quiver().unwrap().mutate(v).unwrap());
            prop_assert!(Triangulation::from_json(&f.to_json()).unwrap() == f);
            t = f;
        }
    }
}
