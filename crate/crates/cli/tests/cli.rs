use std::io::Write;
use std::process::{Command, Output, Stdio};

use qml_core::{are_isomorphic, Quiver, Triangulation};
use serde_json::Value;

fn qml(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qml"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qml");
    if let Some(input) = stdin {
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let out = qml(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn markov() -> Quiver {
    Quiver::from_arrows(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]).unwrap()
}

#[test]
fn x7_class_has_two_members() {
    let q = ok(&["gen", "exceptional:X7"], None);
    let report: Value = serde_json::from_str(&ok(&["class", "-"], Some(&q))).unwrap();
    assert_eq!(report["format"], "classreport-v1");
    assert_eq!(report["class_count"], 2);
}

#[test]
fn markov_mutation_stays_markov() {
    let q = ok(&["gen", "qg0", "--g", "1"], None);
    let m = Quiver::from_json(&ok(&["mutate", "-", "--at", "0"], Some(&q))).unwrap();
    assert!(are_isomorphic(&m, &markov()));
    assert_eq!(Quiver::from_json(&ok(&["gen", "markov"], None)).unwrap(), markov());
}

#[test]
fn path_mutation_gives_oriented_triangle() {
    let q = ok(&["gen", "an", "--n", "3"], None);
    let m = Quiver::from_json(&ok(&["mutate", "-", "--at", "1"], Some(&q))).unwrap();
    assert_eq!(m.arrow_count(), 3);
    assert!((0..3).all(|v| m.degrees(v).unwrap() == qml_core::DegreePair::new(1, 1)));
}

#[test]
fn double_mutation_round_trips_bytes() {
    let q = ok(&["gen", "exceptional:E7"], None);
    assert_eq!(ok(&["mutate", "-", "--at", "3", "--at", "3"], Some(&q)), q);
    assert_eq!(ok(&["mutate", "-", "--seq", "1,2,2,1"], Some(&q)), q);
}

#[test]
fn dot_output() {
    let dot = ok(&["--dot", "gen", "markov"], None);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 6);
}

#[test]
fn walk_and_triangulation_pipeline() {
    let q = ok(&["gen", "qgb", "--g", "1", "--b", "1"], None);
    let w: Value = serde_json::from_str(&ok(&["walk", "-", "--steps", "500", "--seed", "3"], Some(&q))).unwrap();
    assert_eq!((w["arrow_count_min"].as_u64(), w["arrow_count_max"].as_u64()), (Some(7), Some(7)));

    let t = ok(&["tri", "gen", "polygon", "--m", "5"], None);
    let cases: Value = serde_json::from_str(&ok(&["tri", "classify", "-"], Some(&t))).unwrap();
    assert_eq!(cases["arcs"][0]["case"], "1");
    let flipped = ok(&["tri", "flip", "-", "--arc", "0"], Some(&t));
    let back = Triangulation::from_json(&ok(&["tri", "flip", "-", "--arc", "0"], Some(&flipped))).unwrap();
    assert_eq!(back.triangle_multiset(), Triangulation::from_json(&t).unwrap().triangle_multiset());
    let added = qml(&["tri", "addp", "-", "--arc", "0"], Some(&t));
    assert!(added.status.success());
    assert!(String::from_utf8_lossy(&added.stderr).contains("distinguished arc 7"));
    let q = Quiver::from_json(&ok(&["tri", "quiver", "-"], Some(&String::from_utf8(added.stdout).unwrap()))).unwrap();
    assert_eq!(q.n(), 5);
    assert!(ok(&["tri", "addb", "-"], Some(&t)).contains("tri-v1"));
}

#[test]
fn verify_selected_claims() {
    let report: Value = serde_json::from_str(&ok(&["verify", "--claims", "corollary,exceptional"], None)).unwrap();
    assert_eq!(report["format"], "verify-report-v1");
    assert_eq!(report["failed"], 0);
    assert_eq!(report["claims"].as_array().unwrap().len(), 12);
}

#[test]
fn exit_codes() {
    assert_eq!(qml(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(qml(&["mutate", "-"], Some("{}")).status.code(), Some(1));
    let q = ok(&["gen", "markov"], None);
    assert_eq!(qml(&["mutate", "-", "--at", "7"], Some(&q)).status.code(), Some(1));
    assert_eq!(qml(&["gen", "qg0"], None).status.code(), Some(1));
    assert_eq!(qml(&["verify", "--claims", "nope"], None).status.code(), Some(1));
    assert_eq!(qml(&["tri", "flip", "-", "--arc", "1"], Some("not json")).status.code(), Some(1));
}
