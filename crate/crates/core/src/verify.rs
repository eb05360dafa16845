//! Executable checks of the structural claims, each yielding a [`ClaimResult`].

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::canon::{embeds_as_full_subquiver, find_full_subquiver};
use crate::class::{enumerate_class_default, random_mutation_walk, walk_samples, Verdict};
use crate::generators::{
    a_n_quiver, exceptional_quiver, exists_constant_class, expected_counts, polygon_fan_triangulation, qg0_quiver,
    qg0_triangulation, qgb_quiver, qgb_triangulation, ExceptionalName,
};
use crate::quiver::{DegreePair, Quiver};
use crate::surface::{CaseLabel, SurfaceError, Triangulation};

pub const VERIFY_REPORT_FORMAT: &str = "verify-report-v1";
/// Walk samples inspected for the "only if" half of the path-embedding claim.
pub const AN_SAMPLES: usize = 100;
const AN_STRIDE: u64 = 17;
/// Classes on at most this many vertices are enumerated in full.
const BFS_VERTEX_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("degree criterion is only checked on unpunctured or closed once-punctured surfaces")]
    UnsupportedSurface,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim_id: String,
    pub status: ClaimStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
}

impl ClaimResult {
    pub fn pass(claim_id: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { claim_id: claim_id.into(), status: ClaimStatus::Pass, detail: detail.into(), counterexample: None }
    }

    pub fn fail(claim_id: impl Into<String>, detail: impl Into<String>, counterexample: Value) -> Self {
        Self {
            claim_id: claim_id.into(),
            status: ClaimStatus::Fail,
            detail: detail.into(),
            counterexample: Some(counterexample),
        }
    }

    pub fn skipped(claim_id: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { claim_id: claim_id.into(), status: ClaimStatus::Skipped, detail: detail.into(), counterexample: None }
    }

    pub fn is_pass(&self) -> bool {
        self.status == ClaimStatus::Pass
    }

    fn error(claim_id: impl Into<String>, e: impl std::fmt::Display) -> Self {
        let msg = e.to_string();
        Self::fail(claim_id, msg.clone(), json!({ "error": msg }))
    }
}

fn tri_value(t: &Triangulation) -> Value {
    serde_json::to_value(t).expect("triangulation serializes")
}

fn quiver_value(q: &Quiver) -> Value {
    serde_json::to_value(q).expect("quiver serializes")
}

/// Flipping any arc and mutating at its vertex give the same exchange matrix.
/// Arcs whose flip would create a self-folded triangle are counted as skipped.
pub fn verify_flip_mutation(t: &Triangulation) -> ClaimResult {
    let id = "flip_mutation";
    let q = match t.quiver() {
        Ok(q) => q,
        Err(e) => return ClaimResult::error(id, e),
    };
    let (mut checked, mut skipped) = (0, 0);
    for k in t.arcs() {
        let flipped = match t.flip(k) {
            Ok(f) => f,
            Err(SurfaceError::FlipCreatesSelfFolded(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return ClaimResult::error(id, e),
        };
        let v = t.arc_vertex(k).expect("arc");
        let mutated = q.mutate(v).expect("mutation within range");
        let via_flip = flipped.quiver().expect("arcs survive a flip");
        if via_flip != mutated {
            return ClaimResult::fail(
                id,
                format!("arc {k}: flip and mutation disagree"),
                json!({ "triangulation": tri_value(t), "arc": k, "flip": quiver_value(&via_flip), "mutation": quiver_value(&mutated) }),
            );
        }
        checked += 1;
    }
    ClaimResult::pass(id, format!("{checked} flips checked, {skipped} skipped"))
}

/// Over all triangulations within `flip_depth` flips of `t`: the arrow count
/// changes under mutation at `k` exactly when `k` has degrees (1,1), exactly
/// when its neighborhood is case 2c. On closed once-punctured surfaces every
/// vertex has degrees (2,2) and every arc is in case 4a, 4b or 4c.
pub fn verify_prop_in1out1(t: &Triangulation, flip_depth: usize) -> Result<ClaimResult, VerifyError> {
    let s = t.surface();
    let closed = s.boundary_components == 0;
    if (closed && s.punctures != 1) || (!closed && s.punctures != 0) {
        return Err(VerifyError::UnsupportedSurface);
    }
    let id = "prop_in1out1";
    let mut seen: BTreeSet<Vec<[usize; 3]>> = BTreeSet::new();
    let mut frontier = vec![t.clone()];
    seen.insert(t.triangle_multiset());
    let mut all = vec![t.clone()];
    for _ in 0..flip_depth {
        let mut next = Vec::new();
        for cur in &frontier {
            for k in cur.arcs() {
                match cur.flip(k) {
                    Ok(f) => {
                        if seen.insert(f.triangle_multiset()) {
                            next.push(f);
                        }
                    }
                    Err(SurfaceError::FlipCreatesSelfFolded(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let mut cases: BTreeMap<CaseLabel, usize> = BTreeMap::new();
    let mut vertices = 0;
    for cur in &all {
        let q = cur.quiver()?;
        for k in cur.arcs() {
            let v = cur.arc_vertex(k)?;
            let deg = q.degrees(v).expect("vertex in range");
            let changes = q.mutate(v).expect("mutation").arrow_count() != q.arrow_count();
            let label = match cur.classify_arc(k) {
                Ok(l) => l,
                Err(e) => {
                    return Ok(ClaimResult::fail(id, e.to_string(), json!({ "triangulation": tri_value(cur), "arc": k })))
                }
            };
            *cases.entry(label).or_default() += 1;
            vertices += 1;
            let is11 = deg == DegreePair::new(1, 1);
            let ok = if closed {
                deg == DegreePair::new(2, 2)
                    && !changes
                    && matches!(label, CaseLabel::FourA | CaseLabel::FourB | CaseLabel::FourC)
            } else {
                changes == is11 && is11 == (label == CaseLabel::TwoC)
            };
            if !ok {
                return Ok(ClaimResult::fail(
                    id,
                    format!("arc {k}: degrees {deg}, case {label}, count changes: {changes}"),
                    json!({ "triangulation": tri_value(cur), "arc": k }),
                ));
            }
        }
    }
    let hist: Vec<String> = cases.iter().map(|(l, c)| format!("{l}:{c}")).collect();
    Ok(ClaimResult::pass(
        id,
        format!("{} triangulations, {vertices} vertices; cases {}", all.len(), hist.join(" ")),
    ))
}

/// Arrow-count constancy on the class of `(g, b)`: full enumeration for
/// small classes, otherwise a seeded walk of `walk_steps` steps.
pub fn verify_theorem_const(g: usize, b: usize, walk_steps: u64, seed: u64) -> ClaimResult {
    let id = format!("theorem_const({g},{b})");
    let q = match if b == 0 { qg0_quiver(g) } else { qgb_quiver(g, b) } {
        Ok(q) => q,
        Err(e) => return ClaimResult::error(id, e),
    };
    let (n, arrows) = expected_counts(g, b);
    if (q.n(), q.arrow_count()) != (n, arrows as u64) {
        return ClaimResult::fail(
            &id,
            format!("representative has {} vertices, {} arrows", q.n(), q.arrow_count()),
            quiver_value(&q),
        );
    }
    if q.n() <= BFS_VERTEX_LIMIT {
        let report = match enumerate_class_default(&q) {
            Ok(r) => r,
            Err(e) => return ClaimResult::error(id, e),
        };
        let set = report.arrow_count_set();
        if report.verdict == Verdict::ExhaustedFinite && set == [arrows as u64] {
            return ClaimResult::pass(id, format!("{} classes, all with {arrows} arrows", report.class_count()));
        }
        if report.verdict == Verdict::ExhaustedFinite {
            let bad = report.arrow_counts.iter().position(|&c| c != arrows as u64).expect("differing count");
            return ClaimResult::fail(
                id,
                format!("class has arrow counts {set:?}"),
                quiver_value(&report.representatives[bad]),
            );
        }
    }
    match random_mutation_walk(&q, walk_steps, seed) {
        Ok(w) if w.arrow_count_min == w.arrow_count_max && w.arrow_count_min == arrows as u64 => {
            let profile = if b == 0 && w.degree_profile_constant { ", all degrees (2,2)" } else { "" };
            ClaimResult::pass(id, format!("{walk_steps}-step walk (seed {seed}) kept {arrows} arrows{profile}"))
        }
        Ok(w) => ClaimResult::fail(
            id,
            format!("walk saw arrow counts {}..={}", w.arrow_count_min, w.arrow_count_max),
            json!({ "quiver": quiver_value(&q), "steps": walk_steps, "seed": seed }),
        ),
        Err(e) => ClaimResult::error(id, e),
    }
}

/// The class of an exceptional quiver contains two different arrow counts.
pub fn verify_exceptional(name: ExceptionalName) -> ClaimResult {
    let id = format!("exceptional({name})");
    let q = exceptional_quiver(name);
    match name {
        ExceptionalName::X6 | ExceptionalName::X7 => {
            let report = match enumerate_class_default(&q) {
                Ok(r) => r,
                Err(e) => return ClaimResult::error(id, e),
            };
            let set = report.arrow_count_set();
            let ok = report.verdict == Verdict::ExhaustedFinite
                && set.len() >= 2
                && if name == ExceptionalName::X6 {
                    report.class_count() == 5 && set.contains(&9) && set.contains(&11)
                } else {
                    report.class_count() == 2 && set == [12, 15]
                };
            let detail = format!("{} classes, arrow counts {set:?}", report.class_count());
            if ok {
                ClaimResult::pass(id, detail)
            } else {
                ClaimResult::fail(id, detail, report.to_json_value())
            }
        }
        ExceptionalName::E6_11 => {
            let after = q.mutate_seq(&[0, 1]).expect("valid sequence");
            let detail = format!("mutating at 0 then 1: {} -> {} arrows", q.arrow_count(), after.arrow_count());
            if after.arrow_count() + 1 == q.arrow_count() {
                ClaimResult::pass(id, detail)
            } else {
                ClaimResult::fail(id, detail, quiver_value(&q))
            }
        }
        _ => match (0..q.n()).find(|&v| q.degrees(v).ok() == Some(DegreePair::new(1, 1))) {
            Some(v) => {
                let after = q.mutate(v).expect("vertex in range").arrow_count();
                let detail = format!("vertex {v} has degrees (1,1): {} -> {after} arrows", q.arrow_count());
                if after.abs_diff(q.arrow_count()) == 1 {
                    ClaimResult::pass(id, detail)
                } else {
                    ClaimResult::fail(id, detail, quiver_value(&q))
                }
            }
            None => ClaimResult::fail(id, "no vertex of degrees (1,1)", quiver_value(&q)),
        },
    }
}

fn check_distinguished(id: &str, before: &Triangulation, after: &Triangulation, arc: usize) -> Result<String, ClaimResult> {
    let fail = |detail: String| {
        Err(ClaimResult::fail(id, detail, json!({ "triangulation": tri_value(before), "result": tri_value(after), "arc": arc })))
    };
    let q = match after.quiver() {
        Ok(q) => q,
        Err(e) => return fail(e.to_string()),
    };
    let v = after.arc_vertex(arc).expect("distinguished arc");
    let deg = q.degrees(v).expect("vertex in range");
    let mutated = q.mutate(v).expect("vertex in range").arrow_count();
    if deg != DegreePair::new(1, 1) || mutated.abs_diff(q.arrow_count()) != 1 {
        return fail(format!("arc {arc}: degrees {deg}, {} -> {mutated} arrows", q.arrow_count()));
    }
    Ok(format!("arc {arc} has degrees (1,1); {} -> {mutated} arrows", q.arrow_count()))
}

/// Adding a puncture on `gamma` yields an arc whose mutation changes the
/// arrow count by one.
pub fn verify_lemma_addp(t: &Triangulation, gamma: usize) -> ClaimResult {
    let id = "lemma_addp";
    let (after, arc) = match t.add_puncture_on_arc(gamma) {
        Ok(r) => r,
        Err(e) => return ClaimResult::error(id, e),
    };
    match check_distinguished(id, t, &after, arc) {
        Ok(detail) => ClaimResult::pass(id, detail),
        Err(r) => r,
    }
}

/// Adding a boundary marked point in triangle `tri` yields an arc whose
/// mutation changes the arrow count by one, and keeps a (♠) triangle.
pub fn verify_lemma_addb(t: &Triangulation, tri: usize) -> ClaimResult {
    let id = "lemma_addb";
    let (after, arc) = match t.add_boundary_marked_point(tri) {
        Ok(r) => r,
        Err(e) => return ClaimResult::error(id, e),
    };
    match check_distinguished(id, t, &after, arc) {
        Ok(detail) => match after.has_spade_triangle() {
            Some(s) => ClaimResult::pass(id, format!("{detail}; triangle {s} has one boundary side")),
            None => ClaimResult::fail(id, "no triangle with exactly one boundary side", tri_value(&after)),
        },
        Err(r) => r,
    }
}

/// The existence search agrees with the residue rule for `2 <= n <= limit`.
pub fn verify_corollary(limit: usize) -> ClaimResult {
    let id = "corollary";
    for n in 2..=limit {
        let residue_rule = n <= 2 || !matches!(n % 6, 1 | 5);
        let (found, witness) = exists_constant_class(n);
        if found != residue_rule {
            return ClaimResult::fail(id, format!("n = {n}"), json!({ "n": n, "witness": witness }));
        }
    }
    ClaimResult::pass(id, format!("2 <= n <= {limit}"))
}

/// `A_{4g-3}` embeds as a full subquiver of the closed genus-`g` quiver, and
/// `A_{4g-2}` embeds neither there nor in [`AN_SAMPLES`] walk samples of its
/// class. The second half is a sampled check.
pub fn verify_an_embedding(g: usize, seed: u64) -> ClaimResult {
    let id = format!("an_embedding({g}) [sampled]");
    let q = match qg0_quiver(g) {
        Ok(q) => q,
        Err(e) => return ClaimResult::error(id, e),
    };
    let (short, long) = (a_n_quiver(4 * g - 3).expect("n >= 1"), a_n_quiver(4 * g - 2).expect("n >= 1"));
    if !embeds_as_full_subquiver(&short, &q) {
        return ClaimResult::fail(id, format!("A_{} does not embed", 4 * g - 3), quiver_value(&q));
    }
    let mut members = vec![q.clone()];
    match walk_samples(&q, AN_SAMPLES, AN_STRIDE, seed) {
        Ok(s) => members.extend(s),
        Err(e) => return ClaimResult::error(id, e),
    }
    let hit = members.par_iter().find_map_first(|m| find_full_subquiver(&long, m).map(|emb| (m.clone(), emb)));
    match hit {
        Some((m, emb)) => ClaimResult::fail(
            id,
            format!("A_{} embeds at {emb:?}", 4 * g - 2),
            json!({ "quiver": quiver_value(&m), "embedding": emb }),
        ),
        None => ClaimResult::pass(
            id,
            format!("A_{} embeds; A_{} absent from {} sampled members (seed {seed})", 4 * g - 3, 4 * g - 2, members.len()),
        ),
    }
}

/// Claim families run by [`run_all`].
pub const CLAIM_FAMILIES: [&str; 8] = [
    "flip_mutation",
    "prop_in1out1",
    "theorem_const",
    "exceptional",
    "lemma_addp",
    "lemma_addb",
    "corollary",
    "an_embedding",
];

type Job = Box<dyn Fn() -> ClaimResult + Send + Sync>;

fn with_label(mut r: ClaimResult, label: String) -> ClaimResult {
    r.claim_id = format!("{}:{label}", r.claim_id);
    r
}

fn tri_job(label: &'static str, make: fn() -> Result<Triangulation, crate::GeneratorError>, check: fn(&Triangulation) -> ClaimResult) -> Job {
    Box::new(move || match make() {
        Ok(t) => with_label(check(&t), label.to_string()),
        Err(e) => ClaimResult::error(label, e),
    })
}

fn jobs(family: &str, seed: u64) -> Vec<Job> {
    let mut out: Vec<Job> = Vec::new();
    match family {
        "flip_mutation" => {
            out.push(tri_job("qg0(1)", || qg0_triangulation(1), verify_flip_mutation));
            out.push(tri_job("qg0(2)", || qg0_triangulation(2), verify_flip_mutation));
            out.push(tri_job("qg0(3)", || qg0_triangulation(3), verify_flip_mutation));
            out.push(tri_job("qgb(0,2)", || qgb_triangulation(0, 2), verify_flip_mutation));
            out.push(tri_job("qgb(1,1)", || qgb_triangulation(1, 1), verify_flip_mutation));
            for m in 4..=10 {
                out.push(Box::new(move || match polygon_fan_triangulation(m) {
                    Ok(t) => with_label(verify_flip_mutation(&t), format!("polygon({m})")),
                    Err(e) => ClaimResult::error("flip_mutation", e),
                }));
            }
        }
        "prop_in1out1" => {
            let cases: [(&'static str, fn() -> Result<Triangulation, crate::GeneratorError>, usize); 4] = [
                ("polygon(8)", || polygon_fan_triangulation(8), 3),
                ("qgb(0,3)", || qgb_triangulation(0, 3), 2),
                ("qg0(1)", || qg0_triangulation(1), 1),
                ("qg0(2)", || qg0_triangulation(2), 2),
            ];
            for (label, make, depth) in cases {
                out.push(Box::new(move || {
                    let r = make()
                        .map_err(|e| e.to_string())
                        .and_then(|t| verify_prop_in1out1(&t, depth).map_err(|e| e.to_string()));
                    match r {
                        Ok(r) => with_label(r, format!("{label},depth={depth}")),
                        Err(e) => ClaimResult::error("prop_in1out1", e),
                    }
                }));
            }
        }
        "theorem_const" => {
            let sigs = [(1, 0), (2, 0), (3, 0), (4, 0), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2), (1, 3), (2, 1)];
            for (g, b) in sigs {
                out.push(Box::new(move || verify_theorem_const(g, b, 10_000, seed)));
            }
        }
        "exceptional" => {
            for name in ExceptionalName::ALL {
                out.push(Box::new(move || verify_exceptional(name)));
            }
        }
        "lemma_addp" => {
            out.push(tri_job("polygon(5),arc=0", || polygon_fan_triangulation(5), |t| verify_lemma_addp(t, 0)));
            out.push(tri_job("qg0(1),arc=0", || qg0_triangulation(1), |t| verify_lemma_addp(t, 0)));
            out.push(tri_job("qgb(1,1),arc=0", || qgb_triangulation(1, 1), |t| verify_lemma_addp(t, 0)));
        }
        "lemma_addb" => {
            let spade = |t: &Triangulation| match t.has_spade_triangle() {
                Some(tri) => verify_lemma_addb(t, tri),
                None => ClaimResult::skipped("lemma_addb", "no triangle with one boundary side"),
            };
            out.push(tri_job("polygon(5)", || polygon_fan_triangulation(5), spade));
            out.push(tri_job("qgb(0,2)", || qgb_triangulation(0, 2), spade));
            out.push(tri_job("qgb(1,2)", || qgb_triangulation(1, 2), spade));
        }
        "corollary" => out.push(Box::new(|| verify_corollary(1000))),
        "an_embedding" => {
            for g in 1..=3 {
                out.push(Box::new(move || verify_an_embedding(g, seed)));
            }
        }
        _ => {}
    }
    out
}

/// Runs every claim of the selected families (all when `families` is empty)
/// in parallel; results come back in a fixed order.
pub fn run_all(families: &[String], seed: u64) -> Result<Vec<ClaimResult>, String> {
    if let Some(bad) = families.iter().find(|f| !CLAIM_FAMILIES.contains(&f.as_str())) {
        return Err(format!("unknown claim family {bad:?}; known: {}", CLAIM_FAMILIES.join(", ")));
    }
    let selected: Vec<&str> = CLAIM_FAMILIES
        .iter()
        .copied()
        .filter(|f| families.is_empty() || families.iter().any(|x| x == f))
        .collect();
    let all: Vec<Job> = selected.iter().flat_map(|f| jobs(f, seed)).collect();
    Ok(all.par_iter().map(|job| job()).collect())
}

/// The `verify-report-v1` document.
pub fn report_json(results: &[ClaimResult], seed: u64) -> Value {
    let count = |s| results.iter().filter(|r| r.status == s).count();
    json!({
        "format": VERIFY_REPORT_FORMAT,
        "seed": seed,
        "passed": count(ClaimStatus::Pass),
        "failed": count(ClaimStatus::Fail),
        "skipped": count(ClaimStatus::Skipped),
        "claims": results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_mutation_on_generators() {
        for g in 1..=2 {
            assert!(verify_flip_mutation(&qg0_triangulation(g).unwrap()).is_pass());
        }
        let r = verify_flip_mutation(&polygon_fan_triangulation(8).unwrap());
        assert!(r.is_pass());
        assert!(r.detail.starts_with("5 flips"));
        assert!(verify_flip_mutation(&qg0_triangulation(1).unwrap()).detail.starts_with("3 flips"));
    }

    #[test]
    fn degree_criterion() {
        let r = verify_prop_in1out1(&polygon_fan_triangulation(8).unwrap(), 2).unwrap();
        assert!(r.is_pass(), "{r:?}");
        let torus = verify_prop_in1out1(&qg0_triangulation(1).unwrap(), 1).unwrap();
        assert!(torus.is_pass() && torus.detail.ends_with("cases 4a:6"), "{torus:?}");
        let g2 = verify_prop_in1out1(&qg0_triangulation(2).unwrap(), 1).unwrap();
        assert!(g2.is_pass() && !g2.detail.contains("4a"), "{g2:?}");
        let (punctured, _) = polygon_fan_triangulation(5).unwrap().add_puncture_on_arc(0).unwrap();
        assert_eq!(verify_prop_in1out1(&punctured, 1), Err(VerifyError::UnsupportedSurface));
    }

    #[test]
    fn small_theorem_cases() {
        let r = verify_theorem_const(1, 0, 100, 1);
        assert!(r.is_pass() && r.detail.starts_with("1 classes"), "{r:?}");
        assert!(verify_theorem_const(1, 1, 100, 1).is_pass());
        assert!(!verify_theorem_const(0, 1, 100, 1).is_pass());
    }

    #[test]
    fn lemmas_and_corollary() {
        let pentagon = polygon_fan_triangulation(5).unwrap();
        assert!(verify_lemma_addp(&pentagon, 0).is_pass());
        assert!(verify_lemma_addb(&pentagon, pentagon.has_spade_triangle().unwrap()).is_pass());
        for k in 0..3 {
            assert!(verify_lemma_addp(&qg0_triangulation(1).unwrap(), k).is_pass());
        }
        let bad = verify_lemma_addb(&pentagon, 0);
        assert_eq!(bad.status, ClaimStatus::Fail);
        assert!(bad.counterexample.is_some());
        assert!(verify_corollary(60).is_pass());
        assert!(verify_corollary(2).is_pass());
    }

    #[test]
    fn exceptional_witnesses() {
        for name in [ExceptionalName::E7, ExceptionalName::E6_11, ExceptionalName::E8t] {
            assert!(verify_exceptional(name).is_pass(), "{name}");
        }
    }

    #[test]
    fn unknown_family_is_rejected() {
        assert!(run_all(&["nope".to_string()], 0).is_err());
        let r = run_all(&["corollary".to_string()], 0).unwrap();
        assert_eq!(r.len(), 1);
        let doc = report_json(&r, 0);
        assert_eq!(doc["format"], VERIFY_REPORT_FORMAT);
        assert_eq!(doc["claims"][0]["status"], "pass");
    }
}
