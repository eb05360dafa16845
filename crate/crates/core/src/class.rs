//! Mutation-class enumeration up to isomorphism, and seeded mutation walks.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_form, CanonicalKey};
use crate::quiver::{Quiver, QuiverError};
use crate::rng::SplitMix64;

pub const CLASS_REPORT_FORMAT: &str = "classreport-v1";
pub const DEFAULT_MAX_CLASSES: usize = 100_000;
pub const DEFAULT_MAX_MULTIPLICITY: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("class budget must be at least 1")]
    BudgetZero,
    #[error("multiplicity cutoff must be at least 2")]
    CutoffTooSmall,
    #[error("walk needs at least one step")]
    NoSteps,
    #[error("constant-arrow verdict needs an exhausted class, got {0:?}")]
    ClassNotExhausted(Verdict),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    ExhaustedFinite,
    TruncatedAtBudget,
    InfiniteDetected,
}

/// Outcome of a breadth-first class enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    /// One canonical quiver per isomorphism class, sorted by canonical key.
    pub representatives: Vec<Quiver>,
    pub keys: Vec<CanonicalKey>,
    /// Arrow count of each representative, aligned with `representatives`.
    pub arrow_counts: Vec<u64>,
    pub verdict: Verdict,
    /// Number of representatives whose mutations were all computed.
    pub explored: usize,
}

impl ClassReport {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    /// Distinct arrow counts, ascending.
    pub fn arrow_count_set(&self) -> Vec<u64> {
        let mut v = self.arrow_counts.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.keys.binary_search(key).is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ClassReportWire::from(self)).expect("report serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ClassReportWire::from(self)).expect("report serializes")
    }
}

#[derive(Serialize)]
struct ClassReportWire<'a> {
    format: &'static str,
    verdict: Verdict,
    explored: usize,
    class_count: usize,
    arrow_count_set: Vec<u64>,
    classes: Vec<ClassEntry<'a>>,
}

#[derive(Serialize)]
struct ClassEntry<'a> {
    key: String,
    arrow_count: u64,
    quiver: &'a Quiver,
}

impl<'a> From<&'a ClassReport> for ClassReportWire<'a> {
    fn from(r: &'a ClassReport) -> Self {
        ClassReportWire {
            format: CLASS_REPORT_FORMAT,
            verdict: r.verdict,
            explored: r.explored,
            class_count: r.class_count(),
            arrow_count_set: r.arrow_count_set(),
            classes: r
                .representatives
                .iter()
                .zip(&r.keys)
                .zip(&r.arrow_counts)
                .map(|((q, k), &c)| ClassEntry { key: k.to_hex(), arrow_count: c, quiver: q })
                .collect(),
        }
    }
}

/// Whether the multiplicity cutoff declares `q` mutation-infinite.
fn exceeds_cutoff(q: &Quiver, max_multiplicity: u64) -> bool {
    q.n() >= 3 && q.max_multiplicity() > max_multiplicity
}

/// Breadth-first search over single mutations, deduplicated by canonical key.
///
/// A reached quiver on three or more vertices with an entry `|b[i][j]|`
/// above `max_multiplicity` ends the search with `InfiniteDetected`. Each
/// frontier level is expanded in parallel; discoveries are merged in key
/// order, so the report does not depend on scheduling.
pub fn enumerate_class(
    q: &Quiver,
    max_classes: usize,
    max_multiplicity: u64,
) -> Result<ClassReport, ClassError> {
    if max_classes == 0 {
        return Err(ClassError::BudgetZero);
    }
    if max_multiplicity < 2 {
        return Err(ClassError::CutoffTooSmall);
    }
    let start = canonical_form(q);
    let mut found: BTreeMap<CanonicalKey, Quiver> = BTreeMap::new();
    found.insert(start.key.clone(), start.quiver.clone());
    let finish = |found: BTreeMap<CanonicalKey, Quiver>, verdict, explored| {
        let (keys, representatives): (Vec<_>, Vec<_>) = found.into_iter().unzip();
        let arrow_counts = representatives.iter().map(Quiver::arrow_count).collect();
        Ok(ClassReport { representatives, keys, arrow_counts, verdict, explored })
    };
    if exceeds_cutoff(q, max_multiplicity) {
        return finish(found, Verdict::InfiniteDetected, 0);
    }

    let mut frontier = vec![start.quiver];
    let mut explored = 0;
    while !frontier.is_empty() {
        let level: Vec<Vec<(CanonicalKey, Quiver, bool)>> = frontier
            .par_iter()
            .map(|rep| {
                (0..rep.n())
                    .map(|k| {
                        let m = rep.mutate(k)?;
                        let infinite = exceeds_cutoff(&m, max_multiplicity);
                        let cf = canonical_form(&m);
                        Ok((cf.key, cf.quiver, infinite))
                    })
                    .collect::<Result<Vec<_>, QuiverError>>()
            })
            .collect::<Result<_, _>>()?;
        explored += frontier.len();

        let mut fresh: BTreeMap<CanonicalKey, Quiver> = BTreeMap::new();
        let mut infinite = false;
        for (key, quiver, inf) in level.into_iter().flatten() {
            infinite |= inf;
            if !found.contains_key(&key) {
                fresh.entry(key).or_insert(quiver);
            }
        }
        if infinite {
            found.extend(fresh);
            return finish(found, Verdict::InfiniteDetected, explored);
        }
        frontier = fresh.values().cloned().collect();
        found.extend(fresh);
        if found.len() > max_classes {
            while found.len() > max_classes {
                found.pop_last();
            }
            return finish(found, Verdict::TruncatedAtBudget, explored);
        }
    }
    finish(found, Verdict::ExhaustedFinite, explored)
}

/// Enumeration with the default budgets.
pub fn enumerate_class_default(q: &Quiver) -> Result<ClassReport, ClassError> {
    enumerate_class(q, DEFAULT_MAX_CLASSES, DEFAULT_MAX_MULTIPLICITY)
}

/// Whether every class member has the same number of arrows.
pub fn constant_arrow_verdict(report: &ClassReport) -> Result<bool, ClassError> {
    if report.verdict != Verdict::ExhaustedFinite {
        return Err(ClassError::ClassNotExhausted(report.verdict));
    }
    Ok(report.arrow_count_set().len() == 1)
}

/// Checks the closure property of an exhausted report: every mutation of
/// every representative is again represented.
pub fn is_closed(report: &ClassReport) -> Result<bool, QuiverError> {
    let keys: HashSet<&CanonicalKey> = report.keys.iter().collect();
    for rep in &report.representatives {
        for k in 0..rep.n() {
            if !keys.contains(&canonical_form(&rep.mutate(k)?).key) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Summary of a seeded random mutation walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkReport {
    pub steps: u64,
    pub seed: u64,
    pub arrow_count_min: u64,
    pub arrow_count_max: u64,
    /// Every visited quiver had the same multiset of vertex degrees as the start.
    pub degree_profile_constant: bool,
}

/// Iterator over the quivers visited by a seeded walk, starting with the
/// initial quiver. Step `t` mutates at `next_u64() % n`.
#[derive(Debug, Clone)]
pub struct MutationWalk {
    current: Option<Quiver>,
    rng: SplitMix64,
    remaining: u64,
    started: bool,
}

impl MutationWalk {
    pub fn new(q: &Quiver, steps: u64, seed: u64) -> Self {
        Self {
            current: Some(q.clone()),
            rng: SplitMix64::new(seed),
            remaining: steps,
            started: false,
        }
    }
}

impl Iterator for MutationWalk {
    type Item = Result<Quiver, QuiverError>;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            return self.current.clone().map(Ok);
        }
        if self.remaining == 0 {
            return None;
        }
        let q = self.current.take()?;
        self.remaining -= 1;
        let k = (self.rng.next_u64() % q.n() as u64) as usize;
        match q.mutate(k) {
            Ok(m) => {
                self.current = Some(m.clone());
                Some(Ok(m))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

pub fn random_mutation_walk(q: &Quiver, steps: u64, seed: u64) -> Result<WalkReport, ClassError> {
    if steps == 0 {
        return Err(ClassError::NoSteps);
    }
    let profile = |q: &Quiver| {
        let mut p = q.degree_profile();
        p.sort_unstable();
        p
    };
    let start = profile(q);
    let mut report = WalkReport {
        steps,
        seed,
        arrow_count_min: u64::MAX,
        arrow_count_max: 0,
        degree_profile_constant: true,
    };
    for visited in MutationWalk::new(q, steps, seed) {
        let visited = visited?;
        let c = visited.arrow_count();
        report.arrow_count_min = report.arrow_count_min.min(c);
        report.arrow_count_max = report.arrow_count_max.max(c);
        report.degree_profile_constant &= profile(&visited) == start;
    }
    Ok(report)
}

/// `count` class members sampled from one seeded walk, taking the quiver
/// reached after every `stride` steps.
pub fn walk_samples(q: &Quiver, count: usize, stride: u64, seed: u64) -> Result<Vec<Quiver>, QuiverError> {
    let stride = stride.max(1);
    MutationWalk::new(q, stride * count as u64, seed)
        .skip(1)
        .step_by(stride as usize)
        .take(count)
        .collect()
}
