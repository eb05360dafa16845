//! Named quiver and triangulation families.
//!
//! Closed once-punctured surfaces and surfaces with boundary (one marked
//! point per component) are triangulated from a fundamental polygon whose
//! paired sides are glued orientation-reversingly, fanned from vertex 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::random_mutation_walk;
use crate::quiver::{DegreePair, Quiver};
use crate::surface::{EdgeKind, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("a polygon needs at least 3 marked points, got {0}")]
    TooFewPoints(usize),
    #[error("unsupported signature {0}")]
    UnsupportedSignature(String),
    #[error("unknown generator name {0:?}")]
    UnknownName(String),
    #[error("generated representative for {signature} failed self-verification: {reason}")]
    SelfVerificationFailed { signature: String, reason: String },
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
}

/// One side of a fundamental polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PolygonSide {
    /// Glued, reversing orientation, to the other side with the same label.
    Paired(usize),
    Boundary,
}

/// Fan triangulation of a polygon with the given side word.
///
/// Sides `s_1..s_N` run counterclockwise with `s_i` from vertex `i-1` to `i`;
/// diagonals `d_j` join vertex 0 to vertex `j`. Edge ids: diagonals first
/// (`d_j` gets `j-2`), then paired labels in order of first appearance, then
/// boundary sides in order.
fn polygon_word_triangulation(word: &[PolygonSide]) -> Result<Triangulation, crate::surface::SurfaceError> {
    let n = word.len();
    assert!(n >= 3, "polygon word needs three sides");
    let diagonals = n - 3;
    let mut edges = vec![EdgeKind::Arc; diagonals];
    let mut label_ids: Vec<(usize, usize)> = Vec::new();
    let mut side_ids = Vec::with_capacity(n);
    for side in word {
        if let PolygonSide::Paired(label) = side {
            if !label_ids.iter().any(|&(l, _)| l == *label) {
                label_ids.push((*label, edges.len()));
                edges.push(EdgeKind::Arc);
            }
        }
    }
    for side in word {
        let id = match side {
            PolygonSide::Paired(label) => label_ids.iter().find(|&&(l, _)| l == *label).expect("label seen").1,
            PolygonSide::Boundary => {
                edges.push(EdgeKind::Boundary);
                edges.len() - 1
            }
        };
        side_ids.push(id);
    }
    let s = |i: usize| side_ids[i - 1];
    let d = |j: usize| j - 2;
    let triangles = if n == 3 {
        vec![[s(1), s(2), s(3)]]
    } else {
        let mut t = vec![[s(1), s(2), d(2)]];
        for j in 2..=n - 3 {
            t.push([d(j), s(j + 1), d(j + 1)]);
        }
        t.push([d(n - 2), s(n - 1), s(n)]);
        t
    };
    Triangulation::from_triangles(edges, triangles)
}

/// Disc with `m` marked points, fanned from vertex 0. Diagonal `d_j` has id
/// `j - 2`; boundary side `s_i` has id `m - 4 + i`.
pub fn polygon_fan_triangulation(m: usize) -> Result<Triangulation, GeneratorError> {
    if m < 3 {
        return Err(GeneratorError::TooFewPoints(m));
    }
    let word = vec![PolygonSide::Boundary; m];
    polygon_word_triangulation(&word).map_err(|e| verification_failure(format!("polygon {m}"), e))
}

fn verification_failure(signature: String, reason: impl fmt::Display) -> GeneratorError {
    GeneratorError::SelfVerificationFailed { signature, reason: reason.to_string() }
}

fn genus_word(g: usize) -> Vec<PolygonSide> {
    (0..g)
        .flat_map(|h| {
            let (a, b) = (2 * h, 2 * h + 1);
            [a, b, a, b].map(PolygonSide::Paired)
        })
        .collect()
}

/// Closed genus-`g` surface with one puncture, from the `4g`-gon with side
/// labels `1,2,1,2,...,2g-1,2g,2g-1,2g`.
pub fn qg0_triangulation(g: usize) -> Result<Triangulation, GeneratorError> {
    if g == 0 {
        return Err(GeneratorError::UnsupportedSignature("(0,0)".into()));
    }
    polygon_word_triangulation(&genus_word(g)).map_err(|e| verification_failure(format!("({g},0)"), e))
}

/// Genus-`g` surface with `b` boundary components, one marked point on each
/// and no punctures. The polygon word is `g` handle blocks, then
/// `c_j x_j c_j` for `j < b`, then `x_b`, where the `x` are boundary sides.
pub fn qgb_triangulation(g: usize, b: usize) -> Result<Triangulation, GeneratorError> {
    if b == 0 {
        return qg0_triangulation(g);
    }
    if (g, b) == (0, 1) {
        return Err(GeneratorError::UnsupportedSignature("(0,1)".into()));
    }
    let mut word = genus_word(g);
    for j in 0..b - 1 {
        let c = PolygonSide::Paired(2 * g + j);
        word.extend([c, PolygonSide::Boundary, c]);
    }
    word.push(PolygonSide::Boundary);
    polygon_word_triangulation(&word).map_err(|e| verification_failure(format!("({g},{b})"), e))
}

pub fn qg0_quiver(g: usize) -> Result<Quiver, GeneratorError> {
    let t = qg0_triangulation(g)?;
    t.quiver().map_err(|e| verification_failure(format!("({g},0)"), e))
}

pub fn markov_quiver() -> Quiver {
    Quiver::from_arrows(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]).expect("valid arrows")
}

type ArrowList = &'static [(usize, usize, u64)];

/// Representatives drawn for small signatures, keyed by `(g, b)`.
const DRAWN_QGB: &[((usize, usize), usize, ArrowList)] = &[
    ((0, 2), 2, &[(0, 1, 2)]),
    (
        (0, 3),
        6,
        &[(0, 2, 1), (0, 4, 1), (1, 0, 1), (1, 5, 1), (2, 1, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)],
    ),
    (
        (0, 4),
        10,
        &[
            (0, 3, 1), (0, 7, 1), (1, 0, 1), (1, 4, 1), (2, 1, 1), (2, 9, 1), (3, 1, 1), (3, 5, 1),
            (4, 2, 1), (4, 6, 1), (5, 7, 1), (6, 8, 1), (7, 8, 1), (8, 5, 1), (8, 9, 1), (9, 6, 1),
        ],
    ),
    ((1, 1), 4, &[(0, 2, 1), (0, 3, 1), (1, 0, 1), (1, 3, 1), (2, 1, 2), (3, 2, 1)]),
    (
        (1, 2),
        8,
        &[
            (0, 2, 1), (0, 4, 1), (1, 0, 1), (1, 7, 1), (2, 1, 1), (2, 5, 1), (3, 0, 1), (3, 6, 1),
            (4, 3, 2), (5, 6, 1), (6, 4, 1), (6, 7, 1), (7, 5, 1),
        ],
    ),
    (
        (1, 3),
        12,
        &[
            (0, 3, 1), (0, 6, 1), (1, 0, 1), (1, 4, 1), (2, 1, 1), (2, 11, 1), (3, 1, 1), (3, 7, 1),
            (4, 2, 1), (4, 8, 1), (5, 0, 1), (5, 9, 1), (6, 5, 2), (7, 9, 1), (8, 10, 1), (9, 6, 1),
            (9, 10, 1), (10, 7, 1), (10, 11, 1), (11, 8, 1),
        ],
    ),
    (
        (2, 1),
        10,
        &[
            (0, 2, 1), (0, 4, 1), (1, 0, 1), (1, 4, 1), (2, 1, 2), (3, 0, 1), (3, 8, 1), (4, 2, 1),
            (4, 3, 1), (5, 7, 1), (5, 9, 1), (6, 5, 1), (6, 9, 1), (7, 6, 2), (8, 5, 1), (9, 7, 1),
            (9, 8, 1),
        ],
    ),
    (
        (2, 2),
        14,
        &[
            (0, 2, 1), (0, 5, 1), (1, 0, 1), (1, 5, 1), (2, 1, 2), (3, 0, 1), (3, 6, 1), (4, 3, 1),
            (4, 12, 1), (5, 2, 1), (5, 3, 1), (6, 4, 1), (6, 8, 1), (7, 10, 1), (7, 13, 1), (8, 11, 1),
            (9, 7, 1), (9, 13, 1), (10, 9, 2), (11, 7, 1), (11, 12, 1), (12, 8, 1), (13, 10, 1),
            (13, 11, 1),
        ],
    ),
    (
        (2, 3),
        18,
        &[
            (0, 2, 1), (0, 6, 1), (1, 0, 1), (1, 6, 1), (2, 1, 2), (3, 0, 1), (3, 7, 1), (4, 3, 1),
            (4, 8, 1), (5, 4, 1), (5, 16, 1), (6, 2, 1), (6, 3, 1), (7, 4, 1), (7, 10, 1), (8, 5, 1),
            (8, 11, 1), (9, 13, 1), (9, 17, 1), (10, 14, 1), (11, 15, 1), (12, 9, 1), (12, 17, 1),
            (13, 12, 2), (14, 9, 1), (14, 15, 1), (15, 10, 1), (15, 16, 1), (16, 11, 1), (17, 13, 1),
            (17, 14, 1),
        ],
    ),
];

/// Signatures with a drawn representative.
pub fn drawn_qgb_signatures() -> Vec<(usize, usize)> {
    DRAWN_QGB.iter().map(|&(sig, _, _)| sig).collect()
}

/// The drawn representative for `(g, b)`, if there is one.
pub fn drawn_qgb_quiver(g: usize, b: usize) -> Option<Quiver> {
    DRAWN_QGB
        .iter()
        .find(|&&(sig, _, _)| sig == (g, b))
        .map(|&(_, n, arrows)| Quiver::from_arrows(n, arrows).expect("drawn data is valid"))
}

/// Expected `(vertices, arrows)` for the class of `(g, b)`.
pub fn expected_counts(g: usize, b: usize) -> (usize, usize) {
    if b == 0 {
        (6 * g - 3, 12 * g - 6)
    } else {
        (6 * g + 4 * b - 6, 12 * g + 7 * b - 12)
    }
}

/// Steps of the seeded walk used to self-check generated representatives.
pub const SELF_CHECK_STEPS: u64 = 10_000;
const SELF_CHECK_SEED: u64 = 0x5eed;

/// A representative of the class for `(g, b)` with `b >= 1`.
///
/// Drawn signatures return the drawn quiver. Other signatures use the
/// polygon-word triangulation, checked against the expected counts,
/// connectivity, absence of (1,1) vertices and a seeded constant-count walk.
pub fn qgb_quiver(g: usize, b: usize) -> Result<Quiver, GeneratorError> {
    if b == 0 || (g, b) == (0, 1) {
        return Err(GeneratorError::UnsupportedSignature(format!("({g},{b})")));
    }
    if let Some(q) = drawn_qgb_quiver(g, b) {
        return Ok(q);
    }
    let signature = format!("({g},{b})");
    let q = qgb_triangulation(g, b)?.quiver().map_err(|e| verification_failure(signature.clone(), e))?;
    self_check(&signature, &q, expected_counts(g, b))?;
    Ok(q)
}

fn self_check(signature: &str, q: &Quiver, (n, arrows): (usize, usize)) -> Result<(), GeneratorError> {
    let fail = |reason: String| Err(verification_failure(signature.to_string(), reason));
    if q.n() != n || q.arrow_count() != arrows as u64 {
        return fail(format!("{} vertices and {} arrows", q.n(), q.arrow_count()));
    }
    if !q.is_connected() {
        return fail("not connected".into());
    }
    if let Some(v) = (0..q.n()).find(|&v| q.degrees(v).ok() == Some(DegreePair::new(1, 1))) {
        return fail(format!("vertex {v} has degrees (1,1)"));
    }
    match random_mutation_walk(q, SELF_CHECK_STEPS, SELF_CHECK_SEED) {
        Ok(w) if w.arrow_count_min == w.arrow_count_max => Ok(()),
        Ok(w) => fail(format!("walk saw arrow counts {}..={}", w.arrow_count_min, w.arrow_count_max)),
        Err(e) => fail(e.to_string()),
    }
}

/// Linear quiver `0 -> 1 -> ... -> n-1`.
pub fn a_n_quiver(n: usize) -> Result<Quiver, GeneratorError> {
    let arrows: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
    Quiver::from_arrows(n, &arrows).map_err(|e| GeneratorError::UnsupportedSignature(format!("A_{n}: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExceptionalName {
    E6,
    E7,
    E8,
    E6t,
    E7t,
    E8t,
    #[serde(rename = "E6_11")]
    E6_11,
    #[serde(rename = "E7_11")]
    E7_11,
    #[serde(rename = "E8_11")]
    E8_11,
    X6,
    X7,
}

impl ExceptionalName {
    pub const ALL: [ExceptionalName; 11] = [
        ExceptionalName::E6,
        ExceptionalName::E7,
        ExceptionalName::E8,
        ExceptionalName::E6t,
        ExceptionalName::E7t,
        ExceptionalName::E8t,
        ExceptionalName::E6_11,
        ExceptionalName::E7_11,
        ExceptionalName::E8_11,
        ExceptionalName::X6,
        ExceptionalName::X7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionalName::E6 => "E6",
            ExceptionalName::E7 => "E7",
            ExceptionalName::E8 => "E8",
            ExceptionalName::E6t => "E6t",
            ExceptionalName::E7t => "E7t",
            ExceptionalName::E8t => "E8t",
            ExceptionalName::E6_11 => "E6_11",
            ExceptionalName::E7_11 => "E7_11",
            ExceptionalName::E8_11 => "E8_11",
            ExceptionalName::X6 => "X6",
            ExceptionalName::X7 => "X7",
        }
    }

    pub fn is_e_type(self) -> bool {
        !matches!(self, ExceptionalName::X6 | ExceptionalName::X7)
    }
}

impl fmt::Display for ExceptionalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExceptionalName {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, GeneratorError> {
        ExceptionalName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| GeneratorError::UnknownName(s.to_string()))
    }
}

/// Tree with a center and three arms. The first arm points toward the
/// center; the others are paths pointing away from it.
fn star(arms: [usize; 3]) -> Quiver {
    let n = 1 + arms.iter().sum::<usize>();
    let mut arrows = Vec::new();
    let mut next = 1;
    for (a, &len) in arms.iter().enumerate() {
        let mut prev = 0;
        for _ in 0..len {
            arrows.push(if a == 0 { (next, prev, 1) } else { (prev, next, 1) });
            prev = next;
            next += 1;
        }
    }
    Quiver::from_arrows(n, &arrows).expect("valid tree")
}

/// Double arrow `c => d` with three arms. The first vertex `v` of each arm
/// closes an oriented triangle `d -> v -> c`; the rest of the arm is a path
/// leading away from `v`.
fn elliptic(arms: [usize; 3], c: usize, d: usize, firsts: [usize; 3]) -> Quiver {
    let n = 2 + arms.iter().sum::<usize>();
    let mut arrows = vec![(c, d, 2)];
    let mut fresh = (0..n).filter(|v| ![c, d].contains(v) && !firsts.contains(v));
    for (&len, &v) in arms.iter().zip(&firsts) {
        arrows.push((d, v, 1));
        arrows.push((v, c, 1));
        let mut prev = v;
        for _ in 1..len {
            let w = fresh.next().expect("enough vertices");
            arrows.push((prev, w, 1));
            prev = w;
        }
    }
    Quiver::from_arrows(n, &arrows).expect("valid elliptic quiver")
}

/// Center 0 with blocks `0 -> a => b -> 0`.
fn blocks(count: usize) -> Vec<(usize, usize, u64)> {
    (0..count)
        .flat_map(|i| {
            let (a, b) = (2 * i + 1, 2 * i + 2);
            [(0, a, 1), (a, b, 2), (b, 0, 1)]
        })
        .collect()
}

pub fn exceptional_quiver(name: ExceptionalName) -> Quiver {
    match name {
        ExceptionalName::E6 => star([1, 2, 2]),
        ExceptionalName::E7 => star([1, 2, 3]),
        ExceptionalName::E8 => star([1, 2, 4]),
        ExceptionalName::E6t => star([2, 2, 2]),
        ExceptionalName::E7t => star([1, 3, 3]),
        ExceptionalName::E8t => star([1, 2, 5]),
        // vertex ℓ of the drawn quiver is index ℓ-1; arms start at 1, 5, 7
        ExceptionalName::E6_11 => elliptic([2, 2, 2], 2, 3, [0, 4, 6]),
        ExceptionalName::E7_11 => elliptic([1, 3, 3], 0, 1, [2, 3, 4]),
        ExceptionalName::E8_11 => elliptic([1, 2, 5], 0, 1, [2, 3, 4]),
        ExceptionalName::X6 => {
            let mut arrows = blocks(2);
            arrows.push((0, 5, 1));
            Quiver::from_arrows(6, &arrows).expect("valid X6")
        }
        ExceptionalName::X7 => Quiver::from_arrows(7, &blocks(3)).expect("valid X7"),
    }
}

/// Why a constant-arrow-count class exists with a given number of vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Every quiver with at most two vertices.
    AtMostTwoVertices,
    Signature { g: usize, b: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::AtMostTwoVertices => f.write_str("n≤2"),
            Witness::Signature { g, b } => write!(f, "({g},{b})"),
        }
    }
}

/// Whether some connected mutation class on `n` vertices has a constant
/// number of arrows, with the first signature realizing it.
pub fn exists_constant_class(n: usize) -> (bool, Option<Witness>) {
    if n <= 2 {
        return (true, Some(Witness::AtMostTwoVertices));
    }
    for g in 0..=n {
        if g >= 1 && 6 * g - 3 == n {
            return (true, Some(Witness::Signature { g, b: 0 }));
        }
        for b in 1..=n {
            if (g, b) != (0, 1) && 6 * g + 4 * b == n + 6 {
                return (true, Some(Witness::Signature { g, b }));
            }
        }
    }
    (false, None)
}

/// A generator selected by its stable name and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Markov,
    Qg0 { g: usize },
    Qgb { g: usize, b: usize },
    An { n: usize },
    Polygon { m: usize },
    Exceptional(ExceptionalName),
}

/// Generator names accepted by [`Generator::parse`].
pub const GENERATOR_NAMES: [&str; 6] = ["markov", "qg0", "qgb", "an", "polygon", "exceptional:<NAME>"];

impl Generator {
    /// Parses `name` with optional `g`, `b`, `n`, `m` parameters.
    pub fn parse(
        name: &str,
        g: Option<usize>,
        b: Option<usize>,
        n: Option<usize>,
        m: Option<usize>,
    ) -> Result<Self, GeneratorError> {
        let need = |v: Option<usize>, p| v.ok_or(GeneratorError::MissingParameter(p));
        Ok(match name {
            "markov" => Generator::Markov,
            "qg0" => Generator::Qg0 { g: need(g, "g")? },
            "qgb" => Generator::Qgb { g: need(g, "g")?, b: need(b, "b")? },
            "an" => Generator::An { n: need(n, "n")? },
            "polygon" => Generator::Polygon { m: need(m, "m")? },
            other => match other.strip_prefix("exceptional:") {
                Some(rest) => Generator::Exceptional(rest.parse()?),
                None => return Err(GeneratorError::UnknownName(other.to_string())),
            },
        })
    }

    pub fn quiver(self) -> Result<Quiver, GeneratorError> {
        match self {
            Generator::Markov => Ok(markov_quiver()),
            Generator::Qg0 { g } => qg0_quiver(g),
            Generator::Qgb { g, b: 0 } => qg0_quiver(g),
            Generator::Qgb { g, b } => qgb_quiver(g, b),
            Generator::An { n } => a_n_quiver(n),
            Generator::Polygon { m } => polygon_fan_triangulation(m)?
                .quiver()
                .map_err(|e| GeneratorError::UnsupportedSignature(format!("polygon {m}: {e}"))),
            Generator::Exceptional(name) => Ok(exceptional_quiver(name)),
        }
    }

    /// The triangulation behind the generator, for surface families.
    pub fn triangulation(self) -> Result<Triangulation, GeneratorError> {
        match self {
            Generator::Markov => qg0_triangulation(1),
            Generator::Qg0 { g } => qg0_triangulation(g),
            Generator::Qgb { g, b } => qgb_triangulation(g, b),
            Generator::Polygon { m } => polygon_fan_triangulation(m),
            Generator::An { n } => polygon_fan_triangulation(n + 3),
            Generator::Exceptional(name) => {
                Err(GeneratorError::UnsupportedSignature(format!("{name} does not come from a surface")))
            }
        }
    }
}
