//! Triangulated marked surfaces without self-folded triangles.
//!
//! A triangulation is a list of triangles, each a cyclic triple of edge ids
//! listed counterclockwise. Every arc occurs in exactly two triangle slots and
//! every boundary segment in exactly one. Since the surface is oriented, the
//! two sides carrying the same arc are glued orientation-reversingly, so the
//! marked points are determined by the triples alone: corner `s` of a
//! triangle is the start point of its side `s`.
//!
//! The quiver of a triangulation has one vertex per arc (in increasing id
//! order) and, for each triangle, an arrow from every arc side to the next
//! arc side in counterclockwise order; opposite arrows cancel. Reversing the
//! convention yields the opposite quiver, which has the same arrow counts and
//! swaps in- and out-degrees.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::Quiver;

pub const TRIANGULATION_FORMAT: &str = "tri-v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("edge {0} does not exist")]
    EdgeNotFound(usize),
    #[error("triangle {0} does not exist")]
    TriangleNotFound(usize),
    #[error("edge {0} is a boundary segment, not an arc")]
    NotAnArc(usize),
    #[error("{kind:?} {id} occurs {found} times in the triangles")]
    ArcMultiplicityError { id: usize, kind: EdgeKind, found: usize },
    #[error("triangle {0} is self-folded")]
    SelfFoldedForbidden(usize),
    #[error("flipping arc {0} would create a self-folded triangle")]
    FlipCreatesSelfFolded(usize),
    #[error("Euler characteristic {computed} does not match the declared surface ({expected})")]
    EulerMismatch { expected: i64, computed: i64 },
    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch { what: &'static str, expected: String, found: String },
    #[error("boundary segments do not close up into circles at marked point {0}")]
    MalformedBoundary(usize),
    #[error("invalid marked surface: {0}")]
    InvalidSurface(String),
    #[error("edge ids must be 0..{0} without gaps")]
    NonContiguousIds(usize),
    #[error("triangle {0} must have exactly one boundary side")]
    SpadeViolated(usize),
    #[error("arc {arc} looks like case {label} but {detail}")]
    CaseConstraintViolated { arc: usize, label: CaseLabel, detail: String },
    #[error("neighborhood of arc {0} matches no tabulated case")]
    UnclassifiedNeighborhood(usize),
    #[error("triangulation has no arcs, so its quiver is empty")]
    NoArcs,
    #[error("expected format {TRIANGULATION_FORMAT:?}, found {0:?}")]
    WrongFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Arc,
    Boundary,
}

/// Discrete data of a marked surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedSurface {
    pub genus: u32,
    #[serde(rename = "boundary")]
    pub boundary_components: u32,
    pub punctures: u32,
    /// Marked points on each boundary component.
    #[serde(rename = "marked")]
    pub marked_on_boundary: Vec<u32>,
}

impl MarkedSurface {
    pub fn new(genus: u32, punctures: u32, marked_on_boundary: Vec<u32>) -> Result<Self, SurfaceError> {
        let s = Self {
            genus,
            boundary_components: marked_on_boundary.len() as u32,
            punctures,
            marked_on_boundary,
        };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), SurfaceError> {
        if self.marked_on_boundary.len() != self.boundary_components as usize {
            return Err(SurfaceError::InvalidSurface(format!(
                "{} boundary components but {} marked-point counts",
                self.boundary_components,
                self.marked_on_boundary.len()
            )));
        }
        if self.marked_on_boundary.contains(&0) {
            return Err(SurfaceError::InvalidSurface("a boundary component has no marked point".into()));
        }
        if self.arc_count() < 0 {
            return Err(SurfaceError::InvalidSurface("surface admits no triangulation".into()));
        }
        Ok(())
    }

    /// Number of arcs in any triangulation, `6g + 3b + 3p + sum(c) - 6`.
    pub fn arc_count(&self) -> i64 {
        6 * i64::from(self.genus) + 3 * i64::from(self.boundary_components) + 3 * i64::from(self.punctures)
            + self.marked_on_boundary.iter().map(|&c| i64::from(c)).sum::<i64>()
            - 6
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.boundary_components)
    }
}

/// Counts computed from the triangle data alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceStats {
    pub genus: u32,
    pub boundary_components: u32,
    pub punctures: u32,
    /// Marked points per boundary component, ascending.
    pub marked_on_boundary: Vec<u32>,
    pub marked_points: usize,
    pub arcs: usize,
    pub boundary_segments: usize,
    pub triangles: usize,
    pub euler_characteristic: i64,
}

/// Neighborhood case of an arc, as in the tables of arc neighborhoods.
///
/// `Isolated` is the square: all four sides of the quadrilateral around the
/// arc are boundary segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "0")]
    Isolated,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2a")]
    TwoA,
    #[serde(rename = "2b")]
    TwoB,
    #[serde(rename = "2c")]
    TwoC,
    #[serde(rename = "3a")]
    ThreeA,
    #[serde(rename = "3b")]
    ThreeB,
    #[serde(rename = "4a")]
    FourA,
    #[serde(rename = "4b")]
    FourB,
    #[serde(rename = "4c")]
    FourC,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Isolated => "0",
            CaseLabel::One => "1",
            CaseLabel::TwoA => "2a",
            CaseLabel::TwoB => "2b",
            CaseLabel::TwoC => "2c",
            CaseLabel::ThreeA => "3a",
            CaseLabel::ThreeB => "3b",
            CaseLabel::FourA => "4a",
            CaseLabel::FourB => "4b",
            CaseLabel::FourC => "4c",
        }
    }

    /// Whether at least one side of the quadrilateral is a boundary segment.
    pub fn has_boundary_side(self) -> bool {
        !matches!(self, CaseLabel::FourA | CaseLabel::FourB | CaseLabel::FourC)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TriangulationWire", into = "TriangulationWire")]
pub struct Triangulation {
    surface: MarkedSurface,
    edges: Vec<EdgeKind>,
    triangles: Vec<[usize; 3]>,
}

fn normalize(t: [usize; 3]) -> [usize; 3] {
    let r = (0..3).min_by_key(|&i| t[i]).expect("three sides");
    [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
}

fn rotate_to(t: [usize; 3], e: usize) -> [usize; 3] {
    let r = t.iter().position(|&x| x == e).expect("edge in triangle");
    [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A side of the quadrilateral around an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Boundary,
    Arc(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    /// The arc runs between the two corners where `i'` meets `j'` and `i''`
    /// meets `j''` do not lie.
    Before,
    /// The flipped position of the same neighborhood.
    After,
}

enum Cmp {
    Eq(u64),
    AtLeast(u64),
}

impl Triangulation {
    /// Builds and validates a triangulation. Triples are rotated to start
    /// with their smallest edge id.
    pub fn new(
        surface: MarkedSurface,
        edges: Vec<EdgeKind>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, SurfaceError> {
        let t = Self {
            surface,
            edges,
            triangles: triangles.into_iter().map(normalize).collect(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn surface(&self) -> &MarkedSurface {
        &self.surface
    }

    pub fn edges(&self) -> &[EdgeKind] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edge_kind(&self, id: usize) -> Result<EdgeKind, SurfaceError> {
        self.edges.get(id).copied().ok_or(SurfaceError::EdgeNotFound(id))
    }

    pub fn is_arc(&self, id: usize) -> bool {
        self.edges.get(id) == Some(&EdgeKind::Arc)
    }

    /// Arc ids in increasing order; position `v` is quiver vertex `v`.
    pub fn arcs(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.is_arc(e)).collect()
    }

    /// Quiver vertex of an arc.
    pub fn arc_vertex(&self, id: usize) -> Result<usize, SurfaceError> {
        match self.edge_kind(id)? {
            EdgeKind::Arc => Ok(self.edges[..id].iter().filter(|&&k| k == EdgeKind::Arc).count()),
            EdgeKind::Boundary => Err(SurfaceError::NotAnArc(id)),
        }
    }

    /// Triangle slots `(triangle, position)` holding edge `id`.
    fn occurrences(&self, id: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2);
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, &e) in tri.iter().enumerate() {
                if e == id {
                    out.push((t, s));
                }
            }
        }
        out
    }

    /// Marked point at each triangle corner; corner `s` is the start point
    /// of side `s`. Points are numbered in order of first appearance.
    pub fn corner_points(&self) -> Vec<[usize; 3]> {
        let mut uf = UnionFind::new(3 * self.triangles.len());
        let mut first: Vec<Option<(usize, usize)>> = vec![None; self.edges.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, &e) in tri.iter().enumerate() {
                if self.edges.get(e) != Some(&EdgeKind::Arc) {
                    continue;
                }
                match first[e] {
                    None => first[e] = Some((t, s)),
                    Some((t0, s0)) => {
                        // start of one side is the end of the other
                        uf.union(3 * t0 + s0, 3 * t + (s + 1) % 3);
                        uf.union(3 * t0 + (s0 + 1) % 3, 3 * t + s);
                    }
                }
            }
        }
        let mut ids = BTreeMap::new();
        let mut out = Vec::with_capacity(self.triangles.len());
        for t in 0..self.triangles.len() {
            let mut c = [0; 3];
            for (s, slot) in c.iter_mut().enumerate() {
                let root = uf.find(3 * t + s);
                let next = ids.len();
                *slot = *ids.entry(root).or_insert(next);
            }
            out.push(c);
        }
        out
    }

    /// Boundary components as cyclic lists of boundary-segment ids.
    fn boundary_cycles(&self, corners: &[[usize; 3]]) -> Result<Vec<Vec<usize>>, SurfaceError> {
        let mut out_seg: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut in_points = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, &e) in tri.iter().enumerate() {
                if self.edges[e] == EdgeKind::Boundary {
                    let (from, to) = (corners[t][s], corners[t][(s + 1) % 3]);
                    if out_seg.insert(from, (e, to)).is_some() {
                        return Err(SurfaceError::MalformedBoundary(from));
                    }
                    if in_points.insert(to, e).is_some() {
                        return Err(SurfaceError::MalformedBoundary(to));
                    }
                }
            }
        }
        if let Some(p) = out_seg.keys().find(|p| !in_points.contains_key(*p)) {
            return Err(SurfaceError::MalformedBoundary(*p));
        }
        let mut visited = BTreeMap::new();
        let mut cycles = Vec::new();
        for &start in out_seg.keys() {
            if visited.contains_key(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while visited.insert(p, ()).is_none() {
                let (e, to) = out_seg[&p];
                cycle.push(e);
                p = to;
            }
            cycles.push(cycle);
        }
        Ok(cycles)
    }

    /// Checks every invariant and returns the computed surface data.
    pub fn validate(&self) -> Result<SurfaceStats, SurfaceError> {
        self.surface.check()?;
        let stats = self.compute_stats()?;
        let expected = self.surface.euler_characteristic();
        if stats.euler_characteristic != expected {
            return Err(SurfaceError::EulerMismatch { expected, computed: stats.euler_characteristic });
        }
        let mut declared = self.surface.marked_on_boundary.clone();
        declared.sort_unstable();
        let checks: [(&'static str, String, String); 5] = [
            ("genus", self.surface.genus.to_string(), stats.genus.to_string()),
            (
                "boundary components",
                self.surface.boundary_components.to_string(),
                stats.boundary_components.to_string(),
            ),
            ("punctures", self.surface.punctures.to_string(), stats.punctures.to_string()),
            ("marked points per boundary component", format!("{declared:?}"), format!("{:?}", stats.marked_on_boundary)),
            ("arcs", self.surface.arc_count().to_string(), stats.arcs.to_string()),
        ];
        for (what, expected, found) in checks {
            if expected != found {
                return Err(SurfaceError::CountMismatch { what, expected, found });
            }
        }
        Ok(stats)
    }

    /// Builds a triangulation whose declared surface is read off the
    /// triangles themselves.
    pub fn from_triangles(edges: Vec<EdgeKind>, triangles: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        let mut t = Self {
            surface: MarkedSurface { genus: 0, boundary_components: 0, punctures: 0, marked_on_boundary: vec![] },
            edges,
            triangles: triangles.into_iter().map(normalize).collect(),
        };
        let stats = t.compute_stats()?;
        t.surface = MarkedSurface::new(stats.genus, stats.punctures, stats.marked_on_boundary)?;
        t.validate()?;
        Ok(t)
    }

    /// Surface data computed from the triangles, ignoring the declared surface.
    pub fn compute_stats(&self) -> Result<SurfaceStats, SurfaceError> {
        if self.triangles.is_empty() {
            return Err(SurfaceError::InvalidSurface("no triangles".into()));
        }
        let mut seen = vec![0usize; self.edges.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &e in tri {
                *seen.get_mut(e).ok_or(SurfaceError::EdgeNotFound(e))? += 1;
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(SurfaceError::SelfFoldedForbidden(t));
            }
        }
        for (id, (&kind, &found)) in self.edges.iter().zip(&seen).enumerate() {
            let want = match kind {
                EdgeKind::Arc => 2,
                EdgeKind::Boundary => 1,
            };
            if found != want {
                return Err(SurfaceError::ArcMultiplicityError { id, kind, found });
            }
        }
        let corners = self.corner_points();
        let marked_points = corners.iter().flatten().max().map_or(0, |m| m + 1);
        let cycles = self.boundary_cycles(&corners)?;
        let arcs = self.edges.iter().filter(|&&k| k == EdgeKind::Arc).count();
        let boundary_segments = self.edges.len() - arcs;
        let triangles = self.triangles.len();
        let euler = marked_points as i64 - self.edges.len() as i64 + triangles as i64;
        let b = cycles.len() as i64;
        if (2 - b - euler) % 2 != 0 || 2 - b - euler < 0 {
            return Err(SurfaceError::InvalidSurface(format!(
                "Euler characteristic {euler} with {b} boundary components is not a surface"
            )));
        }
        if !self.is_connected() {
            return Err(SurfaceError::InvalidSurface("triangles form more than one component".into()));
        }
        let mut marked: Vec<u32> = cycles.iter().map(|c| c.len() as u32).collect();
        marked.sort_unstable();
        let stats = SurfaceStats {
            genus: ((2 - b - euler) / 2) as u32,
            boundary_components: b as u32,
            punctures: (marked_points - boundary_segments) as u32,
            marked_on_boundary: marked,
            marked_points,
            arcs,
            boundary_segments,
            triangles,
            euler_characteristic: euler,
        };
        Ok(stats)
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.triangles.len());
        let mut first = vec![None; self.edges.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &e in tri {
                match first[e] {
                    None => first[e] = Some(t),
                    Some(t0) => uf.union(t0, t),
                }
            }
        }
        (0..self.triangles.len()).all(|t| uf.find(t) == 0)
    }

    /// The quiver of the triangulation.
    pub fn quiver(&self) -> Result<Quiver, SurfaceError> {
        let mut vertex = vec![usize::MAX; self.edges.len()];
        let mut n = 0;
        for (e, &kind) in self.edges.iter().enumerate() {
            if kind == EdgeKind::Arc {
                vertex[e] = n;
                n += 1;
            }
        }
        if n == 0 {
            return Err(SurfaceError::NoArcs);
        }
        let mut b = vec![0i64; n * n];
        for tri in &self.triangles {
            for s in 0..3 {
                let (x, y) = (tri[s], tri[(s + 1) % 3]);
                if self.is_arc(x) && self.is_arc(y) {
                    b[vertex[x] * n + vertex[y]] += 1;
                    b[vertex[y] * n + vertex[x]] -= 1;
                }
            }
        }
        Ok(Quiver::from_raw(n, b))
    }

    fn require_arc(&self, id: usize) -> Result<(), SurfaceError> {
        match self.edge_kind(id)? {
            EdgeKind::Arc => Ok(()),
            EdgeKind::Boundary => Err(SurfaceError::NotAnArc(id)),
        }
    }

    /// The two triangles containing arc `k`, each rotated to start with `k`.
    fn around(&self, k: usize) -> Result<((usize, [usize; 3]), (usize, [usize; 3])), SurfaceError> {
        self.require_arc(k)?;
        let occ = self.occurrences(k);
        let [(t1, _), (t2, _)] = occ[..] else {
            return Err(SurfaceError::ArcMultiplicityError { id: k, kind: EdgeKind::Arc, found: occ.len() });
        };
        Ok((
            (t1, rotate_to(self.triangles[t1], k)),
            (t2, rotate_to(self.triangles[t2], k)),
        ))
    }

    /// Flip of arc `k`; the new diagonal keeps id `k`.
    ///
    /// With triangles `(k, a, b)` and `(k, c, d)` the result has
    /// `(k, b, c)` and `(k, d, a)`.
    pub fn flip(&self, k: usize) -> Result<Triangulation, SurfaceError> {
        let ((t1, [_, a, b]), (t2, [_, c, d])) = self.around(k)?;
        if b == c || d == a {
            return Err(SurfaceError::FlipCreatesSelfFolded(k));
        }
        let mut triangles = self.triangles.clone();
        triangles[t1] = normalize([k, b, c]);
        triangles[t2] = normalize([k, d, a]);
        Triangulation::new(self.surface.clone(), self.edges.clone(), triangles)
    }

    /// Sorted list of normalized triangles.
    pub fn triangle_multiset(&self) -> Vec<[usize; 3]> {
        let mut v = self.triangles.clone();
        v.sort_unstable();
        v
    }

    fn side(&self, e: usize) -> Side {
        match self.edges[e] {
            EdgeKind::Arc => Side::Arc(e),
            EdgeKind::Boundary => Side::Boundary,
        }
    }

    /// Neighborhood case of arc `k`, after checking the arrow constraints
    /// that the case imposes on the quiver.
    pub fn classify_arc(&self, k: usize) -> Result<CaseLabel, SurfaceError> {
        let ((_, [_, a, b]), (_, [_, c, d])) = self.around(k)?;
        let [a, b, c, d] = [a, b, c, d].map(|e| self.side(e));
        // (i', j', i'', j'') for the arc in its current and in its flipped
        // position, each also read with the two triangles swapped
        let readings = [
            (Column::Before, [a, b, c, d]),
            (Column::Before, [c, d, a, b]),
            (Column::After, [d, a, b, c]),
            (Column::After, [b, c, d, a]),
        ];
        let q = self.quiver()?;
        for (column, sides) in readings {
            if let Some((label, constraints)) = match_case(column, sides, k) {
                self.check_constraints(&q, k, label, &constraints)?;
                return Ok(label);
            }
        }
        Err(SurfaceError::UnclassifiedNeighborhood(k))
    }

    fn check_constraints(
        &self,
        q: &Quiver,
        k: usize,
        label: CaseLabel,
        constraints: &[(usize, usize, Cmp)],
    ) -> Result<(), SurfaceError> {
        for (x, y, cmp) in constraints {
            // constraints are stated for arrows running from a side to its
            // clockwise neighbor, i.e. for the opposite quiver
            let found = q.arrows_between(self.arc_vertex(*y)?, self.arc_vertex(*x)?);
            let ok = match cmp {
                Cmp::Eq(v) => found == *v,
                Cmp::AtLeast(v) => found >= *v,
            };
            if !ok {
                let want = match cmp {
                    Cmp::Eq(v) => format!("= {v}"),
                    Cmp::AtLeast(v) => format!(">= {v}"),
                };
                return Err(SurfaceError::CaseConstraintViolated {
                    arc: k,
                    label,
                    detail: format!("a({x},{y}) = {found}, expected {want}"),
                });
            }
        }
        if label == CaseLabel::Isolated {
            let d = q.degrees(self.arc_vertex(k)?).expect("vertex in range");
            if d.in_degree + d.out_degree != 0 {
                return Err(SurfaceError::CaseConstraintViolated {
                    arc: k,
                    label,
                    detail: format!("arc has degrees {d}"),
                });
            }
        }
        Ok(())
    }

    /// First triangle with exactly one boundary-segment side.
    pub fn has_spade_triangle(&self) -> Option<usize> {
        self.triangles
            .iter()
            .position(|tri| tri.iter().filter(|&&e| self.edges[e] == EdgeKind::Boundary).count() == 1)
    }

    /// Adds a puncture on arc `gamma`: the arc is replaced by two parallel
    /// copies bounding a digon around the new puncture, which is joined to
    /// both endpoints. Returns the new triangulation and the arc from the
    /// first endpoint to the puncture, whose quiver vertex has degrees (1,1).
    pub fn add_puncture_on_arc(&self, gamma: usize) -> Result<(Triangulation, usize), SurfaceError> {
        let ((_, _), (t2, [_, x2, y2])) = self.around(gamma)?;
        let base = self.edges.len();
        let (lower, to_puncture, upper, from_puncture) = (gamma, base, base + 1, base + 2);
        let mut edges = self.edges.clone();
        edges.extend([EdgeKind::Arc; 3]);
        let mut triangles = self.triangles.clone();
        triangles[t2] = [upper, x2, y2];
        triangles.push([lower, to_puncture, from_puncture]);
        triangles.push([upper, from_puncture, to_puncture]);
        let mut surface = self.surface.clone();
        surface.punctures += 1;
        Ok((Triangulation::new(surface, edges, triangles)?, to_puncture))
    }

    /// Adds a marked point on the boundary side of triangle `tri`, which must
    /// have exactly one boundary side, and joins it to the opposite corner.
    /// Returns the new triangulation and the new arc, whose quiver vertex has
    /// degrees (1,1).
    pub fn add_boundary_marked_point(&self, tri: usize) -> Result<(Triangulation, usize), SurfaceError> {
        let t = *self.triangles.get(tri).ok_or(SurfaceError::TriangleNotFound(tri))?;
        let bsides: Vec<usize> = t.iter().copied().filter(|&e| self.edges[e] == EdgeKind::Boundary).collect();
        if bsides.len() != 1 || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(SurfaceError::SpadeViolated(tri));
        }
        let [seg, p, q] = rotate_to(t, bsides[0]);
        let corners = self.corner_points();
        let cycles = self.boundary_cycles(&corners)?;
        let grown = cycles.iter().find(|c| c.contains(&seg)).map_or(0, Vec::len) as u32;
        let base = self.edges.len();
        let (seg_far, spoke) = (base, base + 1);
        let mut edges = self.edges.clone();
        edges.extend([EdgeKind::Boundary, EdgeKind::Arc]);
        let mut triangles = self.triangles.clone();
        triangles[tri] = [seg, spoke, q];
        triangles.push([seg_far, p, spoke]);
        let mut surface = self.surface.clone();
        let slot = surface
            .marked_on_boundary
            .iter()
            .position(|&m| m == grown)
            .ok_or_else(|| SurfaceError::InvalidSurface("declared boundary does not match triangles".into()))?;
        surface.marked_on_boundary[slot] += 1;
        Ok((Triangulation::new(surface, edges, triangles)?, spoke))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("triangulation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::Error> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Matches a quadrilateral reading `(i', j', i'', j'')` against the table
/// rows, returning the label and the arrow constraints as
/// `(from, to, comparison)` on edge ids.
fn match_case(column: Column, sides: [Side; 4], k: usize) -> Option<(CaseLabel, Vec<(usize, usize, Cmp)>)> {
    use Side::{Arc, Boundary};
    use Cmp::{AtLeast, Eq};
    let before = column == Column::Before;
    // arrows between k and an "i" side, and between k and a "j" side
    let ik = |i: usize, m: u64| if before { (i, k, Eq(m)) } else { (k, i, Eq(m)) };
    let kj = |j: usize, m: u64| if before { (k, j, Eq(m)) } else { (j, k, Eq(m)) };
    let out = match sides {
        [Boundary, Boundary, Boundary, Boundary] => (CaseLabel::Isolated, vec![]),
        [Arc(i), Boundary, Boundary, Boundary] => (CaseLabel::One, vec![ik(i, 1)]),
        [Arc(i1), Boundary, Arc(i2), Boundary] if i1 == i2 => (CaseLabel::TwoA, vec![ik(i1, 2)]),
        [Arc(i1), Boundary, Arc(i2), Boundary] => (CaseLabel::TwoB, vec![ik(i1, 1), ik(i2, 1)]),
        [Arc(i), Arc(j), Boundary, Boundary] => {
            let tail = if before { (j, i, AtLeast(1)) } else { (i, j, Eq(0)) };
            (CaseLabel::TwoC, vec![ik(i, 1), kj(j, 1), tail])
        }
        [Arc(i1), Arc(j), Arc(i2), Boundary] if i1 == i2 => {
            let tail = if before { (j, i1, Eq(1)) } else { (i1, j, Eq(1)) };
            (CaseLabel::ThreeA, vec![ik(i1, 2), kj(j, 1), tail])
        }
        [Arc(i1), Arc(j), Arc(i2), Boundary] if i2 != j => {
            let tails = if before {
                [(j, i1, AtLeast(1)), (j, i2, Eq(0))]
            } else {
                [(i1, j, Eq(0)), (i2, j, AtLeast(1))]
            };
            let mut c = vec![ik(i1, 1), ik(i2, 1), kj(j, 1)];
            c.extend(tails);
            (CaseLabel::ThreeB, c)
        }
        [Arc(i1), Arc(j1), Arc(i2), Arc(j2)] if i1 == i2 && j1 == j2 => {
            let tail = if before { (j1, i1, Eq(2)) } else { (i1, j1, Eq(2)) };
            (CaseLabel::FourA, vec![ik(i1, 2), kj(j1, 2), tail])
        }
        [Arc(i1), Arc(j1), Arc(i2), Arc(j2)] if j1 == j2 && i1 != i2 => {
            let tails = if before {
                [(j1, i1, Eq(1)), (j1, i2, Eq(1))]
            } else {
                [(i1, j1, Eq(1)), (i2, j1, Eq(1))]
            };
            let mut c = vec![ik(i1, 1), ik(i2, 1), kj(j1, 2)];
            c.extend(tails);
            (CaseLabel::FourB, c)
        }
        [Arc(i1), Arc(j1), Arc(i2), Arc(j2)] if i1 != i2 && j1 != j2 && i1 != j2 && i2 != j1 => {
            let tails = if before {
                [(j1, i1, AtLeast(1)), (j2, i2, AtLeast(1)), (j1, i2, Eq(0)), (j2, i1, Eq(0))]
            } else {
                [(i1, j2, AtLeast(1)), (i2, j1, AtLeast(1)), (i1, j1, Eq(0)), (i2, j2, Eq(0))]
            };
            let mut c = vec![ik(i1, 1), ik(i2, 1), kj(j1, 1), kj(j2, 1)];
            c.extend(tails);
            (CaseLabel::FourC, c)
        }
        _ => return None,
    };
    Some(out)
}

#[derive(Serialize, Deserialize)]
struct EdgeWire {
    id: usize,
    kind: EdgeKind,
}

#[derive(Serialize, Deserialize)]
struct TriangulationWire {
    format: String,
    surface: MarkedSurface,
    edges: Vec<EdgeWire>,
    triangles: Vec<[usize; 3]>,
}

impl TryFrom<TriangulationWire> for Triangulation {
    type Error = SurfaceError;

    fn try_from(mut w: TriangulationWire) -> Result<Self, SurfaceError> {
        if w.format != TRIANGULATION_FORMAT {
            return Err(SurfaceError::WrongFormat(w.format));
        }
        w.edges.sort_by_key(|e| e.id);
        if w.edges.iter().enumerate().any(|(i, e)| e.id != i) {
            return Err(SurfaceError::NonContiguousIds(w.edges.len()));
        }
        Triangulation::new(w.surface, w.edges.into_iter().map(|e| e.kind).collect(), w.triangles)
    }
}

impl From<Triangulation> for TriangulationWire {
    fn from(t: Triangulation) -> Self {
        TriangulationWire {
            format: TRIANGULATION_FORMAT.to_string(),
            surface: t.surface,
            edges: t.edges.into_iter().enumerate().map(|(id, kind)| EdgeWire { id, kind }).collect(),
            triangles: t.triangles,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Square with diagonal 0 and boundary 1..=4.
    fn square() -> Triangulation {
        let mut edges = vec![EdgeKind::Arc];
        edges.extend([EdgeKind::Boundary; 4]);
        Triangulation::new(MarkedSurface::new(0, 0, vec![4]).unwrap(), edges, vec![[1, 2, 0], [0, 3, 4]]).unwrap()
    }

    #[test]
    fn square_stats_and_flip() {
        let t = square();
        let s = t.validate().unwrap();
        assert_eq!((s.arcs, s.triangles, s.boundary_segments, s.marked_points), (1, 2, 4, 4));
        assert_eq!(s.euler_characteristic, 1);
        let f = t.flip(0).unwrap();
        assert_ne!(f.triangle_multiset(), t.triangle_multiset());
        assert_eq!(f.flip(0).unwrap().triangle_multiset(), t.triangle_multiset());
        assert_eq!(f.quiver().unwrap(), Quiver::empty(1).unwrap());
        assert_eq!(t.classify_arc(0).unwrap(), CaseLabel::Isolated);
        assert_eq!(t.flip(1), Err(SurfaceError::NotAnArc(1)));
        assert_eq!(t.flip(9), Err(SurfaceError::EdgeNotFound(9)));
    }

    #[test]
    fn invariant_violations() {
        let s = MarkedSurface::new(0, 0, vec![4]).unwrap();
        let mut edges = vec![EdgeKind::Arc];
        edges.extend([EdgeKind::Boundary; 4]);
        assert!(matches!(
            Triangulation::new(s.clone(), edges.clone(), vec![[1, 2, 0], [3, 3, 4]]),
            Err(SurfaceError::SelfFoldedForbidden(1))
        ));
        assert!(matches!(
            Triangulation::new(s.clone(), edges.clone(), vec![[1, 2, 0], [1, 3, 4]]),
            Err(SurfaceError::ArcMultiplicityError { .. })
        ));
        let wrong = MarkedSurface::new(0, 0, vec![5]).unwrap();
        assert!(Triangulation::new(wrong, edges.clone(), vec![[1, 2, 0], [0, 3, 4]]).is_err());
        let genus = MarkedSurface::new(1, 0, vec![4]).unwrap();
        assert!(matches!(
            Triangulation::new(genus, edges, vec![[1, 2, 0], [0, 3, 4]]),
            Err(SurfaceError::EulerMismatch { .. })
        ));
        assert!(MarkedSurface::new(0, 0, vec![0]).is_err());
    }

    #[test]
    fn json_round_trip_normalizes() {
        let t = square();
        let text = t.to_json();
        assert!(text.starts_with(r#"{"format":"tri-v1","surface":{"genus":0,"boundary":1,"punctures":0,"marked":[4]}"#));
        assert!(text.contains(r#""triangles":[[0,1,2],[0,3,4]]"#));
        assert_eq!(Triangulation::from_json(&text).unwrap(), t);
        let bad = text.replace("tri-v1", "tri-v0");
        assert!(Triangulation::from_json(&bad).is_err());
    }

    #[test]
    fn spade_on_square_is_absent() {
        assert_eq!(square().has_spade_triangle(), None);
        assert_eq!(square().add_boundary_marked_point(0), Err(SurfaceError::SpadeViolated(0)));
    }
}
