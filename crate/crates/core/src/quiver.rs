//! Loop-free, 2-cycle-free quivers stored as skew-symmetric exchange matrices.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Wire-format tag for serialized quivers.
pub const QUIVER_FORMAT: &str = "quiver-v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("arrow {0} -> {0} would be a loop")]
    LoopForbidden(usize),
    #[error("arrows in both directions between {0} and {1} would form a 2-cycle")]
    TwoCycleForbidden(usize, usize),
    #[error("vertex {index} out of range for a quiver on {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("a quiver needs at least one vertex")]
    NoVertices,
    #[error("arrow multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("vertex {0} listed twice in subset")]
    DuplicateVertex(usize),
    #[error("integer overflow while mutating at vertex {0}")]
    Overflow(usize),
    #[error("expected format {QUIVER_FORMAT:?}, found {0:?}")]
    WrongFormat(String),
    #[error("permutation is not a bijection on {0} vertices")]
    BadPermutation(usize),
}

/// In-degree and out-degree of a vertex, counted with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreePair {
    pub in_degree: u64,
    pub out_degree: u64,
}

impl DegreePair {
    pub fn new(in_degree: u64, out_degree: u64) -> Self {
        Self { in_degree, out_degree }
    }
}

impl fmt::Display for DegreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.in_degree, self.out_degree)
    }
}

/// A quiver without loops or 2-cycles.
///
/// Entry `(i, j)` of the exchange matrix is the number of arrows `i -> j`
/// minus the number of arrows `j -> i`; the matrix is skew-symmetric, so the
/// number of arrows `i -> j` is `max(b[i][j], 0)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuiverWire", into = "QuiverWire")]
pub struct Quiver {
    n: usize,
    b: Vec<i64>,
}

impl Quiver {
    /// Quiver on `n` vertices with no arrows.
    pub fn empty(n: usize) -> Result<Self, QuiverError> {
        if n == 0 {
            return Err(QuiverError::NoVertices);
        }
        Ok(Self { n, b: vec![0; n * n] })
    }

    /// Builds a quiver from `(src, dst, multiplicity)` triples. Repeated
    /// entries for the same ordered pair add up.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, u64)]) -> Result<Self, QuiverError> {
        let mut q = Self::empty(n)?;
        for &(src, dst, mult) in arrows {
            q.check(src)?;
            q.check(dst)?;
            if src == dst {
                return Err(QuiverError::LoopForbidden(src));
            }
            if mult == 0 {
                return Err(QuiverError::ZeroMultiplicity);
            }
            if q.get(src, dst) < 0 {
                return Err(QuiverError::TwoCycleForbidden(src, dst));
            }
            let m = i64::try_from(mult).map_err(|_| QuiverError::Overflow(src))?;
            let v = q.get(src, dst).checked_add(m).ok_or(QuiverError::Overflow(src))?;
            q.set_pair(src, dst, v);
        }
        Ok(q)
    }

    /// Builds a quiver from a full exchange matrix given row by row.
    pub fn from_matrix(rows: &[Vec<i64>]) -> Result<Self, QuiverError> {
        let n = rows.len();
        let mut q = Self::empty(n)?;
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(QuiverError::IndexOutOfRange { index: row.len(), n });
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != 0 {
                return Err(QuiverError::LoopForbidden(i));
            }
            for (j, &v) in row.iter().enumerate() {
                if rows[j][i] != -v {
                    return Err(QuiverError::TwoCycleForbidden(i, j));
                }
                q.b[i * n + j] = v;
            }
        }
        Ok(q)
    }

    pub(crate) fn from_raw(n: usize, b: Vec<i64>) -> Self {
        debug_assert_eq!(b.len(), n * n);
        Self { n, b }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Exchange-matrix entry `b[i][j]`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    /// Number of arrows `i -> j`.
    #[inline]
    pub fn arrows_between(&self, i: usize, j: usize) -> u64 {
        self.get(i, j).max(0) as u64
    }

    fn set_pair(&mut self, i: usize, j: usize, v: i64) {
        self.b[i * self.n + j] = v;
        self.b[j * self.n + i] = -v;
    }

    fn check(&self, k: usize) -> Result<(), QuiverError> {
        if k < self.n {
            Ok(())
        } else {
            Err(QuiverError::IndexOutOfRange { index: k, n: self.n })
        }
    }

    /// Rows of the exchange matrix.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Arrow list `(src, dst, mult)` sorted by `(src, dst)`.
    pub fn arrows(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if v > 0 {
                    out.push((i, j, v as u64));
                }
            }
        }
        out
    }

    /// Total number of arrows, `sum_{i<j} |b[i][j]|`.
    pub fn arrow_count(&self) -> u64 {
        let mut total = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                total += self.get(i, j).unsigned_abs();
            }
        }
        total
    }

    /// Largest `|b[i][j]|` over all pairs.
    pub fn max_multiplicity(&self) -> u64 {
        self.b.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn degrees(&self, k: usize) -> Result<DegreePair, QuiverError> {
        self.check(k)?;
        let mut d = DegreePair::new(0, 0);
        for j in 0..self.n {
            let v = self.get(k, j);
            if v > 0 {
                d.out_degree += v as u64;
            } else {
                d.in_degree += v.unsigned_abs();
            }
        }
        Ok(d)
    }

    pub fn degree_profile(&self) -> Vec<DegreePair> {
        (0..self.n).map(|k| self.degrees(k).expect("in range")).collect()
    }

    /// Fomin–Zelevinsky mutation at `k`.
    ///
    /// `b'[i][j] = -b[i][j]` if `k` is `i` or `j`, otherwise
    /// `b[i][j] + sgn(b[i][k]) * max(b[i][k] * b[k][j], 0)`.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        self.check(k)?;
        let n = self.n;
        let mut b = self.b.clone();
        for i in 0..n {
            let bik = self.get(i, k);
            for j in 0..n {
                let idx = i * n + j;
                if i == k || j == k {
                    b[idx] = -b[idx];
                    continue;
                }
                if bik == 0 {
                    continue;
                }
                let prod = bik.checked_mul(self.get(k, j)).ok_or(QuiverError::Overflow(k))?;
                if prod > 0 {
                    let delta = if bik > 0 { prod } else { -prod };
                    b[idx] = b[idx].checked_add(delta).ok_or(QuiverError::Overflow(k))?;
                }
            }
        }
        Ok(Quiver::from_raw(n, b))
    }

    /// Applies mutations in order.
    pub fn mutate_seq(&self, seq: &[usize]) -> Result<Quiver, QuiverError> {
        let mut q = self.clone();
        for &k in seq {
            q = q.mutate(k)?;
        }
        Ok(q)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Quiver, QuiverError> {
        let n = self.n;
        if perm.len() != n {
            return Err(QuiverError::BadPermutation(n));
        }
        let mut hit = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut hit[p], true) {
                return Err(QuiverError::BadPermutation(n));
            }
        }
        let mut b = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                b[perm[i] * n + perm[j]] = self.get(i, j);
            }
        }
        Ok(Quiver::from_raw(n, b))
    }

    /// The quiver with every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver::from_raw(self.n, self.b.iter().map(|v| -v).collect())
    }

    /// Induced subquiver on `subset`; vertex `subset[t]` becomes `t`.
    pub fn full_subquiver(&self, subset: &[usize]) -> Result<Quiver, QuiverError> {
        if subset.is_empty() {
            return Err(QuiverError::EmptySubset);
        }
        let mut seen = vec![false; self.n];
        for &v in subset {
            self.check(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(QuiverError::DuplicateVertex(v));
            }
        }
        let m = subset.len();
        let mut b = vec![0; m * m];
        for (a, &i) in subset.iter().enumerate() {
            for (c, &j) in subset.iter().enumerate() {
                b[a * m + c] = self.get(i, j);
            }
        }
        Ok(Quiver::from_raw(m, b))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                if !seen[u] && self.get(v, u) != 0 {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Vertices joined to `v` by at least one arrow.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.get(v, u) != 0)
    }

    /// Graphviz rendering with one edge statement per arrow.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  v{v};");
        }
        for (i, j, m) in self.arrows() {
            for _ in 0..m {
                let _ = writeln!(s, "  v{i} -> v{j};");
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quiver serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::Error> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quiver")
            .field("n", &self.n)
            .field("arrows", &self.arrows())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverWire {
    format: String,
    n: usize,
    arrows: Vec<(usize, usize, u64)>,
}

impl TryFrom<QuiverWire> for Quiver {
    type Error = QuiverError;

    fn try_from(w: QuiverWire) -> Result<Self, Self::Error> {
        if w.format != QUIVER_FORMAT {
            return Err(QuiverError::WrongFormat(w.format));
        }
        Quiver::from_arrows(w.n, &w.arrows)
    }
}

impl From<Quiver> for QuiverWire {
    fn from(q: Quiver) -> Self {
        QuiverWire {
            format: QUIVER_FORMAT.to_string(),
            n: q.n,
            arrows: q.arrows(),
        }
    }
}
