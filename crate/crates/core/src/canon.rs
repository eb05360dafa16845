//! Canonical forms of quivers up to vertex relabeling, and induced
//! subquiver search.
//!
//! The canonical form is found by individualization-refinement: vertices are
//! colored by iterated refinement on the multiset of `(neighbor color,
//! signed multiplicity)` pairs, the smallest non-singleton cell is split by
//! individualizing each of its members in turn, and every discrete leaf
//! yields a relabeled exchange matrix. The row-major lexicographic minimum
//! over all leaves is the canonical matrix. Automorphisms discovered as
//! coinciding leaves prune sibling branches lying in the same orbit.

use std::cmp::Ordering;

use crate::quiver::Quiver;

/// Byte string identifying an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Canonical relabeling of a quiver.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// The relabeled quiver.
    pub quiver: Quiver,
    /// `labeling[v]` is the canonical position of input vertex `v`.
    pub labeling: Vec<usize>,
    pub key: CanonicalKey,
}

pub fn canonical_form(q: &Quiver) -> CanonicalForm {
    let n = q.n();
    let mut search = Search {
        q,
        best: None,
        first: None,
        generators: Vec::new(),
    };
    let colors = refine(q, vec![0; n]);
    search.descend(colors, &mut Vec::new());
    let (labeling, matrix) = search.best.expect("at least one leaf");
    let key = encode_key(n, &matrix);
    CanonicalForm {
        quiver: Quiver::from_raw(n, matrix),
        labeling,
        key,
    }
}

pub fn canonical_key(q: &Quiver) -> CanonicalKey {
    canonical_form(q).key
}

pub fn are_isomorphic(a: &Quiver, b: &Quiver) -> bool {
    a.n() == b.n() && a.arrow_count() == b.arrow_count() && canonical_key(a) == canonical_key(b)
}

fn encode_key(n: usize, matrix: &[i64]) -> CanonicalKey {
    let mut bytes = Vec::with_capacity(4 + n * (n.saturating_sub(1)) / 2 * 8);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for i in 0..n {
        for j in i + 1..n {
            bytes.extend_from_slice(&matrix[i * n + j].to_le_bytes());
        }
    }
    CanonicalKey(bytes)
}

/// Refines a coloring until stable. Colors are renumbered `0..k` in the
/// order of their (old color, neighborhood signature), so the result depends
/// only on the isomorphism type of `(q, colors)`.
fn refine(q: &Quiver, mut colors: Vec<usize>) -> Vec<usize> {
    let n = q.n();
    let mut cells = count_distinct(&colors);
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, i64)>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, i64)> = (0..n)
                    .filter_map(|u| {
                        let e = q.get(v, u);
                        (e != 0).then_some((colors[u], e))
                    })
                    .collect();
                nb.sort_unstable();
                (colors[v], nb, v)
            })
            .collect();
        sigs.sort_unstable_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut next = vec![0; n];
        let mut color = 0;
        for idx in 0..n {
            if idx > 0 && (sigs[idx].0, &sigs[idx].1) != (sigs[idx - 1].0, &sigs[idx - 1].1) {
                color += 1;
            }
            next[sigs[idx].2] = color;
        }
        let new_cells = color + 1;
        colors = next;
        if new_cells == cells {
            return colors;
        }
        cells = new_cells;
    }
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Search<'a> {
    q: &'a Quiver,
    best: Option<(Vec<usize>, Vec<i64>)>,
    first: Option<(Vec<usize>, Vec<i64>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) {
        let n = self.q.n();
        let Some(cell) = target_cell(&colors) else {
            self.leaf(colors);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(path, &explored, v) {
                continue;
            }
            let c = colors[v];
            let split: Vec<usize> = (0..n)
                .map(|u| {
                    let base = 2 * colors[u] + usize::from(colors[u] == c);
                    if u == v { 2 * c } else { base }
                })
                .collect();
            let refined = refine(self.q, split);
            path.push(v);
            self.descend(refined, path);
            path.pop();
            explored.push(v);
        }
    }

    fn leaf(&mut self, labeling: Vec<usize>) {
        let n = self.q.n();
        let mut m = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[labeling[i] * n + labeling[j]] = self.q.get(i, j);
            }
        }
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.1 == m {
                // v -> labeling[v] -> reference^{-1}
                let mut inv = vec![0; n];
                for (v, &p) in reference.0.iter().enumerate() {
                    inv[p] = v;
                }
                let auto: Vec<usize> = labeling.iter().map(|&p| inv[p]).collect();
                if auto.iter().enumerate().any(|(v, &w)| v != w) {
                    self.generators.push(auto);
                }
                return;
            }
        }
        if self.first.is_none() {
            self.first = Some((labeling.clone(), m.clone()));
        }
        let better = match &self.best {
            None => true,
            Some((_, b)) => m.cmp(b) == Ordering::Less,
        };
        if better {
            self.best = Some((labeling, m));
        }
    }

    /// Whether `v` is the image of an explored sibling under the group
    /// generated by known automorphisms fixing `path` pointwise.
    fn same_orbit(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        let n = self.q.n();
        let gens: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|g| path.iter().all(|&p| g[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for g in gens {
            for (x, &y) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == rv)
    }
}

/// Smallest non-singleton cell (lowest color on ties), members ascending.
fn target_cell(colors: &[usize]) -> Option<Vec<usize>> {
    let k = colors.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in colors {
        sizes[c] += 1;
    }
    let (c, _) = sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|(c, &s)| (s, *c))?;
    Some((0..colors.len()).filter(|&v| colors[v] == c).collect())
}

/// Whether `pattern` is isomorphic to a full (induced) subquiver of `host`.
pub fn embeds_as_full_subquiver(pattern: &Quiver, host: &Quiver) -> bool {
    find_full_subquiver(pattern, host).is_some()
}

/// An injective map `pattern vertex -> host vertex` realizing `pattern` as an
/// induced subquiver of `host`, found by backtracking.
pub fn find_full_subquiver(pattern: &Quiver, host: &Quiver) -> Option<Vec<usize>> {
    let (p, h) = (pattern.n(), host.n());
    if p > h {
        return None;
    }
    let order = connected_order(pattern);
    let pdeg = pattern.degree_profile();
    let hdeg = host.degree_profile();
    let mut map = vec![usize::MAX; p];
    let mut used = vec![false; h];
    let ctx = Embed { pattern, host, order: &order, pdeg: &pdeg, hdeg: &hdeg };
    ctx.extend(0, &mut map, &mut used).then_some(map)
}

/// Vertex order in which every vertex after the first of its component has
/// an earlier neighbor.
fn connected_order(q: &Quiver) -> Vec<usize> {
    let n = q.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in q.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

struct Embed<'a> {
    pattern: &'a Quiver,
    host: &'a Quiver,
    order: &'a [usize],
    pdeg: &'a [crate::DegreePair],
    hdeg: &'a [crate::DegreePair],
}

impl Embed<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let anchor = self.order[..depth]
            .iter()
            .copied()
            .find(|&u| self.pattern.get(v, u) != 0);
        let candidates: Vec<usize> = match anchor {
            Some(u) => self.host.neighbors(map[u]).collect(),
            None => (0..self.host.n()).collect(),
        };
        for w in candidates {
            if used[w]
                || self.hdeg[w].in_degree < self.pdeg[v].in_degree
                || self.hdeg[w].out_degree < self.pdeg[v].out_degree
            {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.host.get(w, map[u]) == self.pattern.get(v, u));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, arrows: &[(usize, usize, u64)]) -> Quiver {
        Quiver::from_arrows(n, arrows).unwrap()
    }

    #[test]
    fn relabeling_invariance_small() {
        let markov = q(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]);
        let k = canonical_key(&markov);
        for perm in [[1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2]] {
            assert_eq!(canonical_key(&markov.relabel(&perm).unwrap()), k);
        }
    }

    #[test]
    fn distinguishes_sink_and_source_middles() {
        let sink = q(3, &[(0, 1, 1), (2, 1, 1)]);
        let source = q(3, &[(1, 0, 1), (1, 2, 1)]);
        assert_ne!(canonical_key(&sink), canonical_key(&source));
        assert!(!are_isomorphic(&sink, &source));
        let cycle = q(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let markov = q(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]);
        assert!(!are_isomorphic(&cycle, &markov));
    }

    #[test]
    fn canonical_quiver_is_isomorphic_relabeling() {
        let x = q(5, &[(0, 1, 1), (1, 2, 2), (2, 0, 1), (3, 2, 1), (3, 4, 1)]);
        let cf = canonical_form(&x);
        assert_eq!(x.relabel(&cf.labeling).unwrap(), cf.quiver);
    }

    #[test]
    fn isolated_vertices_are_pruned() {
        // 12! leaves without automorphism pruning
        let x = Quiver::empty(12).unwrap();
        let y = q(12, &[(3, 7, 1)]);
        assert_ne!(canonical_key(&x), canonical_key(&y));
        assert_eq!(canonical_key(&y), canonical_key(&q(12, &[(11, 0, 1)])));
    }

    #[test]
    fn embedding_examples() {
        let markov = q(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]);
        let a1 = Quiver::empty(1).unwrap();
        let a2 = q(2, &[(0, 1, 1)]);
        assert!(embeds_as_full_subquiver(&a1, &markov));
        assert!(!embeds_as_full_subquiver(&a2, &markov));
        let a3 = q(3, &[(0, 1, 1), (1, 2, 1)]);
        let cycle = q(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        assert!(!embeds_as_full_subquiver(&a3, &cycle));
        let host = q(4, &[(3, 2, 1), (2, 0, 1), (0, 1, 1)]);
        let map = find_full_subquiver(&a3, &host).unwrap();
        assert_eq!(host.full_subquiver(&map).unwrap(), a3);
    }
}
