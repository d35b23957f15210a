//! Uniform hypergraphs with incidence indexes.
//!
//! Probabilities over vertices are always taken with respect to normalized
//! counting measure.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// A simple `u`-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored flat, each block sorted ascending; the incidence index is
/// kept in CSR form with every vertex's edge list sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    u: usize,
    n: usize,
    edges: Vec<usize>,
    inc_offsets: Vec<usize>,
    inc: Vec<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge and validating every invariant.
    pub fn new(u: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut flat = Vec::with_capacity(edges.len() * u);
        for (i, e) in edges.iter().enumerate() {
            if e.len() != u {
                return Err(Error::Malformed(format!("edge {i} has {} vertices, expected {u}", e.len())));
            }
            flat.extend_from_slice(e);
        }
        Self::from_flat(u, n, flat)
    }

    /// Builds a hypergraph from a flat list of `m * u` vertex ids.
    pub fn from_flat(u: usize, n: usize, mut flat: Vec<usize>) -> Result<Self> {
        if u == 0 {
            return Err(Error::InvalidParameter("uniformity must be positive".into()));
        }
        if !flat.len().is_multiple_of(u) {
            return Err(Error::Malformed(format!("{} vertex ids do not split into edges of size {u}", flat.len())));
        }
        for (i, e) in flat.chunks_mut(u).enumerate() {
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::Malformed(format!("edge {i} uses vertex {v} >= n = {n}")));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Malformed(format!("edge {i} repeats a vertex")));
            }
        }
        let m = flat.len() / u;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_unstable_by(|&a, &b| flat[a * u..(a + 1) * u].cmp(&flat[b * u..(b + 1) * u]));
        for w in order.windows(2) {
            if flat[w[0] * u..(w[0] + 1) * u] == flat[w[1] * u..(w[1] + 1) * u] {
                return Err(Error::Malformed(format!("edges {} and {} coincide", w[0].min(w[1]), w[0].max(w[1]))));
            }
        }
        Ok(Self::assemble(u, n, flat))
    }

    /// The hypergraph with `n` vertices and no edges.
    pub fn empty(u: usize, n: usize) -> Result<Self> {
        Self::from_flat(u, n, Vec::new())
    }

    /// Builds the incidence index; the caller guarantees the edge invariants.
    pub(crate) fn assemble(u: usize, n: usize, edges: Vec<usize>) -> Self {
        let mut inc_offsets = vec![0usize; n + 1];
        for &v in &edges {
            inc_offsets[v + 1] += 1;
        }
        for i in 0..n {
            inc_offsets[i + 1] += inc_offsets[i];
        }
        let mut fill = inc_offsets.clone();
        let mut inc = vec![0usize; edges.len()];
        for (e, block) in edges.chunks(u).enumerate() {
            for &v in block {
                inc[fill[v]] = e;
                fill[v] += 1;
            }
        }
        Hypergraph { u, n, edges, inc_offsets, inc }
    }

    pub fn uniformity(&self) -> usize {
        self.u
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.u
    }

    /// Sorted vertices of edge `e`. Panics if `e` is out of range.
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e * self.u..(e + 1) * self.u]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks(self.u)
    }

    /// Sorted ids of the edges containing `v`. Panics if `v` is out of range.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.inc[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.incident(v).len())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.incident(v).len()).max().unwrap_or(0)
    }

    /// Mean vertex degree, `u * m / n` (zero when `n = 0`).
    pub fn mean_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.edges.len() as f64 / self.n as f64
        }
    }

    /// Number of edges containing both `v` and `w`.
    pub fn codegree(&self, v: usize, w: usize) -> Result<usize> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        if v == w {
            return Err(Error::SameVertex(v));
        }
        let (a, b) = (self.incident(v), self.incident(w));
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }

    /// Vertices sharing at least one edge with `v`, excluding `v` itself.
    /// May repeat a vertex when codegrees exceed one.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident(v).iter().flat_map(move |&e| self.edge(e).iter().copied()).filter(move |&w| w != v)
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        let mut comps = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            comps += 1;
            seen[s] = true;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        comps
    }

    /// True when the hypergraph has no Berge cycle at all, i.e. its
    /// vertex-edge incidence graph is a forest.
    pub fn is_berge_acyclic(&self) -> bool {
        let m = self.edge_count();
        self.u * m + self.component_count() == self.n + m
    }

    /// Berge girth, searching cycles of length at most `cap`.
    pub fn girth(&self, cap: usize) -> Girth {
        if self.is_berge_acyclic() {
            return Girth::Acyclic;
        }
        let mut search = CycleSearch::new(self);
        let mut best = cap.saturating_add(1);
        for v in 0..self.n {
            if best <= 2 {
                break;
            }
            if let Some(len) = search.shortest_through(self, v, best - 1) {
                best = len;
            }
        }
        if best <= cap {
            Girth::Cycle(best)
        } else {
            Girth::NoneUpTo(cap)
        }
    }

    /// For every vertex, the length of the shortest Berge cycle through it,
    /// if that length is at most `cap`.
    pub fn shortest_cycles_through(&self, cap: usize) -> Vec<Option<usize>> {
        let mut search = CycleSearch::new(self);
        (0..self.n).map(|v| search.shortest_through(self, v, cap)).collect()
    }

    /// Degree and codegree violation report for the tolerance `delta` and the
    /// target degree `target`.
    pub fn goodness(&self, delta: f64, target: f64) -> Result<GoodnessReport> {
        goodness_masked(self, None, None, delta, target)
    }

    /// Proper edge colouring with at most `u*d - u + 1` colours, `d` the
    /// maximum degree. Edges are coloured in input order with the lowest
    /// available colour.
    pub fn greedy_marking(&self) -> Result<Marking> {
        self.greedy_marking_for_degree(self.max_degree())
    }

    /// As [`Hypergraph::greedy_marking`] with the colour budget computed from
    /// an explicit degree bound `d`.
    pub fn greedy_marking_for_degree(&self, d: usize) -> Result<Marking> {
        if self.max_degree() > d {
            return Err(Error::InvalidParameter(format!("maximum degree {} exceeds the bound {d}", self.max_degree())));
        }
        let budget = (self.u * d + 1).saturating_sub(self.u).max(1);
        let m = self.edge_count();
        let mut edge_color = vec![usize::MAX; m];
        let mut taken = vec![usize::MAX; budget];
        let mut colors_used = 0;
        for e in 0..m {
            for &v in self.edge(e) {
                for &f in self.incident(v) {
                    if edge_color[f] != usize::MAX {
                        taken[edge_color[f]] = e;
                    }
                }
            }
            let color = (0..budget)
                .find(|&c| taken[c] != e)
                .ok_or_else(|| Error::Invariant(format!("greedy marking exceeded {budget} colours at edge {e}")))?;
            edge_color[e] = color;
            colors_used = colors_used.max(color + 1);
        }
        Ok(Marking { edge_color, colors_used, budget })
    }

    /// Randomized two-round independent set.
    ///
    /// Each vertex is activated independently with probability
    /// `d^(-1/(u-1))` (`d` the maximum degree); a vertex is kept when it is
    /// active and no edge through it has all of its vertices active. For
    /// `u = 2` this is the rule "active with probability `1/d` and no active
    /// neighbour". The result never contains an edge.
    pub fn greedy_independent_set(&self, seed: u64) -> Vec<usize> {
        let d = self.max_degree();
        if d == 0 {
            return (0..self.n).collect();
        }
        let p = if self.u == 1 { 0.0 } else { libm::pow(d as f64, -1.0 / (self.u as f64 - 1.0)) };
        let mut rng = rng::stream(seed);
        let active: Vec<bool> = (0..self.n).map(|_| rng.gen_bool(p)).collect();
        let full: Vec<bool> = self.edges().map(|e| e.iter().all(|&v| active[v])).collect();
        (0..self.n).filter(|&v| active[v] && self.incident(v).iter().all(|&e| !full[e])).collect()
    }

    /// True when no edge lies entirely inside `set` (a sorted or unsorted
    /// list of vertex ids).
    pub fn is_independent(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &v in set {
            if v < self.n {
                inside[v] = true;
            }
        }
        !self.edges().any(|e| e.iter().all(|&v| inside[v]))
    }

    /// Independence ratio by branch and bound, refusing more than
    /// [`DEFAULT_EXACT_CAP`] vertices.
    pub fn independence_ratio_exact(&self) -> Result<f64> {
        self.independence_ratio_exact_with_cap(DEFAULT_EXACT_CAP)
    }

    pub fn independence_ratio_exact_with_cap(&self, cap: usize) -> Result<f64> {
        let set = self.maximum_independent_set(cap)?;
        Ok(set.len() as f64 / self.n as f64)
    }

    /// A maximum independent set. `cap` may not exceed 64.
    pub fn maximum_independent_set(&self, cap: usize) -> Result<Vec<usize>> {
        if self.n == 0 {
            return Err(Error::Empty("hypergraph has no vertices"));
        }
        let cap = cap.min(64);
        if self.n > cap {
            return Err(Error::SizeCap { size: self.n, cap });
        }
        let best = MisSearch::new(self).run();
        Ok((0..self.n).filter(|&v| best >> v & 1 == 1).collect())
    }
}

/// Default vertex cap for [`Hypergraph::independence_ratio_exact`].
pub const DEFAULT_EXACT_CAP: usize = 40;

/// Default search length for Berge girth.
pub const DEFAULT_GIRTH_CAP: usize = 12;

/// Outcome of a capped Berge girth search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    /// Shortest cycle length.
    Cycle(usize),
    /// Some cycle exists, but none of length at most the cap.
    NoneUpTo(usize),
    /// Proven acyclic.
    Acyclic,
}

impl Girth {
    pub fn is_finite(&self) -> bool {
        matches!(self, Girth::Cycle(_))
    }
}

/// Breadth-first search over the vertex-edge incidence graph with reusable
/// scratch space. Node `x < n` is a vertex, node `n + e` is edge `e`.
struct CycleSearch {
    dist: Vec<u32>,
    branch: Vec<u32>,
    parent: Vec<u32>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl CycleSearch {
    fn new(h: &Hypergraph) -> Self {
        let size = h.n + h.edge_count();
        CycleSearch {
            dist: vec![UNSEEN; size],
            branch: vec![UNSEEN; size],
            parent: vec![UNSEEN; size],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn visit(&mut self, node: usize, dist: u32, parent: usize, branch: u32) {
        self.dist[node] = dist;
        self.parent[node] = parent as u32;
        self.branch[node] = branch;
        self.touched.push(node);
        self.queue.push_back(node);
    }

    /// Shortest Berge cycle through vertex `s` of length at most `cap`.
    ///
    /// A Berge cycle of length `k` is a cycle of length `2k` in the incidence
    /// graph. Every neighbour of the source roots its own branch of the BFS
    /// tree; a non-tree incidence joining two branches closes a cycle through
    /// the source of length `dist(x) + dist(y) + 1`, and the minimum over such
    /// incidences is the shortest cycle through the source.
    fn shortest_through(&mut self, h: &Hypergraph, s: usize, cap: usize) -> Option<usize> {
        if cap < 2 {
            return None;
        }
        let limit = cap as u32;
        let n = h.n;
        let mut best = usize::MAX;
        self.visit(s, 0, s, UNSEEN);
        while let Some(x) = self.queue.pop_front() {
            let dx = self.dist[x];
            if 2 * dx as usize >= best.min(2 * cap + 1) {
                break;
            }
            let parent = self.parent[x] as usize;
            let xb = self.branch[x];
            let mut relax = |y: usize, this: &mut Self| {
                if y == parent {
                    return;
                }
                if this.dist[y] == UNSEEN {
                    if dx < limit {
                        let b = if x == s { y as u32 } else { xb };
                        this.visit(y, dx + 1, x, b);
                    }
                } else if x != s && this.branch[y] != xb && y != s {
                    let len = (dx + this.dist[y] + 1) as usize;
                    if len < best {
                        best = len;
                    }
                }
            };
            if x < n {
                for &e in h.incident(x) {
                    relax(n + e, self);
                }
            } else {
                for &v in h.edge(x - n) {
                    relax(v, self);
                }
            }
        }
        for &t in &self.touched {
            self.dist[t] = UNSEEN;
            self.branch[t] = UNSEEN;
            self.parent[t] = UNSEEN;
        }
        self.touched.clear();
        self.queue.clear();
        (best != usize::MAX && best <= 2 * cap).then_some(best / 2)
    }
}

/// Result of a goodness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessReport {
    /// Tolerance δ.
    pub delta: f64,
    /// Target degree Δ.
    pub target_degree: f64,
    /// Fraction of vertices with `|deg(v) - Δ| > δΔ`.
    pub deg_violation_fraction: f64,
    /// Fraction of vertices with some partner of codegree above `δΔ`.
    pub codeg_violation_fraction: f64,
    pub is_good: bool,
}

/// Goodness restricted to the alive vertices and edges given by the masks.
/// With no alive vertex the report is vacuously good.
pub(crate) fn goodness_masked(
    h: &Hypergraph,
    alive_vertex: Option<&[bool]>,
    alive_edge: Option<&[bool]>,
    delta: f64,
    target: f64,
) -> Result<GoodnessReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("tolerance {delta} not in (0,1]")));
    }
    if !(target > 0.0) {
        return Err(Error::InvalidParameter(format!("target degree {target} must be positive")));
    }
    let v_ok = |v: usize| alive_vertex.is_none_or(|m| m[v]);
    let e_ok = |e: usize| alive_edge.is_none_or(|m| m[e]);
    let slack = delta * target;
    let mut co = vec![0u32; h.n];
    let mut touched = Vec::new();
    let (mut considered, mut deg_bad, mut codeg_bad) = (0usize, 0usize, 0usize);
    for v in (0..h.n).filter(|&v| v_ok(v)) {
        considered += 1;
        let mut deg = 0usize;
        let mut worst = 0u32;
        for &e in h.incident(v).iter().filter(|&&e| e_ok(e)) {
            deg += 1;
            for &w in h.edge(e) {
                if w != v {
                    if co[w] == 0 {
                        touched.push(w);
                    }
                    co[w] += 1;
                    worst = worst.max(co[w]);
                }
            }
        }
        for &w in &touched {
            co[w] = 0;
        }
        touched.clear();
        if (deg as f64 - target).abs() > slack {
            deg_bad += 1;
        }
        if worst as f64 > slack {
            codeg_bad += 1;
        }
    }
    if considered == 0 {
        return Ok(GoodnessReport {
            delta,
            target_degree: target,
            deg_violation_fraction: 0.0,
            codeg_violation_fraction: 0.0,
            is_good: true,
        });
    }
    let deg_violation_fraction = deg_bad as f64 / considered as f64;
    let codeg_violation_fraction = codeg_bad as f64 / considered as f64;
    Ok(GoodnessReport {
        delta,
        target_degree: target,
        deg_violation_fraction,
        codeg_violation_fraction,
        is_good: deg_violation_fraction < delta && codeg_violation_fraction < delta,
    })
}

/// Proper edge colouring used to mark a hypergraph: same-coloured edges are
/// disjoint, so colour `i` acts on vertices as a permutation of order `u`
/// that cycles each edge of that colour along its sorted vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    pub edge_color: Vec<usize>,
    pub colors_used: usize,
    /// Colour budget `u*d - u + 1`.
    pub budget: usize,
}

impl Marking {
    /// Traversal order of edge `e`: its sorted vertex list.
    pub fn orientation<'h>(&self, h: &'h Hypergraph, e: usize) -> &'h [usize] {
        h.edge(e)
    }

    /// Image of `x` under the generator of colour `color`: the successor of
    /// `x` (cyclically) in the edge of that colour through `x`, or `x` when
    /// there is none.
    pub fn act(&self, h: &Hypergraph, color: usize, x: usize) -> usize {
        for &e in h.incident(x) {
            if self.edge_color[e] == color {
                let edge = h.edge(e);
                let j = edge.iter().position(|&y| y == x).expect("incidence is consistent");
                return edge[(j + 1) % edge.len()];
            }
        }
        x
    }

    /// True when edges of equal colour are pairwise disjoint.
    pub fn is_proper(&self, h: &Hypergraph) -> bool {
        (0..h.vertex_count()).all(|v| {
            let inc = h.incident(v);
            inc.iter().enumerate().all(|(i, &e)| inc[i + 1..].iter().all(|&f| self.edge_color[e] != self.edge_color[f]))
        })
    }
}

/// Branch and bound for a maximum independent set on at most 64 vertices.
struct MisSearch {
    n: usize,
    order: Vec<usize>,
    edges: Vec<u64>,
    edges_of: Vec<Vec<u64>>,
    best: u64,
    best_size: u32,
}

impl MisSearch {
    fn new(h: &Hypergraph) -> Self {
        let edges: Vec<u64> = h.edges().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
        let edges_of = (0..h.n).map(|v| h.incident(v).iter().map(|&e| edges[e]).collect()).collect();
        let mut order: Vec<usize> = (0..h.n).collect();
        order.sort_by_key(|&v| core::cmp::Reverse(h.incident(v).len()));
        MisSearch { n: h.n, order, edges, edges_of, best: 0, best_size: 0 }
    }

    fn run(mut self) -> u64 {
        self.branch(0, 0, 0);
        self.best
    }

    /// Lower bound on how many undecided vertices must still be excluded: a
    /// greedy packing of live edges whose undecided parts are disjoint.
    fn forced_exclusions(&self, undecided: u64, excluded: u64) -> u32 {
        let mut used = 0u64;
        let mut count = 0;
        for &e in &self.edges {
            if e & excluded != 0 {
                continue;
            }
            let open = e & undecided;
            if open != 0 && open & used == 0 {
                used |= open;
                count += 1;
            }
        }
        count
    }

    fn branch(&mut self, depth: usize, chosen: u64, excluded: u64) {
        let size = chosen.count_ones();
        if depth == self.n {
            if size > self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return;
        }
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let undecided = all & !chosen & !excluded;
        let bound = size + undecided.count_ones() - self.forced_exclusions(undecided, excluded);
        if bound <= self.best_size {
            return;
        }
        let v = self.order[depth];
        let bit = 1u64 << v;
        let can_take = self.edges_of[v].iter().all(|&e| e & !(chosen | bit) != 0);
        if can_take {
            self.branch(depth + 1, chosen | bit, excluded);
        }
        self.branch(depth + 1, chosen, excluded | bit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(u: usize, n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(u, n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    fn k4_3() -> Hypergraph {
        hg(3, 4, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(Hypergraph::new(3, 3, vec![vec![0, 1]]), Err(Error::Malformed(_))));
        assert!(matches!(Hypergraph::new(2, 3, vec![vec![0, 0]]), Err(Error::Malformed(_))));
        assert!(matches!(Hypergraph::new(2, 3, vec![vec![0, 3]]), Err(Error::Malformed(_))));
        assert!(matches!(Hypergraph::new(2, 3, vec![vec![0, 1], vec![1, 0]]), Err(Error::Malformed(_))));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(hg(3, 3, &[&[0, 1, 2]]).degree(0), Ok(1));
        assert_eq!(Hypergraph::empty(3, 1).unwrap().degree(0), Ok(0));
        let k = k4_3();
        for v in 0..4 {
            assert_eq!(k.degree(v), Ok(3));
        }
        assert!(matches!(k.degree(4), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn codegree_examples() {
        let h = hg(3, 4, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(h.codegree(0, 1), Ok(2));
        assert_eq!(h.codegree(2, 3), Ok(0));
        assert_eq!(h.codegree(1, 1), Err(Error::SameVertex(1)));
        let k = k4_3();
        for v in 0..4 {
            for w in 0..4 {
                if v != w {
                    assert_eq!(k.codegree(v, w), Ok(2));
                }
            }
        }
    }

    #[test]
    fn girth_examples() {
        assert_eq!(hg(3, 4, &[&[0, 1, 2], &[0, 1, 3]]).girth(12), Girth::Cycle(2));
        assert_eq!(hg(3, 3, &[&[0, 1, 2]]).girth(12), Girth::Acyclic);
        assert_eq!(hg(2, 3, &[&[0, 1], &[1, 2], &[0, 2]]).girth(12), Girth::Cycle(3));
        // 6-cycle: found with a large cap, reported as absent below it
        let c6 = hg(2, 6, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]]);
        assert_eq!(c6.girth(12), Girth::Cycle(6));
        assert_eq!(c6.girth(5), Girth::NoneUpTo(5));
    }

    #[test]
    fn cycles_through_each_vertex() {
        // triangle with a pendant edge
        let h = hg(2, 4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        assert_eq!(h.shortest_cycles_through(10), vec![Some(3), Some(3), Some(3), None]);
        // two triangles sharing vertex 2 plus a 4-cycle elsewhere
        let h = hg(2, 9, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[3, 4], &[2, 4], &[5, 6], &[6, 7], &[7, 8], &[5, 8]]);
        let c = h.shortest_cycles_through(10);
        assert_eq!(&c[..5], &[Some(3); 5]);
        assert_eq!(&c[5..], &[Some(4); 4]);
    }

    #[test]
    fn goodness_examples() {
        let k = k4_3();
        let good = k.goodness(0.7, 3.0).unwrap();
        assert!(good.is_good);
        assert_eq!(good.deg_violation_fraction, 0.0);
        let bad = k.goodness(0.5, 3.0).unwrap();
        assert!(!bad.is_good);
        assert_eq!(bad.codeg_violation_fraction, 1.0);
        // a 2-regular linear hypergraph: the 3x3 grid lines
        let grid = hg(3, 9, &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8], &[0, 3, 6], &[1, 4, 7], &[2, 5, 8]]);
        let r = grid.goodness(0.5, 2.0).unwrap();
        assert!(r.is_good);
        assert_eq!((r.deg_violation_fraction, r.codeg_violation_fraction), (0.0, 0.0));
        let empty = Hypergraph::empty(3, 0).unwrap().goodness(0.1, 1.0).unwrap();
        assert!(empty.is_good);
        assert!(k.goodness(0.0, 3.0).is_err());
        assert!(k.goodness(0.5, 0.0).is_err());
    }

    #[test]
    fn marking_examples() {
        let single = hg(3, 3, &[&[0, 1, 2]]).greedy_marking().unwrap();
        assert_eq!(single.colors_used, 1);
        let tri = hg(2, 3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let m = tri.greedy_marking().unwrap();
        assert_eq!((m.colors_used, m.budget), (3, 3));
        assert!(m.is_proper(&tri));
        let path = hg(2, 3, &[&[0, 1], &[1, 2]]).greedy_marking().unwrap();
        assert_eq!(path.colors_used, 2);
    }

    #[test]
    fn marking_generators_cycle_edges() {
        let h = hg(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        let m = h.greedy_marking().unwrap();
        assert_eq!(m.edge_color, vec![0, 1]);
        assert_eq!(m.act(&h, 0, 0), 1);
        assert_eq!(m.act(&h, 0, 2), 0);
        assert_eq!(m.act(&h, 1, 2), 3);
        assert_eq!(m.act(&h, 1, 0), 0);
        // the generator has order u
        let mut x = 3;
        for _ in 0..3 {
            x = m.act(&h, 1, x);
        }
        assert_eq!(x, 3);
    }

    #[test]
    fn independent_set_examples() {
        let none = Hypergraph::empty(3, 5).unwrap();
        assert_eq!(none.greedy_independent_set(7), vec![0, 1, 2, 3, 4]);
        let single = hg(3, 3, &[&[0, 1, 2]]);
        for seed in 0..50 {
            let a = single.greedy_independent_set(seed);
            assert!(a.len() < 3);
            assert_eq!(a, single.greedy_independent_set(seed));
        }
    }

    #[test]
    fn independent_set_density_on_four_cycle() {
        // u = 2, d = 2: keep probability (1/2)(1/2)^2 = 0.125
        let c4 = hg(2, 4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
        let trials = 10_000;
        let kept: usize = (0..trials).map(|s| c4.greedy_independent_set(s).len()).sum();
        let density = kept as f64 / (4 * trials) as f64;
        assert!((density - 0.125).abs() <= 0.02, "density {density}");
    }

    #[test]
    fn exact_independence_ratio_examples() {
        assert_eq!(hg(3, 3, &[&[0, 1, 2]]).independence_ratio_exact(), Ok(2.0 / 3.0));
        assert_eq!(Hypergraph::empty(2, 5).unwrap().independence_ratio_exact(), Ok(1.0));
        assert_eq!(hg(2, 3, &[&[0, 1], &[1, 2], &[0, 2]]).independence_ratio_exact(), Ok(1.0 / 3.0));
        let big = Hypergraph::empty(2, 41).unwrap();
        assert_eq!(big.independence_ratio_exact(), Err(Error::SizeCap { size: 41, cap: 40 }));
    }

    #[test]
    fn handshake() {
        let k = k4_3();
        let total: usize = (0..4).map(|v| k.degree(v).unwrap()).sum();
        assert_eq!(total, 3 * k.edge_count());
    }
}
