//! Rooted balls, canonical classes of rooted labelled hypergraphs, empirical
//! local statistics and the distances between them.
//!
//! A class is identified by a byte code. Berge-acyclic connected inputs get a
//! bottom-up tree code; everything else goes through colour refinement on the
//! vertex-edge incidence structure followed by individualization-refinement
//! search with automorphism pruning, keeping the smallest leaf code. Both
//! codes decode back to a representative (see [`CanonicalClass::decode`]).

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng;

/// Labels attached to edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EdgeLabels {
    /// One label per edge.
    Unordered(Vec<u32>),
    /// One label per (edge, slot), slots following the sorted vertex order
    /// of each edge. This is the half-edge form of oriented edge labels.
    Incidence(Vec<Vec<u32>>),
}

/// A labelling `f` with values in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labelling {
    pub k: u32,
    pub vertex_labels: Vec<u32>,
    pub edge_labels: Option<EdgeLabels>,
}

impl Labelling {
    /// Every vertex labelled 0, no edge labels.
    pub fn constant(n: usize) -> Self {
        Labelling { k: 1, vertex_labels: vec![0; n], edge_labels: None }
    }

    pub fn vertices(k: u32, vertex_labels: Vec<u32>) -> Self {
        Labelling { k, vertex_labels, edge_labels: None }
    }

    /// Checks totality and range against `h`.
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        let mismatch = |msg: alloc::string::String| Err(Error::LabellingMismatch(msg));
        if self.k == 0 {
            return mismatch("alphabet size k must be positive".into());
        }
        if self.vertex_labels.len() != h.vertex_count() {
            return mismatch(format!("{} vertex labels for {} vertices", self.vertex_labels.len(), h.vertex_count()));
        }
        if let Some(&l) = self.vertex_labels.iter().find(|&&l| l >= self.k) {
            return mismatch(format!("vertex label {l} outside 0..{}", self.k));
        }
        match &self.edge_labels {
            None => {}
            Some(EdgeLabels::Unordered(ls)) => {
                if ls.len() != h.edge_count() {
                    return mismatch(format!("{} edge labels for {} edges", ls.len(), h.edge_count()));
                }
                if let Some(&l) = ls.iter().find(|&&l| l >= self.k) {
                    return mismatch(format!("edge label {l} outside 0..{}", self.k));
                }
            }
            Some(EdgeLabels::Incidence(ls)) => {
                if ls.len() != h.edge_count() {
                    return mismatch(format!("{} edge label rows for {} edges", ls.len(), h.edge_count()));
                }
                for (e, row) in ls.iter().enumerate() {
                    if row.len() != h.uniformity() {
                        return mismatch(format!("edge {e} has {} slot labels", row.len()));
                    }
                    if let Some(&l) = row.iter().find(|&&l| l >= self.k) {
                        return mismatch(format!("slot label {l} outside 0..{}", self.k));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn flags(&self) -> u8 {
        match self.edge_labels {
            None => 0,
            Some(EdgeLabels::Unordered(_)) => 1,
            Some(EdgeLabels::Incidence(_)) => 2,
        }
    }

    pub(crate) fn edge_label(&self, e: usize) -> u32 {
        match &self.edge_labels {
            Some(EdgeLabels::Unordered(ls)) => ls[e],
            _ => 0,
        }
    }

    pub(crate) fn slot_label(&self, e: usize, slot: usize) -> u32 {
        match &self.edge_labels {
            Some(EdgeLabels::Incidence(ls)) => ls[e][slot],
            _ => 0,
        }
    }
}

/// Which parts of a hypergraph a sampled or enumerated labelling covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelScope {
    #[default]
    Vertices,
    /// Vertices and (unordered) edges.
    Edges,
    /// Vertices and every (edge, slot) pair.
    Incidences,
}

/// A hypergraph with a designated root and a labelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedHypergraph {
    pub graph: Hypergraph,
    pub root: usize,
    pub labelling: Labelling,
}

impl RootedHypergraph {
    pub fn new(graph: Hypergraph, root: usize, labelling: Labelling) -> Result<Self> {
        if root >= graph.vertex_count() {
            return Err(Error::VertexOutOfRange { vertex: root, n: graph.vertex_count() });
        }
        labelling.validate(&graph)?;
        Ok(RootedHypergraph { graph, root, labelling })
    }

    pub fn unlabelled(graph: Hypergraph, root: usize) -> Result<Self> {
        let n = graph.vertex_count();
        Self::new(graph, root, Labelling::constant(n))
    }
}

/// Vertex and edge ids of a ball inside its host; local vertex 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BallShape {
    graph: Hypergraph,
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl BallShape {
    fn extract(h: &Hypergraph, v: usize, r: usize) -> Result<Self> {
        if v >= h.vertex_count() {
            return Err(Error::VertexOutOfRange { vertex: v, n: h.vertex_count() });
        }
        let mut local: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertices = vec![v];
        local.insert(v, 0);
        let mut frontier = vec![v];
        for _ in 0..r {
            let mut next = Vec::new();
            for &x in &frontier {
                for y in h.neighbors(x) {
                    if let alloc::collections::btree_map::Entry::Vacant(slot) = local.entry(y) {
                        slot.insert(vertices.len());
                        vertices.push(y);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut edge_ids = BTreeSet::new();
        for &x in &vertices {
            for &e in h.incident(x) {
                if h.edge(e).iter().all(|w| local.contains_key(w)) {
                    edge_ids.insert(e);
                }
            }
        }
        let edges: Vec<usize> = edge_ids.into_iter().collect();
        let blocks = edges.iter().map(|&e| h.edge(e).iter().map(|w| local[w]).collect()).collect();
        let graph = Hypergraph::new(h.uniformity(), vertices.len(), blocks)?;
        Ok(BallShape { graph, vertices, edges })
    }

    fn labelled(&self, h: &Hypergraph, f: &Labelling) -> RootedHypergraph {
        let vertex_labels = self.vertices.iter().map(|&x| f.vertex_labels[x]).collect();
        let edge_labels = match &f.edge_labels {
            None => None,
            Some(EdgeLabels::Unordered(ls)) => Some(EdgeLabels::Unordered(self.edges.iter().map(|&e| ls[e]).collect())),
            Some(EdgeLabels::Incidence(ls)) => Some(EdgeLabels::Incidence(
                self.edges
                    .iter()
                    .enumerate()
                    .map(|(le, &e)| {
                        self.graph
                            .edge(le)
                            .iter()
                            .map(|&lv| {
                                let slot = h.edge(e).iter().position(|&x| x == self.vertices[lv]);
                                ls[e][slot.expect("ball edge maps into host edge")]
                            })
                            .collect()
                    })
                    .collect(),
            )),
        };
        RootedHypergraph {
            graph: self.graph.clone(),
            root: 0,
            labelling: Labelling { k: f.k, vertex_labels, edge_labels },
        }
    }
}

/// Radius-`r` ball around `v`: vertices within hop distance `r`, and every
/// edge all of whose vertices are among them. The root becomes vertex 0.
pub fn ball(h: &Hypergraph, v: usize, r: usize) -> Result<RootedHypergraph> {
    let shape = BallShape::extract(h, v, r)?;
    let n = shape.graph.vertex_count();
    Ok(RootedHypergraph { graph: shape.graph, root: 0, labelling: Labelling::constant(n) })
}

/// [`ball`] carrying the restriction of `f`.
pub fn labelled_ball(h: &Hypergraph, f: &Labelling, v: usize, r: usize) -> Result<RootedHypergraph> {
    f.validate(h)?;
    Ok(BallShape::extract(h, v, r)?.labelled(h, f))
}

pub use crate::canon::{canonicalize, canonicalize_by_refinement, CanonicalClass};

/// A probability measure on canonical classes with rational weights
/// `count / total`, stored in lowest terms so that equality of values is
/// equality of measures.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmpiricalMeasure {
    counts: BTreeMap<CanonicalClass, u64>,
    total: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl EmpiricalMeasure {
    /// Normalises a family of counts; zero counts are dropped and repeated
    /// classes are summed.
    pub fn from_counts(counts: impl IntoIterator<Item = (CanonicalClass, u64)>) -> Result<Self> {
        let mut map: BTreeMap<CanonicalClass, u64> = BTreeMap::new();
        for (c, k) in counts {
            if k > 0 {
                let slot = map.entry(c).or_insert(0);
                *slot = slot.checked_add(k).ok_or_else(|| Error::InvalidParameter("measure counts overflow".into()))?;
            }
        }
        let total = map
            .values()
            .try_fold(0u64, |acc, &k| acc.checked_add(k))
            .ok_or_else(|| Error::InvalidParameter("measure counts overflow".into()))?;
        if total == 0 {
            return Err(Error::Empty("measure with no mass"));
        }
        let g = map.values().fold(0, |acc, &k| gcd(acc, k));
        for k in map.values_mut() {
            *k /= g;
        }
        Ok(EmpiricalMeasure { counts: map, total: total / g })
    }

    pub fn point_mass(class: CanonicalClass) -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(class, 1);
        EmpiricalMeasure { counts, total: 1 }
    }

    /// Denominator of the weights in lowest terms.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, class: &CanonicalClass) -> u64 {
        self.counts.get(class).copied().unwrap_or(0)
    }

    pub fn weight(&self, class: &CanonicalClass) -> f64 {
        self.count(class) as f64 / self.total as f64
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// `(class, numerator)` pairs with denominator [`Self::total`].
    pub fn counts(&self) -> impl Iterator<Item = (&CanonicalClass, u64)> + '_ {
        self.counts.iter().map(|(c, &k)| (c, k))
    }

    pub fn weights(&self) -> impl Iterator<Item = (&CanonicalClass, f64)> + '_ {
        let t = self.total as f64;
        self.counts.iter().map(move |(c, &k)| (c, k as f64 / t))
    }

    /// Mass of the classes satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(&CanonicalClass) -> bool) -> f64 {
        let k: u64 = self.counts.iter().filter(|(c, _)| pred(c)).map(|(_, &k)| k).sum();
        k as f64 / self.total as f64
    }
}

/// `Σ_c |a(c) - b(c)|` as an exact fraction `(numerator, denominator)`.
pub fn tv_distance_exact(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> (u128, u128) {
    let (ta, tb) = (u128::from(a.total), u128::from(b.total));
    let mut num = 0u128;
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    loop {
        let (x, y) = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => (*ia.next().expect("peeked").1, 0),
            (None, Some(_)) => (0, *ib.next().expect("peeked").1),
            (Some((ca, _)), Some((cb, _))) => match ca.cmp(cb) {
                core::cmp::Ordering::Less => (*ia.next().expect("peeked").1, 0),
                core::cmp::Ordering::Greater => (0, *ib.next().expect("peeked").1),
                core::cmp::Ordering::Equal => (*ia.next().expect("peeked").1, *ib.next().expect("peeked").1),
            },
        };
        num += (u128::from(x) * tb).abs_diff(u128::from(y) * ta);
    }
    (num, ta * tb)
}

/// `Σ_c |a(c) - b(c)|`, the L1 convention with range `[0, 2]`.
pub fn tv_distance(a: &EmpiricalMeasure, b: &EmpiricalMeasure) -> f64 {
    let (num, den) = tv_distance_exact(a, b);
    num as f64 / den as f64
}

/// `max_{a∈A} min_{b∈B} tv(a, b)`.
pub fn directed_distance<'a, A, B>(a: A, b: B) -> Result<f64>
where
    A: IntoIterator<Item = &'a EmpiricalMeasure>,
    B: IntoIterator<Item = &'a EmpiricalMeasure> + Clone,
{
    let mut worst: Option<f64> = None;
    for x in a {
        let near = b
            .clone()
            .into_iter()
            .map(|y| tv_distance(x, y))
            .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.min(d))))
            .ok_or(Error::Empty("measure set"))?;
        worst = Some(worst.map_or(near, |w| w.max(near)));
    }
    worst.ok_or(Error::Empty("measure set"))
}

/// Hausdorff distance between two finite sets of measures under
/// [`tv_distance`].
pub fn hausdorff_distance<'a, A, B>(a: A, b: B) -> Result<f64>
where
    A: IntoIterator<Item = &'a EmpiricalMeasure> + Clone,
    B: IntoIterator<Item = &'a EmpiricalMeasure> + Clone,
{
    Ok(directed_distance(a.clone(), b.clone())?.max(directed_distance(b, a)?))
}

/// Balls of every vertex, extracted once and relabelled per labelling.
#[derive(Debug, Clone)]
pub struct BallCache {
    shapes: Vec<BallShape>,
}

impl BallCache {
    pub fn new(h: &Hypergraph, r: usize) -> Result<Self> {
        let shapes = (0..h.vertex_count()).map(|v| BallShape::extract(h, v, r)).collect::<Result<_>>()?;
        Ok(BallCache { shapes })
    }

    /// Canonical class of the ball around `v` under `f` (not validated).
    fn class(&self, h: &Hypergraph, f: &Labelling, v: usize) -> CanonicalClass {
        canonicalize(&self.shapes[v].labelled(h, f))
    }

    fn measure(&self, h: &Hypergraph, f: &Labelling) -> Result<EmpiricalMeasure> {
        if h.vertex_count() == 0 {
            return Err(Error::Empty("hypergraph without vertices"));
        }
        EmpiricalMeasure::from_counts((0..h.vertex_count()).map(|v| (self.class(h, f, v), 1)))
    }
}

/// The r-local statistics of `f`: the law of the class of the labelled ball
/// around a uniform random vertex.
pub fn local_statistics(h: &Hypergraph, f: &Labelling, r: usize) -> Result<EmpiricalMeasure> {
    f.validate(h)?;
    BallCache::new(h, r)?.measure(h, f)
}

/// How [`sample_statistics_set`] draws labellings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Independent uniform labels.
    #[default]
    Iid,
    /// Vertex labels constant on BFS blocks of a random radius in `0..=r+1`.
    Block,
    /// Single-site local search pushing the statistics away from those of
    /// the all-zero labelling.
    Anneal,
}

impl core::str::FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(Sampler::Iid),
            "block" => Ok(Sampler::Block),
            "anneal" => Ok(Sampler::Anneal),
            _ => Err(Error::InvalidParameter(format!("unknown sampler {s:?}"))),
        }
    }
}

/// Parameters of a statistics-set sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub r: usize,
    pub k: u32,
    pub n_samples: usize,
    pub sampler: Sampler,
    pub scope: LabelScope,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(r: usize, k: u32, n_samples: usize, seed: u64) -> Self {
        SampleConfig { r, k, n_samples, sampler: Sampler::Iid, scope: LabelScope::Vertices, seed }
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn with_scope(mut self, scope: LabelScope) -> Self {
        self.scope = scope;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("alphabet size k must be positive".into()));
        }
        Ok(())
    }
}

fn random_edge_labels<R: Rng>(h: &Hypergraph, k: u32, scope: LabelScope, rng: &mut R) -> Option<EdgeLabels> {
    match scope {
        LabelScope::Vertices => None,
        LabelScope::Edges => Some(EdgeLabels::Unordered((0..h.edge_count()).map(|_| rng.gen_range(0..k)).collect())),
        LabelScope::Incidences => Some(EdgeLabels::Incidence(
            (0..h.edge_count()).map(|_| (0..h.uniformity()).map(|_| rng.gen_range(0..k)).collect()).collect(),
        )),
    }
}

fn block_labels<R: Rng>(h: &Hypergraph, k: u32, r: usize, rng: &mut R) -> Vec<u32> {
    let n = h.vertex_count();
    let radius = rng.gen_range(0..=r + 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut labels = vec![u32::MAX; n];
    for &c in &order {
        if labels[c] != u32::MAX {
            continue;
        }
        let l = rng.gen_range(0..k);
        labels[c] = l;
        let mut queue = VecDeque::from([(c, 0usize)]);
        while let Some((x, dist)) = queue.pop_front() {
            if dist == radius {
                continue;
            }
            for y in h.neighbors(x) {
                if labels[y] == u32::MAX {
                    labels[y] = l;
                    queue.push_back((y, dist + 1));
                }
            }
        }
    }
    labels
}

/// Labelling number `index` of the named non-annealing sampler.
pub fn sample_labelling(h: &Hypergraph, cfg: &SampleConfig, index: u64) -> Labelling {
    let mut rng = rng::substream(cfg.seed, index);
    let vertex_labels = match cfg.sampler {
        Sampler::Block => block_labels(h, cfg.k, cfg.r, &mut rng),
        _ => (0..h.vertex_count()).map(|_| rng.gen_range(0..cfg.k)).collect(),
    };
    let edge_labels = random_edge_labels(h, cfg.k, cfg.scope, &mut rng);
    Labelling { k: cfg.k, vertex_labels, edge_labels }
}

/// Statistics of sample number `index`; samples are independent of each
/// other, so callers may evaluate them in any order.
pub fn sample_statistics(
    h: &Hypergraph,
    cache: &BallCache,
    cfg: &SampleConfig,
    index: u64,
) -> Result<EmpiricalMeasure> {
    match cfg.sampler {
        Sampler::Anneal => anneal(h, cache, cfg, index),
        _ => cache.measure(h, &sample_labelling(h, cfg, index)),
    }
}

/// Statistics of `n_samples` sampled labellings, as a set.
pub fn sample_statistics_set(
    h: &Hypergraph,
    r: usize,
    k: u32,
    n_samples: usize,
    sampler: Sampler,
    seed: u64,
) -> Result<BTreeSet<EmpiricalMeasure>> {
    sample_statistics_set_with(h, &SampleConfig::new(r, k, n_samples, seed).with_sampler(sampler))
}

pub fn sample_statistics_set_with(h: &Hypergraph, cfg: &SampleConfig) -> Result<BTreeSet<EmpiricalMeasure>> {
    cfg.validate()?;
    let cache = BallCache::new(h, cfg.r)?;
    (0..cfg.n_samples as u64).map(|i| sample_statistics(h, &cache, cfg, i)).collect()
}

/// Single-site moves per vertex in one annealing run.
const ANNEAL_SWEEPS: usize = 4;
const ANNEAL_T0: f64 = 0.05;

fn anneal(h: &Hypergraph, cache: &BallCache, cfg: &SampleConfig, index: u64) -> Result<EmpiricalMeasure> {
    let n = h.vertex_count();
    if n == 0 {
        return Err(Error::Empty("hypergraph without vertices"));
    }
    let mut f = sample_labelling(h, &SampleConfig { sampler: Sampler::Iid, ..*cfg }, index);
    if cfg.k == 1 {
        return cache.measure(h, &f);
    }
    let zero = Labelling { k: cfg.k, vertex_labels: vec![0; n], edge_labels: f.edge_labels.clone() };
    let reference = cache.measure(h, &zero)?;
    let (rt, nt) = (u128::from(reference.total()), n as u128);
    let term = |c: &CanonicalClass, count: u64| (u128::from(count) * rt).abs_diff(u128::from(reference.count(c)) * nt);

    let mut classes: Vec<CanonicalClass> = (0..n).map(|v| cache.class(h, &f, v)).collect();
    let mut counts: BTreeMap<CanonicalClass, u64> = BTreeMap::new();
    for c in &classes {
        *counts.entry(c.clone()).or_insert(0) += 1;
    }
    let mut objective: u128 = counts.iter().map(|(c, &k)| term(c, k)).sum::<u128>()
        + reference.counts().filter(|(c, _)| !counts.contains_key(*c)).map(|(c, _)| term(c, 0)).sum::<u128>();

    let mut rng = rng::substream(rng::derive(cfg.seed, index), 1);
    let moves = ANNEAL_SWEEPS * n;
    let scale = (rt * nt) as f64;
    for step in 0..moves {
        let v = rng.gen_range(0..n);
        let old = f.vertex_labels[v];
        let mut new = rng.gen_range(0..cfg.k - 1);
        if new >= old {
            new += 1;
        }
        f.vertex_labels[v] = new;
        let affected = within(h, v, cfg.r);
        let saved: Vec<CanonicalClass> = affected.iter().map(|&x| classes[x].clone()).collect();
        let mut delta: i128 = 0;
        let mut bump = |counts: &mut BTreeMap<CanonicalClass, u64>, c: &CanonicalClass, up: bool| {
            let k = counts.get(c).copied().unwrap_or(0);
            let nk = if up { k + 1 } else { k - 1 };
            delta += term(c, nk) as i128 - term(c, k) as i128;
            if nk == 0 {
                counts.remove(c);
            } else {
                counts.insert(c.clone(), nk);
            }
        };
        for &x in &affected {
            let c = cache.class(h, &f, x);
            bump(&mut counts, &classes[x], false);
            bump(&mut counts, &c, true);
            classes[x] = c;
        }
        let temperature = ANNEAL_T0 * (1.0 - step as f64 / moves as f64);
        let accept =
            delta >= 0 || (temperature > 0.0 && rng.gen_bool(libm::exp(delta as f64 / scale / temperature).min(1.0)));
        if accept {
            objective = (objective as i128 + delta) as u128;
        } else {
            f.vertex_labels[v] = old;
            for (&x, c) in affected.iter().zip(saved) {
                let cur = core::mem::replace(&mut classes[x], c.clone());
                let k = counts[&cur];
                if k == 1 {
                    counts.remove(&cur);
                } else {
                    counts.insert(cur, k - 1);
                }
                *counts.entry(c).or_insert(0) += 1;
            }
        }
    }
    debug_assert_eq!(objective, {
        let m = EmpiricalMeasure::from_counts(counts.clone())?;
        let (num, _) = tv_distance_exact(&m, &reference);
        num * nt / u128::from(m.total())
    });
    EmpiricalMeasure::from_counts(counts)
}

/// Vertices within hop distance `r` of `v`.
fn within(h: &Hypergraph, v: usize, r: usize) -> Vec<usize> {
    let mut out = vec![v];
    let mut seen = BTreeSet::from([v]);
    let mut frontier = vec![v];
    for _ in 0..r {
        let mut next = Vec::new();
        for &x in &frontier {
            for y in h.neighbors(x) {
                if seen.insert(y) {
                    out.push(y);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Default bound on the number of labellings [`exact_statistics_set`]
/// enumerates.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 18;

/// Statistics of every labelling in scope, for small inputs.
pub fn exact_statistics_set(h: &Hypergraph, r: usize, k: u32, scope: LabelScope) -> Result<BTreeSet<EmpiricalMeasure>> {
    exact_statistics_set_with_cap(h, r, k, scope, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_statistics_set_with_cap(
    h: &Hypergraph,
    r: usize,
    k: u32,
    scope: LabelScope,
    cap: u64,
) -> Result<BTreeSet<EmpiricalMeasure>> {
    if k == 0 {
        return Err(Error::InvalidParameter("alphabet size k must be positive".into()));
    }
    let (n, m, u) = (h.vertex_count(), h.edge_count(), h.uniformity());
    let slots = n + match scope {
        LabelScope::Vertices => 0,
        LabelScope::Edges => m,
        LabelScope::Incidences => m * u,
    };
    let total = (0..slots).try_fold(1u64, |acc, _| acc.checked_mul(u64::from(k)).filter(|&t| t <= cap));
    let Some(total) = total else {
        let max_slots = (0..).take_while(|&s| u64::from(k).checked_pow(s).is_some_and(|t| t <= cap)).count();
        return Err(Error::SizeCap { size: slots, cap: max_slots.saturating_sub(1) });
    };
    let cache = BallCache::new(h, r)?;
    let mut digits = vec![0u32; slots];
    let mut out = BTreeSet::new();
    for _ in 0..total {
        let vertex_labels = digits[..n].to_vec();
        let edge_labels = match scope {
            LabelScope::Vertices => None,
            LabelScope::Edges => Some(EdgeLabels::Unordered(digits[n..].to_vec())),
            LabelScope::Incidences => Some(EdgeLabels::Incidence(digits[n..].chunks(u).map(|c| c.to_vec()).collect())),
        };
        out.insert(cache.measure(h, &Labelling { k, vertex_labels, edge_labels })?);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < k {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// Independence ratio read off a set of radius ≥ 1 statistics with labels
/// `{0, 1}`: the largest mass of "root labelled 1" over measures whose
/// every class has no edge through the root with all vertices labelled 1.
pub fn independence_ratio_from_statistics<'a>(set: impl IntoIterator<Item = &'a EmpiricalMeasure>) -> Result<f64> {
    let mut best: Option<f64> = None;
    for mu in set {
        let mut admissible = true;
        let mut ones = 0u64;
        for (c, k) in mu.counts() {
            let b = c.decode()?;
            let labels = &b.labelling.vertex_labels;
            if labels[b.root] == 1 {
                ones += k;
                if b.graph.incident(b.root).iter().any(|&e| b.graph.edge(e).iter().all(|&x| labels[x] == 1)) {
                    admissible = false;
                    break;
                }
            }
        }
        if admissible {
            let v = ones as f64 / mu.total() as f64;
            best = Some(best.map_or(v, |b| b.max(v)));
        }
    }
    best.ok_or(Error::Empty("no measure of an independent labelling"))
}

/// Hausdorff distance between sampled statistics sets of `h` and `g`, with
/// the same sampler and seed on both sides. A heuristic: neither an upper
/// nor a lower bound for the distance between the true sets.
pub fn lg_pseudometric_estimate(
    h: &Hypergraph,
    g: &Hypergraph,
    r: usize,
    k: u32,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    lg_pseudometric_estimate_with(h, g, &SampleConfig::new(r, k, n_samples, seed))
}

pub fn lg_pseudometric_estimate_with(h: &Hypergraph, g: &Hypergraph, cfg: &SampleConfig) -> Result<f64> {
    if h.uniformity() != g.uniformity() {
        return Err(Error::UniformityMismatch(h.uniformity(), g.uniformity()));
    }
    let a = sample_statistics_set_with(h, cfg)?;
    let b = sample_statistics_set_with(g, cfg)?;
    hausdorff_distance(&a, &b)
}
