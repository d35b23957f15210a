//! Random matchings: the nibble step, the iterated nibble, and the greedy
//! process driven by the differential-equation method.
//!
//! Both processes share one move. A random change `C` is drawn from the
//! alive edges; the members of `C` disjoint from every other member of `C`
//! enter the matching; every vertex of `⋃C` dies, and so does every alive
//! edge touching a dead vertex.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{goodness_masked, GoodnessReport, Hypergraph};
use crate::ode::{Coefficient, OdeParams};
use crate::rng;

/// Default tolerance δ for the per-round goodness diagnostics.
pub const DEFAULT_GOODNESS_TOLERANCE: f64 = 0.1;

/// Diagnostics of one nibble round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub epsilon: f64,
    /// Selection probability denominator Δ used this round.
    pub delta_used: f64,
    /// Expected degree after the round, `Δ e^{-ε(u-1)}`.
    pub target_degree: f64,
    pub alive_vertex_fraction: f64,
    pub covered_fraction_cumulative: f64,
    /// Goodness of the remainder for `target_degree`, over alive vertices.
    pub goodness: GoodnessReport,
    pub matched_this_round: usize,
    pub selected_this_round: usize,
    pub killed_this_round: usize,
    pub alive_vertices: usize,
    pub alive_edges: usize,
    /// Mean alive degree of alive vertices after the round.
    pub mean_alive_degree: f64,
}

impl RoundRecord {
    /// Fraction of the vertices killed this round that the matching covers.
    pub fn conditional_coverage(&self, u: usize) -> f64 {
        if self.killed_this_round == 0 {
            0.0
        } else {
            (u * self.matched_this_round) as f64 / self.killed_this_round as f64
        }
    }
}

/// Alive structure, accumulated matching and round history.
#[derive(Debug, Clone, PartialEq)]
pub struct NibbleState {
    alive_vertex: Vec<bool>,
    alive_edge: Vec<bool>,
    alive_vertices: usize,
    alive_edges: usize,
    matching: Vec<usize>,
    covered: usize,
    round: usize,
    history: Vec<RoundRecord>,
    goodness_tolerance: f64,
}

/// Outcome of applying one change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChangeOutcome {
    pub selected: usize,
    pub matched: usize,
    pub killed: usize,
}

impl NibbleState {
    /// Everything alive, empty matching.
    pub fn new(h: &Hypergraph) -> Self {
        NibbleState {
            alive_vertex: vec![true; h.vertex_count()],
            alive_edge: vec![true; h.edge_count()],
            alive_vertices: h.vertex_count(),
            alive_edges: h.edge_count(),
            matching: Vec::new(),
            covered: 0,
            round: 0,
            history: Vec::new(),
            goodness_tolerance: DEFAULT_GOODNESS_TOLERANCE,
        }
    }

    pub fn with_goodness_tolerance(mut self, delta: f64) -> Self {
        self.goodness_tolerance = delta;
        self
    }

    pub fn matching(&self) -> &[usize] {
        &self.matching
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn alive_vertices(&self) -> usize {
        self.alive_vertices
    }

    pub fn alive_edges(&self) -> usize {
        self.alive_edges
    }

    pub fn is_vertex_alive(&self, v: usize) -> bool {
        self.alive_vertex[v]
    }

    pub fn is_edge_alive(&self, e: usize) -> bool {
        self.alive_edge[e]
    }

    /// Number of vertices covered by the matching.
    pub fn covered(&self) -> usize {
        self.covered
    }

    pub fn covered_fraction(&self) -> f64 {
        fraction(self.covered, self.alive_vertex.len())
    }

    /// Alive degree `deg⁺(v)`: alive edges through `v`.
    pub fn alive_degree(&self, h: &Hypergraph, v: usize) -> usize {
        h.incident(v).iter().filter(|&&e| self.alive_edge[e]).count()
    }

    /// Mean alive degree over alive vertices.
    pub fn mean_alive_degree(&self, h: &Hypergraph) -> f64 {
        fraction(h.uniformity() * self.alive_edges, self.alive_vertices)
    }

    /// Applies the change `selected` (alive edge ids): its conflict-free
    /// members join the matching, all its vertices die, and alive edges
    /// touching a dead vertex die.
    pub fn apply_change(&mut self, h: &Hypergraph, selected: &[usize]) -> Result<ChangeOutcome> {
        let mut hits = vec![0u32; h.vertex_count()];
        for &e in selected {
            if e >= h.edge_count() {
                return Err(Error::EdgeOutOfRange { edge: e, m: h.edge_count() });
            }
            if !self.alive_edge[e] {
                return Err(Error::InvalidParameter(format!("edge {e} is not alive")));
            }
            for &v in h.edge(e) {
                hits[v] += 1;
            }
        }
        let mut outcome = ChangeOutcome { selected: selected.len(), ..Default::default() };
        for &e in selected {
            if h.edge(e).iter().all(|&v| hits[v] == 1) {
                self.matching.push(e);
                self.covered += h.uniformity();
                outcome.matched += 1;
            }
        }
        for &e in selected {
            for &v in h.edge(e) {
                if self.alive_vertex[v] {
                    self.alive_vertex[v] = false;
                    self.alive_vertices -= 1;
                    outcome.killed += 1;
                    for &f in h.incident(v) {
                        if self.alive_edge[f] {
                            self.alive_edge[f] = false;
                            self.alive_edges -= 1;
                        }
                    }
                }
            }
        }
        debug_assert!(self.check_invariants(h).is_ok());
        Ok(outcome)
    }

    /// Selects every alive edge independently with probability `p`.
    fn sample_change(&self, p: f64, seed: u64) -> Vec<usize> {
        let p = p.clamp(0.0, 1.0);
        let mut rng = rng::stream(seed);
        self.alive_edge
            .iter()
            .enumerate()
            .filter(|(_, &alive)| alive)
            .filter_map(|(e, _)| rng.gen_bool(p).then_some(e))
            .collect()
    }

    /// One nibble round with selection probability `epsilon / delta`.
    pub fn step(&mut self, h: &Hypergraph, epsilon: f64, delta: f64, seed: u64) -> Result<&RoundRecord> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon {epsilon} not in (0,1]")));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!("degree target {delta} must be positive")));
        }
        if self.alive_edges == 0 {
            return Err(Error::Empty("nibble remainder has no alive edges"));
        }
        let change = self.sample_change(epsilon / delta, seed);
        let outcome = self.apply_change(h, &change)?;
        self.round += 1;
        let target = delta * libm::exp(-epsilon * (h.uniformity() as f64 - 1.0));
        let goodness =
            goodness_masked(h, Some(&self.alive_vertex), Some(&self.alive_edge), self.goodness_tolerance, target)?;
        let n = h.vertex_count();
        self.history.push(RoundRecord {
            epsilon,
            delta_used: delta,
            target_degree: target,
            alive_vertex_fraction: fraction(self.alive_vertices, n),
            covered_fraction_cumulative: fraction(self.covered, n),
            goodness,
            matched_this_round: outcome.matched,
            selected_this_round: outcome.selected,
            killed_this_round: outcome.killed,
            alive_vertices: self.alive_vertices,
            alive_edges: self.alive_edges,
            mean_alive_degree: self.mean_alive_degree(h),
        });
        Ok(self.history.last().expect("just pushed"))
    }

    /// Matching disjointness, no alive edge through a dead vertex, and every
    /// covered vertex dead.
    pub fn check_invariants(&self, h: &Hypergraph) -> Result<()> {
        validate_matching(h, &self.matching)?;
        for (e, _) in self.alive_edge.iter().enumerate().filter(|(_, &a)| a) {
            if let Some(&v) = h.edge(e).iter().find(|&&v| !self.alive_vertex[v]) {
                return Err(Error::Invariant(format!("alive edge {e} contains dead vertex {v}")));
            }
        }
        for &e in &self.matching {
            if let Some(&v) = h.edge(e).iter().find(|&&v| self.alive_vertex[v]) {
                return Err(Error::Invariant(format!("covered vertex {v} is alive")));
            }
        }
        Ok(())
    }
}

/// One nibble round applied to `state`, returned by value.
pub fn nibble_step(h: &Hypergraph, mut state: NibbleState, epsilon: f64, delta: f64, seed: u64) -> Result<NibbleState> {
    state.step(h, epsilon, delta, seed)?;
    Ok(state)
}

/// Round budget `ceil(log(1/target_uncovered) / epsilon)`.
pub fn default_rounds(epsilon: f64, target_uncovered: f64) -> usize {
    libm::ceil(libm::log(1.0 / target_uncovered) / epsilon) as usize
}

/// Iterates nibble rounds with `Δ_i = delta0 e^{-ε(u-1)i}`, round `i` drawing
/// from stream `seed + i`. Stops early once no alive edge remains.
pub fn run_nibble(h: &Hypergraph, epsilon: f64, rounds: usize, delta0: f64, seed: u64) -> Result<NibbleState> {
    let mut state = NibbleState::new(h);
    let decay = epsilon * (h.uniformity() as f64 - 1.0);
    for i in 0..rounds {
        if state.alive_edges == 0 {
            break;
        }
        let delta = delta0 * libm::exp(-decay * i as f64);
        state.step(h, epsilon, delta, rng::derive(seed, i as u64))?;
    }
    state.check_invariants(h)?;
    Ok(state)
}

/// Checks that `m` is a set of pairwise disjoint edges and returns the
/// fraction of vertices it covers.
pub fn validate_matching(h: &Hypergraph, m: &[usize]) -> Result<f64> {
    let mut owner = vec![usize::MAX; h.vertex_count()];
    for &e in m {
        if e >= h.edge_count() {
            return Err(Error::EdgeOutOfRange { edge: e, m: h.edge_count() });
        }
        for &v in h.edge(e) {
            if owner[v] != usize::MAX {
                let f = owner[v];
                return Err(Error::Overlap(f.min(e), f.max(e)));
            }
            owner[v] = e;
        }
    }
    Ok(fraction(m.len() * h.uniformity(), h.vertex_count()))
}

/// What the greedy process divides the selection probability by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QDrive {
    /// The measured `Q̂(i)`.
    #[default]
    Measured,
    /// The analytic `q(εi)` for the given coefficient (ablation).
    Analytic(Coefficient),
}

/// One step of the greedy process trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    /// Mean alive degree of alive vertices divided by `d`.
    pub q_hat: f64,
    /// Alive vertex fraction.
    pub v_hat: f64,
    /// Covered vertex fraction.
    pub c_hat: f64,
    pub alive_vertices: usize,
    pub alive_edges: usize,
    /// Matching size so far.
    pub matched: usize,
}

impl TraceRow {
    /// `P̂ = Q̂ V̂`.
    pub fn p_hat(&self) -> f64 {
        self.q_hat * self.v_hat
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyProcessTrace {
    pub epsilon: f64,
    /// Degree normaliser: the mean degree of the input.
    pub d: f64,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome {
    pub trace: GreedyProcessTrace,
    pub matching: Vec<usize>,
}

impl GreedyOutcome {
    pub fn covered_fraction(&self) -> f64 {
        self.trace.rows.last().map_or(0.0, |r| r.c_hat)
    }
}

/// Greedy large-girth matching process.
///
/// At step `i` every unlabelled (alive) edge is selected with probability
/// `ε / (d Q̂(i))`; selected edges not meeting another selected edge are
/// matched, and the change is applied as in the nibble. The process stops
/// when `Q̂(i) < ε` or no alive vertex remains. Step `i` draws from stream
/// `seed + i`.
pub fn greedy_process(h: &Hypergraph, epsilon: f64, seed: u64) -> Result<GreedyOutcome> {
    greedy_process_with(h, epsilon, seed, QDrive::Measured)
}

pub fn greedy_process_with(h: &Hypergraph, epsilon: f64, seed: u64, drive: QDrive) -> Result<GreedyOutcome> {
    if !(epsilon > 0.0 && epsilon <= 0.2) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} not in (0, 0.2]")));
    }
    let d = h.mean_degree();
    let analytic = match drive {
        QDrive::Measured => None,
        QDrive::Analytic(which) => Some((OdeParams::new(h.uniformity(), libm::round(d) as usize)?, which)),
    };
    let n = h.vertex_count();
    let u = h.uniformity();
    let mut state = NibbleState::new(h);
    let mut rows = Vec::new();
    for i in 0.. {
        let q_hat = if state.alive_vertices == 0 || d == 0.0 {
            0.0
        } else {
            (u * state.alive_edges) as f64 / (state.alive_vertices as f64 * d)
        };
        rows.push(TraceRow {
            step: i,
            q_hat,
            v_hat: fraction(state.alive_vertices, n),
            c_hat: fraction(state.covered, n),
            alive_vertices: state.alive_vertices,
            alive_edges: state.alive_edges,
            matched: state.matching.len(),
        });
        let q = match analytic {
            None => q_hat,
            Some((p, which)) => p.q_closed_with(which, epsilon * i as f64)?,
        };
        if state.alive_vertices == 0 || state.alive_edges == 0 || q < epsilon {
            break;
        }
        let change = state.sample_change(epsilon / (d * q), rng::derive(seed, i as u64));
        state.apply_change(h, &change)?;
    }
    state.check_invariants(h)?;
    Ok(GreedyOutcome { trace: GreedyProcessTrace { epsilon, d, rows }, matching: state.matching })
}

fn fraction(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}
