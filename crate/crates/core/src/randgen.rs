//! Random `d`-regular `u`-uniform hypergraphs from the configuration model.
//!
//! `n * d` vertex stubs are shuffled and cut into consecutive blocks of `u`.
//! A block is defective when it repeats a vertex or duplicates another block;
//! the [`SimplicityMode`] decides how defects are handled.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::{self, StreamRng};

/// How to turn a configuration-model pairing into a simple hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplicityMode {
    /// Resample the whole pairing until it is simple. Exactly regular.
    Reject,
    /// Drop defective blocks. Degrees at most `d`.
    Erase,
    /// Repair defects with stub swaps between blocks. Exactly regular.
    Switch,
}

impl SimplicityMode {
    /// `Switch` above ten thousand vertices, `Reject` otherwise.
    pub fn auto(n: usize) -> Self {
        if n > 10_000 {
            SimplicityMode::Switch
        } else {
            SimplicityMode::Reject
        }
    }
}

impl core::str::FromStr for SimplicityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reject" => Ok(SimplicityMode::Reject),
            "erase" => Ok(SimplicityMode::Erase),
            "switch" => Ok(SimplicityMode::Switch),
            other => Err(Error::InvalidParameter(format!("unknown simplicity mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub u: usize,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub mode: SimplicityMode,
    /// Pairings tried in `Reject` mode; in `Switch` mode the swap budget is
    /// `max_attempts * m` proposals.
    pub max_attempts: usize,
}

impl GenConfig {
    pub fn new(u: usize, d: usize, n: usize, seed: u64) -> Self {
        GenConfig { u, d, n, seed, mode: SimplicityMode::auto(n), max_attempts: 1000 }
    }

    pub fn with_mode(mut self, mode: SimplicityMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.u < 2 {
            return Err(Error::InvalidParameter(format!("uniformity {} < 2", self.u)));
        }
        if self.d < 1 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidParameter("max_attempts must be positive".into()));
        }
        let nd = self.n * self.d;
        if !nd.is_multiple_of(self.u) {
            return Err(Error::Divisibility { nd, u: self.u });
        }
        if self.n > 0 && self.n < self.u {
            return Err(Error::InvalidParameter(format!("{} vertices cannot carry a {}-uniform edge", self.n, self.u)));
        }
        Ok(())
    }
}

/// A generated hypergraph with generation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub hypergraph: Hypergraph,
    /// Fraction of vertices with degree below `d` (non-zero only in `Erase`).
    pub deficient_fraction: f64,
    /// Pairings drawn (`Reject`) or swaps accepted (`Switch`).
    pub attempts: usize,
}

/// Draws a simple random regular hypergraph.
pub fn generate(cfg: &GenConfig) -> Result<Generated> {
    cfg.validate()?;
    let mut rng = rng::stream(cfg.seed);
    let stubs: Vec<usize> = (0..cfg.n).flat_map(|v| core::iter::repeat_n(v, cfg.d)).collect();
    match cfg.mode {
        SimplicityMode::Reject => {
            for attempt in 1..=cfg.max_attempts {
                let blocks = pairing(&stubs, cfg.u, &mut rng);
                if defects(&blocks, cfg.u).iter().all(|&bad| !bad) {
                    return Ok(finish(cfg, blocks, attempt));
                }
            }
            Err(Error::BudgetExhausted(format!("no simple pairing in {} attempts", cfg.max_attempts)))
        }
        SimplicityMode::Erase => {
            let blocks = pairing(&stubs, cfg.u, &mut rng);
            let bad = defects(&blocks, cfg.u);
            let kept: Vec<usize> =
                blocks.chunks(cfg.u).zip(&bad).filter(|(_, &b)| !b).flat_map(|(e, _)| e.iter().copied()).collect();
            Ok(finish(cfg, kept, 1))
        }
        SimplicityMode::Switch => {
            let mut blocks = pairing(&stubs, cfg.u, &mut rng);
            let swaps = repair(&mut blocks, cfg, &mut rng)?;
            Ok(finish(cfg, blocks, swaps))
        }
    }
}

fn finish(cfg: &GenConfig, blocks: Vec<usize>, attempts: usize) -> Generated {
    let hypergraph = Hypergraph::assemble(cfg.u, cfg.n, blocks);
    let deficient = (0..cfg.n).filter(|&v| hypergraph.incident(v).len() < cfg.d).count();
    let deficient_fraction = if cfg.n == 0 { 0.0 } else { deficient as f64 / cfg.n as f64 };
    Generated { hypergraph, deficient_fraction, attempts }
}

/// Uniform random partition of the stubs into blocks, each block sorted.
fn pairing(stubs: &[usize], u: usize, rng: &mut StreamRng) -> Vec<usize> {
    let mut blocks = stubs.to_vec();
    blocks.shuffle(rng);
    for b in blocks.chunks_mut(u) {
        b.sort_unstable();
    }
    blocks
}

/// Marks blocks that repeat a vertex, and every copy but the first of a
/// repeated block.
fn defects(blocks: &[usize], u: usize) -> Vec<bool> {
    let m = blocks.len() / u;
    let block = |e: usize| &blocks[e * u..(e + 1) * u];
    let mut bad: Vec<bool> = (0..m).map(|e| block(e).windows(2).any(|w| w[0] == w[1])).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by(|&a, &b| block(a).cmp(block(b)).then(a.cmp(&b)));
    for w in order.windows(2) {
        if block(w[0]) == block(w[1]) {
            bad[w[1]] = true;
        }
    }
    bad
}

fn has_repeat(block: &[usize]) -> bool {
    block.windows(2).any(|w| w[0] == w[1])
}

/// Repairs defective blocks by swapping one stub between a defective block
/// and a random partner block, accepting a swap only when both resulting
/// blocks are simple and new. Degrees are preserved. Returns the number of
/// accepted swaps.
fn repair(blocks: &mut [usize], cfg: &GenConfig, rng: &mut StreamRng) -> Result<usize> {
    let u = cfg.u;
    let m = blocks.len() / u;
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for b in blocks.chunks(u) {
        *counts.entry(b.to_vec()).or_insert(0) += 1;
    }
    let limit = cfg.max_attempts.saturating_mul(m.max(1));
    let (mut proposals, mut accepted) = (0usize, 0usize);
    loop {
        let pending: Vec<usize> = (0..m)
            .filter(|&e| {
                let b = &blocks[e * u..(e + 1) * u];
                has_repeat(b) || counts[b] > 1
            })
            .collect();
        if pending.is_empty() {
            return Ok(accepted);
        }
        if m < 2 {
            return Err(Error::BudgetExhausted("cannot repair a single defective block".into()));
        }
        for e in pending {
            let mut be = blocks[e * u..(e + 1) * u].to_vec();
            if !has_repeat(&be) && counts[&be] <= 1 {
                continue;
            }
            loop {
                proposals += 1;
                if proposals > limit {
                    return Err(Error::BudgetExhausted(format!("switch repair exceeded {limit} proposals")));
                }
                let f = loop {
                    let f = rng.gen_range(0..m);
                    if f != e {
                        break f;
                    }
                };
                let (i, j) = (rng.gen_range(0..u), rng.gen_range(0..u));
                let bf = blocks[f * u..(f + 1) * u].to_vec();
                let mut ne = be.clone();
                let mut nf = bf.clone();
                core::mem::swap(&mut ne[i], &mut nf[j]);
                ne.sort_unstable();
                nf.sort_unstable();
                // a block like (a, a, a) needs several swaps, so a swap that
                // only lowers the repeats of `e` is progress too
                let ne_done = !has_repeat(&ne);
                if has_repeat(&nf) || ne == nf || (!ne_done && repeats(&ne) >= repeats(&be)) {
                    continue;
                }
                decrement(&mut counts, &be);
                decrement(&mut counts, &bf);
                if (ne_done && counts.contains_key(&ne)) || counts.contains_key(&nf) {
                    *counts.entry(be.clone()).or_insert(0) += 1;
                    *counts.entry(bf).or_insert(0) += 1;
                    continue;
                }
                blocks[e * u..(e + 1) * u].copy_from_slice(&ne);
                blocks[f * u..(f + 1) * u].copy_from_slice(&nf);
                *counts.entry(ne.clone()).or_insert(0) += 1;
                counts.insert(nf, 1);
                accepted += 1;
                if ne_done {
                    break;
                }
                be = ne;
            }
        }
    }
}

fn repeats(block: &[usize]) -> usize {
    block.windows(2).filter(|w| w[0] == w[1]).count()
}

fn decrement(counts: &mut BTreeMap<Vec<usize>, usize>, key: &[usize]) {
    if let Some(c) = counts.get_mut(key) {
        *c -= 1;
        if *c == 0 {
            counts.remove(key);
        }
    }
}

/// Fractions of vertices lying on a Berge cycle of length at most each of
/// `lengths`, for one trial drawn with seed `cfg.seed + trial`.
pub fn girth_profile_trial(cfg: &GenConfig, lengths: &[usize], trial: u64) -> Result<Vec<f64>> {
    let cfg = cfg.with_seed(rng::derive(cfg.seed, trial));
    let h = generate(&cfg)?.hypergraph;
    let cap = lengths.iter().copied().max().unwrap_or(0);
    let through = h.shortest_cycles_through(cap);
    let n = h.vertex_count().max(1) as f64;
    Ok(lengths
        .iter()
        .map(|&len| through.iter().filter(|c| matches!(c, Some(l) if *l <= len)).count() as f64 / n)
        .collect())
}

/// Mean over `trials` of [`girth_profile_trial`], paired with each length.
pub fn girth_profile(cfg: &GenConfig, lengths: &[usize], trials: u64) -> Result<Vec<(usize, f64)>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut sums = alloc::vec![0.0; lengths.len()];
    for t in 0..trials {
        for (s, x) in sums.iter_mut().zip(girth_profile_trial(cfg, lengths, t)?) {
            *s += x;
        }
    }
    Ok(lengths.iter().copied().zip(sums.into_iter().map(|s| s / trials as f64)).collect())
}
