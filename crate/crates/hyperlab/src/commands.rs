//! Subcommand bodies. Each returns its files in memory; the caller writes
//! them once every replica has finished.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use hyperlab_core::csp::{experiment_row, ExperimentConfig, ExperimentRow, ObstructionBudget, Template};
use hyperlab_core::localstats::{
    directed_distance, exact_statistics_set_with_cap, hausdorff_distance, sample_statistics, BallCache,
    EmpiricalMeasure, SampleConfig,
};
use hyperlab_core::matching::{default_rounds, greedy_process_with, run_nibble, QDrive};
use hyperlab_core::ode::{Coefficient, OdeParams, Prediction};
use hyperlab_core::randgen::{generate, girth_profile_trial, GenConfig, Generated, SimplicityMode};
use hyperlab_core::{rng, Hypergraph};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{self, MeasureHeader, RunSummary};

/// Files produced by one command, in write order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outputs {
    pub files: Vec<(PathBuf, String)>,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Outputs {
    fn push(&mut self, prefix: &Path, suffix: &str, body: String) {
        let mut name = prefix.as_os_str().to_owned();
        name.push(suffix);
        self.files.push((PathBuf::from(name), body));
    }

    pub fn write(&self) -> Result<()> {
        for (path, body) in &self.files {
            if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_owned(), source })?;
            }
            std::fs::write(path, body).map_err(|source| CliError::Io { path: path.clone(), source })?;
        }
        Ok(())
    }
}

/// Offset between the stream that draws a replica's hypergraph and the
/// streams its process uses.
pub const PROCESS_STREAM: u64 = 1 << 32;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn load_hypergraph(path: &Path) -> Result<Hypergraph> {
    formats::read_hypergraph(&read_text(path)?).map_err(|e| e.in_file(path))
}

/// Erase draws compared when neither rejection nor switching finds a
/// simple regular hypergraph.
pub const ERASE_FALLBACK_DRAWS: u64 = 64;

/// Draws a hypergraph. An explicit mode is used as is. Without one, sizes
/// above ten thousand start at `switch` and smaller ones at `reject`; when a
/// mode runs out of budget the next is tried, and the last resort is the
/// erase draw keeping the most edges among `ERASE_FALLBACK_DRAWS` streams.
/// Returns the configuration of the draw that was kept.
fn draw(u: usize, d: usize, n: usize, seed: u64, mode: Option<SimplicityMode>) -> Result<(GenConfig, Generated)> {
    let base = GenConfig::new(u, d, n, seed);
    if let Some(m) = mode {
        let cfg = base.with_mode(m);
        let g = generate(&cfg)?;
        return Ok((cfg, g));
    }
    let chain: &[SimplicityMode] = match SimplicityMode::auto(n) {
        SimplicityMode::Reject => &[SimplicityMode::Reject, SimplicityMode::Switch],
        _ => &[SimplicityMode::Switch],
    };
    for &m in chain {
        let cfg = base.with_mode(m);
        match generate(&cfg) {
            Err(hyperlab_core::Error::BudgetExhausted(_)) => continue,
            other => return Ok((cfg, other?)),
        }
    }
    let mut best: Option<(GenConfig, Generated)> = None;
    for i in 0..ERASE_FALLBACK_DRAWS {
        let cfg = base.with_mode(SimplicityMode::Erase).with_seed(rng::derive(seed, i));
        let g = generate(&cfg)?;
        if best.as_ref().is_none_or(|(_, b)| g.hypergraph.edge_count() > b.hypergraph.edge_count()) {
            best = Some((cfg, g));
        }
    }
    Ok(best.expect("at least one erase draw"))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

#[derive(Debug, Clone)]
pub struct GenJob {
    pub u: usize,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub mode: Option<SimplicityMode>,
    pub girth_lengths: Option<Vec<usize>>,
    pub trials: u64,
    pub jobs: usize,
}

pub fn cmd_gen(job: &GenJob, out: &Path) -> Result<Outputs> {
    let (cfg, g) = draw(job.u, job.d, job.n, job.seed, job.mode)?;
    let mut files = Outputs::default();
    files.push(out, ".hg", formats::write_hypergraph(&g.hypergraph));
    if cfg.mode == SimplicityMode::Erase {
        files.notes.push(format!("erase draw with seed {}: deficient fraction {}", cfg.seed, g.deficient_fraction));
    }
    if let Some(lengths) = &job.girth_lengths {
        if job.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        let per_trial: Vec<Vec<f64>> = pool(job.jobs)?.install(|| {
            (0..job.trials)
                .into_par_iter()
                .map(|t| girth_profile_trial(&cfg, lengths, t))
                .collect::<hyperlab_core::Result<_>>()
        })?;
        let profile: Vec<(usize, f64)> = lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| (len, per_trial.iter().map(|row| row[i]).sum::<f64>() / job.trials as f64))
            .collect();
        files.push(out, ".girth.csv", formats::write_girth_profile(job.u, job.d, job.n, job.trials, &profile));
    }
    Ok(files)
}

#[derive(Debug, Clone)]
pub struct StatsJob {
    pub input: PathBuf,
    pub other: Option<PathBuf>,
    pub cfg: SampleConfig,
    /// Enumerate every labelling instead of sampling, up to this many.
    pub exact_cap: Option<u64>,
    pub jobs: usize,
}

#[derive(Debug, Serialize)]
struct DistanceReport {
    r: usize,
    k: u32,
    samples: usize,
    seed: u64,
    directed_input_to_other: f64,
    directed_other_to_input: f64,
    hausdorff: f64,
}

fn header(h: &Hypergraph, cfg: &SampleConfig) -> MeasureHeader {
    MeasureHeader { u: h.uniformity(), d: h.max_degree(), r: cfg.r, k: cfg.k }
}

/// Sampled (or enumerated) statistics set, labellings spread over workers.
pub fn statistics_set(
    h: &Hypergraph,
    cfg: &SampleConfig,
    exact_cap: Option<u64>,
    jobs: usize,
) -> Result<BTreeSet<EmpiricalMeasure>> {
    if let Some(cap) = exact_cap {
        return Ok(exact_statistics_set_with_cap(h, cfg.r, cfg.k, cfg.scope, cap)?);
    }
    if cfg.n_samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let cache = BallCache::new(h, cfg.r)?;
    let measures: Vec<EmpiricalMeasure> = pool(jobs)?.install(|| {
        (0..cfg.n_samples as u64)
            .into_par_iter()
            .map(|i| sample_statistics(h, &cache, cfg, i))
            .collect::<hyperlab_core::Result<_>>()
    })?;
    Ok(measures.into_iter().collect())
}

pub fn cmd_stats(job: &StatsJob, out: &Path) -> Result<Outputs> {
    let h = load_hypergraph(&job.input)?;
    let set = statistics_set(&h, &job.cfg, job.exact_cap, job.jobs)?;
    let mut files = Outputs::default();
    files.push(out, ".set.json", formats::write_statistics_set(header(&h, &job.cfg), &set));
    files.push(out, ".set.csv", formats::write_statistics_set_csv(&set));
    if let Some(other) = &job.other {
        let g = load_hypergraph(other)?;
        if g.uniformity() != h.uniformity() {
            return Err(hyperlab_core::Error::UniformityMismatch(h.uniformity(), g.uniformity()).into());
        }
        let other_set = statistics_set(&g, &job.cfg, job.exact_cap, job.jobs)?;
        files.push(out, ".other.set.json", formats::write_statistics_set(header(&g, &job.cfg), &other_set));
        let report = DistanceReport {
            r: job.cfg.r,
            k: job.cfg.k,
            samples: job.cfg.n_samples,
            seed: job.cfg.seed,
            directed_input_to_other: directed_distance(&set, &other_set)?,
            directed_other_to_input: directed_distance(&other_set, &set)?,
            hausdorff: hausdorff_distance(&set, &other_set)?,
        };
        let mut body = serde_json::to_string_pretty(&report)?;
        body.push('\n');
        files.push(out, ".distance.json", body);
    }
    Ok(files)
}

/// Where a nibble or greedy replica gets its hypergraph.
#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    /// A fresh random regular hypergraph per replica, drawn with the
    /// replica seed.
    Random {
        u: usize,
        d: usize,
        n: usize,
        mode: Option<SimplicityMode>,
    },
}

impl Source {
    fn load(&self, seed: u64, cached: Option<&Hypergraph>) -> Result<(Hypergraph, usize)> {
        match self {
            Source::File(_) => {
                let h = cached.expect("file inputs are loaded once").clone();
                let d = h.max_degree();
                Ok((h, d))
            }
            Source::Random { u, d, n, mode } => Ok((draw(*u, *d, *n, seed, *mode)?.1.hypergraph, *d)),
        }
    }

    fn preload(&self) -> Result<Option<Hypergraph>> {
        match self {
            Source::File(p) => Ok(Some(load_hypergraph(p)?)),
            Source::Random { .. } => Ok(None),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ProcessKind {
    Nibble {
        /// Defaults to `ceil(log(1/target)/ε)`.
        rounds: Option<usize>,
        target: f64,
        /// Defaults to the maximum degree of the input.
        delta0: Option<f64>,
    },
    Greedy {
        drive: QDrive,
    },
}

#[derive(Debug, Clone)]
pub struct ProcessJob {
    pub source: Source,
    pub seeds: Vec<u64>,
    pub epsilon: f64,
    pub kind: ProcessKind,
    pub jobs: usize,
}

fn predictions(u: usize, d: usize) -> (Option<f64>, Option<f64>) {
    match OdeParams::new(u, d) {
        Ok(p) => (Some(p.predicted_coverage()), Some(p.predicted_coverage_with(Coefficient::Derived))),
        Err(_) => (None, None),
    }
}

/// Trace CSV and summary of one replica.
pub fn run_replica(job: &ProcessJob, seed: u64, cached: Option<&Hypergraph>) -> Result<(String, RunSummary)> {
    let (h, d) = job.source.load(seed, cached)?;
    let process_seed = rng::derive(seed, PROCESS_STREAM);
    let (trace, covered, rounds, size, name) = match &job.kind {
        ProcessKind::Nibble { rounds, target, delta0 } => {
            if !(*target > 0.0 && *target < 1.0) {
                return Err(CliError::Usage(format!("--target {target} not in (0, 1)")));
            }
            let rounds = rounds.unwrap_or_else(|| default_rounds(job.epsilon, *target));
            let delta0 = delta0.unwrap_or(h.max_degree().max(1) as f64);
            let s = run_nibble(&h, job.epsilon, rounds, delta0, process_seed)?;
            let trace = formats::write_nibble_trace(&h, &s, job.epsilon);
            (trace, s.covered_fraction(), s.round(), s.matching().len(), "nibble")
        }
        ProcessKind::Greedy { drive } => {
            let o = greedy_process_with(&h, job.epsilon, process_seed, *drive)?;
            let steps = o.trace.rows.len().saturating_sub(1);
            (formats::write_greedy_trace(&o.trace), o.covered_fraction(), steps, o.matching.len(), "greedy")
        }
    };
    let (predicted_coverage, predicted_coverage_derived) = predictions(h.uniformity(), d);
    let summary = RunSummary {
        process: name.into(),
        u: h.uniformity(),
        d,
        n: h.vertex_count(),
        seed,
        epsilon: job.epsilon,
        covered_fraction: covered,
        rounds,
        matching_size: size,
        predicted_coverage,
        predicted_coverage_derived,
    };
    Ok((trace, summary))
}

pub fn cmd_process(job: &ProcessJob, out: &Path) -> Result<Outputs> {
    if job.seeds.is_empty() {
        return Err(CliError::Usage("at least one seed is required".into()));
    }
    let cached = job.source.preload()?;
    let replicas: Vec<(String, RunSummary)> = pool(job.jobs)?
        .install(|| job.seeds.par_iter().map(|&s| run_replica(job, s, cached.as_ref())).collect::<Result<_>>())?;
    let mut files = Outputs::default();
    for (trace, summary) in &replicas {
        files.push(out, &format!(".seed{}.trace.csv", summary.seed), trace.clone());
    }
    let summaries: Vec<RunSummary> = replicas.into_iter().map(|(_, s)| s).collect();
    files.push(out, ".summary.json", formats::write_summaries(&summaries));
    Ok(files)
}

#[derive(Debug, Clone)]
pub struct OdeJob {
    pub u: usize,
    pub d: usize,
    pub step: f64,
    /// Defaults to `t*`.
    pub horizon: Option<f64>,
    pub coefficient: Coefficient,
    pub sweep_u: Vec<usize>,
    pub sweep_d: Vec<usize>,
}

pub fn cmd_ode(job: &OdeJob, out: &Path) -> Result<Outputs> {
    let p = OdeParams::new(job.u, job.d)?;
    let horizon = job.horizon.unwrap_or(p.t_star_with(job.coefficient));
    let traj = p.euler_integrate_with(job.coefficient, job.step, horizon)?;
    let mut rows = Vec::new();
    for &u in &job.sweep_u {
        for &d in &job.sweep_d {
            if let Ok(q) = OdeParams::new(u, d) {
                rows.push(Prediction {
                    u,
                    d,
                    t_star: q.t_star_with(job.coefficient),
                    coverage: q.predicted_coverage_with(job.coefficient),
                });
            }
        }
    }
    let mut files = Outputs::default();
    files.push(out, ".trajectory.csv", formats::write_trajectory(&traj));
    files.push(out, ".predictions.csv", formats::write_predictions(&rows));
    Ok(files)
}

#[derive(Debug, Clone)]
pub struct CspJob {
    pub template: Template,
    pub relation: usize,
    pub cfg: ExperimentConfig,
    pub jobs: usize,
}

pub fn cmd_csp(job: &CspJob, out: &Path) -> Result<Outputs> {
    let cfg = &job.cfg;
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--n-list must be strictly increasing".into()));
    }
    if cfg.seeds.is_empty() {
        return Err(CliError::Usage("at least one seed is required".into()));
    }
    let cells: Vec<(usize, u64)> = cfg.n_list.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    let rows: Vec<ExperimentRow> = pool(job.jobs)?.install(|| {
        cells
            .par_iter()
            .map(|&(n, s)| experiment_row(&job.template, job.relation, None, cfg, n, s))
            .collect::<hyperlab_core::Result<_>>()
    })?;
    let mut files = Outputs::default();
    files.push(out, ".csp.csv", formats::write_csp_rows(&rows));
    Ok(files)
}

/// Defaults of the CSP experiment that the command line exposes.
pub fn default_experiment(u: usize, d: usize) -> ExperimentConfig {
    ExperimentConfig {
        u,
        d,
        n_list: Vec::new(),
        seeds: Vec::new(),
        obstruction_cap: hyperlab_core::csp::DEFAULT_OBSTRUCTION_CAP,
        obstruction_budget: ObstructionBudget::default(),
        moves_per_variable: 40,
        restarts: 2,
        mode: Some(SimplicityMode::Switch),
    }
}
