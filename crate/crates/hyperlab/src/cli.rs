//! Argument parsing, `key = value` config files, and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{ArgAction, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use hyperlab_core::csp::{ObstructionBudget, Template};
use hyperlab_core::localstats::{LabelScope, SampleConfig, Sampler, DEFAULT_ENUMERATION_CAP};
use hyperlab_core::matching::QDrive;
use hyperlab_core::ode::Coefficient;
use hyperlab_core::randgen::SimplicityMode;

use crate::commands::{self, CspJob, GenJob, OdeJob, Outputs, ProcessJob, ProcessKind, Source, StatsJob};
use crate::error::{CliError, Result};
use crate::formats;

/// A comma-separated list whose items may be inclusive ranges `a-b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List<T>(pub Vec<T>);

impl<T> FromStr for List<T>
where
    T: FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let parse = |x: &str| x.trim().parse::<T>().map_err(|_| format!("not a number: {x:?}"));
            match item.split_once('-') {
                Some((a, b)) => {
                    let (a, b): (u64, u64) = (parse(a)?.into(), parse(b)?.into());
                    if a > b || b - a > 1_000_000 {
                        return Err(format!("bad range {item:?}"));
                    }
                    for x in a..=b {
                        out.push(T::try_from(x).map_err(|_| format!("{x} out of range"))?);
                    }
                }
                None => out.push(parse(item)?),
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(out))
    }
}

/// Usize lists go through `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Count(pub usize);

impl FromStr for Count {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.parse().map(Count)
    }
}

impl From<Count> for u64 {
    fn from(c: Count) -> u64 {
        c.0 as u64
    }
}

impl TryFrom<u64> for Count {
    type Error = std::num::TryFromIntError;
    fn try_from(x: u64) -> std::result::Result<Self, Self::Error> {
        usize::try_from(x).map(Count)
    }
}

fn counts(l: &List<Count>) -> Vec<usize> {
    l.0.iter().map(|c| c.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Reject up to 10000 vertices, switch above; on budget exhaustion fall
    /// through to switch, then to the fullest of 64 erase draws.
    Auto,
    Reject,
    Erase,
    Switch,
}

impl ModeArg {
    fn mode(self) -> Option<SimplicityMode> {
        match self {
            ModeArg::Auto => None,
            ModeArg::Reject => Some(SimplicityMode::Reject),
            ModeArg::Erase => Some(SimplicityMode::Erase),
            ModeArg::Switch => Some(SimplicityMode::Switch),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Iid,
    Block,
    Anneal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Vertices,
    Edges,
    Incidences,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientArg {
    /// `u - 1 - 1/d`, consistent with the closed-form root.
    Closed,
    /// `u - 1 - u/d`, from the step-by-step difference equation.
    Derived,
}

impl CoefficientArg {
    fn coefficient(self) -> Coefficient {
        match self {
            CoefficientArg::Closed => Coefficient::ClosedForm,
            CoefficientArg::Derived => Coefficient::Derived,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DriveArg {
    /// Divide by the measured edge density.
    Measured,
    /// Divide by the closed-form `q(εi)`.
    Closed,
    /// Divide by `q(εi)` with the derived coefficient.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinTemplate {
    /// Not-all-equal on three Boolean variables, relation `nae`.
    Nae3,
    /// Disequality on two Boolean variables, relation `neq`.
    TwoColoring,
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperlab",
    version,
    about = "Random regular hypergraphs: local statistics, matchings, ODE predictions and CSP experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random regular hypergraph, optionally with a short-cycle profile.
    #[command(args_override_self = true)]
    Gen(GenArgs),
    /// Statistics sets of labelled neighbourhoods, and distances between them.
    #[command(args_override_self = true)]
    Stats(StatsArgs),
    /// Iterated nibble matchings.
    #[command(args_override_self = true)]
    Nibble(NibbleArgs),
    /// The greedy matching process with its trace.
    #[command(args_override_self = true)]
    Greedy(GreedyArgs),
    /// Euler trajectories and predicted coverage.
    #[command(args_override_self = true)]
    Ode(OdeArgs),
    /// Glued CSP instances: obstruction sizes and solution densities.
    #[command(args_override_self = true)]
    Csp(CspArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Plain-text `key = value` file of flag values; flags on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path prefix; each file appends its own suffix.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for replicas.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub u: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Cycle lengths for `<out>.girth.csv`, e.g. `2-6`.
    #[arg(long)]
    pub girth: Option<List<Count>>,
    /// Independent draws averaged in the girth profile.
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Hypergraph file.
    #[arg(long)]
    pub input: PathBuf,
    /// Second hypergraph; adds `<out>.distance.json`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Neighbourhood radius.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Labellings drawn per hypergraph.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = SamplerArg::Iid)]
    pub sampler: SamplerArg,
    /// What the labellings cover.
    #[arg(long, value_enum, default_value_t = ScopeArg::Vertices)]
    pub scope: ScopeArg,
    #[arg(long)]
    pub seed: u64,
    /// Enumerate every labelling instead of sampling.
    #[arg(long)]
    pub exact: bool,
    /// Largest number of labellings `--exact` enumerates.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub exact_cap: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Hypergraph file; otherwise each replica draws one from `--u --d --n`.
    #[arg(long, conflicts_with_all = ["u", "d", "n"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Replica seeds, e.g. `0-4`; each seeds its own hypergraph and process.
    #[arg(long)]
    pub seeds: List<u64>,
}

impl SourceArgs {
    fn source(&self) -> Result<Source> {
        match (&self.input, self.u, self.d, self.n) {
            (Some(p), ..) => Ok(Source::File(p.clone())),
            (None, Some(u), Some(d), Some(n)) => Ok(Source::Random { u, d, n, mode: self.mode.mode() }),
            _ => Err(CliError::Usage("give either --input or all of --u --d --n".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct NibbleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Rounds to run; defaults to `ceil(log(1/target)/epsilon)`.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Uncovered fraction the default round budget aims at.
    #[arg(long, default_value_t = 0.05)]
    pub target: f64,
    /// Starting degree scale Δ; defaults to the maximum degree.
    #[arg(long)]
    pub delta0: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GreedyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = DriveArg::Measured)]
    pub drive: DriveArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct OdeArgs {
    #[arg(long)]
    pub u: usize,
    #[arg(long)]
    pub d: usize,
    /// Euler step.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// End of the trajectory; defaults to the root `t*`.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, value_enum, default_value_t = CoefficientArg::Closed)]
    pub coefficient: CoefficientArg,
    /// Uniformities of the prediction table; defaults to `--u`.
    #[arg(long)]
    pub sweep_u: Option<List<Count>>,
    /// Degrees of the prediction table; defaults to `--d`.
    #[arg(long)]
    pub sweep_d: Option<List<Count>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CspArgs {
    /// Template JSON file; overrides `--builtin`.
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BuiltinTemplate::Nae3)]
    pub builtin: BuiltinTemplate,
    /// Relation glued onto the edges; defaults to the first one.
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub u: usize,
    #[arg(long, default_value_t = 50)]
    pub d: usize,
    /// Strictly increasing sizes, e.g. `99,999`.
    #[arg(long)]
    pub n_list: List<Count>,
    #[arg(long)]
    pub seeds: List<u64>,
    /// Largest sub-instance searched for an obstruction.
    #[arg(long, default_value_t = hyperlab_core::csp::DEFAULT_OBSTRUCTION_CAP)]
    pub obstruction_cap: usize,
    /// Connected variable sets examined by the obstruction search.
    #[arg(long, default_value_t = ObstructionBudget::default().subsets)]
    pub subset_budget: u64,
    /// Search nodes per sub-instance solve.
    #[arg(long, default_value_t = ObstructionBudget::default().nodes)]
    pub node_budget: u64,
    /// Local-search moves per variable.
    #[arg(long, default_value_t = 40)]
    pub moves: u64,
    #[arg(long, default_value_t = 2)]
    pub restarts: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Switch)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub common: Common,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Parse { line: i + 1, msg: format!("expected `key = value`, found {line:?}") })?;
        out.push((i + 1, k.trim().replace('_', "-"), v.trim().to_owned()));
    }
    Ok(out)
}

/// Splices the config file named by `--config` in front of the other flags,
/// so that flags given on the command line override it.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(sub_at) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|i| i + 1) else {
        return Ok(args);
    };
    let mut config = None;
    for (i, a) in args.iter().enumerate().skip(sub_at + 1) {
        let s = a.to_string_lossy();
        if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else if s == "--config" {
            config = args.get(i + 1).map(PathBuf::from);
        }
    }
    let Some(path) = config else { return Ok(args) };
    let name = args[sub_at].to_string_lossy().into_owned();
    let root = Cli::command();
    let Some(sub) = root.find_subcommand(&name) else { return Ok(args) };
    let text = commands::read_text(&path)?;
    let mut spliced = Vec::new();
    for (line, key, value) in parse_config(&text).map_err(|e| e.in_file(&path))? {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| CliError::Parse { line, msg: format!("unknown key {key:?} for `{name}`") }.in_file(&path))?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => spliced.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => {
                    let msg = format!("{key} takes true or false, found {value:?}");
                    return Err(CliError::Parse { line, msg }.in_file(&path));
                }
            }
        } else {
            spliced.push(OsString::from(format!("--{key}")));
            spliced.push(OsString::from(value));
        }
    }
    let mut out: Vec<OsString> = args[..=sub_at].to_vec();
    out.extend(spliced);
    out.extend(args[sub_at + 1..].iter().cloned());
    Ok(out)
}

fn load_template(a: &CspArgs) -> Result<Template> {
    match &a.template {
        Some(p) => formats::read_template(&commands::read_text(p)?).map_err(|e| e.in_file(p)),
        None => Ok(match a.builtin {
            BuiltinTemplate::Nae3 => Template::nae3(),
            BuiltinTemplate::TwoColoring => Template::two_coloring(),
        }),
    }
}

/// Computes every output of a parsed command line without writing it.
pub fn plan(cli: &Cli) -> Result<(PathBuf, Outputs)> {
    match &cli.command {
        Command::Gen(a) => {
            let job = GenJob {
                u: a.u,
                d: a.d,
                n: a.n,
                seed: a.seed,
                mode: a.mode.mode(),
                girth_lengths: a.girth.as_ref().map(counts),
                trials: a.trials,
                jobs: a.common.jobs,
            };
            Ok((a.common.out.clone(), commands::cmd_gen(&job, &a.common.out)?))
        }
        Command::Stats(a) => {
            let sampler = match a.sampler {
                SamplerArg::Iid => Sampler::Iid,
                SamplerArg::Block => Sampler::Block,
                SamplerArg::Anneal => Sampler::Anneal,
            };
            let scope = match a.scope {
                ScopeArg::Vertices => LabelScope::Vertices,
                ScopeArg::Edges => LabelScope::Edges,
                ScopeArg::Incidences => LabelScope::Incidences,
            };
            let cfg = SampleConfig::new(a.r, a.k, a.samples, a.seed).with_sampler(sampler).with_scope(scope);
            let job = StatsJob {
                input: a.input.clone(),
                other: a.other.clone(),
                cfg,
                exact_cap: a.exact.then_some(a.exact_cap),
                jobs: a.common.jobs,
            };
            Ok((a.common.out.clone(), commands::cmd_stats(&job, &a.common.out)?))
        }
        Command::Nibble(a) => {
            let job = ProcessJob {
                source: a.source.source()?,
                seeds: a.source.seeds.0.clone(),
                epsilon: a.epsilon,
                kind: ProcessKind::Nibble { rounds: a.rounds, target: a.target, delta0: a.delta0 },
                jobs: a.common.jobs,
            };
            Ok((a.common.out.clone(), commands::cmd_process(&job, &a.common.out)?))
        }
        Command::Greedy(a) => {
            let drive = match a.drive {
                DriveArg::Measured => QDrive::Measured,
                DriveArg::Closed => QDrive::Analytic(Coefficient::ClosedForm),
                DriveArg::Derived => QDrive::Analytic(Coefficient::Derived),
            };
            let job = ProcessJob {
                source: a.source.source()?,
                seeds: a.source.seeds.0.clone(),
                epsilon: a.epsilon,
                kind: ProcessKind::Greedy { drive },
                jobs: a.common.jobs,
            };
            Ok((a.common.out.clone(), commands::cmd_process(&job, &a.common.out)?))
        }
        Command::Ode(a) => {
            let job = OdeJob {
                u: a.u,
                d: a.d,
                step: a.step,
                horizon: a.horizon,
                coefficient: a.coefficient.coefficient(),
                sweep_u: a.sweep_u.as_ref().map_or(vec![a.u], counts),
                sweep_d: a.sweep_d.as_ref().map_or(vec![a.d], counts),
            };
            Ok((a.common.out.clone(), commands::cmd_ode(&job, &a.common.out)?))
        }
        Command::Csp(a) => {
            let template = load_template(a)?;
            let relation = match &a.relation {
                Some(name) => template.relation_index(name)?,
                None => 0,
            };
            let mut cfg = commands::default_experiment(a.u, a.d);
            cfg.n_list = counts(&a.n_list);
            cfg.seeds = a.seeds.0.clone();
            cfg.obstruction_cap = a.obstruction_cap;
            cfg.obstruction_budget = ObstructionBudget { subsets: a.subset_budget, nodes: a.node_budget };
            cfg.moves_per_variable = a.moves;
            cfg.restarts = a.restarts;
            cfg.mode = a.mode.mode();
            let job = CspJob { template, relation, cfg, jobs: a.common.jobs };
            Ok((a.common.out.clone(), commands::cmd_csp(&job, &a.common.out)?))
        }
    }
}

/// Parses, runs and writes. Returns the written paths.
pub fn run(args: Vec<OsString>) -> Result<Vec<PathBuf>> {
    let args = expand_config(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(std::io::stdout(), "{e}");
            return Ok(Vec::new());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let (_, outputs) = plan(&cli)?;
    outputs.write()?;
    for note in &outputs.notes {
        eprintln!("hyperlab: {note}");
    }
    Ok(outputs.files.into_iter().map(|(p, _)| p).collect())
}

/// `--help` of every subcommand, as a Markdown page.
pub fn reference_page() -> String {
    let mut root = Cli::command();
    let mut page = String::from("# hyperlab command reference\n\nGenerated from the argument definitions.\n");
    page.push_str(&format!("\n```text\n{}```\n", root.render_long_help()));
    for sub in root.get_subcommands_mut() {
        let name = sub.get_name().to_owned();
        let help = sub.clone().bin_name(format!("hyperlab {name}")).render_long_help();
        page.push_str(&format!("\n## {name}\n\n```text\n{help}```\n"));
    }
    page
}
