//! Text, CSV and JSON formats read and written by the command line tool.
//!
//! Floating-point values are written with the shortest representation that
//! parses back to the same `f64`, so every writer here is deterministic and
//! every reader recovers the exact values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine as _;
use hyperlab_core::csp::{Constraint, CspInstance, ExperimentRow, Relation, Template};
use hyperlab_core::localstats::{CanonicalClass, EmpiricalMeasure};
use hyperlab_core::matching::{GreedyProcessTrace, NibbleState};
use hyperlab_core::ode::{Prediction, Trajectory};
use hyperlab_core::Hypergraph;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

/// `u n m`, then one line of `u` sorted vertex ids per edge.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.uniformity(), h.vertex_count(), h.edge_count());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(lineno, format!("not a non-negative integer: {t:?}"))))
        .collect()
}

/// Inverse of [`write_hypergraph`]. Blank lines are ignored.
pub fn read_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing `u n m` header"))?;
    let head = numbers(header, hl)?;
    let [u, n, m] = head[..] else {
        return Err(parse_err(hl, format!("header needs 3 fields, found {}", head.len())));
    };
    let mut flat = Vec::with_capacity(m.saturating_mul(u).min(1 << 24));
    let mut seen = 0;
    for (no, line) in lines {
        let e = numbers(line, no)?;
        if e.len() != u {
            return Err(parse_err(no, format!("edge has {} vertices, expected {u}", e.len())));
        }
        seen += 1;
        if seen > m {
            return Err(parse_err(no, format!("more than the {m} edges announced")));
        }
        flat.extend(e);
    }
    if seen != m {
        return Err(parse_err(hl, format!("header announces {m} edges, found {seen}")));
    }
    Ok(Hypergraph::from_flat(u, n, flat)?)
}

pub fn encode_class(c: &CanonicalClass) -> String {
    B64.encode(c.as_bytes())
}

pub fn decode_class(s: &str) -> Result<CanonicalClass> {
    let bytes = B64.decode(s).map_err(|e| CliError::Format(format!("bad base64 class code {s:?}: {e}")))?;
    Ok(CanonicalClass::from_bytes(bytes)?)
}

/// JSON form of one [`EmpiricalMeasure`]: the weights by base64 class code,
/// the exact counts over `total`, and the parameters it was taken with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub u: usize,
    pub d: usize,
    pub r: usize,
    pub k: u32,
    pub total: u64,
    pub weights: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, u64>,
}

/// Parameters recorded with every measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureHeader {
    pub u: usize,
    pub d: usize,
    pub r: usize,
    pub k: u32,
}

impl MeasureRecord {
    pub fn new(header: MeasureHeader, mu: &EmpiricalMeasure) -> Self {
        MeasureRecord {
            u: header.u,
            d: header.d,
            r: header.r,
            k: header.k,
            total: mu.total(),
            weights: mu.weights().map(|(c, w)| (encode_class(c), w)).collect(),
            counts: mu.counts().map(|(c, k)| (encode_class(c), k)).collect(),
        }
    }

    pub fn header(&self) -> MeasureHeader {
        MeasureHeader { u: self.u, d: self.d, r: self.r, k: self.k }
    }

    /// The measure, rebuilt from the exact counts.
    pub fn measure(&self) -> Result<EmpiricalMeasure> {
        let counts = self.counts.iter().map(|(c, &k)| Ok((decode_class(c)?, k))).collect::<Result<Vec<_>>>()?;
        let mu = EmpiricalMeasure::from_counts(counts)?;
        if mu.total() != self.total {
            return Err(CliError::Format(format!(
                "counts sum to {} after reduction, header says {}",
                mu.total(),
                self.total
            )));
        }
        Ok(mu)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization");
    s.push('\n');
    s
}

pub fn write_measure_json(header: MeasureHeader, mu: &EmpiricalMeasure) -> String {
    to_json(&MeasureRecord::new(header, mu))
}

pub fn read_measure_json(text: &str) -> Result<(MeasureHeader, EmpiricalMeasure)> {
    let rec: MeasureRecord = serde_json::from_str(text)?;
    Ok((rec.header(), rec.measure()?))
}

/// `code,weight` rows.
pub fn write_measure_csv(mu: &EmpiricalMeasure) -> String {
    let mut out = String::from("code,weight\n");
    for (c, w) in mu.weights() {
        let _ = writeln!(out, "{},{w}", encode_class(c));
    }
    out
}

/// A statistics set as a JSON array of measure objects, in the set's order.
pub fn write_statistics_set(header: MeasureHeader, set: &BTreeSet<EmpiricalMeasure>) -> String {
    let recs: Vec<MeasureRecord> = set.iter().map(|mu| MeasureRecord::new(header, mu)).collect();
    to_json(&recs)
}

pub fn read_statistics_set(text: &str) -> Result<(Option<MeasureHeader>, BTreeSet<EmpiricalMeasure>)> {
    let recs: Vec<MeasureRecord> = serde_json::from_str(text)?;
    let header = recs.first().map(MeasureRecord::header);
    if recs.iter().any(|r| Some(r.header()) != header) {
        return Err(CliError::Format("measures in one set carry different headers".into()));
    }
    let set = recs.iter().map(MeasureRecord::measure).collect::<Result<_>>()?;
    Ok((header, set))
}

/// `index,code,weight` rows for every measure of a set.
pub fn write_statistics_set_csv(set: &BTreeSet<EmpiricalMeasure>) -> String {
    let mut out = String::from("index,code,weight\n");
    for (i, mu) in set.iter().enumerate() {
        for (c, w) in mu.weights() {
            let _ = writeln!(out, "{i},{},{w}", encode_class(c));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RelationRecord {
    name: String,
    arity: usize,
    tuples: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TemplateRecord {
    domain_size: u32,
    #[serde(default)]
    width1: bool,
    relations: Vec<RelationRecord>,
}

pub fn write_template(t: &Template) -> String {
    to_json(&TemplateRecord {
        domain_size: t.domain_size,
        width1: t.width1,
        relations: t
            .relations()
            .iter()
            .map(|r| RelationRecord {
                name: r.name.clone(),
                arity: r.arity,
                tuples: r.tuples.iter().cloned().collect(),
            })
            .collect(),
    })
}

pub fn read_template(text: &str) -> Result<Template> {
    let rec: TemplateRecord = serde_json::from_str(text)?;
    let relations = rec.relations.into_iter().map(|r| Relation::new(r.name, r.arity, r.tuples)).collect();
    Ok(Template::new(rec.domain_size, relations)?.with_width1(rec.width1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ConstraintRecord {
    relation: String,
    vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct InstanceRecord {
    variables: usize,
    constraints: Vec<ConstraintRecord>,
}

/// Constraints name their relation, so an instance file is read against a
/// template.
pub fn write_instance(t: &Template, x: &CspInstance) -> String {
    to_json(&InstanceRecord {
        variables: x.variable_count(),
        constraints: x
            .constraints()
            .iter()
            .map(|c| ConstraintRecord { relation: t.relation(c.relation).name.clone(), vars: c.vars.clone() })
            .collect(),
    })
}

pub fn read_instance(t: &Template, text: &str) -> Result<CspInstance> {
    let rec: InstanceRecord = serde_json::from_str(text)?;
    let constraints = rec
        .constraints
        .into_iter()
        .map(|c| Ok(Constraint { relation: t.relation_index(&c.relation)?, vars: c.vars }))
        .collect::<Result<Vec<_>>>()?;
    Ok(CspInstance::new(t, rec.variables, constraints)?)
}

pub const TRACE_HEADER: &str = "step,epsilon,Q_hat,V_hat,C_hat,alive_vertices,alive_edges,matched";

pub fn write_greedy_trace(trace: &GreedyProcessTrace) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for r in &trace.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step, trace.epsilon, r.q_hat, r.v_hat, r.c_hat, r.alive_vertices, r.alive_edges, r.matched
        );
    }
    out
}

/// One row per round plus the initial state. `Q_hat` is the mean alive
/// degree of alive vertices over the initial mean degree.
pub fn write_nibble_trace(h: &Hypergraph, state: &NibbleState, epsilon: f64) -> String {
    let n = h.vertex_count().max(1) as f64;
    let d = h.mean_degree();
    let q = |mean: f64| if d == 0.0 { 0.0 } else { mean / d };
    let mut out = format!("{TRACE_HEADER}\n");
    let _ = writeln!(out, "0,{epsilon},{},1,0,{},{},0", q(d), h.vertex_count(), h.edge_count());
    let mut matched = 0;
    for (i, r) in state.history().iter().enumerate() {
        matched += r.matched_this_round;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            i + 1,
            r.epsilon,
            q(r.mean_alive_degree),
            r.alive_vertices as f64 / n,
            r.covered_fraction_cumulative,
            r.alive_vertices,
            r.alive_edges,
            matched
        );
    }
    out
}

/// Per-replica summary of a nibble or greedy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub process: String,
    pub u: usize,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub covered_fraction: f64,
    pub rounds: usize,
    pub matching_size: usize,
    /// `1 - e^{-t*}` for `(u, d)`, absent when the ODE is degenerate.
    pub predicted_coverage: Option<f64>,
    /// The same with the step-derived decay coefficient.
    pub predicted_coverage_derived: Option<f64>,
}

pub fn write_summaries(rows: &[RunSummary]) -> String {
    to_json(&rows)
}

pub fn read_summaries(text: &str) -> Result<Vec<RunSummary>> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_trajectory(tr: &Trajectory) -> String {
    let mut out = String::from("t,v,c,q\n");
    for i in 0..tr.len() {
        let _ = writeln!(out, "{},{},{},{}", tr.t[i], tr.v[i], tr.c[i], tr.q[i]);
    }
    out
}

pub fn write_predictions(rows: &[Prediction]) -> String {
    let mut out = String::from("u,d,t_star,coverage\n");
    for p in rows {
        let _ = writeln!(out, "{},{},{},{}", p.u, p.d, p.t_star, p.coverage);
    }
    out
}

/// Rows of `(length, mean_fraction)` for one `(u, d, n)`.
pub fn write_girth_profile(u: usize, d: usize, n: usize, trials: u64, profile: &[(usize, f64)]) -> String {
    let mut out = String::from("u,d,n,length,trials,mean_fraction\n");
    for (len, frac) in profile {
        let _ = writeln!(out, "{u},{d},{n},{len},{trials},{frac}");
    }
    out
}

pub const CSP_HEADER: &str = "n,d,seed,min_obstruction,density_lb,alpha_greedy,bf_reference";

pub fn write_csp_rows(rows: &[ExperimentRow]) -> String {
    let mut out = format!("{CSP_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n, r.d, r.seed, r.min_obstruction, r.density_lb, r.alpha_greedy, r.bf_reference
        );
    }
    out
}

/// Parsed CSV: header fields and rows, with 1-based line numbers in errors.
pub fn read_csv(text: &str, expected_header: &str) -> Result<Vec<Vec<String>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == expected_header => {}
        Some(h) => return Err(parse_err(1, format!("header {h:?}, expected {expected_header:?}"))),
        None => return Err(parse_err(1, format!("missing header row {expected_header:?}"))),
    }
    let width = expected_header.split(',').count();
    lines
        .enumerate()
        .map(|(i, l)| {
            let fields: Vec<String> = l.split(',').map(str::to_owned).collect();
            if fields.len() == width {
                Ok(fields)
            } else {
                Err(parse_err(i + 2, format!("{} fields, expected {width}", fields.len())))
            }
        })
        .collect()
}
