//! Constraint satisfaction over finite templates: instances, brute-force
//! solving, generalized arc consistency, minimum unsolvable sub-instances,
//! solution density and the gluing of a gadget relation along a hypergraph.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::randgen::{generate, GenConfig, SimplicityMode};
use crate::rng;

/// Largest supported domain; domains are held as 64-bit masks.
pub const MAX_DOMAIN: u32 = 64;
/// Default node budget of [`brute_solve`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// Default size cap of [`min_obstruction`].
pub const DEFAULT_OBSTRUCTION_CAP: usize = 8;
/// Default assignment cap of exact [`solution_density`].
pub const DEFAULT_ASSIGNMENT_CAP: u64 = 10_000_000;

const TABLE_LIMIT: u64 = 1 << 20;

/// A named relation of fixed arity given by its allowed tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<u32>>,
    table: Option<Vec<bool>>,
}

impl Relation {
    pub fn new(name: impl Into<String>, arity: usize, tuples: impl IntoIterator<Item = Vec<u32>>) -> Self {
        Relation { name: name.into(), arity, tuples: tuples.into_iter().collect(), table: None }
    }

    /// Every tuple over `0..domain_size` accepted by `pred`.
    pub fn from_predicate(
        name: impl Into<String>,
        arity: usize,
        domain_size: u32,
        pred: impl Fn(&[u32]) -> bool,
    ) -> Self {
        let tuples = all_tuples(arity, domain_size).filter(|t| pred(t));
        Relation::new(name, arity, tuples)
    }

    fn index(&self, t: &[u32], domain_size: u32) -> usize {
        t.iter().fold(0usize, |acc, &x| acc * domain_size as usize + x as usize)
    }

    fn prepare(&mut self, domain_size: u32) {
        let size = u64::from(domain_size).checked_pow(self.arity as u32);
        self.table = size.filter(|&s| s <= TABLE_LIMIT).map(|s| {
            let mut table = vec![false; s as usize];
            for t in &self.tuples {
                table[self.index(t, domain_size)] = true;
            }
            table
        });
    }

    fn holds(&self, t: &[u32], domain_size: u32) -> bool {
        match &self.table {
            Some(table) => table[self.index(t, domain_size)],
            None => self.tuples.contains(t),
        }
    }

    /// Some tuple `(x, ..., x)` is allowed.
    pub fn has_constant_tuple(&self) -> bool {
        self.tuples.iter().any(|t| t.windows(2).all(|w| w[0] == w[1]))
    }
}

fn all_tuples(arity: usize, domain_size: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (domain_size as u64).pow(arity as u32);
    (0..total).map(move |mut i| {
        let mut t = vec![0u32; arity];
        for slot in t.iter_mut().rev() {
            *slot = (i % u64::from(domain_size)) as u32;
            i /= u64::from(domain_size);
        }
        t
    })
}

/// A finite relational structure: a domain `0..domain_size` and relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub domain_size: u32,
    relations: Vec<Relation>,
    /// User annotation that the template has width 1; not decided here.
    pub width1: bool,
}

impl Template {
    pub fn new(domain_size: u32, relations: Vec<Relation>) -> Result<Self> {
        if domain_size == 0 || domain_size > MAX_DOMAIN {
            return Err(Error::InvalidParameter(format!("domain size {domain_size} not in 1..={MAX_DOMAIN}")));
        }
        let mut names = BTreeSet::new();
        let mut relations = relations;
        for r in &mut relations {
            if r.arity == 0 {
                return Err(Error::InvalidParameter(format!("relation {:?} has arity 0", r.name)));
            }
            if !names.insert(r.name.clone()) {
                return Err(Error::InvalidParameter(format!("relation {:?} defined twice", r.name)));
            }
            for t in &r.tuples {
                if t.len() != r.arity {
                    return Err(Error::Malformed(format!("tuple {t:?} in {:?} has wrong arity", r.name)));
                }
                if let Some(x) = t.iter().find(|&&x| x >= domain_size) {
                    return Err(Error::Malformed(format!("value {x} in {:?} outside the domain", r.name)));
                }
            }
            r.prepare(domain_size);
        }
        Ok(Template { domain_size, relations, width1: false })
    }

    pub fn with_width1(mut self, width1: bool) -> Self {
        self.width1 = width1;
        self
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.relations[i]
    }

    pub fn relation_index(&self, name: &str) -> Result<usize> {
        self.relations
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown relation {name:?}")))
    }

    fn satisfied(&self, c: &Constraint, a: &[u32]) -> bool {
        let mut buf = [0u32; 16];
        let rel = &self.relations[c.relation];
        if c.vars.len() <= buf.len() {
            for (slot, &v) in buf.iter_mut().zip(&c.vars) {
                *slot = a[v];
            }
            rel.holds(&buf[..c.vars.len()], self.domain_size)
        } else {
            let t: Vec<u32> = c.vars.iter().map(|&v| a[v]).collect();
            rel.holds(&t, self.domain_size)
        }
    }

    /// The two-element structure with relation `"neq"` of distinct pairs.
    pub fn two_coloring() -> Self {
        Template::new(2, vec![Relation::from_predicate("neq", 2, 2, |t| t[0] != t[1])]).expect("valid template")
    }

    /// The two-element structure with relation `"nae"` of non-constant
    /// triples.
    pub fn nae3() -> Self {
        Template::new(2, vec![Relation::from_predicate("nae", 3, 2, |t| !(t[0] == t[1] && t[1] == t[2]))])
            .expect("valid template")
    }
}

/// One constraint: a relation index and the variables it binds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    pub relation: usize,
    pub vars: Vec<usize>,
}

/// An instance: variables `0..variable_count` and constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    variable_count: usize,
    constraints: Vec<Constraint>,
    on_var: Vec<Vec<usize>>,
    max_degree: usize,
}

impl CspInstance {
    pub fn new(t: &Template, variable_count: usize, constraints: Vec<Constraint>) -> Result<Self> {
        let mut on_var = vec![Vec::new(); variable_count];
        for (i, c) in constraints.iter().enumerate() {
            let rel = t.relations.get(c.relation).ok_or_else(|| {
                Error::InvalidParameter(format!("constraint {i} uses unknown relation {}", c.relation))
            })?;
            if c.vars.len() != rel.arity {
                return Err(Error::Malformed(format!(
                    "constraint {i} binds {} variables, {:?} has arity {}",
                    c.vars.len(),
                    rel.name,
                    rel.arity
                )));
            }
            if let Some(&v) = c.vars.iter().find(|&&v| v >= variable_count) {
                return Err(Error::VertexOutOfRange { vertex: v, n: variable_count });
            }
            let mut vs = c.vars.clone();
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                on_var[v].push(i);
            }
        }
        let max_degree = on_var.iter().map(Vec::len).max().unwrap_or(0);
        Ok(CspInstance { variable_count, constraints, on_var, max_degree })
    }

    /// Builds constraints from relation names.
    pub fn from_named(t: &Template, variable_count: usize, constraints: &[(&str, Vec<usize>)]) -> Result<Self> {
        let cs = constraints
            .iter()
            .map(|(name, vars)| Ok(Constraint { relation: t.relation_index(name)?, vars: vars.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(t, variable_count, cs)
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Constraints mentioning `v`.
    pub fn constraints_on(&self, v: usize) -> &[usize] {
        &self.on_var[v]
    }

    /// Whether `a` satisfies every constraint.
    pub fn check(&self, t: &Template, a: &[u32]) -> bool {
        a.len() == self.variable_count
            && a.iter().all(|&x| x < t.domain_size)
            && self.constraints.iter().all(|c| t.satisfied(c, a))
    }

    /// The sub-instance on `vars` (sorted, distinct), keeping the constraints
    /// entirely inside; variables are renumbered by position in `vars`.
    pub fn restrict(&self, t: &Template, vars: &[usize]) -> Result<CspInstance> {
        let local = |v: usize| vars.binary_search(&v).ok();
        let mut seen = BTreeSet::new();
        let mut cs = Vec::new();
        for &v in vars {
            for &ci in &self.on_var[v] {
                if !seen.insert(ci) {
                    continue;
                }
                let c = &self.constraints[ci];
                if let Some(mapped) = c.vars.iter().map(|&x| local(x)).collect::<Option<Vec<_>>>() {
                    cs.push(Constraint { relation: c.relation, vars: mapped });
                }
            }
        }
        CspInstance::new(t, vars.len(), cs)
    }

    /// Variables sharing a constraint with `v`.
    fn neighbours(&self, v: usize) -> BTreeSet<usize> {
        self.on_var[v].iter().flat_map(|&ci| self.constraints[ci].vars.iter().copied()).filter(|&w| w != v).collect()
    }
}

/// Outcome of a complete search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    Solution(Vec<u32>),
    /// The search finished without finding a solution.
    Unsolvable,
}

/// Backtracking search with the default node budget.
pub fn brute_solve(t: &Template, x: &CspInstance) -> Result<Solve> {
    brute_solve_with_budget(t, x, DEFAULT_NODE_BUDGET)
}

/// Backtracking search; each constraint is checked once its last variable
/// is assigned. More than `budget` search nodes is
/// [`Error::BudgetExhausted`], distinct from [`Solve::Unsolvable`].
pub fn brute_solve_with_budget(t: &Template, x: &CspInstance, budget: u64) -> Result<Solve> {
    let n = x.variable_count;
    let order = search_order(x);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in x.constraints.iter().enumerate() {
        let last = c.vars.iter().map(|&v| pos[v]).max().expect("arity >= 1");
        due[last].push(ci);
    }
    let mut a = vec![0u32; n];
    let mut next = vec![0u32; n];
    let mut depth = 0usize;
    let mut nodes = 0u64;
    loop {
        if depth == n {
            debug_assert!(x.check(t, &a));
            return Ok(Solve::Solution(a));
        }
        let v = order[depth];
        if next[depth] >= t.domain_size {
            next[depth] = 0;
            if depth == 0 {
                return Ok(Solve::Unsolvable);
            }
            depth -= 1;
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Err(Error::BudgetExhausted(format!("brute-force search exceeded {budget} nodes")));
        }
        a[v] = next[depth];
        next[depth] += 1;
        if due[depth].iter().all(|&ci| t.satisfied(&x.constraints[ci], &a)) {
            depth += 1;
        }
    }
}

/// Variables ordered so each one is as connected as possible to those
/// before it.
fn search_order(x: &CspInstance) -> Vec<usize> {
    let n = x.variable_count;
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (links[v], x.on_var[v].len(), usize::MAX - v))
            .expect("unplaced variable");
        placed[v] = true;
        order.push(v);
        for w in x.neighbours(v) {
            links[w] += 1;
        }
    }
    order
}

/// Result of arc consistency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcConsistency {
    /// Fixed-point domains as bit masks over the template domain.
    Domains(Vec<u64>),
    /// The domain of this variable emptied.
    EmptyDomain(usize),
}

fn full_mask(d: u32) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Generalized arc consistency from full domains.
pub fn arc_consistency(t: &Template, x: &CspInstance) -> ArcConsistency {
    arc_consistency_from(t, x, vec![full_mask(t.domain_size); x.variable_count])
}

/// Generalized arc consistency from the given domains: removes a value from
/// a variable's domain while some constraint on it has no allowed tuple
/// through that value within the current domains.
pub fn arc_consistency_from(t: &Template, x: &CspInstance, mut dom: Vec<u64>) -> ArcConsistency {
    if let Some(v) = dom.iter().position(|&d| d == 0) {
        return ArcConsistency::EmptyDomain(v);
    }
    let m = x.constraints.len();
    let mut queued = vec![true; m];
    let mut queue: alloc::collections::VecDeque<usize> = (0..m).collect();
    while let Some(ci) = queue.pop_front() {
        queued[ci] = false;
        let c = &x.constraints[ci];
        let mut support = vec![0u64; c.vars.len()];
        'tuples: for tup in &t.relations[c.relation].tuples {
            for (j, &v) in c.vars.iter().enumerate() {
                if dom[v] >> tup[j] & 1 == 0 {
                    continue 'tuples;
                }
                if c.vars[..j].iter().zip(tup).any(|(&w, &y)| w == v && y != tup[j]) {
                    continue 'tuples;
                }
            }
            for (j, s) in support.iter_mut().enumerate() {
                *s |= 1 << tup[j];
            }
        }
        for (j, &v) in c.vars.iter().enumerate() {
            let pruned = dom[v] & support[j];
            if pruned != dom[v] {
                dom[v] = pruned;
                if pruned == 0 {
                    return ArcConsistency::EmptyDomain(v);
                }
                for &other in &x.on_var[v] {
                    if !queued[other] {
                        queued[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
    }
    ArcConsistency::Domains(dom)
}

/// Outcome of the width-1 certificate procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Width1Outcome {
    /// Arc consistency emptied a domain, so no solution exists.
    Refuted,
    /// An assignment that passed the constraint scan.
    Solved(Vec<u32>),
    /// Arc consistency left nonempty domains but the greedy extraction did
    /// not produce a valid assignment (expected only off width-1 templates).
    Unverified,
}

/// Arc consistency, then fixes variables in id order to the smallest value
/// that keeps the propagated domains nonempty, then scans the constraints.
pub fn width1_solve(t: &Template, x: &CspInstance) -> Width1Outcome {
    let mut dom = match arc_consistency(t, x) {
        ArcConsistency::EmptyDomain(_) => return Width1Outcome::Refuted,
        ArcConsistency::Domains(d) => d,
    };
    for v in 0..x.variable_count {
        let mut chosen = None;
        for a in 0..t.domain_size {
            if dom[v] >> a & 1 == 0 {
                continue;
            }
            let mut trial = dom.clone();
            trial[v] = 1 << a;
            if let ArcConsistency::Domains(d) = arc_consistency_from(t, x, trial) {
                chosen = Some(d);
                break;
            }
        }
        match chosen {
            Some(d) => dom = d,
            None => return Width1Outcome::Unverified,
        }
    }
    let a: Vec<u32> = dom.iter().map(|d| d.trailing_zeros()).collect();
    if x.check(t, &a) {
        Width1Outcome::Solved(a)
    } else {
        Width1Outcome::Unverified
    }
}

/// Minimum size of an unsolvable sub-instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    Exact(usize),
    /// No unsolvable sub-instance with at most `cap` variables.
    NoneFound {
        cap: usize,
    },
    /// The budget ran out; every sub-instance with fewer variables than
    /// this was solvable.
    AtLeast(usize),
}

impl core::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Obstruction::Exact(s) => write!(f, "{s}"),
            Obstruction::NoneFound { cap } => write!(f, ">{cap}"),
            Obstruction::AtLeast(s) => write!(f, ">={s}"),
        }
    }
}

/// Budgets for [`min_obstruction_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObstructionBudget {
    /// Connected variable sets examined.
    pub subsets: u64,
    /// Search nodes per sub-instance solve.
    pub nodes: u64,
}

impl Default for ObstructionBudget {
    fn default() -> Self {
        ObstructionBudget { subsets: 200_000, nodes: 100_000 }
    }
}

pub fn min_obstruction(t: &Template, x: &CspInstance, size_cap: usize) -> Result<Obstruction> {
    min_obstruction_with(t, x, size_cap, ObstructionBudget::default())
}

/// Smallest `|A| <= size_cap` with the restriction to `A` unsolvable.
///
/// Candidate sets are the connected sets of the constraint graph (a minimal
/// unsolvable sub-instance is connected), enumerated size by size. A
/// solvable whole instance answers `NoneFound` at once.
pub fn min_obstruction_with(
    t: &Template,
    x: &CspInstance,
    size_cap: usize,
    budget: ObstructionBudget,
) -> Result<Obstruction> {
    if let Ok(Solve::Solution(_)) = brute_solve_with_budget(t, x, budget.nodes) {
        return Ok(Obstruction::NoneFound { cap: size_cap });
    }
    let adj: Vec<Vec<usize>> = (0..x.variable_count).map(|v| x.neighbours(v).into_iter().collect()).collect();
    let mut spent = 0u64;
    for size in 1..=size_cap.min(x.variable_count) {
        let mut found = false;
        let mut exhausted = false;
        let mut visit = |set: &[usize]| -> Result<bool> {
            spent += 1;
            if spent > budget.subsets {
                exhausted = true;
                return Ok(true);
            }
            let mut sorted = set.to_vec();
            sorted.sort_unstable();
            let sub = x.restrict(t, &sorted)?;
            if sub.constraints.is_empty() {
                return Ok(false);
            }
            let unsolvable = match arc_consistency(t, &sub) {
                ArcConsistency::EmptyDomain(_) => true,
                ArcConsistency::Domains(_) => match brute_solve_with_budget(t, &sub, budget.nodes) {
                    Ok(s) => s == Solve::Unsolvable,
                    Err(Error::BudgetExhausted(_)) => {
                        exhausted = true;
                        return Ok(true);
                    }
                    Err(e) => return Err(e),
                },
            };
            if unsolvable {
                found = true;
            }
            Ok(unsolvable)
        };
        connected_sets(&adj, size, &mut visit)?;
        if found {
            return Ok(Obstruction::Exact(size));
        }
        if exhausted {
            return Ok(Obstruction::AtLeast(size));
        }
    }
    Ok(Obstruction::NoneFound { cap: size_cap })
}

/// Calls `visit` on every connected vertex set of exactly `size` vertices,
/// each once (its smallest vertex is the seed). Stops when `visit` returns
/// true.
fn connected_sets(adj: &[Vec<usize>], size: usize, visit: &mut dyn FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
    fn extend(
        adj: &[Vec<usize>],
        root: usize,
        size: usize,
        set: &mut Vec<usize>,
        ext: Vec<usize>,
        in_nbhd: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        if set.len() == size {
            return visit(set);
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            let mut added = Vec::new();
            for &z in &adj[w] {
                if z > root && in_nbhd[z] == 0 {
                    next.push(z);
                    added.push(z);
                }
            }
            for &z in &added {
                in_nbhd[z] += 1;
            }
            set.push(w);
            let stop = extend(adj, root, size, set, next, in_nbhd, visit)?;
            set.pop();
            for &z in &added {
                in_nbhd[z] -= 1;
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let n = adj.len();
    let mut in_nbhd = vec![0u32; n];
    for root in 0..n {
        in_nbhd[root] += 1;
        let mut ext = Vec::new();
        for &z in &adj[root] {
            if z > root && in_nbhd[z] == 0 {
                ext.push(z);
            }
        }
        for &z in &ext {
            in_nbhd[z] += 1;
        }
        let stop = extend(adj, root, size, &mut vec![root], ext.clone(), &mut in_nbhd, visit)?;
        for &z in &ext {
            in_nbhd[z] -= 1;
        }
        in_nbhd[root] -= 1;
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

/// How [`solution_density`] searches assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMode {
    /// Every assignment, up to `cap` of them.
    Exact { cap: u64 },
    /// Multi-start hill climbing with `moves` single-variable moves in
    /// total, split over `restarts` starts.
    LocalSearch { moves: u64, restarts: u32, seed: u64 },
}

/// Per-relation satisfied fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    /// For each relation with at least one constraint, the best fraction of
    /// its constraints any assignment satisfies.
    pub per_relation: Vec<(String, f64)>,
    /// `min` over relations of `per_relation`.
    pub density: f64,
    /// Fractions achieved by the single assignment maximizing the smallest
    /// per-relation fraction.
    pub joint_per_relation: Vec<(String, f64)>,
    /// The smallest entry of `joint_per_relation`.
    pub joint_density: f64,
    /// False when the values are lower bounds from local search.
    pub exact: bool,
}

/// Incremental satisfied-constraint counts per relation.
struct Counter<'a> {
    t: &'a Template,
    x: &'a CspInstance,
    a: Vec<u32>,
    sat: Vec<bool>,
    counts: Vec<u64>,
}

impl<'a> Counter<'a> {
    fn new(t: &'a Template, x: &'a CspInstance, a: Vec<u32>) -> Self {
        let sat: Vec<bool> = x.constraints.iter().map(|c| t.satisfied(c, &a)).collect();
        let mut counts = vec![0u64; t.relations.len()];
        for (c, &s) in x.constraints.iter().zip(&sat) {
            counts[c.relation] += u64::from(s);
        }
        Counter { t, x, a, sat, counts }
    }

    fn set(&mut self, v: usize, value: u32) {
        self.a[v] = value;
        for &ci in &self.x.on_var[v] {
            let c = &self.x.constraints[ci];
            let now = self.t.satisfied(c, &self.a);
            if now != self.sat[ci] {
                self.sat[ci] = now;
                if now {
                    self.counts[c.relation] += 1;
                } else {
                    self.counts[c.relation] -= 1;
                }
            }
        }
    }
}

fn relation_totals(t: &Template, x: &CspInstance) -> Vec<u64> {
    let mut totals = vec![0u64; t.relations.len()];
    for c in &x.constraints {
        totals[c.relation] += 1;
    }
    totals
}

/// A fraction compared by value.
#[derive(Debug, Clone, Copy)]
struct Ratio(u64, u64);

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == core::cmp::Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (u128::from(self.0) * u128::from(other.1)).cmp(&(u128::from(other.0) * u128::from(self.1)))
    }
}

type Score = (Ratio, u64);

/// Smallest per-relation fraction, then total satisfied.
fn joint_key(counts: &[u64], totals: &[u64]) -> Score {
    let worst = counts
        .iter()
        .zip(totals)
        .filter(|(_, &tot)| tot > 0)
        .map(|(&c, &tot)| Ratio(c, tot))
        .min()
        .unwrap_or(Ratio(1, 1));
    (worst, counts.iter().sum())
}

/// Solution density: for each relation the best fraction of its
/// constraints satisfied by some assignment, and the minimum over relations.
/// The joint variant optimizes one assignment for all relations at once.
pub fn solution_density(t: &Template, x: &CspInstance, mode: DensityMode) -> Result<DensityReport> {
    let totals = relation_totals(t, x);
    let nrel = t.relations.len();
    let (best_per, best_joint, exact) = match mode {
        DensityMode::Exact { cap } => {
            let n = x.variable_count;
            let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(u64::from(t.domain_size)).filter(|&s| s <= cap));
            let Some(total) = total else {
                return Err(Error::BudgetExhausted(format!("{}^{n} assignments exceed the cap {cap}", t.domain_size)));
            };
            let mut counter = Counter::new(t, x, vec![0; n]);
            let mut best_per = counter.counts.clone();
            let mut best_joint = counter.counts.clone();
            for _ in 1..total {
                for v in 0..n {
                    let next = counter.a[v] + 1;
                    if next < t.domain_size {
                        counter.set(v, next);
                        break;
                    }
                    counter.set(v, 0);
                }
                for (b, &c) in best_per.iter_mut().zip(&counter.counts) {
                    *b = (*b).max(c);
                }
                if joint_key(&counter.counts, &totals) > joint_key(&best_joint, &totals) {
                    best_joint.clone_from(&counter.counts);
                }
            }
            (best_per, best_joint, true)
        }
        DensityMode::LocalSearch { moves, restarts, seed } => {
            let restarts = restarts.max(1);
            let mut best_per = vec![0u64; nrel];
            let mut best_joint: Option<Vec<u64>> = None;
            let per_run = moves / (u64::from(restarts) * search_count(nrel));
            // with a single relation the joint objective is the same search
            let targets = search_count(nrel) as usize;
            for run in 0..restarts {
                for target in 0..targets {
                    let mut rng = rng::substream(seed, u64::from(run) * (nrel as u64 + 1) + target as u64);
                    let objective = |counts: &[u64]| -> Score {
                        if target < nrel {
                            (Ratio(counts[target], 1), counts.iter().sum())
                        } else {
                            joint_key(counts, &totals)
                        }
                    };
                    let counts = hill_climb(t, x, per_run, &mut rng, &objective);
                    if nrel == 1
                        && best_joint.as_ref().is_none_or(|b| joint_key(&counts, &totals) > joint_key(b, &totals))
                    {
                        best_joint = Some(counts.clone());
                    }
                    if target < nrel {
                        best_per[target] = best_per[target].max(counts[target]);
                    } else if best_joint.as_ref().is_none_or(|b| objective(&counts) > objective(b)) {
                        best_joint = Some(counts);
                    }
                }
            }
            let best_joint = best_joint.unwrap_or_else(|| vec![0; nrel]);
            for (b, &c) in best_per.iter_mut().zip(&best_joint) {
                *b = (*b).max(c);
            }
            (best_per, best_joint, false)
        }
    };
    let frac = |counts: &[u64]| -> Vec<(String, f64)> {
        t.relations
            .iter()
            .zip(counts.iter().zip(&totals))
            .filter(|(_, (_, &tot))| tot > 0)
            .map(|(r, (&c, &tot))| (r.name.clone(), c as f64 / tot as f64))
            .collect()
    };
    let per_relation = frac(&best_per);
    let joint_per_relation = frac(&best_joint);
    let min = |v: &[(String, f64)]| v.iter().map(|p| p.1).fold(1.0, f64::min);
    Ok(DensityReport {
        density: min(&per_relation),
        joint_density: min(&joint_per_relation),
        per_relation,
        joint_per_relation,
        exact,
    })
}

/// Hill-climbing runs per restart: one per relation plus one for the joint
/// objective, or a single run when there is only one relation.
fn search_count(nrel: usize) -> u64 {
    if nrel == 1 {
        1
    } else {
        nrel as u64 + 1
    }
}

/// Random start, then repeated best-value moves on random variables,
/// sideways moves allowed; returns the best counts seen.
fn hill_climb<R: Rng>(
    t: &Template,
    x: &CspInstance,
    moves: u64,
    rng: &mut R,
    objective: &dyn Fn(&[u64]) -> Score,
) -> Vec<u64> {
    let n = x.variable_count;
    let start = (0..n).map(|_| rng.gen_range(0..t.domain_size)).collect();
    let mut counter = Counter::new(t, x, start);
    let mut best = counter.counts.clone();
    if n == 0 {
        return best;
    }
    for _ in 0..moves {
        let v = rng.gen_range(0..n);
        let current = counter.a[v];
        let here = objective(&counter.counts);
        let mut choice = (here, current);
        let offset = rng.gen_range(0..t.domain_size);
        for i in 0..t.domain_size {
            let value = (offset + i) % t.domain_size;
            if value == current {
                continue;
            }
            counter.set(v, value);
            let score = objective(&counter.counts);
            if score > choice.0 || (score == choice.0 && choice.1 == current) {
                choice = (score, value);
            }
        }
        counter.set(v, choice.1);
        if objective(&counter.counts) > objective(&best) {
            best.clone_from(&counter.counts);
        }
    }
    best
}

/// A relation used as the gluing gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetRelation {
    pub domain_size: u32,
    pub relation: Relation,
    has_constant_tuple: bool,
}

impl GadgetRelation {
    pub fn new(domain_size: u32, relation: Relation) -> Result<Self> {
        let template = Template::new(domain_size, vec![relation])?;
        let relation = template.relations.into_iter().next().expect("one relation");
        let has_constant_tuple = relation.has_constant_tuple();
        Ok(GadgetRelation { domain_size, relation, has_constant_tuple })
    }

    pub fn arity(&self) -> usize {
        self.relation.arity
    }

    pub fn has_constant_tuple(&self) -> bool {
        self.has_constant_tuple
    }

    /// The single-relation template `(D, R)`.
    pub fn template(&self) -> Template {
        Template::new(self.domain_size, vec![self.relation.clone()]).expect("validated on construction")
    }

    /// Non-constant triples over two values.
    pub fn nae3() -> Self {
        GadgetRelation::new(2, Template::nae3().relations[0].clone()).expect("valid gadget")
    }
}

/// One constraint per hyperedge of `h` on its vertices in increasing id
/// order, over [`GadgetRelation::template`]. Gadgets with a constant tuple
/// are rejected.
pub fn glue_instance(r: &GadgetRelation, h: &Hypergraph) -> Result<CspInstance> {
    if r.has_constant_tuple {
        return Err(Error::InvalidParameter(format!("gadget {:?} allows a constant tuple", r.relation.name)));
    }
    glue_relation(&r.template(), 0, h)
}

/// Glues relation `relation` of `t` along `h` without the constant-tuple
/// check.
pub fn glue_relation(t: &Template, relation: usize, h: &Hypergraph) -> Result<CspInstance> {
    let rel =
        t.relations.get(relation).ok_or_else(|| Error::InvalidParameter(format!("unknown relation {relation}")))?;
    if rel.arity != h.uniformity() {
        return Err(Error::UniformityMismatch(rel.arity, h.uniformity()));
    }
    let cs = h.edges().map(|e| Constraint { relation, vars: e.to_vec() }).collect();
    CspInstance::new(t, h.vertex_count(), cs)
}

/// Position in a pattern constraint of a gadget expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// The i-th argument of the expanded constraint.
    Arg(usize),
    /// The j-th fresh variable of this copy.
    Fresh(usize),
}

/// A primitive-positive rewrite of a gadget constraint into template
/// constraints plus fresh variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetExpansion {
    pub template: Template,
    pub arity: usize,
    pub fresh: usize,
    pub pattern: Vec<(usize, Vec<Slot>)>,
}

impl GadgetExpansion {
    /// Checks that the pattern defines exactly the tuples of `r`: a tuple
    /// extends to the fresh variables iff it belongs to `r`.
    pub fn verify(&self, r: &GadgetRelation) -> Result<()> {
        if r.arity() != self.arity || r.domain_size != self.template.domain_size {
            return Err(Error::InvalidParameter("expansion does not match the gadget's shape".into()));
        }
        let d = self.template.domain_size;
        let vars = self.arity + self.fresh;
        let x = self.instantiate(&(0..self.arity).collect::<Vec<_>>(), self.arity, vars)?;
        for args in all_tuples(self.arity, d) {
            let extends = all_tuples(self.fresh, d).any(|ext| {
                let a: Vec<u32> = args.iter().chain(&ext).copied().collect();
                x.check(&self.template, &a)
            });
            if extends != r.relation.tuples.contains(&args) {
                return Err(Error::InvalidParameter(format!("expansion disagrees with the gadget on {args:?}")));
            }
        }
        Ok(())
    }

    fn instantiate(&self, args: &[usize], fresh_base: usize, n: usize) -> Result<CspInstance> {
        let cs = self.constraints_for(args, fresh_base)?;
        CspInstance::new(&self.template, n, cs)
    }

    fn constraints_for(&self, args: &[usize], fresh_base: usize) -> Result<Vec<Constraint>> {
        self.pattern
            .iter()
            .map(|(rel, slots)| {
                let vars = slots
                    .iter()
                    .map(|s| match *s {
                        Slot::Arg(i) => args
                            .get(i)
                            .copied()
                            .ok_or_else(|| Error::InvalidParameter(format!("argument {i} out of range"))),
                        Slot::Fresh(j) if j < self.fresh => Ok(fresh_base + j),
                        Slot::Fresh(j) => Err(Error::InvalidParameter(format!("fresh variable {j} out of range"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Constraint { relation: *rel, vars })
            })
            .collect()
    }

    /// Rewrites every constraint of the glued instance `x`; fresh variables
    /// follow the original ones, `fresh` per constraint.
    pub fn expand(&self, x: &CspInstance) -> Result<CspInstance> {
        let base = x.variable_count;
        let n = base + self.fresh * x.constraints.len();
        let mut cs = Vec::new();
        for (i, c) in x.constraints.iter().enumerate() {
            cs.extend(self.constraints_for(&c.vars, base + i * self.fresh)?);
        }
        CspInstance::new(&self.template, n, cs)
    }
}

/// Parameters of an asymptotic gluing experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub u: usize,
    pub d: usize,
    pub n_list: Vec<usize>,
    pub seeds: Vec<u64>,
    pub obstruction_cap: usize,
    pub obstruction_budget: ObstructionBudget,
    /// Local-search moves per variable.
    pub moves_per_variable: u64,
    pub restarts: u32,
    pub mode: Option<SimplicityMode>,
}

/// One report row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub min_obstruction: Obstruction,
    /// Local-search lower bound on the solution density.
    pub density_lb: f64,
    /// Greedy independence ratio of the underlying hypergraph.
    pub alpha_greedy: f64,
    /// `(log d / d)^{1/(u-1)}`.
    pub bf_reference: f64,
}

/// `(log d / d)^{1/(u-1)}`.
pub fn bf_reference(u: usize, d: usize) -> f64 {
    let d = d as f64;
    libm::pow(libm::log(d) / d, 1.0 / (u as f64 - 1.0))
}

/// Single row: generate, glue (and expand), then measure.
pub fn experiment_row(
    t: &Template,
    relation: usize,
    expansion: Option<&GadgetExpansion>,
    cfg: &ExperimentConfig,
    n: usize,
    seed: u64,
) -> Result<ExperimentRow> {
    let mut gen = GenConfig::new(cfg.u, cfg.d, n, seed);
    if let Some(mode) = cfg.mode {
        gen = gen.with_mode(mode);
    }
    let h = generate(&gen)?.hypergraph;
    let glued = glue_relation(t, relation, &h)?;
    let (tt, x) = match expansion {
        Some(e) => (&e.template, e.expand(&glued)?),
        None => (t, glued),
    };
    let min_obstruction = min_obstruction_with(tt, &x, cfg.obstruction_cap, cfg.obstruction_budget)?;
    let density = solution_density(
        tt,
        &x,
        DensityMode::LocalSearch {
            moves: cfg.moves_per_variable * x.variable_count as u64 * search_count(tt.relations.len()),
            restarts: cfg.restarts,
            seed: rng::derive(seed, 1),
        },
    )?;
    let alpha_greedy =
        if n == 0 { 0.0 } else { h.greedy_independent_set(rng::derive(seed, 2)).len() as f64 / n as f64 };
    Ok(ExperimentRow {
        n,
        d: cfg.d,
        seed,
        min_obstruction,
        density_lb: density.density,
        alpha_greedy,
        bf_reference: bf_reference(cfg.u, cfg.d),
    })
}

/// Rows for every `n` in `cfg.n_list` and every seed.
pub fn asymptotic_experiment(
    t: &Template,
    relation: usize,
    expansion: Option<&GadgetExpansion>,
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentRow>> {
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n_list must be increasing".into()));
    }
    if let Some(e) = expansion {
        e.verify(&GadgetRelation::new(t.domain_size, t.relations[relation].clone())?)?;
    }
    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        for &seed in &cfg.seeds {
            rows.push(experiment_row(t, relation, expansion, cfg, n, seed)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unary() -> Template {
        Template::new(2, vec![Relation::new("U0", 1, [vec![0]]), Relation::new("U1", 1, [vec![1]])]).unwrap()
    }

    fn triangle(t: &Template) -> CspInstance {
        CspInstance::from_named(t, 3, &[("neq", vec![0, 1]), ("neq", vec![1, 2]), ("neq", vec![0, 2])]).unwrap()
    }

    #[test]
    fn template_validation() {
        assert!(Template::new(2, vec![Relation::new("R", 2, [vec![0, 2]])]).is_err());
        assert!(Template::new(2, vec![Relation::new("R", 0, [])]).is_err());
        assert!(Template::new(0, vec![]).is_err());
        let t = Template::two_coloring();
        assert!(CspInstance::from_named(&t, 2, &[("neq", vec![0])]).is_err());
        assert!(CspInstance::from_named(&t, 2, &[("neq", vec![0, 2])]).is_err());
        assert!(CspInstance::from_named(&t, 2, &[("eq", vec![0, 1])]).is_err());
    }

    #[test]
    fn brute_examples() {
        let full = Template::new(3, vec![Relation::from_predicate("all", 2, 3, |_| true)]).unwrap();
        let x = CspInstance::from_named(&full, 4, &[("all", vec![0, 1]), ("all", vec![2, 3])]).unwrap();
        assert_eq!(brute_solve(&full, &x), Ok(Solve::Solution(vec![0; 4])));
        let u = unary();
        let x = CspInstance::from_named(&u, 1, &[("U0", vec![0]), ("U1", vec![0])]).unwrap();
        assert_eq!(brute_solve(&u, &x), Ok(Solve::Unsolvable));
        let t = Template::two_coloring();
        assert_eq!(brute_solve(&t, &triangle(&t)), Ok(Solve::Unsolvable));
        let path = CspInstance::from_named(&t, 3, &[("neq", vec![0, 1]), ("neq", vec![1, 2])]).unwrap();
        assert!(matches!(brute_solve(&t, &path), Ok(Solve::Solution(_))));
        assert!(matches!(brute_solve_with_budget(&t, &triangle(&t), 2), Err(Error::BudgetExhausted(_))));
    }

    #[test]
    fn arc_consistency_examples() {
        let t = Template::two_coloring();
        let empty = CspInstance::new(&t, 3, vec![]).unwrap();
        assert_eq!(arc_consistency(&t, &empty), ArcConsistency::Domains(vec![0b11; 3]));
        let u = unary();
        let x = CspInstance::from_named(&u, 1, &[("U0", vec![0]), ("U1", vec![0])]).unwrap();
        assert_eq!(arc_consistency(&u, &x), ArcConsistency::EmptyDomain(0));
        let horn = Template::new(
            2,
            vec![Relation::new("imp", 2, [vec![0, 0], vec![0, 1], vec![1, 1]]), Relation::new("U1", 1, [vec![1]])],
        )
        .unwrap();
        let chain = CspInstance::from_named(
            &horn,
            5,
            &[("imp", vec![0, 1]), ("imp", vec![1, 2]), ("imp", vec![2, 3]), ("imp", vec![3, 4]), ("U1", vec![0])],
        )
        .unwrap();
        assert_eq!(arc_consistency(&horn, &chain), ArcConsistency::Domains(vec![0b10; 5]));
        assert_eq!(width1_solve(&horn, &chain), Width1Outcome::Solved(vec![1; 5]));
        // triangle 2-colouring is arc consistent but unsolvable
        assert_eq!(arc_consistency(&t, &triangle(&t)), ArcConsistency::Domains(vec![0b11; 3]));
        assert_eq!(width1_solve(&t, &triangle(&t)), Width1Outcome::Unverified);
    }

    #[test]
    fn repeated_variables_are_respected() {
        let t = Template::nae3();
        let x = CspInstance::from_named(&t, 1, &[("nae", vec![0, 0, 0])]).unwrap();
        assert_eq!(arc_consistency(&t, &x), ArcConsistency::EmptyDomain(0));
        assert_eq!(brute_solve(&t, &x), Ok(Solve::Unsolvable));
    }

    #[test]
    fn obstruction_examples() {
        let t = Template::two_coloring();
        assert_eq!(min_obstruction(&t, &triangle(&t), 8), Ok(Obstruction::Exact(3)));
        let path = CspInstance::from_named(&t, 3, &[("neq", vec![0, 1]), ("neq", vec![1, 2])]).unwrap();
        assert_eq!(min_obstruction(&t, &path, 8), Ok(Obstruction::NoneFound { cap: 8 }));
        let u = unary();
        let x = CspInstance::from_named(&u, 2, &[("U0", vec![0]), ("U1", vec![0]), ("U0", vec![1])]).unwrap();
        assert_eq!(min_obstruction(&u, &x, 8), Ok(Obstruction::Exact(1)));
        // a 5-cycle plus a pendant triangle elsewhere
        let mut cs = vec![];
        for i in 0..5 {
            cs.push(("neq", vec![i, (i + 1) % 5]));
        }
        cs.extend([("neq", vec![5, 6]), ("neq", vec![6, 7]), ("neq", vec![5, 7])]);
        let x = CspInstance::from_named(&t, 8, &cs).unwrap();
        assert_eq!(min_obstruction(&t, &x, 8), Ok(Obstruction::Exact(3)));
        let x = CspInstance::from_named(&t, 8, &cs[..5]).unwrap();
        assert_eq!(min_obstruction(&t, &x, 4), Ok(Obstruction::NoneFound { cap: 4 }));
        assert_eq!(min_obstruction(&t, &x, 8), Ok(Obstruction::Exact(5)));
    }

    #[test]
    fn connected_set_enumeration_counts() {
        // path on 4 vertices: 4, 3, 2, 1 connected sets of sizes 1..4
        let adj = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
        for (size, want) in [(1, 4), (2, 3), (3, 2), (4, 1)] {
            let mut seen = BTreeSet::new();
            connected_sets(&adj, size, &mut |s| {
                let mut s = s.to_vec();
                s.sort_unstable();
                assert!(seen.insert(s));
                Ok(false)
            })
            .unwrap();
            assert_eq!(seen.len(), want);
        }
        // star K_{1,3}: sizes 2, 3, 4 give 3, 3, 1
        let adj = vec![vec![1, 2, 3], vec![0], vec![0], vec![0]];
        for (size, want) in [(2, 3), (3, 3), (4, 1)] {
            let mut count = 0;
            connected_sets(&adj, size, &mut |_| {
                count += 1;
                Ok(false)
            })
            .unwrap();
            assert_eq!(count, want);
        }
    }

    #[test]
    fn density_examples() {
        let t = Template::two_coloring();
        let exact = DensityMode::Exact { cap: DEFAULT_ASSIGNMENT_CAP };
        let d = solution_density(&t, &triangle(&t), exact).unwrap();
        assert!((d.density - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.joint_density - 2.0 / 3.0).abs() < 1e-12);
        let path = CspInstance::from_named(&t, 3, &[("neq", vec![0, 1]), ("neq", vec![1, 2])]).unwrap();
        assert_eq!(solution_density(&t, &path, exact).unwrap().density, 1.0);
        let n = Template::nae3();
        let forced = CspInstance::from_named(&n, 1, &[("nae", vec![0, 0, 0])]).unwrap();
        assert_eq!(solution_density(&n, &forced, exact).unwrap().density, 0.0);
        let ls = DensityMode::LocalSearch { moves: 300, restarts: 2, seed: 4 };
        let d = solution_density(&t, &triangle(&t), ls).unwrap();
        assert!(!d.exact && (d.density - 2.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            solution_density(&t, &CspInstance::new(&t, 30, vec![]).unwrap(), DensityMode::Exact { cap: 1000 }),
            Err(Error::BudgetExhausted(_))
        ));
    }

    #[test]
    fn per_relation_and_joint_densities_differ() {
        // NAE on one triple with every variable pinned to 0 by unary
        // constraints: each relation alone is satisfiable, jointly not.
        let t =
            Template::new(2, vec![Template::nae3().relations[0].clone(), Relation::new("U0", 1, [vec![0]])]).unwrap();
        let x = CspInstance::from_named(
            &t,
            3,
            &[("nae", vec![0, 1, 2]), ("U0", vec![0]), ("U0", vec![1]), ("U0", vec![2])],
        )
        .unwrap();
        let d = solution_density(&t, &x, DensityMode::Exact { cap: 100 }).unwrap();
        assert_eq!(d.density, 1.0);
        assert!((d.joint_density - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn glue_examples() {
        let g = GadgetRelation::nae3();
        assert!(!g.has_constant_tuple());
        let h = Hypergraph::new(3, 3, vec![vec![2, 0, 1]]).unwrap();
        let x = glue_instance(&g, &h).unwrap();
        assert_eq!(x.constraints(), &[Constraint { relation: 0, vars: vec![0, 1, 2] }]);
        let empty = glue_instance(&g, &Hypergraph::empty(3, 5).unwrap()).unwrap();
        assert!(matches!(brute_solve(&g.template(), &empty), Ok(Solve::Solution(_))));
        let or3 = GadgetRelation::new(2, Relation::from_predicate("or", 3, 2, |t| t.contains(&1))).unwrap();
        assert!(or3.has_constant_tuple());
        assert!(glue_instance(&or3, &h).is_err());
        let h2 = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(glue_instance(&g, &h2), Err(Error::UniformityMismatch(3, 2)));
    }

    #[test]
    fn expansion_verification() {
        // eq(a, b) as neq(a, z) & neq(z, b)
        let t = Template::two_coloring();
        let eq = GadgetRelation::new(2, Relation::from_predicate("eq", 2, 2, |t| t[0] == t[1])).unwrap();
        let e = GadgetExpansion {
            template: t.clone(),
            arity: 2,
            fresh: 1,
            pattern: vec![(0, vec![Slot::Arg(0), Slot::Fresh(0)]), (0, vec![Slot::Fresh(0), Slot::Arg(1)])],
        };
        assert_eq!(e.verify(&eq), Ok(()));
        let wrong = GadgetExpansion { pattern: vec![(0, vec![Slot::Arg(0), Slot::Arg(1)])], ..e.clone() };
        assert!(wrong.verify(&eq).is_err());
        let h = Hypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let glued = glue_relation(&eq.template(), 0, &h).unwrap();
        let x = e.expand(&glued).unwrap();
        assert_eq!((x.variable_count(), x.constraints().len()), (5, 4));
    }

    #[test]
    fn bf_reference_value() {
        assert!((bf_reference(2, 10) - libm::log(10.0) / 10.0).abs() < 1e-15);
    }
}
