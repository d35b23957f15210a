//! Random rooted labelled balls, measures and CSP instances, with brute-force
//! oracles, shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hyperlab_core::csp::{Constraint, CspInstance, Relation, Template};
use hyperlab_core::localstats::{
    canonicalize, labelled_ball, CanonicalClass, EdgeLabels, EmpiricalMeasure, Labelling, RootedHypergraph,
};
use hyperlab_core::{rng, Hypergraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random hypergraph on `n` vertices with up to `max_edges` distinct edges.
pub fn random_hypergraph<R: Rng>(rng: &mut R, u: usize, n: usize, max_edges: usize) -> Hypergraph {
    let mut edges: Vec<Vec<usize>> = Vec::new();
    if n >= u {
        let tries = rng.gen_range(0..=max_edges);
        let all: Vec<usize> = (0..n).collect();
        for _ in 0..tries {
            let mut e: Vec<usize> = all.choose_multiple(rng, u).copied().collect();
            e.sort_unstable();
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    Hypergraph::new(u, n, edges).unwrap()
}

pub fn random_labelling<R: Rng>(rng: &mut R, h: &Hypergraph, k: u32) -> Labelling {
    let vertex_labels = (0..h.vertex_count()).map(|_| rng.gen_range(0..k)).collect();
    let edge_labels = match rng.gen_range(0..3) {
        0 => None,
        1 => Some(EdgeLabels::Unordered((0..h.edge_count()).map(|_| rng.gen_range(0..k)).collect())),
        _ => Some(EdgeLabels::Incidence(h.edges().map(|e| e.iter().map(|_| rng.gen_range(0..k)).collect()).collect())),
    };
    Labelling { k, vertex_labels, edge_labels }
}

/// A labelled ball with at most `max_n` vertices.
pub fn random_ball<R: Rng>(rng: &mut R, max_n: usize) -> RootedHypergraph {
    let u = rng.gen_range(2..=3);
    let n = rng.gen_range(1..=max_n);
    let density = rng.gen_range(n / 2..=2 * n);
    let h = random_hypergraph(rng, u, n, density);
    let k = rng.gen_range(1..=3);
    let f = random_labelling(rng, &h, k);
    let r = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=3) };
    // mostly roots that see at least one edge
    let touched: Vec<usize> = (0..n).filter(|&v| !h.incident(v).is_empty()).collect();
    let root = match touched.choose(rng) {
        Some(&v) if rng.gen_bool(0.9) => v,
        _ => rng.gen_range(0..n),
    };
    labelled_ball(&h, &f, root, r).unwrap()
}

/// `b` with vertices renamed by a random permutation and edges shuffled.
pub fn relabelled<R: Rng>(rng: &mut R, b: &RootedHypergraph) -> RootedHypergraph {
    let n = b.graph.vertex_count();
    let mut pi: Vec<usize> = (0..n).collect();
    pi.shuffle(rng);
    let mut order: Vec<usize> = (0..b.graph.edge_count()).collect();
    order.shuffle(rng);
    let mut vertex_labels = vec![0; n];
    for v in 0..n {
        vertex_labels[pi[v]] = b.labelling.vertex_labels[v];
    }
    let edges: Vec<Vec<usize>> = order.iter().map(|&e| b.graph.edge(e).iter().map(|&v| pi[v]).collect()).collect();
    let graph = Hypergraph::new(b.graph.uniformity(), n, edges).unwrap();
    let edge_labels = match &b.labelling.edge_labels {
        None => None,
        Some(EdgeLabels::Unordered(ls)) => Some(EdgeLabels::Unordered(order.iter().map(|&e| ls[e]).collect())),
        Some(EdgeLabels::Incidence(ls)) => Some(EdgeLabels::Incidence(
            order
                .iter()
                .zip(graph.edges())
                .map(|(&e, sorted)| {
                    let old = b.graph.edge(e);
                    sorted
                        .iter()
                        .map(|&w| {
                            let j = old.iter().position(|&v| pi[v] == w).unwrap();
                            ls[e][j]
                        })
                        .collect()
                })
                .collect(),
        )),
    };
    let labelling = Labelling { k: b.labelling.k, vertex_labels, edge_labels };
    RootedHypergraph::new(graph, pi[b.root], labelling).unwrap()
}

/// `b` with one small random change; the result may or may not be
/// isomorphic to `b`.
pub fn perturbed<R: Rng>(rng: &mut R, b: &RootedHypergraph) -> RootedHypergraph {
    let mut c = b.clone();
    let n = c.graph.vertex_count();
    let k = c.labelling.k.max(2);
    c.labelling.k = k;
    match rng.gen_range(0..4) {
        0 => {
            let v = rng.gen_range(0..n);
            c.labelling.vertex_labels[v] = rng.gen_range(0..k);
        }
        1 => c.root = rng.gen_range(0..n),
        2 => match &mut c.labelling.edge_labels {
            Some(EdgeLabels::Unordered(ls)) if !ls.is_empty() => {
                let e = rng.gen_range(0..ls.len());
                ls[e] = rng.gen_range(0..k);
            }
            Some(EdgeLabels::Incidence(ls)) if !ls.is_empty() => {
                let e = rng.gen_range(0..ls.len());
                let j = rng.gen_range(0..ls[e].len());
                ls[e][j] = rng.gen_range(0..k);
            }
            _ => {
                let v = rng.gen_range(0..n);
                c.labelling.vertex_labels[v] = rng.gen_range(0..k);
            }
        },
        _ => {
            let u = c.graph.uniformity();
            let m = c.graph.edge_count();
            if m == 0 || n < u {
                return c;
            }
            let drop = rng.gen_range(0..m);
            let mut edges: Vec<Vec<usize>> = c.graph.edges().map(|e| e.to_vec()).collect();
            let all: Vec<usize> = (0..n).collect();
            let mut fresh: Vec<usize> = all.choose_multiple(rng, u).copied().collect();
            fresh.sort_unstable();
            if edges.contains(&fresh) {
                return c;
            }
            edges[drop] = fresh;
            let graph = Hypergraph::new(u, n, edges).unwrap();
            if let Some(EdgeLabels::Incidence(ls)) = &mut c.labelling.edge_labels {
                ls[drop] = (0..u).map(|_| rng.gen_range(0..k)).collect();
            }
            c.graph = graph;
        }
    }
    RootedHypergraph::new(c.graph, c.root, c.labelling).unwrap()
}

/// Edge sets keyed by vertex set, carrying the edge label and the slot label
/// of each member.
fn edge_table(b: &RootedHypergraph) -> BTreeMap<Vec<usize>, (u32, Vec<u32>)> {
    b.graph
        .edges()
        .enumerate()
        .map(|(e, vs)| {
            let (el, slots) = match &b.labelling.edge_labels {
                None => (0, vec![0; vs.len()]),
                Some(EdgeLabels::Unordered(ls)) => (ls[e], vec![0; vs.len()]),
                Some(EdgeLabels::Incidence(ls)) => (0, ls[e].clone()),
            };
            (vs.to_vec(), (el, slots))
        })
        .collect()
}

fn edge_labels_kind(b: &RootedHypergraph) -> u8 {
    match b.labelling.edge_labels {
        None => 0,
        Some(EdgeLabels::Unordered(_)) => 1,
        Some(EdgeLabels::Incidence(_)) => 2,
    }
}

/// Whether some bijection maps `a` onto `b`, root to root, preserving every
/// label. Plain backtracking over vertex images.
pub fn isomorphic(a: &RootedHypergraph, b: &RootedHypergraph) -> bool {
    let n = a.graph.vertex_count();
    if n != b.graph.vertex_count()
        || a.graph.edge_count() != b.graph.edge_count()
        || a.graph.uniformity() != b.graph.uniformity()
        || edge_labels_kind(a) != edge_labels_kind(b)
    {
        return false;
    }
    let ta = edge_table(a);
    let tb = edge_table(b);
    let mut pi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(a, b, &ta, &tb, &mut pi, &mut used, 0)
}

fn extend(
    a: &RootedHypergraph,
    b: &RootedHypergraph,
    ta: &BTreeMap<Vec<usize>, (u32, Vec<u32>)>,
    tb: &BTreeMap<Vec<usize>, (u32, Vec<u32>)>,
    pi: &mut Vec<usize>,
    used: &mut Vec<bool>,
    v: usize,
) -> bool {
    let n = pi.len();
    if v == n {
        return true;
    }
    for w in 0..n {
        if used[w]
            || (v == a.root) != (w == b.root)
            || a.labelling.vertex_labels[v] != b.labelling.vertex_labels[w]
            || a.graph.incident(v).len() != b.graph.incident(w).len()
        {
            continue;
        }
        pi[v] = w;
        used[w] = true;
        // every edge whose largest vertex is v is now fully mapped
        let ok = a.graph.incident(v).iter().all(|&e| {
            let vs = a.graph.edge(e);
            if *vs.last().unwrap() != v {
                return true;
            }
            let (el, slots) = &ta[vs];
            let mut image: Vec<(usize, u32)> = vs.iter().zip(slots).map(|(&x, &s)| (pi[x], s)).collect();
            image.sort_unstable();
            let key: Vec<usize> = image.iter().map(|p| p.0).collect();
            match tb.get(&key) {
                Some((el2, slots2)) => el == el2 && image.iter().map(|p| p.1).eq(slots2.iter().copied()),
                None => false,
            }
        });
        if ok && extend(a, b, ta, tb, pi, used, v + 1) {
            return true;
        }
        used[w] = false;
        pi[v] = usize::MAX;
    }
    false
}

pub fn class_pool() -> Vec<CanonicalClass> {
    let mut r = rng::stream(7);
    let mut pool: Vec<CanonicalClass> = (0..200).map(|_| canonicalize(&random_ball(&mut r, 6))).collect();
    pool.sort();
    pool.dedup();
    pool
}

pub fn random_measure<R: Rng>(r: &mut R, pool: &[CanonicalClass]) -> EmpiricalMeasure {
    let support = r.gen_range(1..=6);
    let counts: Vec<(CanonicalClass, u64)> =
        (0..support).map(|_| (pool[r.gen_range(0..pool.len())].clone(), r.gen_range(1..=40))).collect();
    EmpiricalMeasure::from_counts(counts).unwrap()
}

pub fn random_set<R: Rng>(r: &mut R, pool: &[CanonicalClass]) -> Vec<EmpiricalMeasure> {
    (0..r.gen_range(1..=5)).map(|_| random_measure(r, pool)).collect()
}

/// `p/q <= s/t + x/y` on exact fractions.
pub fn sum_dominates(lhs: (u128, u128), a: (u128, u128), b: (u128, u128)) -> bool {
    lhs.0 * a.1 * b.1 <= (a.0 * b.1 + b.0 * a.1) * lhs.1
}

pub fn random_template<R: Rng>(r: &mut R) -> Template {
    let d = r.gen_range(2..=3u32);
    let relations = (0..r.gen_range(1..=3))
        .map(|i| {
            let arity = r.gen_range(1..=3);
            let keep = r.gen_range(0.2..0.9);
            let tuples: Vec<Vec<u32>> = (0..d.pow(arity as u32))
                .map(|c| (0..arity as u32).map(|j| c / d.pow(j) % d).collect())
                .filter(|_| r.gen_bool(keep))
                .collect();
            Relation::new(format!("R{i}"), arity, tuples)
        })
        .collect();
    Template::new(d, relations).unwrap()
}

pub fn random_instance<R: Rng>(r: &mut R, t: &Template, max_vars: usize) -> CspInstance {
    let n = r.gen_range(1..=max_vars);
    let constraints = (0..r.gen_range(1..=2 * n))
        .map(|_| {
            let relation = r.gen_range(0..t.relations().len());
            let vars = (0..t.relation(relation).arity).map(|_| r.gen_range(0..n)).collect();
            Constraint { relation, vars }
        })
        .collect();
    CspInstance::new(t, n, constraints).unwrap()
}

pub fn solutions(t: &Template, x: &CspInstance) -> Vec<Vec<u32>> {
    let n = x.variable_count();
    let d = t.domain_size;
    let mut out = Vec::new();
    for code in 0..(d as u64).pow(n as u32) {
        let mut c = code;
        let a: Vec<u32> = (0..n)
            .map(|_| {
                let v = (c % d as u64) as u32;
                c /= d as u64;
                v
            })
            .collect();
        if x.check(t, &a) {
            out.push(a);
        }
    }
    out
}
