//! Canonical codes of rooted labelled hypergraphs.
//!
//! The vertex-edge incidence graph is first peeled: non-root nodes of
//! degree at most one are removed until none remain, leaving the rooted
//! 2-core with trees hanging off it. Each hanging tree is encoded bottom-up
//! and folded into the label of the core node it hangs from. If nothing but
//! the root survives, that folded label is the whole code. Otherwise the
//! core goes through colour refinement and individualization-refinement
//! search with automorphism pruning, and the smallest leaf code wins.
//!
//! Tree pieces, all integers as LEB128 varints, `[x]` present only under the
//! matching label flag (1 = edge labels, 2 = slot labels):
//!
//! ```text
//! V = label, count, E*            (hanging edges, sorted)
//! E = [edge label], [slot of parent], count, ([slot], V)*   (sorted)
//! ```

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::localstats::{EdgeLabels, Labelling, RootedHypergraph};

const CODE_VERSION: u8 = 2;
const KIND_CORE: u8 = 0;
const KIND_TREE: u8 = 1;
const MAX_DECODE_DEPTH: usize = 4096;

/// Canonical code of a rooted labelled hypergraph up to root- and
/// label-preserving isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalClass(Vec<u8>);

impl CanonicalClass {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Accepts bytes that decode to a representative.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let class = CanonicalClass(bytes);
        class.decode()?;
        Ok(class)
    }

    /// A representative of the class, rooted at vertex 0.
    pub fn decode(&self) -> Result<RootedHypergraph> {
        let mut rd = Reader::new(&self.0);
        if rd.byte()? != CODE_VERSION {
            return Err(Error::Malformed("unknown canonical code version".into()));
        }
        let kind = rd.byte()?;
        let flags = rd.byte()?;
        if flags > 2 {
            return Err(Error::Malformed(format!("unknown label flags {flags}")));
        }
        let u = rd.usize()?;
        let mut b = Builder { u, flags, labels: Vec::new(), edges: Vec::new() };
        match kind {
            KIND_TREE => {
                b.vertex_piece(&mut rd, 0)?;
            }
            KIND_CORE => {
                let vtable = read_table(&mut rd)?;
                let etable = read_table(&mut rd)?;
                let nv = rd.usize()?;
                let mut ids = Vec::with_capacity(nv.min(1 << 16));
                for _ in 0..nv {
                    let piece = vtable
                        .get(rd.usize()?)
                        .ok_or_else(|| Error::Malformed("vertex label index out of range".into()))?;
                    let mut sub = Reader::new(piece);
                    ids.push(b.vertex_piece(&mut sub, 0)?);
                    sub.finish()?;
                }
                let ne = rd.usize()?;
                for _ in 0..ne {
                    let size = rd.usize()?;
                    let pos = (0..size).map(|_| rd.usize()).collect::<Result<Vec<_>>>()?;
                    let piece = etable
                        .get(rd.usize()?)
                        .ok_or_else(|| Error::Malformed("edge label index out of range".into()))?;
                    let slots =
                        (0..size).map(|_| if flags == 2 { rd.u32() } else { Ok(0) }).collect::<Result<Vec<_>>>()?;
                    let mut members = Vec::with_capacity(size);
                    for (p, s) in pos.into_iter().zip(slots) {
                        let id = *ids.get(p).ok_or_else(|| Error::Malformed("edge position out of range".into()))?;
                        members.push((id, s));
                    }
                    let mut sub = Reader::new(piece);
                    let el = if flags == 1 { sub.u32()? } else { 0 };
                    b.hanging_members(&mut sub, &mut members, 0)?;
                    sub.finish()?;
                    b.edges.push((el, members));
                }
            }
            _ => return Err(Error::Malformed(format!("unknown canonical code kind {kind}"))),
        }
        rd.finish()?;
        if b.labels.is_empty() {
            return Err(Error::Malformed("canonical code without a root".into()));
        }
        b.finish()
    }
}

fn read_table(rd: &mut Reader) -> Result<Vec<Vec<u8>>> {
    let n = rd.usize()?;
    let mut out = Vec::new();
    for _ in 0..n {
        let len = rd.usize()?;
        out.push(rd.take(len)?.to_vec());
    }
    Ok(out)
}

struct Builder {
    u: usize,
    flags: u8,
    labels: Vec<u32>,
    edges: Vec<(u32, Vec<(usize, u32)>)>,
}

impl Builder {
    /// Parses a V piece, creating its vertex and everything hanging below.
    fn vertex_piece(&mut self, rd: &mut Reader, depth: usize) -> Result<usize> {
        if depth > MAX_DECODE_DEPTH {
            return Err(Error::Malformed("tree code nested too deeply".into()));
        }
        let id = self.labels.len();
        self.labels.push(rd.u32()?);
        let count = rd.usize()?;
        for _ in 0..count {
            let el = if self.flags == 1 { rd.u32()? } else { 0 };
            let parent_slot = if self.flags == 2 { rd.u32()? } else { 0 };
            let mut members = vec![(id, parent_slot)];
            self.hanging_members(rd, &mut members, depth + 1)?;
            self.edges.push((el, members));
        }
        Ok(id)
    }

    /// Parses `count, ([slot], V)*`, appending the created vertices.
    fn hanging_members(&mut self, rd: &mut Reader, members: &mut Vec<(usize, u32)>, depth: usize) -> Result<()> {
        let count = rd.usize()?;
        for _ in 0..count {
            let slot = if self.flags == 2 { rd.u32()? } else { 0 };
            let c = self.vertex_piece(rd, depth + 1)?;
            members.push((c, slot));
        }
        Ok(())
    }

    fn finish(self) -> Result<RootedHypergraph> {
        let n = self.labels.len();
        let blocks: Vec<Vec<usize>> = self.edges.iter().map(|(_, vs)| vs.iter().map(|&(v, _)| v).collect()).collect();
        let graph = Hypergraph::new(self.u, n, blocks)?;
        let edge_labels = match self.flags {
            1 => Some(EdgeLabels::Unordered(self.edges.iter().map(|(l, _)| *l).collect())),
            2 => Some(EdgeLabels::Incidence(
                self.edges
                    .iter()
                    .enumerate()
                    .map(|(e, (_, vs))| {
                        graph.edge(e).iter().map(|v| vs.iter().find(|(w, _)| w == v).map_or(0, |&(_, l)| l)).collect()
                    })
                    .collect(),
            )),
            _ => None,
        };
        let k = self
            .labels
            .iter()
            .copied()
            .chain(self.edges.iter().flat_map(|(l, vs)| core::iter::once(*l).chain(vs.iter().map(|&(_, s)| s))))
            .max()
            .unwrap_or(0)
            + 1;
        RootedHypergraph::new(graph, 0, Labelling { k, vertex_labels: self.labels, edge_labels })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, at: 0 }
    }

    fn byte(&mut self) -> Result<u8> {
        let b = *self.bytes.get(self.at).ok_or_else(|| Error::Malformed("truncated canonical code".into()))?;
        self.at += 1;
        Ok(b)
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Malformed("truncated canonical code".into()))?;
        let out = &self.bytes[self.at..end];
        self.at = end;
        Ok(out)
    }

    fn u64(&mut self) -> Result<u64> {
        let mut x = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            x |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                return Ok(x);
            }
        }
        Err(Error::Malformed("overlong varint in canonical code".into()))
    }

    fn u32(&mut self) -> Result<u32> {
        u32::try_from(self.u64()?).map_err(|_| Error::Malformed("label exceeds u32".into()))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Malformed("count exceeds usize".into()))
    }

    fn finish(&self) -> Result<()> {
        if self.at == self.bytes.len() {
            Ok(())
        } else {
            Err(Error::Malformed("trailing bytes in canonical code".into()))
        }
    }
}

fn put(buf: &mut Vec<u8>, x: u64) {
    let mut x = x;
    while x >= 0x80 {
        buf.push((x as u8) | 0x80);
        x >>= 7;
    }
    buf.push(x as u8);
}

/// Flat view of the input: vertex `v` is incidence node `v`, edge `e` is
/// node `nv + e`.
struct Flat<'a> {
    b: &'a RootedHypergraph,
    nv: usize,
    flags: u8,
    vinc: Vec<Vec<(usize, usize)>>,
}

impl<'a> Flat<'a> {
    fn new(b: &'a RootedHypergraph) -> Self {
        let g = &b.graph;
        let mut vinc = vec![Vec::new(); g.vertex_count()];
        for (e, vs) in g.edges().enumerate() {
            for (j, &v) in vs.iter().enumerate() {
                vinc[v].push((e, j));
            }
        }
        Flat { b, nv: g.vertex_count(), flags: b.labelling.flags(), vinc }
    }

    fn edge(&self, e: usize) -> &[usize] {
        self.b.graph.edge(e)
    }

    fn edge_label(&self, e: usize) -> u32 {
        self.b.labelling.edge_label(e)
    }

    fn slot_label(&self, e: usize, slot: usize) -> u32 {
        self.b.labelling.slot_label(e, slot)
    }

    fn slot_of(&self, e: usize, v: usize) -> usize {
        self.edge(e).iter().position(|&x| x == v).expect("vertex lies in edge")
    }

    fn neighbours(&self, node: usize) -> Vec<usize> {
        if node < self.nv {
            self.vinc[node].iter().map(|&(e, _)| self.nv + e).collect()
        } else {
            self.edge(node - self.nv).to_vec()
        }
    }

    fn header(&self, kind: u8) -> Vec<u8> {
        let mut buf = vec![CODE_VERSION, kind, self.flags];
        put(&mut buf, self.b.graph.uniformity() as u64);
        buf
    }
}

/// Removes non-root incidence nodes of degree at most one until none is
/// left; returns the removal order and each removed node's parent.
fn peel(f: &Flat) -> (Vec<bool>, Vec<usize>, Vec<usize>) {
    let total = f.nv + f.b.graph.edge_count();
    let root = f.b.root;
    let mut deg: Vec<usize> = (0..total).map(|x| f.neighbours(x).len()).collect();
    let mut removed = vec![false; total];
    let mut parent = vec![usize::MAX; total];
    let mut order = Vec::new();
    let mut stack: Vec<usize> = (0..total).filter(|&x| x != root && deg[x] <= 1).collect();
    while let Some(x) = stack.pop() {
        if removed[x] {
            continue;
        }
        removed[x] = true;
        order.push(x);
        if let Some(p) = f.neighbours(x).into_iter().find(|&y| !removed[y]) {
            parent[x] = p;
            deg[p] -= 1;
            if p != root && deg[p] <= 1 {
                stack.push(p);
            }
        }
    }
    (removed, order, parent)
}

/// Hanging pieces: for a removed vertex its V piece, for a removed edge its
/// E piece; for a core vertex its folded V piece, for a core edge its E
/// piece without the parent slot.
fn pieces(f: &Flat, removed: &[bool], order: &[usize], parent: &[usize]) -> Vec<Vec<u8>> {
    let total = removed.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); total];
    for &x in order {
        if parent[x] != usize::MAX {
            children[parent[x]].push(x);
        }
    }
    let mut piece: Vec<Vec<u8>> = vec![Vec::new(); total];
    let core = (0..total).filter(|&x| !removed[x]);
    for x in order.iter().copied().chain(core) {
        let mut out = Vec::new();
        if x < f.nv {
            put(&mut out, u64::from(f.b.labelling.vertex_labels[x]));
            let mut kids: Vec<&[u8]> = children[x].iter().map(|&c| piece[c].as_slice()).collect();
            kids.sort_unstable();
            put(&mut out, kids.len() as u64);
            for k in kids {
                out.extend_from_slice(k);
            }
        } else {
            let e = x - f.nv;
            if f.flags == 1 {
                put(&mut out, u64::from(f.edge_label(e)));
            }
            if removed[x] && f.flags == 2 {
                let p = parent[x];
                put(&mut out, u64::from(f.slot_label(e, f.slot_of(e, p))));
            }
            let mut kids: Vec<Vec<u8>> = children[x]
                .iter()
                .map(|&c| {
                    let mut k = Vec::new();
                    if f.flags == 2 {
                        put(&mut k, u64::from(f.slot_label(e, f.slot_of(e, c))));
                    }
                    k.extend_from_slice(&piece[c]);
                    k
                })
                .collect();
            kids.sort_unstable();
            put(&mut out, kids.len() as u64);
            for k in kids {
                out.extend(k);
            }
        }
        piece[x] = out;
    }
    piece
}

/// The core as a labelled incidence structure with canonical initial
/// colours.
struct Core {
    nv: usize,
    edges: Vec<Vec<usize>>,
    slab: Vec<Vec<u32>>,
    vinc: Vec<Vec<(usize, usize)>>,
    vlabel: Vec<u32>,
    elabel: Vec<u32>,
    init_vcol: Vec<u32>,
    init_ecol: Vec<u32>,
    flags: u8,
}

/// Dense ranks of `keys`, preserving their order.
fn rank_by<K: Ord>(keys: &[K]) -> Vec<u32> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut out = vec![0u32; keys.len()];
    let mut r = 0u32;
    for i in 0..idx.len() {
        if i > 0 && keys[idx[i]] != keys[idx[i - 1]] {
            r += 1;
        }
        out[idx[i]] = r;
    }
    out
}

fn class_count(cols: &[u32]) -> usize {
    cols.iter().max().map_or(0, |&m| m as usize + 1)
}

/// Sorted distinct byte strings and the index of each input in that list.
fn table(items: &[Vec<u8>]) -> (Vec<Vec<u8>>, Vec<u32>) {
    let mut distinct: Vec<Vec<u8>> = items.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let idx = items.iter().map(|x| distinct.binary_search(x).expect("present") as u32).collect();
    (distinct, idx)
}

fn put_table(buf: &mut Vec<u8>, t: &[Vec<u8>]) {
    put(buf, t.len() as u64);
    for x in t {
        put(buf, x.len() as u64);
        buf.extend_from_slice(x);
    }
}

/// Refines vertex colours to the coarsest stable partition below them.
fn refine(c: &Core, vcol: &mut Vec<u32>) {
    let mut ecol = c.init_ecol.clone();
    let mut classes = (class_count(vcol), class_count(&ecol));
    let mut scratch: Vec<(u32, u32)> = Vec::new();
    loop {
        let ekeys: Vec<(u32, Vec<(u32, u32)>)> = c
            .edges
            .iter()
            .enumerate()
            .map(|(e, vs)| {
                scratch.clear();
                scratch.extend(vs.iter().enumerate().map(|(j, &v)| (c.slab[e][j], vcol[v])));
                scratch.sort_unstable();
                (ecol[e], scratch.clone())
            })
            .collect();
        ecol = rank_by(&ekeys);
        let vkeys: Vec<(u32, Vec<(u32, u32)>)> = (0..c.nv)
            .map(|v| {
                scratch.clear();
                scratch.extend(c.vinc[v].iter().map(|&(e, j)| (c.slab[e][j], ecol[e])));
                scratch.sort_unstable();
                (vcol[v], scratch.clone())
            })
            .collect();
        *vcol = rank_by(&vkeys);
        let next = (class_count(vcol), class_count(&ecol));
        if next == classes {
            return;
        }
        classes = next;
    }
}

fn encode_leaf(c: &Core, pos: &[u32]) -> Vec<u8> {
    let mut buf = Vec::new();
    put(&mut buf, c.nv as u64);
    let mut by_pos = vec![0u32; c.nv];
    for v in 0..c.nv {
        by_pos[pos[v] as usize] = c.vlabel[v];
    }
    for l in by_pos {
        put(&mut buf, u64::from(l));
    }
    let mut rows: Vec<Vec<u32>> = c
        .edges
        .iter()
        .enumerate()
        .map(|(e, vs)| {
            let mut slots: Vec<(u32, u32)> = vs.iter().enumerate().map(|(j, &v)| (pos[v], c.slab[e][j])).collect();
            slots.sort_unstable();
            let mut row = vec![vs.len() as u32];
            row.extend(slots.iter().map(|s| s.0));
            row.push(c.elabel[e]);
            if c.flags == 2 {
                row.extend(slots.iter().map(|s| s.1));
            }
            row
        })
        .collect();
    rows.sort_unstable();
    put(&mut buf, rows.len() as u64);
    for row in rows {
        for x in row {
            put(&mut buf, u64::from(x));
        }
    }
    buf
}

struct Search<'a> {
    c: &'a Core,
    first: Option<(Vec<u8>, Vec<usize>)>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Explores the subtree below a refined partition. Returns the depth to
    /// unwind to when an automorphism onto the first leaf was found below a
    /// node off the first path.
    fn run(&mut self, vcol: Vec<u32>, prefix: &mut Vec<usize>, on_first_path: bool) -> Option<usize> {
        let nv = self.c.nv;
        if class_count(&vcol) == nv {
            return self.leaf(&vcol, prefix.len());
        }
        let mut sizes = vec![0usize; nv];
        for &c in &vcol {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).expect("non-discrete partition") as u32;
        let cell: Vec<usize> = (0..nv).filter(|&v| vcol[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &x in &cell {
            if !explored.is_empty() && self.equivalent_to_explored(prefix, &explored, x) {
                continue;
            }
            explored.push(x);
            let mut child: Vec<u32> = vcol
                .iter()
                .enumerate()
                .map(|(v, &c)| if c > target || (c == target && v != x) { c + 1 } else { c })
                .collect();
            refine(self.c, &mut child);
            prefix.push(x);
            let first_child = on_first_path && explored.len() == 1;
            let jump = self.run(child, prefix, first_child);
            prefix.pop();
            if let Some(level) = jump {
                if level < prefix.len() {
                    return Some(level);
                }
            }
        }
        None
    }

    /// Whether automorphisms found so far that fix `prefix` pointwise map
    /// `x` onto an explored sibling.
    fn equivalent_to_explored(&self, prefix: &[usize], explored: &[usize], x: usize) -> bool {
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut parent: Vec<usize> = (0..self.c.nv).collect();
        let mut any = false;
        for g in &self.generators {
            if prefix.iter().all(|&p| g[p] == p) {
                any = true;
                for (a, &b) in g.iter().enumerate() {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&y| find(&mut parent, y) == rx)
    }

    fn leaf(&mut self, pos: &[u32], depth: usize) -> Option<usize> {
        let code = encode_leaf(self.c, pos);
        let mut lab = vec![0usize; self.c.nv];
        for (v, &p) in pos.iter().enumerate() {
            lab[p as usize] = v;
        }
        let mut jump = None;
        for (which, reference) in [(0, &self.first), (1, &self.best)] {
            let Some(reference) = reference else { continue };
            if reference.0 != code {
                continue;
            }
            let mut gamma = vec![0usize; self.c.nv];
            for i in 0..self.c.nv {
                gamma[reference.1[i]] = lab[i];
            }
            if gamma.iter().enumerate().any(|(a, &b)| a != b) && !self.generators.contains(&gamma) {
                self.generators.push(gamma);
            }
            if which == 0 {
                // back to the deepest first-path node this leaf agrees with
                let agree = reference.1.iter().zip(&lab).take(depth).take_while(|(a, b)| a == b).count();
                jump = Some(agree.min(depth));
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), lab.clone()));
        }
        if self.best.as_ref().is_none_or(|b| code < b.0) {
            self.best = Some((code, lab));
        }
        jump
    }
}

/// Canonical code of `b`.
pub fn canonicalize(b: &RootedHypergraph) -> CanonicalClass {
    encode(b, b.graph.component_count() == 1)
}

/// Canonical code through the refinement search on the whole structure,
/// without peeling hanging trees. Equal inputs up to isomorphism still get
/// equal codes, but the codes differ from those of [`canonicalize`].
pub fn canonicalize_by_refinement(b: &RootedHypergraph) -> CanonicalClass {
    encode(b, false)
}

fn encode(b: &RootedHypergraph, peel_trees: bool) -> CanonicalClass {
    let f = Flat::new(b);
    let total = f.nv + b.graph.edge_count();
    let (removed, order, parent) =
        if peel_trees { peel(&f) } else { (vec![false; total], Vec::new(), vec![usize::MAX; total]) };
    let piece = pieces(&f, &removed, &order, &parent);
    let core_vertices: Vec<usize> = (0..f.nv).filter(|&v| !removed[v]).collect();
    let core_edges: Vec<usize> = (0..b.graph.edge_count()).filter(|&e| !removed[f.nv + e]).collect();
    if peel_trees && core_edges.is_empty() {
        let mut buf = f.header(KIND_TREE);
        buf.extend_from_slice(&piece[b.root]);
        return CanonicalClass(buf);
    }
    let mut local = vec![usize::MAX; f.nv];
    for (i, &v) in core_vertices.iter().enumerate() {
        local[v] = i;
    }
    let (vtable, vlabel) = table(&core_vertices.iter().map(|&v| piece[v].clone()).collect::<Vec<_>>());
    let (etable, elabel) = table(&core_edges.iter().map(|&e| piece[f.nv + e].clone()).collect::<Vec<_>>());
    let mut edges = Vec::with_capacity(core_edges.len());
    let mut slab = Vec::with_capacity(core_edges.len());
    for &e in &core_edges {
        let (vs, ls): (Vec<usize>, Vec<u32>) = f
            .edge(e)
            .iter()
            .enumerate()
            .filter(|&(_, &v)| !removed[v])
            .map(|(j, &v)| (local[v], f.slot_label(e, j)))
            .unzip();
        edges.push(vs);
        slab.push(ls);
    }
    let nv = core_vertices.len();
    let mut vinc = vec![Vec::new(); nv];
    for (e, vs) in edges.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate() {
            vinc[v].push((e, j));
        }
    }
    let root = local[b.root];
    let vkeys: Vec<(bool, u32, usize)> = (0..nv).map(|v| (v != root, vlabel[v], vinc[v].len())).collect();
    let ekeys: Vec<(u32, usize)> = (0..edges.len()).map(|e| (elabel[e], edges[e].len())).collect();
    let core = Core {
        nv,
        init_vcol: rank_by(&vkeys),
        init_ecol: rank_by(&ekeys),
        edges,
        slab,
        vinc,
        vlabel,
        elabel,
        flags: f.flags,
    };
    let mut vcol = core.init_vcol.clone();
    refine(&core, &mut vcol);
    let mut search = Search { c: &core, first: None, best: None, generators: Vec::new() };
    search.run(vcol, &mut Vec::new(), true);
    let mut buf = f.header(KIND_CORE);
    put_table(&mut buf, &vtable);
    put_table(&mut buf, &etable);
    buf.extend(search.best.expect("search reaches a leaf").0);
    CanonicalClass(buf)
}
