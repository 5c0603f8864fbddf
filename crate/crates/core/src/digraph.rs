//! Finite directed multigraphs with a distinguished source `s` and sink `t`.
//!
//! Vertices and edges carry dense integer ids; parallel edges and self-loops
//! are allowed (self-loops are inert for path search). Derived graphs produced
//! by edge deletion or by contraction keep the original edge ids, so matroid
//! oracles keyed by those ids stay valid; such graphs have non-dense id sets
//! but remember the original id bound for bitset sizing.

use std::fmt;

use crate::error::Error;
use crate::matroid::{self, MatroidOracle};
use crate::set::{Id, IdSet};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub u32);

impl Id for VertexId {
    fn from_index(index: usize) -> Self {
        VertexId(index as u32)
    }
    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Id for EdgeId {
    fn from_index(index: usize) -> Self {
        EdgeId(index as u32)
    }
    fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type VertexSet = IdSet<VertexId>;
pub type EdgeSet = IdSet<EdgeId>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A digraph with dense vertex ids `0..vertex_count` and edge ids below
/// `edge_id_bound`. Incidence lists are kept in ascending edge-id order.
#[derive(Clone, Debug)]
pub struct Digraph {
    vertex_count: usize,
    edge_id_bound: usize,
    edges: Vec<Edge>,
    slot: Vec<Option<u32>>,
    in_map: Vec<Vec<EdgeId>>,
    out_map: Vec<Vec<EdgeId>>,
    s: VertexId,
    t: VertexId,
}

impl Digraph {
    /// Builds a digraph from `(tail, head)` pairs, assigning dense edge ids in
    /// declaration order.
    pub fn new(
        vertex_count: usize,
        s: VertexId,
        t: VertexId,
        pairs: &[(u32, u32)],
    ) -> Result<Self, Error> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(id, &(tail, head))| Edge {
                id: EdgeId(id as u32),
                tail: VertexId(tail),
                head: VertexId(head),
            })
            .collect();
        Self::with_edges(vertex_count, s, t, edges, pairs.len())
    }

    /// Builds a digraph from explicit edges; ids must be unique and below
    /// `edge_id_bound` but need not be dense.
    pub fn with_edges(
        vertex_count: usize,
        s: VertexId,
        t: VertexId,
        mut edges: Vec<Edge>,
        edge_id_bound: usize,
    ) -> Result<Self, Error> {
        if s == t {
            return Err(Error::SourceEqualsSink);
        }
        for &v in &[s, t] {
            if v.index() >= vertex_count {
                return Err(Error::UnknownVertex(v));
            }
        }
        edges.sort_by_key(|e| e.id);
        let mut slot = vec![None; edge_id_bound];
        let mut in_map = vec![Vec::new(); vertex_count];
        let mut out_map = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            if e.id.index() >= edge_id_bound {
                return Err(Error::UnknownEdge(e.id));
            }
            if slot[e.id.index()].is_some() {
                return Err(Error::DuplicateEdgeId(e.id));
            }
            for &v in &[e.tail, e.head] {
                if v.index() >= vertex_count {
                    return Err(Error::UnknownVertex(v));
                }
            }
            slot[e.id.index()] = Some(i as u32);
            out_map[e.tail.index()].push(e.id);
            in_map[e.head.index()].push(e.id);
        }
        Ok(Digraph { vertex_count, edge_id_bound, edges, slot, in_map, out_map, s, t })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edge ids are strictly below this bound (the original dense count,
    /// preserved through deletions and contractions).
    pub fn edge_id_bound(&self) -> usize {
        self.edge_id_bound
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count as u32).map(VertexId)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        let i = *self.slot.get(id.index())?;
        i.map(|i| &self.edges[i as usize])
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edge(id).is_some()
    }

    pub fn is_self_loop(&self, id: EdgeId) -> bool {
        self.edge(id).is_some_and(|e| e.tail == e.head)
    }

    /// In-edges of `v`, ascending by id.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_map[v.index()]
    }

    /// Out-edges of `v`, ascending by id.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_map[v.index()]
    }

    pub fn in_edge_set(&self, v: VertexId) -> EdgeSet {
        self.in_map[v.index()].iter().copied().collect()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().map(|e| e.id).collect()
    }

    /// The digraph restricted to the edges in `keep`; vertex set, `s`, `t`
    /// and edge ids are unchanged.
    pub fn sub_digraph(&self, keep: &EdgeSet) -> Digraph {
        let edges = self.edges.iter().filter(|e| keep.contains(e.id)).copied().collect();
        Digraph::with_edges(self.vertex_count, self.s, self.t, edges, self.edge_id_bound)
            .expect("restriction of a valid digraph is valid")
    }
}

/// A t–s cut: a vertex set containing `t` and avoiding `s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cut {
    set: VertexSet,
}

impl Cut {
    pub fn new(d: &Digraph, set: VertexSet) -> Result<Self, Error> {
        if set.contains(d.s()) {
            return Err(Error::InvalidCut("cut contains the source"));
        }
        if !set.contains(d.t()) {
            return Err(Error::InvalidCut("cut does not contain the sink"));
        }
        if set.iter().any(|v| v.index() >= d.vertex_count()) {
            return Err(Error::InvalidCut("cut mentions an unknown vertex"));
        }
        Ok(Cut { set })
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.set.contains(v)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Splits the edges incident to the cut `x` into `(in(X), out(X))`: edges
/// entering X from outside, and edges leaving X. Edges with both endpoints on
/// one side (including self-loops) are in neither.
pub fn cut_boundary(d: &Digraph, x: &Cut) -> (EdgeSet, EdgeSet) {
    let mut into = EdgeSet::new();
    let mut out = EdgeSet::new();
    for e in d.edges() {
        match (x.contains(e.tail), x.contains(e.head)) {
            (false, true) => {
                into.insert(e.id);
            }
            (true, false) => {
                out.insert(e.id);
            }
            _ => {}
        }
    }
    (into, out)
}

/// A nonempty directed path, stored as its edge-id sequence. Consecutive
/// edges share a vertex and no vertex repeats, so self-loops never occur.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Path {
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn new(d: &Digraph, edges: Vec<EdgeId>) -> Result<Self, Error> {
        if edges.is_empty() {
            return Err(Error::EmptyPath);
        }
        let mut seen = VertexSet::new();
        let mut cur = None;
        for &id in &edges {
            let e = d.edge(id).ok_or(Error::UnknownEdge(id))?;
            match cur {
                None => {
                    seen.insert(e.tail);
                }
                Some(prev) => {
                    if e.tail != prev {
                        return Err(Error::DisconnectedPath { at: id });
                    }
                }
            }
            if !seen.insert(e.head) {
                return Err(Error::PathRepeatsVertex { at: e.head });
            }
            cur = Some(e.head);
        }
        Ok(Path { edges })
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn first_edge(&self) -> EdgeId {
        self.edges[0]
    }

    pub fn last_edge(&self) -> EdgeId {
        *self.edges.last().expect("paths are nonempty")
    }

    pub fn start(&self, d: &Digraph) -> VertexId {
        d.edge(self.edges[0]).expect("path edge in digraph").tail
    }

    pub fn end(&self, d: &Digraph) -> VertexId {
        d.edge(self.last_edge()).expect("path edge in digraph").head
    }

    /// The vertex sequence, starting vertex first.
    pub fn vertices(&self, d: &Digraph) -> Vec<VertexId> {
        let mut out = vec![self.start(d)];
        for &id in &self.edges {
            out.push(d.edge(id).expect("path edge in digraph").head);
        }
        out
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    /// True when `self`'s edge sequence is an initial segment of `other`'s;
    /// equality counts.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        other.edges.len() >= self.edges.len() && other.edges[..self.edges.len()] == self.edges[..]
    }
}

/// Pairwise edge-disjoint paths.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathSystem {
    paths: Vec<Path>,
}

impl PathSystem {
    pub fn empty() -> Self {
        PathSystem { paths: Vec::new() }
    }

    pub fn new(paths: Vec<Path>) -> Result<Self, Error> {
        let mut used = EdgeSet::new();
        for p in &paths {
            for &e in p.edges() {
                if !used.insert(e) {
                    return Err(Error::PathsShareEdge(e));
                }
            }
        }
        Ok(PathSystem { paths })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Path> {
        self.paths.iter()
    }

    /// Union of all edges, `A(P)`.
    pub fn edge_set(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for p in &self.paths {
            out.extend(p.edges().iter().copied());
        }
        out
    }

    /// The set of last edges, one per path.
    pub fn last_edge_set(&self) -> EdgeSet {
        self.paths.iter().map(|p| p.last_edge()).collect()
    }

    pub fn contains_path(&self, path: &Path) -> bool {
        self.paths.iter().any(|p| p == path)
    }
}

pub struct GreedyDecomposition {
    pub paths: PathSystem,
    pub unused: EdgeSet,
}

/// Decomposes `edges` into edge-disjoint s→t paths by repeatedly walking from
/// `s` along the smallest-id unused edge, erasing any cycle the walk closes.
/// Erased and untouched leftovers are reported in `unused`. Fails when a walk
/// strands at a vertex with no exit, which means `edges` was not a union of
/// s→t paths and balanced cycles.
pub fn build_paths_greedy(d: &Digraph, edges: &EdgeSet) -> Result<GreedyDecomposition, Error> {
    if let Some(missing) = edges.iter().find(|&e| !d.contains_edge(e)) {
        return Err(Error::UnknownEdge(missing));
    }
    let mut pool = edges.clone();
    let mut unused = EdgeSet::new();
    let mut paths = Vec::new();
    let next_from = |pool: &EdgeSet, v: VertexId| {
        d.out_edges(v).iter().copied().find(|&e| pool.contains(e) && !d.is_self_loop(e))
    };
    loop {
        if next_from(&pool, d.s()).is_none() {
            break;
        }
        let mut trail: Vec<EdgeId> = Vec::new();
        let mut vseq = vec![d.s()];
        let mut cur = d.s();
        while cur != d.t() {
            let e = next_from(&pool, cur).ok_or(Error::MalformedAugmentation { at: cur })?;
            pool.remove(e);
            let head = d.edge(e).expect("pool edge in digraph").head;
            if let Some(j) = vseq.iter().position(|&v| v == head) {
                // The walk closed a cycle; drop it (closing edge included)
                // and resume from the repeated vertex.
                unused.insert(e);
                unused.extend(trail.drain(j..));
                vseq.truncate(j + 1);
            } else {
                trail.push(e);
                vseq.push(head);
            }
            cur = head;
        }
        paths.push(Path::new(d, trail)?);
    }
    unused.union_with(&pool);
    Ok(GreedyDecomposition { paths: PathSystem::new(paths)?, unused })
}

/// Where a vertex of the original digraph ended up after contraction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ContractedClass {
    /// Merged into the new source (the original complement of X).
    Source,
    /// Merged into the new sink (the original Y).
    Sink,
    Plain(VertexId),
}

pub struct Contraction {
    pub digraph: Digraph,
    /// Indexed by new vertex id.
    pub class_of: Vec<ContractedClass>,
    /// Indexed by original vertex id: its image.
    pub image: Vec<VertexId>,
}

/// Contracts V∖X to a super-source and Y to a super-sink (`Y ⊆ X` required).
/// Edges interior to either merged class disappear; all other edges survive
/// with their original ids. X∖Y keeps its vertices, renumbered.
pub fn contract_system(d: &Digraph, x: &Cut, y: &Cut) -> Result<Contraction, Error> {
    if !y.set().is_subset(x.set()) {
        return Err(Error::CutNotNested);
    }
    let source = VertexId(0);
    let mut class_of = vec![ContractedClass::Source];
    let mut image = vec![VertexId(0); d.vertex_count()];
    for v in d.vertices() {
        if x.contains(v) && !y.contains(v) {
            image[v.index()] = VertexId(class_of.len() as u32);
            class_of.push(ContractedClass::Plain(v));
        }
    }
    let sink = VertexId(class_of.len() as u32);
    class_of.push(ContractedClass::Sink);
    for v in d.vertices() {
        if !x.contains(v) {
            image[v.index()] = source;
        } else if y.contains(v) {
            image[v.index()] = sink;
        }
    }
    let mut edges = Vec::new();
    for e in d.edges() {
        let tail = image[e.tail.index()];
        let head = image[e.head.index()];
        let merged = |v: VertexId| v == source || v == sink;
        if tail == head && merged(tail) {
            continue;
        }
        edges.push(Edge { id: e.id, tail, head });
    }
    let digraph =
        Digraph::with_edges(class_of.len(), source, sink, edges, d.edge_id_bound())?;
    Ok(Contraction { digraph, class_of, image })
}

/// Deletes `span(a0)` from the digraph. `a0` must be an independent edge set
/// of the current digraph.
pub fn delete_spanned<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    a0: &EdgeSet,
) -> Result<Digraph, Error> {
    if let Some(missing) = a0.iter().find(|&e| !d.contains_edge(e)) {
        return Err(Error::UnknownEdge(missing));
    }
    if !matroid::is_independent_checked(m, a0)? {
        return Err(Error::DependentSet);
    }
    let keep = d.edge_set().difference(&matroid::span(m, a0)?);
    Ok(d.sub_digraph(&keep))
}
