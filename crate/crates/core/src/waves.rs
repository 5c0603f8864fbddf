//! The proof-following engine.
//!
//! A wave (W, X) pairs an independent system of s→X paths with a t–s cut X
//! whose entering edges are spanned by the paths' last edges — the blocking
//! structure dual to augmentation. Waves are partially ordered by cut
//! shrinkage and forward continuation; maximal waves are computed by fixpoint
//! search over candidate cuts, and the final construction grows one
//! s-arborescence per wave path, extracting its unique s→t path and
//! contracting its edges before handling the next path.
//!
//! Everything here works relative to a [`ContractedSystem`]: the instance
//! with an independent edge set A₀ contracted in the matroid and span(A₀)
//! deleted from the digraph.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::digraph::{
    contract_system, cut_boundary, delete_spanned, Cut, Digraph, EdgeId, EdgeSet, Path,
    PathSystem, VertexId, VertexSet,
};
use crate::error::Error;
use crate::matroid::{self, DirectSumMatroid, MatroidOracle, Minor};
use crate::solver::{self, Certificate};
use crate::Instance;

/// The instance 𝔇(A₀): base digraph and matroid, an independent contracted
/// set, and the derived live digraph (span deleted) and matroid view
/// (contraction as a minor). `suppressed` carries extra edge deletions used
/// transiently by the proper-extension normalization.
#[derive(Clone)]
pub struct ContractedSystem {
    digraph: Arc<Digraph>,
    matroid: Arc<DirectSumMatroid>,
    contracted: EdgeSet,
    suppressed: EdgeSet,
    live: Digraph,
    view: Minor,
}

impl ContractedSystem {
    pub fn root(instance: &Instance) -> Self {
        Self::new(instance.digraph_arc(), instance.matroid_arc(), EdgeSet::new())
            .expect("the empty set is independent")
    }

    pub fn new(
        digraph: Arc<Digraph>,
        matroid: Arc<DirectSumMatroid>,
        contracted: EdgeSet,
    ) -> Result<Self, Error> {
        Self::assemble(digraph, matroid, contracted, EdgeSet::new())
    }

    fn assemble(
        digraph: Arc<Digraph>,
        matroid: Arc<DirectSumMatroid>,
        contracted: EdgeSet,
        suppressed: EdgeSet,
    ) -> Result<Self, Error> {
        if let Some(e) = digraph.edge_set().iter().find(|&e| !matroid.ground().contains(e)) {
            return Err(Error::NotInGround(e));
        }
        if !matroid::is_independent_checked(matroid.as_ref(), &contracted)? {
            return Err(Error::DependentSet);
        }
        let spanned = matroid::span(matroid.as_ref(), &contracted)?;
        let dead = spanned.union(&suppressed);
        let live = digraph.sub_digraph(&digraph.edge_set().difference(&dead));
        let delete = dead.difference(&contracted);
        let base: Arc<dyn MatroidOracle> = matroid.clone();
        let view = Minor::new(base, &contracted, &delete)?;
        Ok(ContractedSystem { digraph, matroid, contracted, suppressed, live, view })
    }

    /// The system with `extra` contracted on top of the current set.
    pub fn contract_more(&self, extra: &EdgeSet) -> Result<Self, Error> {
        Self::assemble(
            self.digraph.clone(),
            self.matroid.clone(),
            self.contracted.union(extra),
            self.suppressed.clone(),
        )
    }

    /// The system with `extra` edges deleted outright (not contracted).
    fn suppress(&self, extra: &EdgeSet) -> Result<Self, Error> {
        Self::assemble(
            self.digraph.clone(),
            self.matroid.clone(),
            self.contracted.clone(),
            self.suppressed.union(extra),
        )
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn matroid(&self) -> &DirectSumMatroid {
        &self.matroid
    }

    pub fn contracted(&self) -> &EdgeSet {
        &self.contracted
    }

    /// The base digraph minus span(contracted) (minus any suppressed edges).
    pub fn live(&self) -> &Digraph {
        &self.live
    }

    /// The matroid with `contracted` contracted and the dead edges deleted;
    /// its ground set is exactly the live edge set.
    pub fn view(&self) -> &Minor {
        &self.view
    }

    /// Edges of the live digraph entering the cut.
    pub fn in_live(&self, cut: &Cut) -> EdgeSet {
        cut_boundary(&self.live, cut).0
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
pub enum WaveViolation {
    #[error("path {index} does not start at the source")]
    PathNotFromSource { index: usize },
    #[error("path {index} does not end inside the cut")]
    PathMissesCut { index: usize },
    #[error("path {index} enters the cut before its end")]
    PathEntersCutEarly { index: usize },
    #[error("edge {edge} is not live in this system")]
    DeadEdge { edge: EdgeId },
    #[error("the united path edge set is dependent in the contracted view")]
    DependentPaths,
    #[error("entering edge {edge} is not spanned by the last-edge set")]
    UnspannedEnteringEdge { edge: EdgeId },
}

/// An independent s→X path system whose last edges span the cut's entering
/// edges. Paths are kept sorted by edge sequence, so equal waves compare
/// equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wave {
    paths: PathSystem,
    cut: Cut,
}

impl Wave {
    pub fn new(sys: &ContractedSystem, mut paths: Vec<Path>, cut: Cut) -> Result<Self, Error> {
        paths.sort();
        let paths = PathSystem::new(paths)?;
        check_wave(sys, &paths, &cut).map_err(Error::InvalidWave)?;
        Ok(Wave { paths, cut })
    }

    pub fn paths(&self) -> &PathSystem {
        &self.paths
    }

    pub fn cut(&self) -> &Cut {
        &self.cut
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Checks the wave conditions for `(paths, cut)` in `sys`, reporting the
/// first violation: paths run from s into the cut touching it only at their
/// ends, use live edges, are jointly independent in the view, and their last
/// edges span the cut's live entering edges.
pub fn check_wave(
    sys: &ContractedSystem,
    paths: &PathSystem,
    cut: &Cut,
) -> Result<(), WaveViolation> {
    let live = sys.live();
    for (index, p) in paths.iter().enumerate() {
        if let Some(edge) = p.edges().iter().copied().find(|&e| !live.contains_edge(e)) {
            return Err(WaveViolation::DeadEdge { edge });
        }
        if p.start(live) != live.s() {
            return Err(WaveViolation::PathNotFromSource { index });
        }
        let vertices = p.vertices(live);
        let (end, interior) = vertices.split_last().expect("paths are nonempty");
        if !cut.contains(*end) {
            return Err(WaveViolation::PathMissesCut { index });
        }
        if interior.iter().any(|&v| cut.contains(v)) {
            return Err(WaveViolation::PathEntersCutEarly { index });
        }
    }
    let united = paths.edge_set();
    if !sys.view().is_independent(&united) {
        return Err(WaveViolation::DependentPaths);
    }
    let last = paths.last_edge_set();
    let spanned = matroid::span(sys.view(), &last)
        .expect("last edges are live, hence inside the view ground");
    match sys.in_live(cut).difference(&spanned).first() {
        Some(edge) => Err(WaveViolation::UnspannedEnteringEdge { edge }),
        None => Ok(()),
    }
}

pub fn is_wave(sys: &ContractedSystem, paths: &PathSystem, cut: &Cut) -> bool {
    check_wave(sys, paths, cut).is_ok()
}

/// The wave every system admits: a greedy base of the live out-edges of s as
/// single-edge paths, with X = V∖{s}.
pub fn trivial_wave(sys: &ContractedSystem) -> Result<Wave, Error> {
    let live = sys.live();
    let candidates: EdgeSet =
        live.out_edges(live.s()).iter().copied().filter(|&e| !live.is_self_loop(e)).collect();
    let base = matroid::greedy_base(sys.view(), &candidates)?;
    let paths = base
        .iter()
        .map(|e| Path::new(live, vec![e]))
        .collect::<Result<Vec<_>, _>>()?;
    let cut_set: VertexSet = live.vertices().filter(|&v| v != live.s()).collect();
    Wave::new(sys, paths, Cut::new(live, cut_set)?)
}

/// How two waves sit in the extension order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WaveOrder {
    /// w1 extends w0: its cut shrank (or stayed), every w1 path forward-
    /// continues a w0 path inside the old cut, and every w0 path meeting the
    /// new cut was retained.
    pub extends: bool,
    /// The cut strictly shrank.
    pub proper: bool,
    /// Every w0 path has a forward-continuation among the w1 paths.
    pub complete: bool,
}

/// True when `inner` is `outer` with extra edges appended and the appended
/// part stays inside `region`.
fn continues_within(d: &Digraph, outer: &Path, inner: &Path, region: &Cut) -> bool {
    if !outer.is_prefix_of(inner) {
        return false;
    }
    inner.vertices(d)[outer.len()..].iter().all(|&v| region.contains(v))
}

/// Decides w0 ≤ w1 in the extension order, with the properness and
/// completeness flags.
pub fn wave_leq(d: &Digraph, w0: &Wave, w1: &Wave) -> WaveOrder {
    let x0 = w0.cut();
    let nothing = WaveOrder { extends: false, proper: false, complete: false };
    if !w1.cut().set().is_subset(x0.set()) {
        return nothing;
    }
    let continued = |p1: &Path| w0.paths().iter().any(|p0| continues_within(d, p0, p1, x0));
    if !w1.paths().iter().all(continued) {
        return nothing;
    }
    let meets_new_cut =
        |p0: &Path| p0.vertices(d).iter().any(|&v| w1.cut().contains(v));
    if w0.paths().iter().any(|p0| meets_new_cut(p0) && !w1.paths().contains_path(p0)) {
        return nothing;
    }
    let complete = w0
        .paths()
        .iter()
        .all(|p0| w1.paths().iter().any(|p1| continues_within(d, p0, p1, x0)));
    WaveOrder { extends: true, proper: w1.cut().set() != x0.set(), complete }
}

/// Merges a wave `w = (W, X)` with a continuation wave `q = (Q, Y)`,
/// `Y ⊆ X`: keep the W-paths already ending in Y, extend their last edges to
/// a base B using last edges of Q, and adopt exactly the Q-paths meeting B.
/// The result is a wave at Y extending `w`.
pub fn merge_waves(sys: &ContractedSystem, w: &Wave, q: &Wave) -> Result<Wave, Error> {
    if !q.cut().set().is_subset(w.cut().set()) {
        return Err(Error::CutNotNested);
    }
    let d = sys.digraph();
    for p in q.paths().iter() {
        if !w.paths().iter().any(|p0| continues_within(d, p0, p, w.cut())) {
            return Err(Error::Precondition(
                "merge requires forward-continuations staying inside the outer cut",
            ));
        }
    }
    let kept: Vec<&Path> =
        w.paths().iter().filter(|p| q.cut().contains(p.end(d))).collect();
    let mut base: EdgeSet = kept.iter().map(|p| p.last_edge()).collect();
    for e in q.paths().last_edge_set().iter() {
        if !base.contains(e) {
            base.insert(e);
            if !sys.view().is_independent(&base) {
                base.remove(e);
            }
        }
    }
    let mut merged: Vec<Path> = kept.into_iter().cloned().collect();
    for p in q.paths().iter() {
        if !p.edge_set().is_disjoint(&base) && !merged.contains(p) {
            merged.push(p.clone());
        }
    }
    Wave::new(sys, merged, q.cut().clone())
}

/// Cuts every path back to its first entry into `z`. Requires the
/// complementarity conditions between the path system and `z`; the initial
/// segments then form a wave at `z`.
pub fn truncate_to_cut(
    sys: &ContractedSystem,
    paths: &PathSystem,
    z: &Cut,
) -> Result<Wave, Error> {
    let live = sys.live();
    let (entering, leaving) = cut_boundary(live, z);
    let united = paths.edge_set();
    if !united.is_disjoint(&leaving) {
        return Err(Error::Precondition("a path edge leaves the cut"));
    }
    let used_entering = united.intersection(&entering);
    let spanned = matroid::span(sys.view(), &used_entering)?;
    if !entering.is_subset(&spanned) {
        return Err(Error::Precondition("path edges entering the cut do not span it"));
    }
    let mut truncated = Vec::new();
    for p in paths.iter() {
        let crossing = p
            .edges()
            .iter()
            .position(|&e| entering.contains(e))
            .ok_or(Error::Precondition("a path never enters the cut"))?;
        truncated.push(Path::new(live, p.edges()[..=crossing].to_vec())?);
    }
    Wave::new(sys, truncated, z.clone())
}

/// A directed tree rooted at s; every vertex is reachable from the root.
#[derive(Clone, Debug)]
pub struct Arborescence {
    root: VertexId,
    edges: Vec<EdgeId>,
    parent: BTreeMap<VertexId, EdgeId>,
    vertices: VertexSet,
}

impl Arborescence {
    pub fn from_path(d: &Digraph, path: &Path) -> Self {
        let root = path.start(d);
        let mut arb = Arborescence {
            root,
            edges: Vec::new(),
            parent: BTreeMap::new(),
            vertices: VertexSet::singleton(root),
        };
        for &e in path.edges() {
            arb.add_edge(d, e).expect("a path grows a tree from its own start");
        }
        arb
    }

    /// Adds an edge whose tail is already in the tree and whose head is new.
    pub fn add_edge(&mut self, d: &Digraph, e: EdgeId) -> Result<(), Error> {
        let edge = d.edge(e).ok_or(Error::UnknownEdge(e))?;
        if !self.vertices.contains(edge.tail) {
            return Err(Error::Precondition("tree edge must leave a tree vertex"));
        }
        if !self.vertices.insert(edge.head) {
            return Err(Error::Precondition("tree edge must reach a fresh vertex"));
        }
        self.edges.push(e);
        self.parent.insert(edge.head, e);
        Ok(())
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(v)
    }

    /// The unique root→v tree path (v must differ from the root: zero-length
    /// paths are not representable).
    pub fn path_to(&self, d: &Digraph, v: VertexId) -> Result<Path, Error> {
        if v == self.root {
            return Err(Error::EmptyPath);
        }
        let mut rev = Vec::new();
        let mut cur = v;
        while cur != self.root {
            let &e = self
                .parent
                .get(&cur)
                .ok_or(Error::Precondition("vertex is not in the tree"))?;
            rev.push(e);
            cur = d.edge(e).expect("tree edge in digraph").tail;
        }
        rev.reverse();
        Path::new(d, rev)
    }
}

/// Searches for a proper extension of `w`: a wave with a strictly smaller
/// cut. Candidate cuts Y ⊊ X (t ∈ Y) are tried in ascending size, then
/// ascending set encoding. For each, the entering edges of X are first
/// narrowed to the wave's last edges, V∖X is contracted to a super-source
/// and Y to a super-sink, and the augmenting-walk engine is run in the
/// contracted digraph under the contracted matroid view. The candidate is
/// accepted exactly when the resulting last edges span everything entering
/// the super-sink; the resulting paths are then glued back onto their wave
/// paths and merged. Returns `None` iff `w` is maximal.
pub fn find_proper_extension(
    sys: &ContractedSystem,
    w: &Wave,
) -> Result<Option<Wave>, Error> {
    let x = w.cut();
    let last_edges = w.paths().last_edge_set();
    let narrowed = sys.suppress(&sys.in_live(x).difference(&last_edges))?;
    check_wave(&narrowed, w.paths(), x).map_err(|v| {
        Error::Invariant(format!("wave broke under entering-edge normalization: {v}"))
    })?;

    let members: Vec<VertexId> = x.set().iter().collect();
    let t = sys.digraph().t();
    let t_bit = members.iter().position(|&v| v == t).expect("cuts contain the sink");
    let full = (1u64 << members.len()) - 1;
    let mut candidates: Vec<VertexSet> = (0..full)
        .filter(|mask| mask >> t_bit & 1 == 1)
        .map(|mask| {
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.encoding_cmp(b)));

    let by_last_edge: BTreeMap<EdgeId, &Path> =
        w.paths().iter().map(|p| (p.last_edge(), p)).collect();

    for y_set in candidates {
        let y = Cut::new(sys.digraph(), y_set)?;
        let shrunk = contract_system(narrowed.live(), x, &y)?;
        let dc = &shrunk.digraph;
        let grown = solver::maximize(dc, narrowed.view(), PathSystem::empty())?;
        let achieved = matroid::span(narrowed.view(), &grown.last_edge_set())?;
        if !dc.in_edge_set(dc.t()).is_subset(&achieved) {
            continue;
        }
        let mut glued = Vec::new();
        for r in grown.iter() {
            let first = r.edges()[0];
            let stem = by_last_edge.get(&first).ok_or_else(|| {
                Error::Invariant(format!(
                    "contracted path starts with {first}, not a wave last edge"
                ))
            })?;
            let mut edges = stem.edges().to_vec();
            edges.extend_from_slice(&r.edges()[1..]);
            glued.push(Path::new(sys.digraph(), edges)?);
        }
        let q = Wave::new(&narrowed, glued, y.clone())?;
        let merged = merge_waves(&narrowed, w, &q)?;
        // Put the narrowed-away edges back: the merged wave must stand in
        // the original system, entering edges and all.
        let result =
            Wave::new(sys, merged.paths().paths().to_vec(), merged.cut().clone())?;
        return Ok(Some(result));
    }
    Ok(None)
}

/// The fixpoint of [`find_proper_extension`] above `start`. Terminates since
/// every proper step strictly shrinks the cut.
pub fn maximal_wave(sys: &ContractedSystem, start: Wave) -> Result<Wave, Error> {
    let mut wave = start;
    while let Some(next) = find_proper_extension(sys, &wave)? {
        wave = next;
    }
    Ok(wave)
}

/// Outcome of [`reach_t_path`]: the sink itself needs no path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ReachT {
    AlreadyAtT,
    Via(Path),
}

/// From any vertex of a maximal wave's cut there is a path to t inside the
/// cut avoiding everything the wave spans. Failure to find one means the
/// wave was not maximal, and is reported as exactly that.
pub fn reach_t_path(
    sys: &ContractedSystem,
    w: &Wave,
    v: VertexId,
) -> Result<ReachT, Error> {
    if !w.cut().contains(v) {
        return Err(Error::Precondition("start vertex must lie in the wave cut"));
    }
    let t = sys.digraph().t();
    if v == t {
        return Ok(ReachT::AlreadyAtT);
    }
    let unspanned = delete_spanned(sys.live(), sys.view(), &w.paths().edge_set())?;
    let inside: EdgeSet = unspanned
        .edges()
        .iter()
        .filter(|e| w.cut().contains(e.tail) && w.cut().contains(e.head) && e.tail != e.head)
        .map(|e| e.id)
        .collect();
    let restricted = unspanned.sub_digraph(&inside);
    match lex_bfs_path(&restricted, v, t) {
        Some(edges) => {
            let path = Path::new(&restricted, edges)?;
            let union = w.paths().edge_set().union(&path.edge_set());
            if !sys.view().is_independent(&union) {
                return Err(Error::Invariant(
                    "reach-t path is not jointly independent with the wave".into(),
                ));
            }
            Ok(ReachT::Via(path))
        }
        None => Err(Error::NonMaximalWave),
    }
}

/// Shortest path by BFS with ascending-edge expansion: lexicographically
/// least among the shortest.
fn lex_bfs_path(d: &Digraph, from: VertexId, to: VertexId) -> Option<Vec<EdgeId>> {
    let mut parent: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    let mut seen = VertexSet::singleton(from);
    queue.push_back(from);
    'bfs: while let Some(v) = queue.pop_front() {
        for &e in d.out_edges(v) {
            let head = d.edge(e).expect("listed edge in digraph").head;
            if seen.insert(head) {
                parent.insert(head, e);
                if head == to {
                    break 'bfs;
                }
                queue.push_back(head);
            }
        }
    }
    if !seen.contains(to) || from == to {
        return None;
    }
    let mut rev = Vec::new();
    let mut cur = to;
    while cur != from {
        let e = parent[&cur];
        rev.push(e);
        cur = d.edge(e).expect("parent edge in digraph").tail;
    }
    rev.reverse();
    Some(rev)
}

pub struct GrownArborescence {
    pub arborescence: Arborescence,
    /// Maximal wave for the system with the arborescence contracted; a
    /// complete extension of the input wave minus the chosen path.
    pub wave: Wave,
    /// The system 𝔇(A₀ ∪ A(𝒜)).
    pub system: ContractedSystem,
}

/// Grows an s-arborescence around one wave path P of a maximal wave: start
/// from P, repeatedly contract what the tree owns, re-establish a maximal
/// wave completely extending the previous one, and absorb the smallest live
/// unspanned edge leaving the tree. The remaining wave paths stay disjoint
/// from (and jointly independent with) the tree, and t ends up inside it.
pub fn grow_arborescence(
    sys: &ContractedSystem,
    w0: &Wave,
    p: &Path,
) -> Result<GrownArborescence, Error> {
    if !w0.paths().contains_path(p) {
        return Err(Error::Precondition("the chosen path must belong to the wave"));
    }
    let d = sys.digraph();
    let rest: Vec<Path> = w0.paths().iter().filter(|q| *q != p).cloned().collect();

    let mut system = sys.contract_more(&p.edge_set())?;
    let mut wave = Wave::new(&system, rest, w0.cut().clone()).map_err(|e| {
        Error::Invariant(format!("wave minus its path is no wave after contraction: {e}"))
    })?;
    if find_proper_extension(&system, &wave)?.is_some() {
        return Err(Error::Invariant(
            "wave minus its path lost maximality after contraction".into(),
        ));
    }
    let start_wave = wave.clone();

    let mut arborescence = Arborescence::from_path(d, p);
    loop {
        let free = delete_spanned(system.live(), system.view(), &wave.paths().edge_set())?;
        let frontier = free.edges().iter().find(|e| {
            arborescence.contains_vertex(e.tail) && !arborescence.contains_vertex(e.head)
        });
        let Some(edge) = frontier else { break };
        let edge = *edge;
        arborescence.add_edge(d, edge.id)?;
        system = system.contract_more(&EdgeSet::singleton(edge.id))?;
        let carried =
            Wave::new(&system, wave.paths().paths().to_vec(), wave.cut().clone()).map_err(
                |e| Error::Invariant(format!("wave did not survive tree contraction: {e}")),
            )?;
        let next = maximal_wave(&system, carried)?;
        let order = wave_leq(d, &wave, &next);
        if !(order.extends && order.complete) {
            return Err(Error::Invariant(
                "re-established wave is not a complete extension".into(),
            ));
        }
        wave = next;
    }
    if !arborescence.contains_vertex(d.t()) {
        return Err(Error::Invariant("arborescence never absorbed the sink".into()));
    }
    let overall = wave_leq(d, &start_wave, &wave);
    if !(overall.extends && overall.complete) {
        return Err(Error::Invariant(
            "final wave does not completely extend the start wave".into(),
        ));
    }
    Ok(GrownArborescence { arborescence, wave, system })
}

/// Caps for the proof-following engine; maximal-wave search is exponential
/// in the cut size, so desk-scale instances only.
#[derive(Clone, Copy, Debug)]
pub struct ProofLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for ProofLimits {
    fn default() -> Self {
        ProofLimits { max_vertices: 10, max_edges: 14 }
    }
}

/// The proof-following engine: compute a maximal wave, then repeatedly grow
/// an arborescence around its first path, harvest the tree's unique s→t
/// path, and continue in the contracted system with the re-established
/// wave. Emits the same kind of audited certificate as the direct engine,
/// with the first maximal wave's cut.
pub fn proof_solve(instance: &Instance) -> Result<Certificate, Error> {
    proof_solve_with_limits(instance, &ProofLimits::default())
}

pub fn proof_solve_with_limits(
    instance: &Instance,
    limits: &ProofLimits,
) -> Result<Certificate, Error> {
    let d = instance.digraph();
    if d.vertex_count() > limits.max_vertices {
        return Err(Error::GuardExceeded {
            what: "proof engine vertex count",
            limit: limits.max_vertices,
            actual: d.vertex_count(),
        });
    }
    if d.edge_count() > limits.max_edges {
        return Err(Error::GuardExceeded {
            what: "proof engine edge count",
            limit: limits.max_edges,
            actual: d.edge_count(),
        });
    }

    let mut system = ContractedSystem::root(instance);
    let mut wave = maximal_wave(&system, trivial_wave(&system)?)?;
    let cut = wave.cut().clone();
    let mut harvested = Vec::new();
    while !wave.is_empty() {
        let p = wave.paths().paths()[0].clone();
        let grown = grow_arborescence(&system, &wave, &p)?;
        let p_star = grown.arborescence.path_to(d, d.t())?;
        if !p.is_prefix_of(&p_star) {
            return Err(Error::Invariant(
                "harvested s\u{2192}t path does not continue its wave path".into(),
            ));
        }
        harvested.push(p_star);
        wave = grown.wave;
        system = grown.system;
    }
    let paths = PathSystem::new(harvested)?;
    let (entering, _) = cut_boundary(d, &cut);
    let cover = paths.edge_set().intersection(&entering);
    let cert = Certificate { paths, cut, cover };
    solver::verify_certificate(d, instance.matroid(), &cert).map_err(|v| {
        Error::Invariant(format!("proof-built certificate failed its audit: {v}"))
    })?;
    Ok(cert)
}
