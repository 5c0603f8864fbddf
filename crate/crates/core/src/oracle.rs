//! Brute-force ground truth for desk-scale instances.
//!
//! Everything in this module recomputes answers by exhaustion, sharing no
//! machinery with the incremental engines, so the two can be played against
//! each other in tests. Refusal guards keep the exponential searches inside
//! honest input sizes.

use crate::digraph::{cut_boundary, Cut, Digraph, EdgeId, EdgeSet, Path, PathSystem, VertexId,
    VertexSet};
use crate::error::Error;
use crate::matroid::{self, MatroidOracle, VertexMatroid};
use crate::set::Id;
use crate::waves::{check_wave, ContractedSystem, Wave};
use crate::Instance;

/// Input-size refusals for the exhaustive searches.
#[derive(Clone, Copy, Debug)]
pub struct Guards {
    /// Bound on edge count for backtracking over path systems.
    pub max_edges: usize,
    /// Bound on vertex count for cut enumeration.
    pub max_vertices: usize,
    /// Bound on the number of s→t paths enumerated.
    pub max_paths: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_edges: 20, max_vertices: 20, max_paths: 1_000_000 }
    }
}

impl Guards {
    pub fn unlimited() -> Self {
        Guards { max_edges: usize::MAX, max_vertices: usize::MAX, max_paths: usize::MAX }
    }
}

/// All simple s→t paths in lexicographic edge-sequence order.
pub fn enumerate_st_paths(d: &Digraph, guards: &Guards) -> Result<Vec<Path>, Error> {
    let mut out = Vec::new();
    let mut visited = VertexSet::singleton(d.s());
    let mut prefix = Vec::new();
    dfs_paths(d, d.s(), &mut visited, &mut prefix, &mut out, guards.max_paths)?;
    Ok(out)
}

fn dfs_paths(
    d: &Digraph,
    v: VertexId,
    visited: &mut VertexSet,
    prefix: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
    cap: usize,
) -> Result<(), Error> {
    if v == d.t() {
        if out.len() == cap {
            return Err(Error::GuardExceeded {
                what: "s\u{2192}t path enumeration",
                limit: cap,
                actual: cap + 1,
            });
        }
        out.push(Path::new(d, prefix.clone())?);
        return Ok(());
    }
    for &e in d.out_edges(v) {
        let head = d.edge(e).expect("listed edge in digraph").head;
        if visited.contains(head) {
            continue;
        }
        visited.insert(head);
        prefix.push(e);
        dfs_paths(d, head, visited, prefix, out, cap)?;
        prefix.pop();
        visited.remove(head);
    }
    Ok(())
}

/// The maximum size of an edge-disjoint s→t path system with independent
/// edge union, by backtracking over the lexicographic path list. The witness
/// is the first maximum encountered, hence deterministic.
pub fn max_independent_path_system<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    guards: &Guards,
) -> Result<(usize, PathSystem), Error> {
    if d.edge_count() > guards.max_edges {
        return Err(Error::GuardExceeded {
            what: "path-system backtracking edge count",
            limit: guards.max_edges,
            actual: d.edge_count(),
        });
    }
    let all = enumerate_st_paths(d, guards)?;
    let mut best: (usize, Vec<Path>) = (0, Vec::new());
    let mut chosen = Vec::new();
    let mut used = EdgeSet::new();
    backtrack(&all, m, 0, &mut used, &mut chosen, &mut best);
    Ok((best.0, PathSystem::new(best.1)?))
}

fn backtrack<M: MatroidOracle + ?Sized>(
    all: &[Path],
    m: &M,
    i: usize,
    used: &mut EdgeSet,
    chosen: &mut Vec<Path>,
    best: &mut (usize, Vec<Path>),
) {
    if chosen.len() > best.0 {
        *best = (chosen.len(), chosen.clone());
    }
    if i == all.len() || chosen.len() + (all.len() - i) <= best.0 {
        return;
    }
    let extra = all[i].edge_set();
    if used.is_disjoint(&extra) {
        let widened = used.union(&extra);
        if m.is_independent(&widened) {
            let narrow = std::mem::replace(used, widened);
            chosen.push(all[i].clone());
            backtrack(all, m, i + 1, used, chosen, best);
            chosen.pop();
            *used = narrow;
        }
    }
    backtrack(all, m, i + 1, used, chosen, best);
}

/// The minimum, over t–s cuts X, of the rank of the edges entering X. The
/// witness is the minimizer with the smallest set encoding.
pub fn min_cut_rank<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    guards: &Guards,
) -> Result<(usize, Cut), Error> {
    if d.vertex_count() > guards.max_vertices {
        return Err(Error::GuardExceeded {
            what: "cut enumeration vertex count",
            limit: guards.max_vertices,
            actual: d.vertex_count(),
        });
    }
    let n = d.vertex_count();
    let mut best: Option<(usize, Cut)> = None;
    for mask in 0u64..1 << n {
        if mask >> d.s().index() & 1 == 1 || mask >> d.t().index() & 1 == 0 {
            continue;
        }
        let x: VertexSet =
            (0..n).filter(|i| mask >> i & 1 == 1).map(VertexId::from_index).collect();
        let cut = Cut::new(d, x)?;
        let (entering, _) = cut_boundary(d, &cut);
        let rank = matroid::rank(m, &entering)?;
        if best.as_ref().map_or(true, |(r, _)| rank < *r) {
            best = Some((rank, cut));
        }
    }
    Ok(best.expect("the cut {t} always qualifies"))
}

/// Both exhaustive quantities side by side.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub max_paths: usize,
    pub best_system: PathSystem,
    pub min_cut_rank: usize,
    pub best_cut: Cut,
    pub duality_holds: bool,
}

pub fn check_duality<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    guards: &Guards,
) -> Result<OracleReport, Error> {
    let (max_paths, best_system) = max_independent_path_system(d, m, guards)?;
    let (min_rank, best_cut) = min_cut_rank(d, m, guards)?;
    Ok(OracleReport {
        max_paths,
        best_system,
        min_cut_rank: min_rank,
        best_cut,
        duality_holds: max_paths == min_rank,
    })
}

/// Classic unit-capacity max-flow after translating the matroids away: a
/// free block keeps its edges, a uniform or partition block becomes a
/// bottleneck vertex of the right capacity. Only those families translate;
/// anything else is refused. This path shares no code with the matroid
/// machinery, so it can arbitrate the all-free equivalence.
pub fn classic_maxflow_value(instance: &Instance) -> Result<usize, Error> {
    let d = instance.digraph();
    let mut net = FlowNet::new(d.vertex_count());
    for v in d.vertices() {
        match instance.matroid().block(v.index()) {
            VertexMatroid::Free(_) => {
                for &e in d.in_edges(v) {
                    if !d.is_self_loop(e) {
                        net.arc(d.edge(e).expect("in-edge in digraph").tail.index(), v.index());
                    }
                }
            }
            VertexMatroid::Uniform(u) => {
                net.bottleneck(d, v, u.ground(), u.rank_bound());
            }
            VertexMatroid::Partition(p) => {
                for (block, cap) in p.blocks() {
                    net.bottleneck(d, v, block, *cap);
                }
            }
            _ => {
                return Err(Error::Precondition(
                    "matroid family has no capacity translation",
                ))
            }
        }
    }
    Ok(net.maxflow(d.s().index(), d.t().index()))
}

struct FlowArc {
    to: usize,
    rev: usize,
    cap: u32,
}

struct FlowNet {
    adj: Vec<Vec<FlowArc>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { adj: (0..nodes).map(|_| Vec::new()).collect() }
    }

    fn node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn arc(&mut self, u: usize, v: usize) {
        let back = self.adj[v].len();
        let fore = self.adj[u].len();
        self.adj[u].push(FlowArc { to: v, rev: back, cap: 1 });
        self.adj[v].push(FlowArc { to: u, rev: fore, cap: 0 });
    }

    /// Routes `block`'s edges (all entering `v`) through a fresh node that
    /// lets at most `cap` units into `v`.
    fn bottleneck(&mut self, d: &Digraph, v: VertexId, block: &EdgeSet, cap: usize) {
        let w = self.node();
        let mut size = 0usize;
        for e in block.iter() {
            if !d.is_self_loop(e) {
                self.arc(d.edge(e).expect("block edge in digraph").tail.index(), w);
                size += 1;
            }
        }
        for _ in 0..cap.min(size) {
            self.arc(w, v.index());
        }
    }

    fn maxflow(&mut self, s: usize, t: usize) -> usize {
        let mut value = 0;
        while self.augment(s, t) {
            value += 1;
        }
        value
    }

    /// One unit along a shortest residual path, if any.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([s]);
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for (i, a) in self.adj[u].iter().enumerate() {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    parent[a.to] = Some((u, i));
                    queue.push_back(a.to);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let (u, i) = parent[v].expect("reached vertices have parents");
            let rev = self.adj[u][i].rev;
            self.adj[u][i].cap -= 1;
            self.adj[v][rev].cap += 1;
            v = u;
        }
        true
    }
}

/// Every wave of the system, by exhausting cuts and edge-disjoint bundles of
/// s-originating candidate paths. A test oracle: quadratic-exponential, but
/// complete, so fixpoints of the extension search can be audited against it.
pub fn enumerate_waves(
    sys: &ContractedSystem,
    guards: &Guards,
) -> Result<Vec<Wave>, Error> {
    let live = sys.live();
    if live.edge_count() > guards.max_edges {
        return Err(Error::GuardExceeded {
            what: "wave enumeration edge count",
            limit: guards.max_edges,
            actual: live.edge_count(),
        });
    }
    if live.vertex_count() > guards.max_vertices {
        return Err(Error::GuardExceeded {
            what: "wave enumeration vertex count",
            limit: guards.max_vertices,
            actual: live.vertex_count(),
        });
    }
    let n = live.vertex_count();
    let mut waves = Vec::new();
    for mask in 0u64..1 << n {
        if mask >> live.s().index() & 1 == 1 || mask >> live.t().index() & 1 == 0 {
            continue;
        }
        let x: VertexSet =
            (0..n).filter(|i| mask >> i & 1 == 1).map(VertexId::from_index).collect();
        let cut = Cut::new(live, x)?;
        let mut candidates = Vec::new();
        let mut visited = VertexSet::singleton(live.s());
        let mut prefix = Vec::new();
        dfs_into_cut(live, live.s(), &cut, &mut visited, &mut prefix, &mut candidates)?;
        let mut chosen = Vec::new();
        let mut used = EdgeSet::new();
        collect_bundles(sys, &candidates, 0, &cut, &mut used, &mut chosen, &mut waves)?;
    }
    Ok(waves)
}

/// All simple live paths from s whose vertices avoid the cut until the final
/// step lands in it, in lexicographic order.
fn dfs_into_cut(
    d: &Digraph,
    v: VertexId,
    cut: &Cut,
    visited: &mut VertexSet,
    prefix: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
) -> Result<(), Error> {
    for &e in d.out_edges(v) {
        let head = d.edge(e).expect("listed edge in digraph").head;
        if visited.contains(head) {
            continue;
        }
        prefix.push(e);
        if cut.contains(head) {
            out.push(Path::new(d, prefix.clone())?);
        } else {
            visited.insert(head);
            dfs_into_cut(d, head, cut, visited, prefix, out)?;
            visited.remove(head);
        }
        prefix.pop();
    }
    Ok(())
}

/// Walks every edge-disjoint, view-independent subset of `candidates`,
/// keeping those that satisfy the wave conditions at `cut`.
fn collect_bundles(
    sys: &ContractedSystem,
    candidates: &[Path],
    i: usize,
    cut: &Cut,
    used: &mut EdgeSet,
    chosen: &mut Vec<Path>,
    waves: &mut Vec<Wave>,
) -> Result<(), Error> {
    if i == candidates.len() {
        let system = PathSystem::new(chosen.clone())?;
        if check_wave(sys, &system, cut).is_ok() {
            waves.push(Wave::new(sys, chosen.clone(), cut.clone())?);
        }
        return Ok(());
    }
    let extra = candidates[i].edge_set();
    if used.is_disjoint(&extra) {
        let widened = used.union(&extra);
        if sys.view().is_independent(&widened) {
            let narrow = std::mem::replace(used, widened);
            chosen.push(candidates[i].clone());
            collect_bundles(sys, candidates, i + 1, cut, used, chosen, waves)?;
            chosen.pop();
            *used = narrow;
        }
    }
    collect_bundles(sys, candidates, i + 1, cut, used, chosen, waves)
}
