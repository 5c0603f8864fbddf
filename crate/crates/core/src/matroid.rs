//! Matroid oracles over edge sets.
//!
//! Everything the algorithms need — rank, span, fundamental circuits,
//! contraction — is derived from a single independence predicate, so any
//! implementor of [`MatroidOracle`] plugs in. The concrete families here
//! (free, uniform, partition, binary, graphic) cover the usual constraint
//! shapes; [`DirectSumMatroid`] glues per-vertex oracles into one matroid on
//! all in-edges, and [`Minor`] realizes contraction/deletion lazily.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::digraph::{EdgeId, EdgeSet};
use crate::error::Error;

pub trait MatroidOracle: Send + Sync {
    fn ground(&self) -> &EdgeSet;
    /// Whether `set` is independent. Only called with `set ⊆ ground()`.
    fn is_independent(&self, set: &EdgeSet) -> bool;
}

fn require_subset<M: MatroidOracle + ?Sized>(m: &M, set: &EdgeSet) -> Result<(), Error> {
    match set.iter().find(|&e| !m.ground().contains(e)) {
        Some(e) => Err(Error::NotInGround(e)),
        None => Ok(()),
    }
}

pub fn is_independent_checked<M: MatroidOracle + ?Sized>(
    m: &M,
    set: &EdgeSet,
) -> Result<bool, Error> {
    require_subset(m, set)?;
    Ok(m.is_independent(set))
}

/// The lexicographically least maximal independent subset of `set`: scan in
/// ascending id order, keeping each element that preserves independence.
pub fn greedy_base<M: MatroidOracle + ?Sized>(m: &M, set: &EdgeSet) -> Result<EdgeSet, Error> {
    require_subset(m, set)?;
    let mut base = EdgeSet::new();
    for e in set.iter() {
        base.insert(e);
        if !m.is_independent(&base) {
            base.remove(e);
        }
    }
    Ok(base)
}

pub fn rank<M: MatroidOracle + ?Sized>(m: &M, set: &EdgeSet) -> Result<usize, Error> {
    Ok(greedy_base(m, set)?.len())
}

/// Whether adding `e` to `set` leaves the rank unchanged.
pub fn in_span<M: MatroidOracle + ?Sized>(
    m: &M,
    set: &EdgeSet,
    e: EdgeId,
) -> Result<bool, Error> {
    if !m.ground().contains(e) {
        return Err(Error::NotInGround(e));
    }
    if set.contains(e) {
        return Ok(true);
    }
    let base = greedy_base(m, set)?;
    Ok(!m.is_independent(&base.with(e)))
}

/// All ground elements whose addition does not raise the rank of `set`.
pub fn span<M: MatroidOracle + ?Sized>(m: &M, set: &EdgeSet) -> Result<EdgeSet, Error> {
    let base = greedy_base(m, set)?;
    let mut out = set.clone();
    for e in m.ground().iter() {
        if !out.contains(e) && !m.is_independent(&base.with(e)) {
            out.insert(e);
        }
    }
    Ok(out)
}

/// The unique circuit inside `set ∪ {e}`, for independent `set` and an
/// element `e ∉ set` that lies in its span.
pub fn fundamental_circuit<M: MatroidOracle + ?Sized>(
    m: &M,
    set: &EdgeSet,
    e: EdgeId,
) -> Result<EdgeSet, Error> {
    if !m.ground().contains(e) {
        return Err(Error::NotInGround(e));
    }
    if set.contains(e) {
        return Err(Error::Precondition("circuit element must lie outside the set"));
    }
    if !is_independent_checked(m, set)? {
        return Err(Error::DependentSet);
    }
    let widened = set.with(e);
    if m.is_independent(&widened) {
        return Err(Error::Precondition("element is not spanned by the set"));
    }
    // An element belongs to the unique circuit exactly when removing it
    // restores independence.
    let mut circuit = EdgeSet::new();
    for x in widened.iter() {
        if m.is_independent(&widened.without(x)) {
            circuit.insert(x);
        }
    }
    Ok(circuit)
}

/// Elements that are dependent on their own: never usable in any path system.
pub fn loops<M: MatroidOracle + ?Sized>(m: &M) -> EdgeSet {
    m.ground().iter().filter(|&e| !m.is_independent(&EdgeSet::singleton(e))).collect()
}

/// Outcome of an exhaustive independence-axiom check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AxiomReport {
    Pass,
    EmptySetDependent,
    /// `set` is independent but `subset` (one element removed) is not.
    Heredity { set: EdgeSet, subset: EdgeSet },
    /// No element of `larger ∖ smaller` extends `smaller` independently.
    Exchange { smaller: EdgeSet, larger: EdgeSet },
}

impl AxiomReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, AxiomReport::Pass)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomReport::Pass => write!(f, "pass"),
            AxiomReport::EmptySetDependent => write!(f, "empty set is dependent"),
            AxiomReport::Heredity { set, subset } => {
                write!(f, "heredity fails: {set:?} independent but {subset:?} is not")
            }
            AxiomReport::Exchange { smaller, larger } => {
                write!(f, "exchange fails between {smaller:?} and {larger:?}")
            }
        }
    }
}

/// Tests all three independence axioms on every subset of the ground set.
/// Exponential, so it refuses grounds larger than `limit`. Violations report
/// the first witness in ascending subset-encoding order.
pub fn axiom_spot_check<M: MatroidOracle + ?Sized>(
    m: &M,
    limit: usize,
) -> Result<AxiomReport, Error> {
    let elems: Vec<EdgeId> = m.ground().iter().collect();
    let n = elems.len();
    if n > limit {
        return Err(Error::GuardExceeded { what: "axiom-check ground", limit, actual: n });
    }
    let set_of = |mask: usize| -> EdgeSet {
        (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| elems[i]).collect()
    };
    let indep: Vec<bool> = (0..1usize << n).map(|mask| m.is_independent(&set_of(mask))).collect();
    if !indep[0] {
        return Ok(AxiomReport::EmptySetDependent);
    }
    for mask in 1..1usize << n {
        if !indep[mask] {
            continue;
        }
        for i in 0..n {
            if mask >> i & 1 == 1 && !indep[mask & !(1 << i)] {
                return Ok(AxiomReport::Heredity {
                    set: set_of(mask),
                    subset: set_of(mask & !(1 << i)),
                });
            }
        }
    }
    let independents: Vec<usize> = (0..1usize << n).filter(|&mask| indep[mask]).collect();
    for &a in &independents {
        for &b in &independents {
            if b.count_ones() <= a.count_ones() {
                continue;
            }
            let extension_exists =
                (0..n).any(|i| b >> i & 1 == 1 && a >> i & 1 == 0 && indep[a | 1 << i]);
            if !extension_exists {
                return Ok(AxiomReport::Exchange { smaller: set_of(a), larger: set_of(b) });
            }
        }
    }
    Ok(AxiomReport::Pass)
}

/// Every subset is independent.
#[derive(Clone, Debug)]
pub struct FreeMatroid {
    ground: EdgeSet,
}

impl FreeMatroid {
    pub fn new(ground: EdgeSet) -> Self {
        FreeMatroid { ground }
    }
}

impl MatroidOracle for FreeMatroid {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, _set: &EdgeSet) -> bool {
        true
    }
}

/// Independent ⇔ at most `rank` elements.
#[derive(Clone, Debug)]
pub struct UniformMatroid {
    ground: EdgeSet,
    rank: usize,
}

impl UniformMatroid {
    pub fn new(ground: EdgeSet, rank: usize) -> Self {
        UniformMatroid { ground, rank }
    }

    pub fn rank_bound(&self) -> usize {
        self.rank
    }
}

impl MatroidOracle for UniformMatroid {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        set.len() <= self.rank
    }
}

/// Disjoint blocks with per-block capacities; independent ⇔ every block's
/// quota is respected.
#[derive(Clone, Debug)]
pub struct PartitionMatroid {
    blocks: Vec<(EdgeSet, usize)>,
    ground: EdgeSet,
}

impl PartitionMatroid {
    pub fn new(blocks: Vec<(EdgeSet, usize)>) -> Result<Self, Error> {
        let mut ground = EdgeSet::new();
        for (block, _) in &blocks {
            if let Some(e) = block.iter().find(|&e| ground.contains(e)) {
                return Err(Error::OverlappingGrounds(e));
            }
            ground.union_with(block);
        }
        Ok(PartitionMatroid { blocks, ground })
    }

    pub fn blocks(&self) -> &[(EdgeSet, usize)] {
        &self.blocks
    }
}

impl MatroidOracle for PartitionMatroid {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        self.blocks.iter().all(|(block, cap)| set.intersection(block).len() <= *cap)
    }
}

/// Columns over GF(2), one u64 per element (bit `i` = row `i`); independent ⇔
/// linearly independent.
#[derive(Clone, Debug)]
pub struct Gf2Matroid {
    columns: BTreeMap<EdgeId, u64>,
    ground: EdgeSet,
}

impl Gf2Matroid {
    pub fn new(columns: BTreeMap<EdgeId, u64>) -> Self {
        let ground = columns.keys().copied().collect();
        Gf2Matroid { columns, ground }
    }

    pub fn columns(&self) -> &BTreeMap<EdgeId, u64> {
        &self.columns
    }
}

impl MatroidOracle for Gf2Matroid {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        // Pivots with pairwise distinct leading (highest set) bits, kept in
        // descending leading-bit order so one elimination sweep suffices.
        let mut pivots: Vec<u64> = Vec::new();
        for e in set.iter() {
            let mut col = self.columns[&e];
            for &p in &pivots {
                if col & (1 << (63 - p.leading_zeros())) != 0 {
                    col ^= p;
                }
            }
            if col == 0 {
                return false;
            }
            let pos = pivots.partition_point(|&p| p.leading_zeros() < col.leading_zeros());
            pivots.insert(pos, col);
        }
        true
    }
}

/// Forests of an auxiliary undirected graph: each element maps to an
/// unordered pair of auxiliary nodes, and a set is independent when it closes
/// no cycle there.
#[derive(Clone, Debug)]
pub struct GraphicMatroid {
    ends: BTreeMap<EdgeId, (u32, u32)>,
    ground: EdgeSet,
    nodes: Vec<u32>,
}

impl GraphicMatroid {
    pub fn new(ends: BTreeMap<EdgeId, (u32, u32)>) -> Self {
        let ground = ends.keys().copied().collect();
        let mut nodes: Vec<u32> = ends.values().flat_map(|&(a, b)| [a, b]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        GraphicMatroid { ends, ground, nodes }
    }

    pub fn ends(&self) -> &BTreeMap<EdgeId, (u32, u32)> {
        &self.ends
    }

    fn node_index(&self, node: u32) -> usize {
        self.nodes.binary_search(&node).expect("auxiliary node registered at construction")
    }
}

impl MatroidOracle for GraphicMatroid {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in set.iter() {
            let (a, b) = self.ends[&e];
            let (ra, rb) = (
                find(&mut parent, self.node_index(a)),
                find(&mut parent, self.node_index(b)),
            );
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// An oracle defined by an arbitrary predicate. Handy for tests — including
/// deliberately broken "matroids" fed to [`axiom_spot_check`].
pub struct PredicateOracle {
    ground: EdgeSet,
    predicate: Box<dyn Fn(&EdgeSet) -> bool + Send + Sync>,
}

impl PredicateOracle {
    pub fn new(
        ground: EdgeSet,
        predicate: impl Fn(&EdgeSet) -> bool + Send + Sync + 'static,
    ) -> Self {
        PredicateOracle { ground, predicate: Box::new(predicate) }
    }
}

impl MatroidOracle for PredicateOracle {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        (self.predicate)(set)
    }
}

impl fmt::Debug for PredicateOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredicateOracle").field("ground", &self.ground).finish()
    }
}

/// A restriction of an arbitrary shared oracle to a smaller ground set.
#[derive(Clone)]
pub struct Restriction {
    base: Arc<dyn MatroidOracle>,
    ground: EdgeSet,
}

impl MatroidOracle for Restriction {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        self.base.is_independent(set)
    }
}

/// One per-vertex constraint. The enum keeps the family inspectable (for
/// serialization and for restriction after loop removal) while still
/// admitting arbitrary oracles through `Custom`.
#[derive(Clone)]
pub enum VertexMatroid {
    Free(FreeMatroid),
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Gf2(Gf2Matroid),
    Graphic(GraphicMatroid),
    Custom(Arc<dyn MatroidOracle>),
}

macro_rules! vertex_matroid_delegate {
    ($self:ident, $m:ident => $body:expr) => {
        match $self {
            VertexMatroid::Free($m) => $body,
            VertexMatroid::Uniform($m) => $body,
            VertexMatroid::Partition($m) => $body,
            VertexMatroid::Gf2($m) => $body,
            VertexMatroid::Graphic($m) => $body,
            VertexMatroid::Custom($m) => $body,
        }
    };
}

impl fmt::Debug for VertexMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VertexMatroid")
            .field("family", &self.family())
            .field("ground", self.ground())
            .finish()
    }
}

impl VertexMatroid {
    pub fn family(&self) -> &'static str {
        match self {
            VertexMatroid::Free(_) => "free",
            VertexMatroid::Uniform(_) => "uniform",
            VertexMatroid::Partition(_) => "partition",
            VertexMatroid::Gf2(_) => "gf2",
            VertexMatroid::Graphic(_) => "graphic",
            VertexMatroid::Custom(_) => "custom",
        }
    }

    /// The same matroid restricted to `keep ∩ ground`.
    pub fn restricted(&self, keep: &EdgeSet) -> VertexMatroid {
        let ground = self.ground().intersection(keep);
        match self {
            VertexMatroid::Free(_) => VertexMatroid::Free(FreeMatroid::new(ground)),
            VertexMatroid::Uniform(m) => {
                VertexMatroid::Uniform(UniformMatroid::new(ground, m.rank))
            }
            VertexMatroid::Partition(m) => {
                let blocks = m
                    .blocks
                    .iter()
                    .map(|(block, cap)| (block.intersection(keep), *cap))
                    .filter(|(block, _)| !block.is_empty())
                    .collect();
                VertexMatroid::Partition(
                    PartitionMatroid::new(blocks).expect("restricted blocks stay disjoint"),
                )
            }
            VertexMatroid::Gf2(m) => {
                let columns =
                    m.columns.iter().filter(|(e, _)| keep.contains(**e)).map(|(e, c)| (*e, *c));
                VertexMatroid::Gf2(Gf2Matroid::new(columns.collect()))
            }
            VertexMatroid::Graphic(m) => {
                let ends =
                    m.ends.iter().filter(|(e, _)| keep.contains(**e)).map(|(e, p)| (*e, *p));
                VertexMatroid::Graphic(GraphicMatroid::new(ends.collect()))
            }
            VertexMatroid::Custom(base) => {
                VertexMatroid::Custom(Arc::new(Restriction { base: base.clone(), ground }))
            }
        }
    }
}

impl MatroidOracle for VertexMatroid {
    fn ground(&self) -> &EdgeSet {
        vertex_matroid_delegate!(self, m => m.ground())
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        vertex_matroid_delegate!(self, m => m.is_independent(set))
    }
}

/// The direct sum of per-vertex matroids, indexed by vertex id. A set is
/// independent exactly when each block's slice of it is.
pub struct DirectSumMatroid {
    blocks: Vec<VertexMatroid>,
    ground: EdgeSet,
}

impl DirectSumMatroid {
    pub fn new(blocks: Vec<VertexMatroid>) -> Result<Self, Error> {
        let mut ground = EdgeSet::new();
        for b in &blocks {
            if let Some(e) = b.ground().iter().find(|&e| ground.contains(e)) {
                return Err(Error::OverlappingGrounds(e));
            }
            ground.union_with(b.ground());
        }
        Ok(DirectSumMatroid { blocks, ground })
    }

    pub fn blocks(&self) -> &[VertexMatroid] {
        &self.blocks
    }

    pub fn block(&self, vertex: usize) -> &VertexMatroid {
        &self.blocks[vertex]
    }

    pub fn restricted(&self, keep: &EdgeSet) -> DirectSumMatroid {
        let blocks = self.blocks.iter().map(|b| b.restricted(keep)).collect();
        DirectSumMatroid::new(blocks).expect("restricted blocks stay disjoint")
    }
}

impl MatroidOracle for DirectSumMatroid {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        self.blocks.iter().all(|b| {
            let slice = set.intersection(b.ground());
            slice.is_empty() || b.is_independent(&slice)
        })
    }
}

/// `base / contract ∖ delete`, evaluated lazily: a set is independent in the
/// minor when its union with a fixed basis of the contracted part is
/// independent in `base`.
#[derive(Clone)]
pub struct Minor {
    base: Arc<dyn MatroidOracle>,
    basis: EdgeSet,
    ground: EdgeSet,
}

impl Minor {
    pub fn new(
        base: Arc<dyn MatroidOracle>,
        contract: &EdgeSet,
        delete: &EdgeSet,
    ) -> Result<Self, Error> {
        require_subset(base.as_ref(), contract)?;
        require_subset(base.as_ref(), delete)?;
        if !contract.is_disjoint(delete) {
            return Err(Error::Precondition("contracted and deleted sets overlap"));
        }
        let basis = greedy_base(base.as_ref(), contract)?;
        let ground = base.ground().difference(contract).difference(delete);
        Ok(Minor { base, basis, ground })
    }

    pub fn contract(base: Arc<dyn MatroidOracle>, set: &EdgeSet) -> Result<Self, Error> {
        Minor::new(base, set, &EdgeSet::new())
    }

    pub fn base(&self) -> &Arc<dyn MatroidOracle> {
        &self.base
    }

    pub fn contracted_basis(&self) -> &EdgeSet {
        &self.basis
    }
}

impl MatroidOracle for Minor {
    fn ground(&self) -> &EdgeSet {
        &self.ground
    }
    fn is_independent(&self, set: &EdgeSet) -> bool {
        self.base.is_independent(&set.union(&self.basis))
    }
}
