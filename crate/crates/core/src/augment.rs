//! Augmenting walks over a path system.
//!
//! Given edge-disjoint s→t paths P with independent edge set A(P), an
//! augmenting walk W moves through the digraph using non-path edges forwards
//! and path edges backwards, subject to a discipline on the toggled sets
//! T_i = A(P) △ {edges of the first i steps}:
//!
//! 1. every step's direction matches membership in A(P), consecutive steps
//!    chain, and no edge is used twice;
//! 2. the walk starts at s and never comes back;
//! 3. the final toggled set is independent;
//! 4. a dependent prefix must be repaired by the very next step.
//!
//! A walk may stop at any vertex; the empty walk at s counts. Toggling a walk
//! that ends at t yields exactly one more path.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::digraph::{build_paths_greedy, Digraph, EdgeId, EdgeSet, PathSystem, VertexId, VertexSet};
use crate::error::Error;
use crate::matroid::{self, MatroidOracle};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One walk step: an edge, traversed tail→head (`Forward`) or head→tail
/// (`Reverse`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SignedStep {
    pub edge: EdgeId,
    pub direction: Direction,
}

impl SignedStep {
    pub fn forward(edge: EdgeId) -> Self {
        SignedStep { edge, direction: Direction::Forward }
    }

    pub fn reverse(edge: EdgeId) -> Self {
        SignedStep { edge, direction: Direction::Reverse }
    }

    fn ends(&self, d: &Digraph) -> (VertexId, VertexId) {
        let e = d.edge(self.edge).expect("step edge in digraph");
        match self.direction {
            Direction::Forward => (e.tail, e.head),
            Direction::Reverse => (e.head, e.tail),
        }
    }
}

/// A plain container; validity against a concrete path system is established
/// by [`check_augmenting_walk`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AugmentingWalk {
    steps: Vec<SignedStep>,
}

impl AugmentingWalk {
    pub fn new(steps: Vec<SignedStep>) -> Self {
        AugmentingWalk { steps }
    }

    pub fn steps(&self) -> &[SignedStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.steps.iter().map(|s| s.edge).collect()
    }

    /// `A(P) △ edges(W)`.
    pub fn toggled(&self, paths: &PathSystem) -> EdgeSet {
        paths.edge_set().symmetric_difference(&self.edge_set())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum WalkViolation {
    #[error("step {step} uses edge {edge} which is not in the digraph")]
    UnknownEdge { step: usize, edge: EdgeId },
    #[error("step {step} uses edge {edge} outside the matroid ground set")]
    OutsideGround { step: usize, edge: EdgeId },
    #[error("step {step} direction disagrees with path membership")]
    WrongDirection { step: usize },
    #[error("first step does not begin at the source")]
    WrongStart,
    #[error("step {step} does not continue from the previous position")]
    Disconnected { step: usize },
    #[error("step {step} returns to the source")]
    ReturnsToSource { step: usize },
    #[error("edge {edge} is used twice")]
    RepeatedEdge { edge: EdgeId },
    #[error("prefixes {step} and {}, both dependent, are adjacent", .step + 1)]
    UnrepairedDependence { step: usize },
    #[error("the final toggled set is dependent")]
    FinalSetDependent,
}

/// Checks the full walk discipline for `walk` against `paths`. The walk may
/// end anywhere; callers that need a t-walk check the endpoint themselves.
/// The toggled prefix T_0 is `A(P)` itself, so a dependent `A(P)` must be
/// repaired by the first step like any other dependent prefix.
pub fn check_augmenting_walk<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &PathSystem,
    walk: &AugmentingWalk,
) -> Result<(), WalkViolation> {
    let on_paths = paths.edge_set();
    let mut toggled = on_paths.clone();
    let mut used = EdgeSet::new();
    let mut pos = d.s();
    let mut prev_dependent = !m.is_independent(&toggled);
    for (i, step) in walk.steps().iter().enumerate() {
        if !d.contains_edge(step.edge) {
            return Err(WalkViolation::UnknownEdge { step: i, edge: step.edge });
        }
        if !m.ground().contains(step.edge) {
            return Err(WalkViolation::OutsideGround { step: i, edge: step.edge });
        }
        let expected =
            if on_paths.contains(step.edge) { Direction::Reverse } else { Direction::Forward };
        if step.direction != expected {
            return Err(WalkViolation::WrongDirection { step: i });
        }
        let (start, end) = step.ends(d);
        if i == 0 {
            if start != d.s() {
                return Err(WalkViolation::WrongStart);
            }
        } else if start != pos {
            return Err(WalkViolation::Disconnected { step: i });
        }
        if end == d.s() {
            return Err(WalkViolation::ReturnsToSource { step: i });
        }
        if !used.insert(step.edge) {
            return Err(WalkViolation::RepeatedEdge { edge: step.edge });
        }
        if !toggled.insert(step.edge) {
            toggled.remove(step.edge);
        }
        let dependent = !m.is_independent(&toggled);
        if dependent && prev_dependent {
            return Err(WalkViolation::UnrepairedDependence { step: i - 1 });
        }
        prev_dependent = dependent;
        pos = end;
    }
    if prev_dependent {
        return Err(WalkViolation::FinalSetDependent);
    }
    Ok(())
}

/// The vertex an already-validated walk stops at (`s` for the empty walk).
pub fn walk_end(d: &Digraph, walk: &AugmentingWalk) -> VertexId {
    walk.steps().last().map_or(d.s(), |step| step.ends(d).1)
}

struct SearchOutcome {
    walk: Option<AugmentingWalk>,
    independent_endpoints: VertexSet,
}

/// Breadth-first search over walk states `(position, toggled set)`. The used
/// edge set is recoverable as `toggled △ A(P)`, so states capture everything
/// the discipline needs. FIFO order plus ascending-edge expansion makes the
/// first walk reaching `(target, independent)` the shortest one, and the
/// lexicographically least among those.
fn search<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &PathSystem,
    target: Option<VertexId>,
) -> Result<SearchOutcome, Error> {
    let on_paths = paths.edge_set();
    if let Some(e) = on_paths.iter().find(|&e| !d.contains_edge(e)) {
        return Err(Error::UnknownEdge(e));
    }
    if let Some(e) = d.edge_set().iter().find(|&e| !m.ground().contains(e)) {
        return Err(Error::NotInGround(e));
    }
    if !m.is_independent(&on_paths) {
        return Err(Error::DependentSet);
    }

    if target == Some(d.s()) {
        return Ok(SearchOutcome {
            walk: Some(AugmentingWalk::new(Vec::new())),
            independent_endpoints: VertexSet::singleton(d.s()),
        });
    }

    type Key = (VertexId, EdgeSet);
    let root: Key = (d.s(), on_paths.clone());
    let mut parents: HashMap<Key, Option<(Key, SignedStep)>> = HashMap::new();
    let mut queue: VecDeque<Key> = VecDeque::new();
    let mut endpoints = VertexSet::new();
    parents.insert(root.clone(), None);
    queue.push_back(root.clone());
    // The empty walk stops at s.
    endpoints.insert(d.s());

    let rebuild = |parents: &HashMap<Key, Option<(Key, SignedStep)>>, mut key: Key| {
        let mut steps = Vec::new();
        while let Some((prev, step)) = parents[&key].clone() {
            steps.push(step);
            key = prev;
        }
        steps.reverse();
        AugmentingWalk::new(steps)
    };

    while let Some(key) = queue.pop_front() {
        let (pos, toggled) = &key;
        let dependent = !m.is_independent(toggled);
        let used = toggled.symmetric_difference(&on_paths);
        // Candidate steps at `pos`, merged in ascending edge-id order:
        // forward along unused non-path out-edges, backward along unused
        // path in-edges. Self-loops never help and are skipped.
        let mut candidates: Vec<SignedStep> = d
            .out_edges(*pos)
            .iter()
            .filter(|&&e| !on_paths.contains(e))
            .map(|&e| SignedStep::forward(e))
            .chain(
                d.in_edges(*pos)
                    .iter()
                    .filter(|&&e| on_paths.contains(e))
                    .map(|&e| SignedStep::reverse(e)),
            )
            .filter(|s| !used.contains(s.edge) && !d.is_self_loop(s.edge))
            .collect();
        candidates.sort_by_key(|s| s.edge);
        for step in candidates {
            let (_, end) = step.ends(d);
            if end == d.s() {
                continue;
            }
            let mut next = toggled.clone();
            if !next.insert(step.edge) {
                next.remove(step.edge);
            }
            let next_independent = m.is_independent(&next);
            if dependent && !next_independent {
                continue;
            }
            let next_key = (end, next);
            if parents.contains_key(&next_key) {
                continue;
            }
            parents.insert(next_key.clone(), Some((key.clone(), step)));
            if next_independent {
                endpoints.insert(end);
                if target == Some(end) {
                    return Ok(SearchOutcome {
                        walk: Some(rebuild(&parents, next_key)),
                        independent_endpoints: endpoints,
                    });
                }
            }
            queue.push_back(next_key);
        }
    }
    Ok(SearchOutcome { walk: None, independent_endpoints: endpoints })
}

/// The shortest valid augmenting walk ending at `target`, lexicographically
/// least among shortest ones, or `None` when no such walk exists.
pub fn find_shortest_augmenting_walk<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &PathSystem,
    target: VertexId,
) -> Result<Option<AugmentingWalk>, Error> {
    Ok(search(d, m, paths, Some(target))?.walk)
}

/// All vertices where some valid augmenting walk stops. The source is always
/// present via the empty walk. When no walk reaches t, the complement of this
/// set is the certifying cut.
pub fn reachable_endpoints<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &PathSystem,
) -> Result<VertexSet, Error> {
    Ok(search(d, m, paths, None)?.independent_endpoints)
}

/// Toggles a walk ending at t into `paths`: the paths sharing an edge with
/// the walk (say k of them) are replaced by the k+1 paths greedily rebuilt
/// from the symmetric difference; untouched paths are kept as they are.
/// The span of the last-edge set must grow strictly — that is the engine's
/// termination measure, and its failure is an internal error.
pub fn apply_augmentation<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &PathSystem,
    walk: &AugmentingWalk,
) -> Result<PathSystem, Error> {
    check_augmenting_walk(d, m, paths, walk).map_err(Error::InvalidWalk)?;
    if walk_end(d, walk) != d.t() {
        return Err(Error::Precondition("augmentation needs a walk ending at the sink"));
    }
    let walk_edges = walk.edge_set();
    let mut kept = Vec::new();
    let mut touched = EdgeSet::new();
    let mut touched_count = 0;
    for p in paths.iter() {
        if p.edge_set().is_disjoint(&walk_edges) {
            kept.push(p.clone());
        } else {
            touched.union_with(&p.edge_set());
            touched_count += 1;
        }
    }
    let rebuilt = build_paths_greedy(d, &walk_edges.symmetric_difference(&touched))?;
    if rebuilt.paths.len() != touched_count + 1 {
        return Err(Error::Invariant(format!(
            "augmentation rebuilt {} paths where {} were due",
            rebuilt.paths.len(),
            touched_count + 1
        )));
    }
    kept.extend(rebuilt.paths.iter().cloned());
    let result = PathSystem::new(kept)?;
    let before = matroid::span(m, &paths.last_edge_set())?;
    let after = matroid::span(m, &result.last_edge_set())?;
    if !(before.is_subset(&after) && before != after) {
        return Err(Error::Invariant(
            "augmentation did not strictly grow the spanned last-edge set".into(),
        ));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::digraph::{Digraph, Path};
    use crate::matroid::{UniformMatroid, VertexMatroid};
    use crate::testutil::{flag, par1};
    use crate::Instance;

    fn ids(edges: &[u32]) -> EdgeSet {
        edges.iter().map(|&e| EdgeId(e)).collect()
    }

    fn system(d: &Digraph, paths: &[&[u32]]) -> PathSystem {
        PathSystem::new(
            paths
                .iter()
                .map(|p| Path::new(d, p.iter().map(|&e| EdgeId(e)).collect()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn fwd(e: u32) -> SignedStep {
        SignedStep::forward(EdgeId(e))
    }

    fn rev(e: u32) -> SignedStep {
        SignedStep::reverse(EdgeId(e))
    }

    #[test]
    fn checker_accepts_the_repairing_walk() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[2, 3]]);
        let walk = AugmentingWalk::new(vec![fwd(0), fwd(1), rev(3), fwd(4), fwd(5)]);
        assert_eq!(check_augmenting_walk(d, m, &paths, &walk), Ok(()));
        assert_eq!(walk_end(d, &walk), VertexId(4));
    }

    #[test]
    fn checker_rejects_a_dependent_finish() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[2, 3]]);
        let walk = AugmentingWalk::new(vec![fwd(0), fwd(1)]);
        assert_eq!(
            check_augmenting_walk(d, m, &paths, &walk),
            Err(WalkViolation::FinalSetDependent)
        );
    }

    #[test]
    fn checker_accepts_short_walks() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let empty = PathSystem::empty();
        assert_eq!(
            check_augmenting_walk(d, m, &empty, &AugmentingWalk::new(vec![fwd(0)])),
            Ok(())
        );
        assert_eq!(
            check_augmenting_walk(d, m, &empty, &AugmentingWalk::new(Vec::new())),
            Ok(())
        );
        assert_eq!(walk_end(d, &AugmentingWalk::new(Vec::new())), VertexId(0));
    }

    #[test]
    fn checker_rejects_misdirected_and_misplaced_steps() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[2, 3]]);
        let check = |steps: Vec<SignedStep>| {
            check_augmenting_walk(d, m, &paths, &AugmentingWalk::new(steps))
        };
        assert_eq!(check(vec![fwd(2)]), Err(WalkViolation::WrongDirection { step: 0 }));
        assert_eq!(check(vec![rev(0)]), Err(WalkViolation::WrongDirection { step: 0 }));
        assert_eq!(check(vec![fwd(1)]), Err(WalkViolation::WrongStart));
        assert_eq!(
            check(vec![fwd(0), fwd(5)]),
            Err(WalkViolation::Disconnected { step: 1 })
        );
        assert_eq!(
            check(vec![fwd(9)]),
            Err(WalkViolation::UnknownEdge { step: 0, edge: EdgeId(9) })
        );
    }

    #[test]
    fn checker_rejects_returning_to_the_source() {
        let par1 = par1();
        let (d, m) = (par1.digraph(), par1.matroid());
        let paths = system(d, &[&[0]]);
        let walk = AugmentingWalk::new(vec![fwd(1), rev(0)]);
        assert_eq!(
            check_augmenting_walk(d, m, &paths, &walk),
            Err(WalkViolation::ReturnsToSource { step: 1 })
        );
    }

    #[test]
    fn checker_rejects_reusing_an_edge() {
        // 0 →e0→ 1 →e1→ 2 →e2→ 1 again: the second visit may not retake e1.
        let d =
            Digraph::new(4, VertexId(0), VertexId(3), &[(0, 1), (1, 2), (2, 1), (1, 3)]).unwrap();
        let inst = Instance::all_free(d);
        let walk = AugmentingWalk::new(vec![fwd(0), fwd(1), fwd(2), fwd(1)]);
        assert_eq!(
            check_augmenting_walk(inst.digraph(), inst.matroid(), &PathSystem::empty(), &walk),
            Err(WalkViolation::RepeatedEdge { edge: EdgeId(1) })
        );
    }

    #[test]
    fn checker_rejects_unrepaired_dependence() {
        // Parallel s→a edges capped at one: stepping onto the second leaves
        // the prefix dependent, and continuing forward does not repair it.
        let d = Digraph::new(
            4,
            VertexId(0),
            VertexId(3),
            &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 3)],
        )
        .unwrap();
        let a_block = VertexMatroid::Uniform(UniformMatroid::new(ids(&[0, 1]), 1));
        let overrides = BTreeMap::from([(VertexId(1), a_block)]);
        let (inst, _) = Instance::from_vertex_matroids(d, overrides).unwrap();
        let paths = system(inst.digraph(), &[&[0, 2, 4]]);
        let walk = AugmentingWalk::new(vec![fwd(1), fwd(3)]);
        assert_eq!(
            check_augmenting_walk(inst.digraph(), inst.matroid(), &paths, &walk),
            Err(WalkViolation::UnrepairedDependence { step: 0 })
        );
    }

    #[test]
    fn checker_rejects_edges_outside_the_ground() {
        let flag = flag();
        let m = flag.matroid().restricted(&ids(&[0, 1, 2, 3, 5]));
        let walk = AugmentingWalk::new(vec![fwd(2), fwd(4)]);
        assert_eq!(
            check_augmenting_walk(flag.digraph(), &m, &PathSystem::empty(), &walk),
            Err(WalkViolation::OutsideGround { step: 1, edge: EdgeId(4) })
        );
    }

    #[test]
    fn shortest_walk_repairs_through_the_sink() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[2, 3]]);
        let walk = find_shortest_augmenting_walk(d, m, &paths, d.t()).unwrap().unwrap();
        assert_eq!(walk.steps(), &[fwd(0), fwd(1), rev(3), fwd(4), fwd(5)]);
    }

    #[test]
    fn shortest_walk_prefers_short_and_lexicographic() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let walk = find_shortest_augmenting_walk(d, m, &PathSystem::empty(), d.t())
            .unwrap()
            .unwrap();
        assert_eq!(walk.steps(), &[fwd(0), fwd(1)]);

        let par1 = par1();
        let walk = find_shortest_augmenting_walk(
            par1.digraph(),
            par1.matroid(),
            &PathSystem::empty(),
            par1.digraph().t(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(walk.steps(), &[fwd(0)]);
    }

    #[test]
    fn saturated_systems_admit_no_walk() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[0, 1], &[2, 4, 5]]);
        assert!(find_shortest_augmenting_walk(d, m, &paths, d.t()).unwrap().is_none());
        assert_eq!(reachable_endpoints(d, m, &paths).unwrap(), VertexSet::singleton(d.s()));
    }

    #[test]
    fn walk_to_the_source_is_empty() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let walk = find_shortest_augmenting_walk(d, m, &PathSystem::empty(), d.s())
            .unwrap()
            .unwrap();
        assert!(walk.is_empty());
    }

    #[test]
    fn search_requires_an_independent_system() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[0, 1], &[2, 3]]);
        assert!(matches!(
            find_shortest_augmenting_walk(d, m, &paths, d.t()),
            Err(Error::DependentSet)
        ));
    }

    #[test]
    fn endpoints_of_the_empty_system_cover_everything() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        assert_eq!(reachable_endpoints(d, m, &PathSystem::empty()).unwrap(), d.vertex_set());

        let par1 = par1();
        let paths = system(par1.digraph(), &[&[0]]);
        assert_eq!(
            reachable_endpoints(par1.digraph(), par1.matroid(), &paths).unwrap(),
            VertexSet::singleton(VertexId(0))
        );
    }

    #[test]
    fn augmentation_toggles_and_rebuilds() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let paths = system(d, &[&[2, 3]]);
        let walk = AugmentingWalk::new(vec![fwd(0), fwd(1), rev(3), fwd(4), fwd(5)]);
        let next = apply_augmentation(d, m, &paths, &walk).unwrap();
        assert_eq!(next.paths(), system(d, &[&[0, 1], &[2, 4, 5]]).paths());

        let par1 = par1();
        let next = apply_augmentation(
            par1.digraph(),
            par1.matroid(),
            &PathSystem::empty(),
            &AugmentingWalk::new(vec![fwd(0)]),
        )
        .unwrap();
        assert_eq!(next.paths(), system(par1.digraph(), &[&[0]]).paths());

        let next = apply_augmentation(
            d,
            m,
            &PathSystem::empty(),
            &AugmentingWalk::new(vec![fwd(2), fwd(3)]),
        )
        .unwrap();
        assert_eq!(next.paths(), system(d, &[&[2, 3]]).paths());
    }

    #[test]
    fn augmentation_keeps_untouched_paths_in_place() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let untouched = Path::new(d, vec![EdgeId(0), EdgeId(1)]).unwrap();
        let paths = PathSystem::new(vec![untouched.clone()]).unwrap();
        let walk = AugmentingWalk::new(vec![fwd(2), fwd(4), fwd(5)]);
        let next = apply_augmentation(d, m, &paths, &walk).unwrap();
        assert_eq!(next.paths()[0], untouched);
        assert_eq!(next.len(), 2);
    }

    #[test]
    fn augmentation_requires_a_sink_walk() {
        let flag = flag();
        let (d, m) = (flag.digraph(), flag.matroid());
        let walk = AugmentingWalk::new(vec![fwd(0)]);
        assert!(matches!(
            apply_augmentation(d, m, &PathSystem::empty(), &walk),
            Err(Error::Precondition(_))
        ));
    }
}
