//! Randomized cross-checks: the two engines against the exhaustive oracle,
//! and the matroid primitives against their axioms, on small generated
//! instances. Failures shrink to a plain-data blueprint.

use std::collections::BTreeMap;

use proptest::prelude::*;

use matroid_menger::augment::{
    apply_augmentation, check_augmenting_walk, find_shortest_augmenting_walk,
};
use matroid_menger::digraph::{build_paths_greedy, Digraph, EdgeId, EdgeSet, PathSystem, VertexId};
use matroid_menger::matroid::{self, Gf2Matroid, PartitionMatroid, UniformMatroid};
use matroid_menger::oracle::{self, Guards};
use matroid_menger::set::Id;
use matroid_menger::solver::{self, CertificateViolation};
use matroid_menger::waves::{self, ContractedSystem};
use matroid_menger::{Instance, MatroidOracle, VertexMatroid};

/// Plain data from which an instance is built deterministically: vertex
/// count, raw edge pairs, and one matroid selector per vertex.
#[derive(Clone, Debug)]
struct Blueprint {
    n: u32,
    pairs: Vec<(u32, u32)>,
    picks: Vec<(u8, u64)>,
}

fn blueprints(max_n: u32, max_m: usize) -> impl Strategy<Value = Blueprint> {
    (2..=max_n)
        .prop_flat_map(move |n| {
            (
                Just(n),
                proptest::collection::vec((0..n, 0..n - 1), 0..=max_m),
                proptest::collection::vec((any::<u8>(), any::<u64>()), n as usize),
            )
        })
        .prop_map(|(n, pairs, picks)| Blueprint { n, pairs, picks })
}

fn digraph_of(bp: &Blueprint) -> Digraph {
    // The raw head ranges over n-1 values; skewing it past the tail rules
    // out self-loops while keeping every other head equally likely.
    let pairs: Vec<(u32, u32)> = bp
        .pairs
        .iter()
        .map(|&(tail, head)| (tail, if head >= tail { head + 1 } else { head }))
        .collect();
    Digraph::new(bp.n as usize, VertexId(0), VertexId(bp.n - 1), &pairs)
        .expect("generated ids are in range")
}

/// A vertex matroid drawn from the selector: free, uniform, a two-block
/// partition, or binary columns. Zero capacities and zero columns create
/// matroid loops on purpose; instance construction strips them.
fn block_for(d: &Digraph, v: VertexId, selector: u8, seed: u64) -> Option<VertexMatroid> {
    let ground = d.in_edge_set(v);
    let k = ground.len();
    match selector % 4 {
        0 => None,
        1 => Some(VertexMatroid::Uniform(UniformMatroid::new(ground, seed as usize % (k + 1)))),
        2 => {
            let ids: Vec<EdgeId> = ground.iter().collect();
            let (left, right) = ids.split_at(seed as usize % (k + 1));
            let mut blocks = Vec::new();
            if !left.is_empty() {
                blocks.push((left.iter().copied().collect(), (seed >> 8) as usize % 3));
            }
            if !right.is_empty() {
                blocks.push((right.iter().copied().collect(), (seed >> 16) as usize % 3));
            }
            if blocks.is_empty() {
                return None;
            }
            Some(VertexMatroid::Partition(
                PartitionMatroid::new(blocks).expect("split halves are disjoint"),
            ))
        }
        _ => {
            let mut x = seed | 1;
            let mut columns = BTreeMap::new();
            for e in ground.iter() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                columns.insert(e, x >> 60);
            }
            Some(VertexMatroid::Gf2(Gf2Matroid::new(columns)))
        }
    }
}

fn realize(bp: &Blueprint) -> Instance {
    let d = digraph_of(bp);
    let mut overrides = BTreeMap::new();
    for (i, &(selector, seed)) in bp.picks.iter().enumerate() {
        let v = VertexId(i as u32);
        if let Some(block) = block_for(&d, v, selector, seed) {
            overrides.insert(v, block);
        }
    }
    Instance::from_vertex_matroids(d, overrides)
        .expect("blocks are built on exact in-edge grounds")
        .0
}

/// A subset of the instance's edges selected by mask bits.
fn masked_edges(inst: &Instance, mask: u16) -> EdgeSet {
    inst.digraph().edge_set().iter().filter(|e| mask >> e.0 & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    /// Both engines return verifying certificates whose size matches the
    /// exhaustive maximum and the exhaustive minimum cut rank.
    #[test]
    fn engines_agree_with_the_oracle(bp in blueprints(5, 8)) {
        let inst = realize(&bp);
        let d = inst.digraph();
        let m = inst.matroid();

        let cert = solver::solve(&inst).unwrap();
        prop_assert_eq!(solver::verify_certificate(d, m, &cert), Ok(()));

        let proof = waves::proof_solve(&inst).unwrap();
        prop_assert_eq!(solver::verify_certificate(d, m, &proof), Ok(()));

        let report = oracle::check_duality(d, m, &Guards::default()).unwrap();
        prop_assert!(report.duality_holds);
        prop_assert_eq!(cert.paths.len(), report.max_paths);
        prop_assert_eq!(proof.paths.len(), report.max_paths);
        prop_assert_eq!(cert.cover.len(), report.min_cut_rank);
    }

    /// Equal blueprints give byte-equal certificates, twice over.
    #[test]
    fn solving_is_deterministic(bp in blueprints(5, 8)) {
        let once = solver::solve(&realize(&bp)).unwrap();
        let again = solver::solve(&realize(&bp)).unwrap();
        prop_assert_eq!(&once, &again);
        let proof_once = waves::proof_solve(&realize(&bp)).unwrap();
        let proof_again = waves::proof_solve(&realize(&bp)).unwrap();
        prop_assert_eq!(proof_once, proof_again);
    }

    /// Damaged certificates never verify: a missing cover edge breaks the
    /// span condition, a missing path breaks cover membership or the counts.
    #[test]
    fn tampered_certificates_are_rejected(bp in blueprints(5, 8)) {
        let inst = realize(&bp);
        let cert = solver::solve(&inst).unwrap();
        if cert.paths.is_empty() {
            return Ok(());
        }

        let mut fewer_cover = cert.clone();
        let dropped = fewer_cover.cover.iter().next().unwrap();
        fewer_cover.cover.remove(dropped);
        let outcome =
            solver::verify_certificate(inst.digraph(), inst.matroid(), &fewer_cover);
        let span_failed =
            matches!(outcome, Err(CertificateViolation::SpanCondition { .. }));
        prop_assert!(span_failed);

        let mut fewer_paths = cert.clone();
        fewer_paths.paths =
            PathSystem::new(cert.paths.paths()[1..].to_vec()).unwrap();
        prop_assert!(
            solver::verify_certificate(inst.digraph(), inst.matroid(), &fewer_paths).is_err()
        );
    }

    /// Driving the augmentation loop by hand: every returned walk passes the
    /// checker, grows the system by one, and the fixpoint size matches the
    /// oracle.
    #[test]
    fn augmenting_walks_are_valid_and_reach_the_maximum(bp in blueprints(5, 8)) {
        let inst = realize(&bp);
        let d = inst.digraph();
        let m = inst.matroid();
        let mut paths = PathSystem::empty();
        while let Some(walk) = find_shortest_augmenting_walk(d, m, &paths, d.t()).unwrap() {
            prop_assert_eq!(check_augmenting_walk(d, m, &paths, &walk), Ok(()));
            let next = apply_augmentation(d, m, &paths, &walk).unwrap();
            prop_assert_eq!(next.len(), paths.len() + 1);
            prop_assert!(m.is_independent(&next.edge_set()));
            paths = next;
        }
        let (max, _) = oracle::max_independent_path_system(d, m, &Guards::default()).unwrap();
        prop_assert_eq!(paths.len(), max);

        // A union of k edge-disjoint s→t paths decomposes back into exactly
        // k paths, with any recombination cycles returned unused.
        let decomposed = build_paths_greedy(d, &paths.edge_set()).unwrap();
        prop_assert_eq!(decomposed.paths.len(), paths.len());
        let reunited = decomposed.paths.edge_set().union(&decomposed.unused);
        prop_assert_eq!(reunited, paths.edge_set());
        prop_assert!(decomposed.paths.edge_set().is_disjoint(&decomposed.unused));
    }

    /// With every matroid free, the constrained maximum is the classic
    /// unit-capacity max-flow value.
    #[test]
    fn free_instances_match_classic_maxflow(bp in blueprints(6, 10)) {
        let inst = Instance::all_free(digraph_of(&bp));
        let flow = oracle::classic_maxflow_value(&inst).unwrap();
        let cert = solver::solve(&inst).unwrap();
        prop_assert_eq!(cert.paths.len(), flow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 192, ..ProptestConfig::default() })]

    /// Generated direct sums satisfy the independence axioms, with loops
    /// already stripped at construction.
    #[test]
    fn generated_matroids_satisfy_the_axioms(bp in blueprints(5, 8)) {
        let inst = realize(&bp);
        let report = matroid::axiom_spot_check(inst.matroid(), 12).unwrap();
        prop_assert!(report.is_pass());
        prop_assert!(matroid::loops(inst.matroid()).is_empty());
    }

    /// Span is a closure operator: extensive, monotone, idempotent. Rank adds
    /// up blockwise over the direct sum.
    #[test]
    fn span_and_rank_behave(bp in blueprints(5, 8), small in any::<u16>(), extra in any::<u16>()) {
        let inst = realize(&bp);
        let m = inst.matroid();
        let s = masked_edges(&inst, small);
        let t = masked_edges(&inst, small | extra);

        let span_s = matroid::span(m, &s).unwrap();
        prop_assert!(s.is_subset(&span_s));
        prop_assert_eq!(matroid::span(m, &span_s).unwrap(), span_s.clone());
        prop_assert!(span_s.is_subset(&matroid::span(m, &t).unwrap()));

        let total: usize = inst
            .digraph()
            .vertices()
            .map(|v| {
                let block = m.block(v.index());
                matroid::rank(block, &s.intersection(block.ground())).unwrap()
            })
            .sum();
        prop_assert_eq!(matroid::rank(m, &s).unwrap(), total);
    }

    /// Fundamental circuits are circuits: dependent, containing the new
    /// element, and minimally so.
    #[test]
    fn fundamental_circuits_are_minimal(bp in blueprints(5, 8), mask in any::<u16>()) {
        let inst = realize(&bp);
        let m = inst.matroid();
        let s = masked_edges(&inst, mask);
        let base = matroid::greedy_base(m, &s).unwrap();
        for e in matroid::span(m, &base).unwrap().difference(&base).iter() {
            let circuit = matroid::fundamental_circuit(m, &base, e).unwrap();
            prop_assert!(circuit.contains(e));
            prop_assert!(circuit.is_subset(&base.union(&EdgeSet::singleton(e))));
            prop_assert!(!m.is_independent(&circuit));
            for f in circuit.iter() {
                let mut smaller = circuit.clone();
                smaller.remove(f);
                prop_assert!(m.is_independent(&smaller));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// The extension-search fixpoint really is maximal: among all waves of
    /// the instance, none properly extends it. The order is reflexive and
    /// never properly so.
    #[test]
    fn maximal_waves_admit_no_proper_extension(bp in blueprints(4, 6)) {
        let inst = realize(&bp);
        let sys = ContractedSystem::root(&inst);
        let maximal =
            waves::maximal_wave(&sys, waves::trivial_wave(&sys).unwrap()).unwrap();
        let all = oracle::enumerate_waves(&sys, &Guards::default()).unwrap();
        prop_assert!(all.contains(&maximal));
        for w in &all {
            let refl = waves::wave_leq(inst.digraph(), w, w);
            prop_assert!(refl.extends && refl.complete && !refl.proper);
            let above = waves::wave_leq(inst.digraph(), &maximal, w);
            prop_assert!(!(above.extends && above.proper));
        }
    }
}
