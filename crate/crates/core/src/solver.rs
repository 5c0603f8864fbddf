//! The direct engine: grow a path system by shortest augmenting walks until
//! none reaches t, then read off the certifying cut from the reachable
//! endpoints. The emitted certificate is re-audited before it is returned —
//! a solver that cannot convince the verifier has a bug, not bad luck.

use crate::augment::{apply_augmentation, find_shortest_augmenting_walk, reachable_endpoints};
use crate::digraph::{cut_boundary, Cut, Digraph, EdgeId, EdgeSet, Path, PathSystem, VertexSet};
use crate::error::Error;
use crate::matroid::{self, MatroidOracle};
use crate::oracle::{enumerate_st_paths, Guards};
use crate::set::Id;
use crate::Instance;

/// Edge-disjoint independent s→t paths plus the complementarity witness: a
/// t–s cut X and the cover C = A(P) ∩ in(X), with |P| = |C| = rank(in(X)).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub paths: PathSystem,
    pub cut: Cut,
    pub cover: EdgeSet,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum CertificateViolation {
    #[error("path {index} is not an s\u{2192}t path of the digraph")]
    InvalidPath { index: usize },
    #[error("edge {edge} appears in two paths")]
    SharedEdge { edge: EdgeId },
    #[error("the united path edge set is dependent")]
    DependentPaths,
    #[error("invalid cut: {0}")]
    BadCut(&'static str),
    #[error("path edge {edge} leaves the cut")]
    EscapingEdge { edge: EdgeId },
    #[error("cover edge {edge} is not a path edge entering the cut")]
    CoverMembership { edge: EdgeId },
    #[error("entering edge {edge} is not spanned by the cover")]
    SpanCondition { edge: EdgeId },
    #[error("count mismatch: {paths} paths, |cover| = {cover}, rank(in(X)) = {rank}")]
    CountMismatch { paths: usize, cover: usize, rank: usize },
}

/// The verification clauses in audit order. Names are stable: they appear in
/// serialized transcripts.
pub const CLAUSES: [&str; 8] = [
    "paths-valid",
    "edge-disjoint",
    "independence",
    "cut-shape",
    "out-condition",
    "cover-membership",
    "span-condition",
    "count-condition",
];

struct RawAudit<'a> {
    d: &'a Digraph,
    paths: &'a [Vec<EdgeId>],
    cut: &'a VertexSet,
    cover: &'a EdgeSet,
    path_edges: EdgeSet,
    entering: EdgeSet,
    leaving: EdgeSet,
}

impl<'a> RawAudit<'a> {
    fn new(
        d: &'a Digraph,
        paths: &'a [Vec<EdgeId>],
        cut: &'a VertexSet,
        cover: &'a EdgeSet,
    ) -> Self {
        let mut path_edges = EdgeSet::new();
        for p in paths {
            path_edges.extend(p.iter().copied());
        }
        let mut entering = EdgeSet::new();
        let mut leaving = EdgeSet::new();
        for e in d.edges() {
            match (cut.contains(e.tail), cut.contains(e.head)) {
                (false, true) => {
                    entering.insert(e.id);
                }
                (true, false) => {
                    leaving.insert(e.id);
                }
                _ => {}
            }
        }
        RawAudit { d, paths, cut, cover, path_edges, entering, leaving }
    }

    fn paths_valid(&self) -> Result<(), CertificateViolation> {
        for (index, edges) in self.paths.iter().enumerate() {
            let bad = CertificateViolation::InvalidPath { index };
            let path = Path::new(self.d, edges.clone()).map_err(|_| bad.clone())?;
            if path.start(self.d) != self.d.s() || path.end(self.d) != self.d.t() {
                return Err(bad);
            }
        }
        Ok(())
    }

    fn edge_disjoint(&self) -> Result<(), CertificateViolation> {
        let mut used = EdgeSet::new();
        for p in self.paths {
            for &e in p {
                if !used.insert(e) {
                    return Err(CertificateViolation::SharedEdge { edge: e });
                }
            }
        }
        Ok(())
    }

    fn independence<M: MatroidOracle + ?Sized>(&self, m: &M) -> Result<(), CertificateViolation> {
        match matroid::is_independent_checked(m, &self.path_edges) {
            Ok(true) => Ok(()),
            _ => Err(CertificateViolation::DependentPaths),
        }
    }

    fn cut_shape(&self) -> Result<(), CertificateViolation> {
        if self.cut.contains(self.d.s()) {
            return Err(CertificateViolation::BadCut("cut contains the source"));
        }
        if !self.cut.contains(self.d.t()) {
            return Err(CertificateViolation::BadCut("cut misses the sink"));
        }
        if self.cut.iter().any(|v| v.index() >= self.d.vertex_count()) {
            return Err(CertificateViolation::BadCut("cut mentions an unknown vertex"));
        }
        Ok(())
    }

    fn out_condition(&self) -> Result<(), CertificateViolation> {
        match self.path_edges.intersection(&self.leaving).first() {
            Some(e) => Err(CertificateViolation::EscapingEdge { edge: e }),
            None => Ok(()),
        }
    }

    fn cover_membership(&self) -> Result<(), CertificateViolation> {
        let eligible = self.path_edges.intersection(&self.entering);
        match self.cover.difference(&eligible).first() {
            Some(e) => Err(CertificateViolation::CoverMembership { edge: e }),
            None => Ok(()),
        }
    }

    fn span_condition<M: MatroidOracle + ?Sized>(
        &self,
        m: &M,
    ) -> Result<(), CertificateViolation> {
        let spanned = match matroid::span(m, self.cover) {
            Ok(s) => s,
            // A cover edge outside the ground set cannot span anything.
            Err(Error::NotInGround(e)) => {
                return Err(CertificateViolation::SpanCondition { edge: e })
            }
            Err(_) => return Err(CertificateViolation::SpanCondition { edge: EdgeId(0) }),
        };
        match self.entering.difference(&spanned).first() {
            Some(e) => Err(CertificateViolation::SpanCondition { edge: e }),
            None => Ok(()),
        }
    }

    fn count_condition<M: MatroidOracle + ?Sized>(
        &self,
        m: &M,
    ) -> Result<(), CertificateViolation> {
        let rank = matroid::rank(m, &self.entering).unwrap_or(usize::MAX);
        if self.paths.len() != self.cover.len() || self.cover.len() != rank {
            return Err(CertificateViolation::CountMismatch {
                paths: self.paths.len(),
                cover: self.cover.len(),
                rank,
            });
        }
        Ok(())
    }
}

/// Audits raw certificate material clause by clause and reports the first
/// violation. This is the auditor behind [`verify_certificate`], usable on
/// deserialized data that cannot pass the typed constructors.
pub fn verify_raw<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &[Vec<EdgeId>],
    cut: &VertexSet,
    cover: &EdgeSet,
) -> Result<(), CertificateViolation> {
    let audit = RawAudit::new(d, paths, cut, cover);
    audit.paths_valid()?;
    audit.edge_disjoint()?;
    audit.independence(m)?;
    audit.cut_shape()?;
    audit.out_condition()?;
    audit.cover_membership()?;
    audit.span_condition(m)?;
    audit.count_condition(m)
}

/// Evaluates every clause without short-circuiting, in [`CLAUSES`] order.
pub fn verification_transcript<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    paths: &[Vec<EdgeId>],
    cut: &VertexSet,
    cover: &EdgeSet,
) -> Vec<(&'static str, bool)> {
    let audit = RawAudit::new(d, paths, cut, cover);
    vec![
        ("paths-valid", audit.paths_valid().is_ok()),
        ("edge-disjoint", audit.edge_disjoint().is_ok()),
        ("independence", audit.independence(m).is_ok()),
        ("cut-shape", audit.cut_shape().is_ok()),
        ("out-condition", audit.out_condition().is_ok()),
        ("cover-membership", audit.cover_membership().is_ok()),
        ("span-condition", audit.span_condition(m).is_ok()),
        ("count-condition", audit.count_condition(m).is_ok()),
    ]
}

/// Checks the complementarity conditions and the count identity
/// |P| = |C| = rank(in(X)), reporting the first violated clause.
pub fn verify_certificate<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    cert: &Certificate,
) -> Result<(), CertificateViolation> {
    let paths: Vec<Vec<EdgeId>> =
        cert.paths.iter().map(|p| p.edges().to_vec()).collect();
    verify_raw(d, m, &paths, cert.cut.set(), &cert.cover)
}

/// Repeated shortest-walk augmentation from `start` until no walk reaches t.
pub fn maximize<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    start: PathSystem,
) -> Result<PathSystem, Error> {
    for p in start.iter() {
        if p.start(d) != d.s() || p.end(d) != d.t() {
            return Err(Error::Precondition("starting system must consist of s\u{2192}t paths"));
        }
    }
    let mut paths = start;
    while let Some(walk) = find_shortest_augmenting_walk(d, m, &paths, d.t())? {
        paths = apply_augmentation(d, m, &paths, &walk)?;
    }
    Ok(paths)
}

/// The direct engine. Augments until no walk reaches t, takes X as the
/// complement of the walk-reachable endpoints, and emits the audited
/// certificate. An unreachable t falls out of the same formula with zero
/// paths.
pub fn solve(instance: &Instance) -> Result<Certificate, Error> {
    let d = instance.digraph();
    let m = instance.matroid();
    let paths = maximize(d, m, PathSystem::empty())?;
    let reachable = reachable_endpoints(d, m, &paths)?;
    let cut = Cut::new(d, d.vertex_set().difference(&reachable))?;
    let (entering, _) = cut_boundary(d, &cut);
    let cover = paths.edge_set().intersection(&entering);
    let cert = Certificate { paths, cut, cover };
    verify_certificate(d, m, &cert)
        .map_err(|v| Error::Invariant(format!("emitted certificate failed its own audit: {v}")))?;
    Ok(cert)
}

/// Extensional form of the covering claim: every s→t path of the digraph
/// uses at least one edge of span(C). Needs full path enumeration, hence the
/// guard.
pub fn cover_covers_all_paths<M: MatroidOracle + ?Sized>(
    d: &Digraph,
    m: &M,
    cert: &Certificate,
    guards: &Guards,
) -> Result<bool, Error> {
    let spanned = matroid::span(m, &cert.cover)?;
    let all_paths = enumerate_st_paths(d, guards)?;
    Ok(all_paths.iter().all(|p| !p.edge_set().is_disjoint(&spanned)))
}
