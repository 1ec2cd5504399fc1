use std::collections::HashMap;

use crate::canon::{canonical_code, CanonicalCode};
use crate::geometry::volume_with;
use crate::goodness::{lemma_witness, very_good_edges};
use crate::polyhedron::CombinatorialPolyhedron;
use crate::surgery::{all_compositions, edge_delete, CompositionSite};

use super::db::CensusDatabase;
use super::engine::TIE_TOLERANCE;
use super::CensusError;

#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    InDatabase(usize),
    /// Not stored, but reachable from a stored entry by edge additions.
    Descendant,
    Absent,
}

#[derive(Debug, Clone)]
pub struct CompositionFinding {
    pub site: CompositionSite,
    pub code: CanonicalCode,
    pub membership: Membership,
    /// Computed for compositions outside the database.
    pub volume: Option<f64>,
    pub very_good_edges: usize,
    pub polyhedron: CombinatorialPolyhedron,
}

#[derive(Debug, Clone)]
pub struct PairFinding {
    pub ranks: (usize, usize),
    pub raw_count: usize,
    pub compositions: Vec<CompositionFinding>,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub bound: f64,
    /// Ranks whose composition with the smallest polyhedron may stay below
    /// the bound.
    pub a: Vec<usize>,
    /// Ranks of `a` without a lemma witness.
    pub b: Vec<usize>,
    pub pairs: Vec<PairFinding>,
}

impl AuditReport {
    pub fn absent(&self) -> impl Iterator<Item = (&PairFinding, &CompositionFinding)> {
        self.pairs.iter().flat_map(|pf| {
            pf.compositions
                .iter()
                .filter(|c| c.membership == Membership::Absent)
                .map(move |c| (pf, c))
        })
    }
}

/// Composes every pair of `b` entries whose volumes sum below `bound` and
/// checks whether each result is an edge-descendant of the database.
pub fn composition_audit(db: &CensusDatabase, bound: f64) -> Result<AuditReport, CensusError> {
    let ranked = db.ranked();
    let vol = |id: usize| db.entries()[id].volume.expect("ranked entries have volumes");
    let Some(&first) = ranked.first() else {
        return Err(CensusError::InsufficientDepth("nothing ranked".into()));
    };
    let smallest = vol(first);
    let deepest = vol(*ranked.last().unwrap());
    if deepest + smallest < bound {
        return Err(CensusError::InsufficientDepth(format!(
            "largest ranked volume {deepest} is below {}",
            bound - smallest
        )));
    }

    let a: Vec<usize> = (1..=ranked.len())
        .filter(|&r| vol(ranked[r - 1]) + smallest < bound)
        .collect();
    let b: Vec<usize> = a
        .iter()
        .copied()
        .filter(|&r| lemma_witness(db.polyhedron(ranked[r - 1]).unwrap()).is_none())
        .collect();

    let mut search = ReverseSearch {
        db,
        deepest,
        memo: HashMap::new(),
    };
    let mut pairs = Vec::new();
    for (i, &r1) in b.iter().enumerate() {
        for &r2 in &b[i..] {
            let (id1, id2) = (ranked[r1 - 1], ranked[r2 - 1]);
            if vol(id1) + vol(id2) >= bound {
                continue;
            }
            let summary = all_compositions(db.polyhedron(id1).unwrap(), db.polyhedron(id2).unwrap());
            let mut compositions = Vec::new();
            for (poly, site, code) in summary.distinct {
                let (membership, volume) = match db.find_code(&code) {
                    Some(id) => (Membership::InDatabase(id), db.entries()[id].volume),
                    None => {
                        let v = volume_with(&poly, &db.options().solver).ok().map(|r| r.volume);
                        let reachable = search.reachable_below(&poly);
                        let m = if reachable {
                            Membership::Descendant
                        } else {
                            Membership::Absent
                        };
                        (m, v)
                    }
                };
                compositions.push(CompositionFinding {
                    site,
                    code,
                    membership,
                    volume,
                    very_good_edges: very_good_edges(&poly).len(),
                    polyhedron: poly,
                });
            }
            pairs.push(PairFinding {
                ranks: (r1, r2),
                raw_count: summary.raw_count,
                compositions,
            });
        }
    }
    Ok(AuditReport {
        bound,
        a,
        b,
        pairs,
    })
}

/// Decides membership in the edge-descendants of the database by deleting
/// very good edges, the only deletions that stay valid.
struct ReverseSearch<'a> {
    db: &'a CensusDatabase,
    deepest: f64,
    memo: HashMap<CanonicalCode, bool>,
}

impl ReverseSearch<'_> {
    /// Whether some very good edge deletion of `p` leads to a descendant.
    fn reachable_below(&mut self, p: &CombinatorialPolyhedron) -> bool {
        for e in very_good_edges(p) {
            let q = edge_delete(p, e).expect("very good edges delete cleanly");
            if self.member(&q) {
                return true;
            }
        }
        false
    }

    fn member(&mut self, p: &CombinatorialPolyhedron) -> bool {
        let code = canonical_code(p);
        if self.db.find_code(&code).is_some() {
            return true;
        }
        if let Some(&m) = self.memo.get(&code) {
            return m;
        }
        // Descendants below the deepest rank are all stored, since their
        // parents were expanded.
        let below = volume_with(p, &self.db.options().solver)
            .map(|r| r.volume < self.deepest - TIE_TOLERANCE)
            .unwrap_or(false);
        let m = !below && self.reachable_below(p);
        self.memo.insert(code, m);
        m
    }
}
