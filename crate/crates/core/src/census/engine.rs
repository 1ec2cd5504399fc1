use std::path::PathBuf;

use rayon::prelude::*;

use crate::canon::{canonical_form_with_code, CanonicalCode};
use crate::geometry::{volume_with, SolverOptions};
use crate::polyhedron::{face_vector, CombinatorialPolyhedron};
use crate::surgery::{edge_additions, lobell_index};
use crate::validity::validate_pogorelov;

use super::db::{CensusDatabase, CensusEntry, ParentLink, Provenance, VolumeStatus};
use super::seeds::SeedSource;
use super::CensusError;

/// Volumes closer than this are ordered by canonical code.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub solver: SolverOptions,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            solver: SolverOptions::default(),
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub rank: usize,
    pub id: usize,
    pub volume: f64,
    pub raw_children: usize,
    pub new_entries: Vec<usize>,
    pub dedup_hits: usize,
    pub volume_failures: Vec<usize>,
}

impl CensusDatabase {
    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.options.workers == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.options.workers)
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }

    /// Creates a database from seeds, computing their volumes.
    pub fn init(
        seeds: Vec<(CombinatorialPolyhedron, Provenance)>,
        path: Option<PathBuf>,
        options: CensusOptions,
    ) -> Result<Self, CensusError> {
        let mut db = CensusDatabase::empty(path, options);
        for (p, _) in &seeds {
            let report = validate_pogorelov(p);
            if !report.valid {
                return Err(CensusError::InvalidSeed(format!("{report:?}")));
            }
        }
        let prepared = db.run(|| {
            seeds
                .par_iter()
                .map(|(p, prov)| db.prepare(p, *prov))
                .collect::<Vec<_>>()
        });
        let mut ids = Vec::new();
        for (entry, poly) in prepared {
            if let Some(&other) = db.by_code.get(&entry.code) {
                return Err(CensusError::Duplicate(other));
            }
            let mut entry = entry;
            entry.id = db.entries.len();
            ids.push(db.insert(entry, poly));
        }
        db.persist(ids)?;
        Ok(db)
    }

    pub fn init_from_sources(
        sources: &[SeedSource],
        path: Option<PathBuf>,
        options: CensusOptions,
    ) -> Result<Self, CensusError> {
        let mut seeds = Vec::new();
        for s in sources {
            seeds.push(s.build()?);
        }
        Self::init(seeds, path, options)
    }

    /// Canonical form, code, face vector and volume of a new entry. The id
    /// is filled in on insertion.
    fn prepare(&self, p: &CombinatorialPolyhedron, provenance: Provenance) -> (CensusEntry, CombinatorialPolyhedron) {
        let (canon, code) = canonical_form_with_code(p);
        let fv = face_vector(&canon).expect("valid polyhedra have faces of size >= 5");
        let volume = volume_with(&canon, &self.options.solver).ok().map(|r| r.volume);
        let entry = CensusEntry {
            id: usize::MAX,
            code,
            volume,
            volume_status: if volume.is_some() {
                VolumeStatus::Ok
            } else {
                VolumeStatus::Failed
            },
            expanded: false,
            rank: None,
            face_vector: fv,
            parents: Vec::new(),
            provenance,
        };
        (entry, canon)
    }

    /// Adds a seed after initialization.
    pub fn register_seed(&mut self, p: &CombinatorialPolyhedron) -> Result<usize, CensusError> {
        let report = validate_pogorelov(p);
        if !report.valid {
            return Err(CensusError::InvalidSeed(format!("{report:?}")));
        }
        if let Some(id) = self.find(p) {
            return Err(CensusError::Duplicate(id));
        }
        let (mut entry, poly) = self.prepare(p, Provenance::Seed);
        entry.id = self.entries.len();
        let id = self.insert(entry, poly);
        self.persist([id])?;
        Ok(id)
    }

    /// Smallest unexpanded entry by (volume, code), after checking that no
    /// entry without a volume could precede it.
    pub fn next_candidate(&self) -> Result<usize, CensusError> {
        let mut best: Option<(f64, &CanonicalCode, usize)> = None;
        for e in &self.entries {
            if e.expanded {
                continue;
            }
            let Some(v) = e.volume else { continue };
            let better = match best {
                None => true,
                Some((bv, bc, _)) => {
                    if (v - bv).abs() <= TIE_TOLERANCE {
                        e.code < *bc
                    } else {
                        v < bv
                    }
                }
            };
            if better {
                best = Some((v, &e.code, e.id));
            }
        }
        let (volume, _, id) = best.ok_or(CensusError::Exhausted)?;
        for e in &self.entries {
            if e.expanded || e.volume.is_some() {
                continue;
            }
            // Edge-children are larger than their parents, so a failed
            // entry is bounded below by its parents.
            let lower = e
                .parents
                .iter()
                .filter_map(|l| self.entries[l.parent].volume)
                .fold(0.0, f64::max);
            if lower < volume {
                return Err(CensusError::BlockedByFailure { id: e.id });
            }
        }
        let bound = self
            .entries
            .iter()
            .filter(|e| e.provenance == Provenance::Seed)
            .filter(|e| lobell_index(&self.polyhedra[e.id]).is_some())
            .filter_map(|e| e.volume)
            .fold(f64::NAN, f64::max);
        if bound.is_finite() && volume >= bound {
            return Err(CensusError::SeedBound { volume, bound });
        }
        Ok(id)
    }

    /// Ranks the smallest unexpanded entry and inserts its edge-children.
    pub fn step(&mut self) -> Result<StepReport, CensusError> {
        let id = self.next_candidate()?;
        let rank = self.by_rank.len() + 1;
        let parent = self.polyhedra[id].clone();

        let children: Vec<(CombinatorialPolyhedron, CanonicalCode, String)> = self.run(|| {
            edge_additions(&parent)
                .into_par_iter()
                .map(|(c, site)| {
                    let (canon, code) = canonical_form_with_code(&c);
                    (canon, code, site.to_string())
                })
                .collect()
        });
        let raw_children = children.len();

        // Children new to the database, first occurrence only.
        let mut fresh: Vec<(CombinatorialPolyhedron, CanonicalCode, String)> = Vec::new();
        let mut dedup_hits = 0;
        let mut links: Vec<(usize, String)> = Vec::new();
        for (canon, code, site) in children {
            if let Some(&known) = self.by_code.get(&code) {
                dedup_hits += 1;
                links.push((known, site));
            } else if fresh.iter().any(|f| f.1 == code) {
                dedup_hits += 1;
            } else {
                fresh.push((canon, code, site));
            }
        }
        for (known, site) in links {
            let fv = face_vector(&self.polyhedra[known]).expect("valid");
            assert_eq!(fv, self.entries[known].face_vector, "codes agree but face vectors differ");
            let e = &mut self.entries[known];
            if known != id && !e.parents.iter().any(|l| l.parent == id) {
                e.parents.push(ParentLink { parent: id, site });
            }
        }

        let prepared: Vec<(CensusEntry, CombinatorialPolyhedron, String)> = self.run(|| {
            fresh
                .par_iter()
                .map(|(canon, _, site)| {
                    let (e, p) = self.prepare(canon, Provenance::EdgeChild);
                    (e, p, site.clone())
                })
                .collect()
        });
        let mut new_entries = Vec::new();
        let mut volume_failures = Vec::new();
        for (mut entry, poly, site) in prepared {
            entry.id = self.entries.len();
            entry.parents.push(ParentLink { parent: id, site });
            let failed = entry.volume.is_none();
            let new_id = self.insert(entry, poly);
            if failed {
                volume_failures.push(new_id);
            }
            new_entries.push(new_id);
        }

        let e = &mut self.entries[id];
        e.expanded = true;
        e.rank = Some(rank);
        let volume = e.volume.expect("candidates have volumes");
        self.by_rank.push(id);
        self.persist(new_entries.iter().copied())?;
        Ok(StepReport {
            rank,
            id,
            volume,
            raw_children,
            new_entries,
            dedup_hits,
            volume_failures,
        })
    }

    /// Runs `n` steps, stopping at the first error.
    pub fn extend(&mut self, n: usize) -> Result<Vec<StepReport>, CensusError> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.step()?);
        }
        Ok(out)
    }
}
