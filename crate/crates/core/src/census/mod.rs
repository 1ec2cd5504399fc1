//! Enumeration of right-angled polyhedra in order of volume.
//!
//! The database holds every polyhedron found so far. Each step takes the
//! smallest unexpanded entry, gives it the next rank and inserts its
//! edge-children, recording parent links for children already known.

pub mod audit;
mod db;
mod engine;
mod reference;
mod seeds;

pub use audit::{composition_audit, AuditReport, CompositionFinding, PairFinding};
pub use db::{format_volume, CensusDatabase, CensusEntry, ParentLink, Provenance, VolumeStatus};
pub use engine::{CensusOptions, StepReport};
pub use reference::{verify_against, ReferenceTable, VerifyReport};
pub use seeds::{parse_seed_spec, SeedSource, DEFAULT_SEEDS};

use std::path::PathBuf;

use thiserror::Error;

use crate::polyhedron::ParseError;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("database line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("polyhedron file {path}: {source}")]
    Polyhedron {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("entry {id}: stored polyhedron does not match its code")]
    CodeMismatch { id: usize },
    #[error("polyhedron is already entry {0}")]
    Duplicate(usize),
    #[error("seed is not a valid right-angled polyhedron: {0}")]
    InvalidSeed(String),
    #[error("bad seed specification `{0}`")]
    SeedSpec(String),
    #[error("no unexpanded entry with a known volume")]
    Exhausted,
    #[error("entry {id} has no volume and may be smaller than the next candidate")]
    BlockedByFailure { id: usize },
    #[error("next volume {volume} reaches the largest Löbell seed volume {bound}; seed more Löbell polyhedra")]
    SeedBound { volume: f64, bound: f64 },
    #[error("reference line {line}: {message}")]
    Reference { line: usize, message: String },
    #[error("database is not deep enough: {0}")]
    InsufficientDepth(String),
}
