//! Hyperbolic realization and volume of right-angled polyhedra.

pub mod minkowski;
mod packing;
mod realize;
pub mod special;
pub mod tetra;
mod volume;

pub use realize::{
    dump, edge_length, realize, realize_with, vertices_from_normals, vertices_of, GaugedSystem,
    Realization, SolverOptions, System,
};
pub use special::{clausen2, li2, lobachevsky};
pub use tetra::{orthoscheme_volume, tetrahedron_volume};
pub use volume::{
    cone_volume, orthoscheme_volume as orthoscheme_decomposition_volume, vertex_centroid, volume,
    volume_with, VolumeMethod, VolumeResult,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("no realization after {attempts} attempts (best residual {best_residual:e})")]
    NoConvergence { attempts: usize, best_residual: f64 },
    #[error("not realizable: {0}")]
    NotRealizable(&'static str),
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error("invalid tetrahedron: {0}")]
    InvalidTetrahedron(String),
    #[error("tetrahedron with non-positive volume {0}")]
    NegativeVolume(f64),
}
