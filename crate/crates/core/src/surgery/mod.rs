//! Constructions and moves on right-angled polyhedra.

mod compose;
mod edges;
mod lobell;
mod reduce;

pub use compose::{composition_sites, 
    all_compositions, compose, compose_with_circuit, decompose, CompositionSite,
    CompositionSummary, Decomposition,
};
pub use edges::{edge_additions, edge_addition_sites, edge_delete, apply_edge_addition, EdgeAdditionSite};
pub use lobell::{is_lobell, lobell, lobell_index};
pub use reduce::{reduce_to_lobell, Move, ReductionChain, ReductionStep};

use thiserror::Error;

use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("Löbell polyhedra need n >= 5, got {0}")]
    LobellTooSmall(usize),
    #[error("{0} is not an edge")]
    UnknownEdge(Edge),
    #[error("deleting {edge} leaves a non-simple graph: {source}")]
    NonSimple {
        edge: Edge,
        #[source]
        source: StructureError,
    },
    #[error("face {0} does not exist")]
    UnknownFace(FaceId),
    #[error("faces have different sizes ({0} and {1})")]
    FaceSizeMismatch(usize, usize),
    #[error("matching offset {offset} out of range for a {k}-gon")]
    BadOffset { offset: usize, k: usize },
    #[error("edge-addition site is not valid: {0}")]
    BadSite(String),
    #[error("decomposition needs a circuit of length at least 5, got {0}")]
    CircuitTooShort(usize),
    #[error("circuit does not separate the polyhedron")]
    NotSeparating,
    #[error("no very good edge and no usable circuit on a non-Löbell polyhedron with {} vertices", .0.num_vertices())]
    Stuck(Box<CombinatorialPolyhedron>),
    #[error("gluing produced an invalid map: {0}")]
    Structure(#[from] StructureError),
}
