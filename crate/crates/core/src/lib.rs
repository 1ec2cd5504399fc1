//! Right-angled hyperbolic polyhedra: combinatorics, surgery, realization,
//! volume and an enumeration census ordered by volume.

pub mod canon;
pub mod census;
pub mod circuits;
pub mod geometry;
pub mod goodness;
pub mod polyhedron;
pub mod render;
pub mod surgery;
pub mod validity;

pub use canon::{canonical_code, canonical_form, canonical_form_with_code, isomorphic, CanonicalCode};
pub use circuits::{prismatic_circuits, PrismaticCircuit};
pub use goodness::{edge_context, lemma_witness, very_good_edges, EdgeContext, LemmaWitness};
pub use polyhedron::{face_vector, CombinatorialPolyhedron, Edge, FaceVector, ParseError};
pub use validity::{validate_pogorelov, ValidityReport};
