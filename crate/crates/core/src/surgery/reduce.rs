use crate::circuits::{prismatic_circuits, PrismaticCircuit};
use crate::goodness::very_good_edges;
use crate::polyhedron::{CombinatorialPolyhedron, Edge};
use crate::validity::is_pogorelov_valid;

use super::{decompose, edge_delete, lobell_index, SurgeryError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    EdgeDeletion(Edge),
    Decomposition(PrismaticCircuit),
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::EdgeDeletion(e) => write!(f, "delete edge {e}"),
            Move::Decomposition(c) => {
                write!(f, "decompose along {}-circuit [", c.len())?;
                for (i, e) in c.edges.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// `components` is the multiset before the move, which acts on
/// `components[target]`.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub components: Vec<CombinatorialPolyhedron>,
    pub target: usize,
    pub mv: Move,
}

#[derive(Debug, Clone)]
pub struct ReductionChain {
    pub steps: Vec<ReductionStep>,
    pub terminal: Vec<CombinatorialPolyhedron>,
    /// Löbell index of each terminal component, sorted.
    pub lobell_indices: Vec<usize>,
}

const MAX_DECOMPOSITION_LEN: usize = 8;

/// Reduces `p` to Löbell polyhedra by edge-deletions of very good edges,
/// falling back to decomposition along the least prismatic circuit (shortest
/// first) whose pieces are both valid.
pub fn reduce_to_lobell(p: &CombinatorialPolyhedron) -> Result<ReductionChain, SurgeryError> {
    let mut components = vec![p.clone()];
    let mut indices: Vec<Option<usize>> = vec![lobell_index(p)];
    let mut steps = Vec::new();
    while let Some(target) = indices.iter().position(Option::is_none) {
        let c = &components[target];
        let mv = choose_move(c).ok_or_else(|| SurgeryError::Stuck(Box::new(c.clone())))?;
        let before = components.clone();
        let replacement = match &mv {
            Move::EdgeDeletion(e) => vec![edge_delete(c, *e)?],
            Move::Decomposition(circ) => decompose(c, circ)?.pieces.to_vec(),
        };
        components.splice(target..=target, replacement.iter().cloned());
        indices.splice(target..=target, replacement.iter().map(lobell_index));
        steps.push(ReductionStep {
            components: before,
            target,
            mv,
        });
    }
    let mut lobell_indices: Vec<usize> = indices.into_iter().map(|i| i.expect("all Löbell")).collect();
    lobell_indices.sort_unstable();
    Ok(ReductionChain {
        steps,
        terminal: components,
        lobell_indices,
    })
}

fn choose_move(p: &CombinatorialPolyhedron) -> Option<Move> {
    if let Some(&e) = very_good_edges(p).first() {
        return Some(Move::EdgeDeletion(e));
    }
    for k in 5..=MAX_DECOMPOSITION_LEN {
        let circuits = prismatic_circuits(p, k).expect("supported length");
        for c in circuits {
            if let Ok(d) = decompose(p, &c) {
                if d.pieces.iter().all(is_pogorelov_valid) {
                    return Some(Move::Decomposition(c));
                }
            }
        }
    }
    None
}
