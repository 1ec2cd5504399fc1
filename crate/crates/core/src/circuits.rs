//! Prismatic circuits: closed curves on the boundary crossing k edges
//! transversely, no two of which share a vertex.
//!
//! Circuits are found as k-cycles of the dual graph whose crossed edges are
//! pairwise vertex-disjoint. A circuit is unoriented and has no distinguished
//! start, so each one is reported once.

use std::collections::HashSet;

use thiserror::Error;

use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId};

pub const MAX_CIRCUIT_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit length {0} outside supported range 3..={MAX_CIRCUIT_LEN}")]
    UnsupportedLength(usize),
    #[error("edge {0} is not an edge of the polyhedron")]
    UnknownEdge(Edge),
    #[error("edges {0} and {1} do not lie on a common face")]
    NoCommonFace(Edge, Edge),
    #[error("crossed edges {0} and {1} share a vertex")]
    NotPrismatic(Edge, Edge),
    #[error("circuit visits face {0} twice")]
    RepeatedFace(FaceId),
}

/// `faces[i]` is the face the curve passes through between crossing
/// `edges[i]` and `edges[i + 1]` (indices mod k).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrismaticCircuit {
    pub edges: Vec<Edge>,
    pub faces: Vec<FaceId>,
}

impl PrismaticCircuit {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Builds a circuit from its cyclic list of crossed edges.
    pub fn from_edge_cycle(
        p: &CombinatorialPolyhedron,
        edges: Vec<Edge>,
    ) -> Result<Self, CircuitError> {
        let k = edges.len();
        if !(3..=MAX_CIRCUIT_LEN).contains(&k) {
            return Err(CircuitError::UnsupportedLength(k));
        }
        let mut faces = Vec::with_capacity(k);
        for i in 0..k {
            let a = edges[i];
            let b = edges[(i + 1) % k];
            let fa = p.edge_faces(a).ok_or(CircuitError::UnknownEdge(a))?;
            let fb = p.edge_faces(b).ok_or(CircuitError::UnknownEdge(b))?;
            let common = fa
                .iter()
                .find(|f| fb.contains(f))
                .ok_or(CircuitError::NoCommonFace(a, b))?;
            faces.push(*common);
        }
        let c = PrismaticCircuit { edges, faces };
        c.verify(p)?;
        Ok(c)
    }

    /// Re-checks every defining property against `p`.
    pub fn verify(&self, p: &CombinatorialPolyhedron) -> Result<(), CircuitError> {
        let k = self.edges.len();
        if !(3..=MAX_CIRCUIT_LEN).contains(&k) || self.faces.len() != k {
            return Err(CircuitError::UnsupportedLength(k));
        }
        let mut seen = HashSet::new();
        for &f in &self.faces {
            if !seen.insert(f) {
                return Err(CircuitError::RepeatedFace(f));
            }
        }
        for i in 0..k {
            let e = self.edges[i];
            let fs = p.edge_faces(e).ok_or(CircuitError::UnknownEdge(e))?;
            let prev = self.faces[(i + k - 1) % k];
            let here = self.faces[i];
            let crosses = (fs[0] == prev && fs[1] == here) || (fs[1] == prev && fs[0] == here);
            if !crosses {
                return Err(CircuitError::NoCommonFace(self.edges[(i + k - 1) % k], e));
            }
            for j in i + 1..k {
                if e.shares_vertex(&self.edges[j]) {
                    return Err(CircuitError::NotPrismatic(e, self.edges[j]));
                }
            }
        }
        Ok(())
    }

    pub fn crosses(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    /// Rotation/reflection-invariant identity.
    pub fn key(&self) -> Vec<Edge> {
        let mut k = self.edges.clone();
        k.sort_unstable();
        k
    }
}

/// All prismatic k-circuits of `p`, sorted by their sorted edge lists.
pub fn prismatic_circuits(
    p: &CombinatorialPolyhedron,
    k: usize,
) -> Result<Vec<PrismaticCircuit>, CircuitError> {
    let mut out = Vec::new();
    for_each_circuit(p, k, None, &mut |c| {
        out.push(c);
        true
    })?;
    out.sort_by_key(|c| c.key());
    Ok(out)
}

/// The prismatic k-circuits crossing edge `e`.
pub fn circuits_through(
    p: &CombinatorialPolyhedron,
    e: Edge,
    k: usize,
) -> Result<Vec<PrismaticCircuit>, CircuitError> {
    let mut out = Vec::new();
    for_each_circuit(p, k, Some(e), &mut |c| {
        out.push(c);
        true
    })?;
    out.sort_by_key(|c| c.key());
    Ok(out)
}

/// First prismatic k-circuit found, if any.
pub fn find_circuit(
    p: &CombinatorialPolyhedron,
    k: usize,
) -> Result<Option<PrismaticCircuit>, CircuitError> {
    let mut found = None;
    for_each_circuit(p, k, None, &mut |c| {
        found = Some(c);
        false
    })?;
    Ok(found)
}

/// Set of edges crossed by at least one prismatic k-circuit.
pub fn crossed_edges(
    p: &CombinatorialPolyhedron,
    k: usize,
) -> Result<HashSet<Edge>, CircuitError> {
    let mut out = HashSet::new();
    for_each_circuit(p, k, None, &mut |c| {
        out.extend(c.edges);
        true
    })?;
    Ok(out)
}

/// Depth-first enumeration of dual k-cycles. Each cycle is rooted at its
/// smallest face and traversed in the direction where the second face is
/// smaller than the last, so it is produced once. `visit` returns `false`
/// to stop early.
fn for_each_circuit(
    p: &CombinatorialPolyhedron,
    k: usize,
    through: Option<Edge>,
    visit: &mut dyn FnMut(PrismaticCircuit) -> bool,
) -> Result<(), CircuitError> {
    if !(3..=MAX_CIRCUIT_LEN).contains(&k) {
        return Err(CircuitError::UnsupportedLength(k));
    }
    if let Some(e) = through {
        if !p.contains_edge(e) {
            return Err(CircuitError::UnknownEdge(e));
        }
    }
    let dual = p.dual_adjacency();
    let mut seen_keys: HashSet<Vec<Edge>> = HashSet::new();
    let mut faces = Vec::with_capacity(k);
    let mut edges = Vec::with_capacity(k);
    let mut on_path = vec![false; p.num_faces()];

    struct Search<'a> {
        dual: &'a [Vec<(FaceId, Edge)>],
        k: usize,
        through: Option<Edge>,
    }

    // Returns false when the visitor asked to stop.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        s: &Search<'_>,
        root: FaceId,
        faces: &mut Vec<FaceId>,
        edges: &mut Vec<Edge>,
        on_path: &mut [bool],
        seen_keys: &mut HashSet<Vec<Edge>>,
        visit: &mut dyn FnMut(PrismaticCircuit) -> bool,
    ) -> bool {
        let last = *faces.last().expect("path is never empty");
        if faces.len() == s.k {
            for &(g, e) in &s.dual[last] {
                if g != root || faces[1] >= last {
                    continue;
                }
                if edges.iter().any(|x| x.shares_vertex(&e)) {
                    continue;
                }
                edges.push(e);
                let wanted = s.through.is_none_or(|t| edges.contains(&t));
                if wanted {
                    let mut key = edges.clone();
                    key.sort_unstable();
                    if seen_keys.insert(key) {
                        // edges[i] joins faces[i] to faces[i + 1]; shift so
                        // that faces[i] lies between edges[i] and edges[i + 1].
                        let mut ce = edges.clone();
                        ce.rotate_right(1);
                        let c = PrismaticCircuit {
                            edges: ce,
                            faces: faces.clone(),
                        };
                        if !visit(c) {
                            edges.pop();
                            return false;
                        }
                    }
                }
                edges.pop();
            }
            return true;
        }
        for &(g, e) in &s.dual[last] {
            if g <= root || on_path[g] {
                continue;
            }
            if edges.iter().any(|x| x.shares_vertex(&e)) {
                continue;
            }
            faces.push(g);
            edges.push(e);
            on_path[g] = true;
            let go_on = extend(s, root, faces, edges, on_path, seen_keys, visit);
            on_path[g] = false;
            edges.pop();
            faces.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    let search = Search {
        dual: &dual,
        k,
        through,
    };
    for root in 0..p.num_faces() {
        faces.clear();
        edges.clear();
        faces.push(root);
        on_path[root] = true;
        let go_on = extend(
            &search,
            root,
            &mut faces,
            &mut edges,
            &mut on_path,
            &mut seen_keys,
            visit,
        );
        on_path[root] = false;
        if !go_on {
            break;
        }
    }
    Ok(())
}
