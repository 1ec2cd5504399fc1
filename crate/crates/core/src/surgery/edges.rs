use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId, VertexId};

use super::SurgeryError;

/// Where an edge-addition happens: `edge_a` and `edge_b` lie on `face` at
/// positions `index_a < index_b` of its dart cycle, with `gap_counts`
/// boundary edges strictly between them on either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeAdditionSite {
    pub face: FaceId,
    pub edge_a: Edge,
    pub edge_b: Edge,
    pub index_a: usize,
    pub index_b: usize,
    pub gap_counts: (usize, usize),
}

impl std::fmt::Display for EdgeAdditionSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f{}:{}:{}", self.face, self.index_a, self.index_b)
    }
}

impl EdgeAdditionSite {
    /// Inverse of the `Display` form `f<face>:<a>:<b>`, resolved against `p`.
    pub fn parse(p: &CombinatorialPolyhedron, s: &str) -> Result<Self, SurgeryError> {
        let bad = || SurgeryError::BadSite(s.to_string());
        let rest = s.strip_prefix('f').ok_or_else(bad)?;
        let mut it = rest.split(':');
        let mut num = || -> Result<usize, SurgeryError> {
            it.next().ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let (face, a, b) = (num()?, num()?, num()?);
        site_at(p, face, a, b)
    }
}

/// Builds and checks the site at positions `a < b` of `face`.
pub fn site_at(
    p: &CombinatorialPolyhedron,
    face: FaceId,
    a: usize,
    b: usize,
) -> Result<EdgeAdditionSite, SurgeryError> {
    if face >= p.num_faces() {
        return Err(SurgeryError::UnknownFace(face));
    }
    let darts = p.face_darts(face);
    let k = darts.len();
    if a >= b || b >= k {
        return Err(SurgeryError::BadSite(format!("f{face}:{a}:{b}")));
    }
    let g1 = b - a - 1;
    let g2 = k - (b - a) - 1;
    if g1 < 2 || g2 < 2 {
        return Err(SurgeryError::BadSite(format!(
            "f{face}:{a}:{b} has gaps {g1} and {g2}"
        )));
    }
    Ok(EdgeAdditionSite {
        face,
        edge_a: p.edge_of(darts[a]),
        edge_b: p.edge_of(darts[b]),
        index_a: a,
        index_b: b,
        gap_counts: (g1, g2),
    })
}

/// Every edge-addition site over all large faces, by face then position.
pub fn edge_addition_sites(p: &CombinatorialPolyhedron) -> Vec<EdgeAdditionSite> {
    let mut out = Vec::new();
    for f in 0..p.num_faces() {
        let k = p.face_len(f);
        if k < 6 {
            continue;
        }
        for a in 0..k {
            for b in a + 3..k {
                if k - (b - a) - 1 >= 2 {
                    out.push(site_at(p, f, a, b).expect("gaps checked"));
                }
            }
        }
    }
    out
}

/// Subdivides the two site edges and joins the new vertices. The new
/// vertices are `V` (on `edge_a`) and `V + 1`, so the added edge is
/// `Edge(V, V + 1)`.
pub fn apply_edge_addition(
    p: &CombinatorialPolyhedron,
    site: &EdgeAdditionSite,
) -> Result<CombinatorialPolyhedron, SurgeryError> {
    let checked = site_at(p, site.face, site.index_a, site.index_b)?;
    if checked.edge_a != site.edge_a || checked.edge_b != site.edge_b {
        return Err(SurgeryError::BadSite(site.to_string()));
    }
    let darts = p.face_darts(site.face);
    let (ua, ua1) = (p.origin(darts[site.index_a]), p.target(darts[site.index_a]));
    let (ub, ub1) = (p.origin(darts[site.index_b]), p.target(darts[site.index_b]));
    let n = p.num_vertices();
    let (pv, qv) = (n, n + 1);
    let mut rot = p.rotations().to_vec();
    replace(&mut rot[ua], ua1, pv);
    replace(&mut rot[ua1], ua, pv);
    replace(&mut rot[ub], ub1, qv);
    replace(&mut rot[ub1], ub, qv);
    rot.push([qv, ua1, ua]);
    rot.push([ub, pv, ub1]);
    Ok(CombinatorialPolyhedron::from_rotation(rot)?)
}

/// All edge-children of `p`, one per site, not deduplicated.
pub fn edge_additions(p: &CombinatorialPolyhedron) -> Vec<(CombinatorialPolyhedron, EdgeAdditionSite)> {
    edge_addition_sites(p)
        .into_iter()
        .map(|s| {
            let c = apply_edge_addition(p, &s).expect("enumerated sites are valid");
            (c, s)
        })
        .collect()
}

fn replace(slot: &mut [VertexId; 3], old: VertexId, new: VertexId) {
    let i = slot.iter().position(|&x| x == old).expect("neighbor present");
    slot[i] = new;
}

/// Removes the interior of `e` and smooths its two endpoints away. Vertex
/// `v` of the result is `v - [v > e.0] - [v > e.1]` in `p`.
pub fn edge_delete(p: &CombinatorialPolyhedron, e: Edge) -> Result<CombinatorialPolyhedron, SurgeryError> {
    if !p.contains_edge(e) {
        return Err(SurgeryError::UnknownEdge(e));
    }
    let (u, w) = (e.0, e.1);
    let mut rot = p.rotations().to_vec();
    for (x, other) in [(u, w), (w, u)] {
        let nb: Vec<VertexId> = p.rotation(x).into_iter().filter(|&y| y != other).collect();
        let (y1, y2) = (nb[0], nb[1]);
        replace(&mut rot[y1], x, y2);
        replace(&mut rot[y2], x, y1);
    }
    let map = |v: VertexId| v - usize::from(v > u) - usize::from(v > w);
    let out: Vec<[VertexId; 3]> = rot
        .iter()
        .enumerate()
        .filter(|(v, _)| *v != u && *v != w)
        .map(|(_, nb)| [map(nb[0]), map(nb[1]), map(nb[2])])
        .collect();
    CombinatorialPolyhedron::from_rotation(out).map_err(|source| SurgeryError::NonSimple { edge: e, source })
}
