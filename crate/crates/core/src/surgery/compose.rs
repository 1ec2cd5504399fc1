use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::canon::{canonical_code, CanonicalCode};
use crate::circuits::PrismaticCircuit;
use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId, VertexId};

use super::SurgeryError;

/// One of the 2k ways to identify a k-gon of P with a k-gon of Q.
///
/// With `p_i`, `q_j` the face vertices in traversal order, `p_i` is glued to
/// `q_{(offset - i) mod k}`; with `flip` Q is mirrored first, which reverses
/// the traversal order of its face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompositionSite {
    pub face_p: FaceId,
    pub face_q: FaceId,
    pub offset: usize,
    pub flip: bool,
}

impl std::fmt::Display for CompositionSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "p{}:q{}:{}{}",
            self.face_p,
            self.face_q,
            self.offset,
            if self.flip { "r" } else { "" }
        )
    }
}

/// Glues `p` and `q` along the faces of `site`.
pub fn compose(
    p: &CombinatorialPolyhedron,
    q: &CombinatorialPolyhedron,
    site: &CompositionSite,
) -> Result<CombinatorialPolyhedron, SurgeryError> {
    compose_with_circuit(p, q, site).map(|(c, _)| c)
}

/// Like [`compose`], also returning the distinguished circuit left by the
/// glued faces.
pub fn compose_with_circuit(
    p: &CombinatorialPolyhedron,
    q: &CombinatorialPolyhedron,
    site: &CompositionSite,
) -> Result<(CombinatorialPolyhedron, PrismaticCircuit), SurgeryError> {
    for (poly, f) in [(p, site.face_p), (q, site.face_q)] {
        if f >= poly.num_faces() {
            return Err(SurgeryError::UnknownFace(f));
        }
    }
    let k = p.face_len(site.face_p);
    let kq = q.face_len(site.face_q);
    if k != kq {
        return Err(SurgeryError::FaceSizeMismatch(k, kq));
    }
    if site.offset >= k {
        return Err(SurgeryError::BadOffset {
            offset: site.offset,
            k,
        });
    }
    let pv = p.face_vertices(site.face_p);
    let mut qv = q.face_vertices(site.face_q);
    let q_rot: Vec<[VertexId; 3]> = if site.flip {
        qv.reverse();
        q.rotations().iter().map(|&[a, b, c]| [a, c, b]).collect()
    } else {
        q.rotations().to_vec()
    };

    let np = p.num_vertices();
    let nq = q.num_vertices();
    let mut on_face = vec![false; np + nq];
    pv.iter().for_each(|&v| on_face[v] = true);
    qv.iter().for_each(|&v| on_face[np + v] = true);

    // Spoke neighbor of each face vertex: the one off the face.
    let spoke = |rot: &[[VertexId; 3]], face: &[VertexId], i: usize| -> VertexId {
        let k = face.len();
        let (prev, next) = (face[(i + k - 1) % k], face[(i + 1) % k]);
        rot[face[i]]
            .into_iter()
            .find(|&w| w != prev && w != next)
            .expect("trivalent")
    };

    let mut rot: Vec<[VertexId; 3]> = p.rotations().to_vec();
    rot.extend(q_rot.iter().map(|nb| nb.map(|w| w + np)));
    let mut spokes = Vec::with_capacity(k);
    for i in 0..k {
        let j = (site.offset + k - i) % k;
        let a = spoke(p.rotations(), &pv, i);
        let b = spoke(&q_rot, &qv, j) + np;
        if on_face[a] || on_face[b] {
            return Err(SurgeryError::BadSite(format!("{site}: face has a chord")));
        }
        let sa = rot[a].iter().position(|&x| x == pv[i]).expect("spoke");
        let sb = rot[b].iter().position(|&x| x == qv[j] + np).expect("spoke");
        rot[a][sa] = b;
        rot[b][sb] = a;
        spokes.push((a, b));
    }

    let mut map = vec![usize::MAX; np + nq];
    let mut next = 0;
    for v in 0..np + nq {
        if !on_face[v] {
            map[v] = next;
            next += 1;
        }
    }
    let out: Vec<[VertexId; 3]> = (0..np + nq)
        .filter(|&v| !on_face[v])
        .map(|v| rot[v].map(|w| map[w]))
        .collect();
    let glued = CombinatorialPolyhedron::from_rotation(out)?;
    let edges: Vec<Edge> = spokes
        .iter()
        .map(|&(a, b)| Edge::new(map[a], map[b]))
        .collect();
    let circuit = PrismaticCircuit::from_edge_cycle(&glued, edges)
        .map_err(|e| SurgeryError::BadSite(format!("{site}: {e}")))?;
    Ok((glued, circuit))
}

/// Raw and distinct results of composing over every face pair and matching.
#[derive(Debug, Clone)]
pub struct CompositionSummary {
    pub raw_count: usize,
    /// One representative per canonical code, in order of first site.
    pub distinct: Vec<(CombinatorialPolyhedron, CompositionSite, CanonicalCode)>,
}

impl CompositionSummary {
    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }
}

/// Every site of every pair of equal-size faces, in order of
/// (face_p, face_q, flip, offset).
pub fn composition_sites(p: &CombinatorialPolyhedron, q: &CombinatorialPolyhedron) -> Vec<CompositionSite> {
    let mut sites = Vec::new();
    for fp in 0..p.num_faces() {
        let k = p.face_len(fp);
        for fq in 0..q.num_faces() {
            if q.face_len(fq) != k {
                continue;
            }
            for flip in [false, true] {
                for offset in 0..k {
                    sites.push(CompositionSite {
                        face_p: fp,
                        face_q: fq,
                        offset,
                        flip,
                    });
                }
            }
        }
    }
    sites
}

pub fn all_compositions(p: &CombinatorialPolyhedron, q: &CombinatorialPolyhedron) -> CompositionSummary {
    let sites = composition_sites(p, q);
    let results: Vec<(CombinatorialPolyhedron, CompositionSite, CanonicalCode)> = sites
        .par_iter()
        .map(|s| {
            let c = compose(p, q, s).expect("valid polyhedra compose at every site");
            let code = canonical_code(&c);
            (c, *s, code)
        })
        .collect();
    let raw_count = results.len();
    let mut seen = HashMap::new();
    let mut distinct = Vec::new();
    for (c, s, code) in results {
        if seen.insert(code.clone(), ()).is_none() {
            distinct.push((c, s, code));
        }
    }
    CompositionSummary { raw_count, distinct }
}

/// The two pieces of a decomposition and the cap face each one gained.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pieces: [CombinatorialPolyhedron; 2],
    pub caps: [FaceId; 2],
}

/// Splits `p` along the disk bounded by `c`, capping each side with a new
/// face. Piece 0 holds the side containing the origins of the crossed darts
/// that point out of `c.faces[i - 1]`.
pub fn decompose(p: &CombinatorialPolyhedron, c: &PrismaticCircuit) -> Result<Decomposition, SurgeryError> {
    let k = c.len();
    if k < 5 {
        return Err(SurgeryError::CircuitTooShort(k));
    }
    c.verify(p)
        .map_err(|e| SurgeryError::BadSite(e.to_string()))?;
    let mut xs = Vec::with_capacity(k);
    let mut ys = Vec::with_capacity(k);
    for i in 0..k {
        let e = c.edges[i];
        let prev_face = c.faces[(i + k - 1) % k];
        let d = p.dart(e.0, e.1).expect("edge of p");
        let d = if p.face_of(d) == prev_face { d } else { p.twin(d) };
        xs.push(p.origin(d));
        ys.push(p.target(d));
    }

    let n = p.num_vertices();
    let mut side = vec![None::<bool>; n];
    let cut = |a: VertexId, b: VertexId| c.edges.contains(&Edge::new(a, b));
    let mut queue = VecDeque::new();
    for (&x, &y) in xs.iter().zip(&ys) {
        side[x] = Some(true);
        side[y] = Some(false);
    }
    for (&x, &y) in xs.iter().zip(&ys) {
        queue.push_back(x);
        queue.push_back(y);
    }
    while let Some(v) = queue.pop_front() {
        let s = side[v];
        for w in p.rotation(v) {
            if cut(v, w) {
                continue;
            }
            match side[w] {
                None => {
                    side[w] = s;
                    queue.push_back(w);
                }
                Some(t) if Some(t) != s => return Err(SurgeryError::NotSeparating),
                _ => {}
            }
        }
    }

    let build = |keep_a: bool| -> Result<(CombinatorialPolyhedron, FaceId), SurgeryError> {
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if side[v] == Some(keep_a) {
                map[v] = next;
                next += 1;
            }
        }
        let base = next;
        let mut rot: Vec<[VertexId; 3]> = (0..n)
            .filter(|&v| side[v] == Some(keep_a))
            .map(|v| p.rotation(v))
            .collect();
        let (inner, outer) = if keep_a { (&xs, &ys) } else { (&ys, &xs) };
        for i in 0..k {
            let r = &mut rot[map[inner[i]]];
            let slot = r.iter().position(|&w| w == outer[i]).expect("crossed edge");
            r[slot] = usize::MAX - i;
        }
        let mut out: Vec<[VertexId; 3]> = rot
            .into_iter()
            .map(|nb| {
                nb.map(|w| {
                    if w >= usize::MAX - k + 1 {
                        base + (usize::MAX - w)
                    } else {
                        map[w]
                    }
                })
            })
            .collect();
        for i in 0..k {
            let (prev, next) = (base + (i + k - 1) % k, base + (i + 1) % k);
            let own = map[inner[i]];
            out.push(if keep_a { [own, prev, next] } else { [own, next, prev] });
        }
        let poly = CombinatorialPolyhedron::from_rotation(out)?;
        let d = poly.dart(base, base + 1).expect("cap edge");
        let cap = [poly.face_of(d), poly.face_of(poly.twin(d))]
            .into_iter()
            .find(|&f| poly.face_vertices(f).iter().all(|&v| v >= base))
            .expect("cap face");
        Ok((poly, cap))
    };
    let (a, ca) = build(true)?;
    let (b, cb) = build(false)?;
    Ok(Decomposition {
        pieces: [a, b],
        caps: [ca, cb],
    })
}
