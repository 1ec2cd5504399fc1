//! Very good edges and the composition lemma's hypotheses.

use std::collections::HashSet;

use crate::circuits::crossed_edges;
use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId};

/// Faces around an edge: `j` contains it, `k` are the faces it edge-connects.
/// `k[0]` is the third face at `e.0`, `k[1]` the third face at `e.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeContext {
    pub j: [FaceId; 2],
    pub k: [FaceId; 2],
}

pub fn edge_context(p: &CombinatorialPolyhedron, e: Edge) -> Option<EdgeContext> {
    let j = p.edge_faces(e)?;
    let third = |v| {
        p.faces_at(v)
            .into_iter()
            .find(|f| !j.contains(f))
            .expect("trivalent vertex has a third face")
    };
    Some(EdgeContext {
        j,
        k: [third(e.0), third(e.1)],
    })
}

/// A face with at least six sides.
pub fn is_large(p: &CombinatorialPolyhedron, f: FaceId) -> bool {
    p.face_len(f) >= 6
}

/// Edges edge-connecting two large faces and crossed by no prismatic
/// 5-circuit, in lexicographic order.
pub fn very_good_edges(p: &CombinatorialPolyhedron) -> Vec<Edge> {
    let candidates: Vec<Edge> = p
        .edges()
        .into_iter()
        .filter(|&e| {
            let c = edge_context(p, e).expect("edge of p");
            is_large(p, c.k[0]) && is_large(p, c.k[1])
        })
        .collect();
    if candidates.is_empty() {
        return candidates;
    }
    let crossed: HashSet<Edge> = crossed_edges(p, 5).expect("5 is supported");
    candidates
        .into_iter()
        .filter(|e| !crossed.contains(e))
        .collect()
}

pub fn is_very_good(p: &CombinatorialPolyhedron, e: Edge) -> bool {
    very_good_edges(p).contains(&e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaCondition {
    /// A pair of very good edges.
    One,
    /// A triangle of three very good edges.
    Two,
}

/// For condition one: `edges = [e1, e2]`, `faces = [F1, F2, G1, G2]`.
/// For condition two: `edges = [e12, e23, e31]`, `faces = [F1, F2, F3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaWitness {
    pub kind: LemmaCondition,
    pub edges: Vec<Edge>,
    pub faces: Vec<FaceId>,
}

impl LemmaWitness {
    /// Checks every clause of the witnessed condition from scratch.
    pub fn verify(&self, p: &CombinatorialPolyhedron) -> bool {
        let good = very_good_edges(p);
        if !self.edges.iter().all(|e| good.contains(e)) {
            return false;
        }
        let ctx: Option<Vec<EdgeContext>> =
            self.edges.iter().map(|&e| edge_context(p, e)).collect();
        let Some(ctx) = ctx else { return false };
        let same_k = |c: &EdgeContext, a: FaceId, b: FaceId| {
            (c.k[0] == a && c.k[1] == b) || (c.k[0] == b && c.k[1] == a)
        };
        match self.kind {
            LemmaCondition::One => {
                if self.edges.len() != 2 || self.faces.len() != 4 {
                    return false;
                }
                let (f, g) = (&self.faces[..2], &self.faces[2..]);
                same_k(&ctx[0], f[0], f[1])
                    && same_k(&ctx[1], g[0], g[1])
                    && condition_one(&ctx[0], &ctx[1])
            }
            LemmaCondition::Two => {
                if self.edges.len() != 3 || self.faces.len() != 3 {
                    return false;
                }
                let f = &self.faces;
                f[0] != f[1]
                    && f[1] != f[2]
                    && f[0] != f[2]
                    && same_k(&ctx[0], f[0], f[1])
                    && same_k(&ctx[1], f[1], f[2])
                    && same_k(&ctx[2], f[2], f[0])
                    && disjoint(&ctx[0].j, &ctx[1].j)
                    && disjoint(&ctx[1].j, &ctx[2].j)
                    && disjoint(&ctx[0].j, &ctx[2].j)
            }
        }
    }
}

fn disjoint(a: &[FaceId; 2], b: &[FaceId; 2]) -> bool {
    !a.iter().any(|x| b.contains(x))
}

fn condition_one(a: &EdgeContext, b: &EdgeContext) -> bool {
    // (a) no common face, (b) no common edge-connected face,
    // (c) neither edge lies on a face the other edge-connects.
    disjoint(&a.j, &b.j) && disjoint(&a.k, &b.k) && disjoint(&a.j, &b.k) && disjoint(&b.j, &a.k)
}

/// First witness under lexicographic order of very good edges: pairs for
/// condition one, then triples for condition two.
pub fn lemma_witness(p: &CombinatorialPolyhedron) -> Option<LemmaWitness> {
    let good = very_good_edges(p);
    let ctx: Vec<EdgeContext> = good
        .iter()
        .map(|&e| edge_context(p, e).expect("edge of p"))
        .collect();
    let n = good.len();
    for a in 0..n {
        for b in a + 1..n {
            if condition_one(&ctx[a], &ctx[b]) {
                return Some(LemmaWitness {
                    kind: LemmaCondition::One,
                    edges: vec![good[a], good[b]],
                    faces: vec![ctx[a].k[0], ctx[a].k[1], ctx[b].k[0], ctx[b].k[1]],
                });
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !disjoint(&ctx[a].j, &ctx[b].j) {
                continue;
            }
            let Some(f2) = ctx[a].k.iter().copied().find(|f| ctx[b].k.contains(f)) else {
                continue;
            };
            let f1 = if ctx[a].k[0] == f2 { ctx[a].k[1] } else { ctx[a].k[0] };
            let f3 = if ctx[b].k[0] == f2 { ctx[b].k[1] } else { ctx[b].k[0] };
            if f1 == f3 {
                continue;
            }
            for c in b + 1..n {
                let kc = ctx[c].k;
                let closes = (kc[0] == f3 && kc[1] == f1) || (kc[0] == f1 && kc[1] == f3);
                if closes && disjoint(&ctx[a].j, &ctx[c].j) && disjoint(&ctx[b].j, &ctx[c].j) {
                    return Some(LemmaWitness {
                        kind: LemmaCondition::Two,
                        edges: vec![good[a], good[b], good[c]],
                        faces: vec![f1, f2, f3],
                    });
                }
            }
        }
    }
    None
}
