//! Canonical codes for trivalent spherical maps.
//!
//! A breadth-first traversal is started from every dart in both
//! orientations. Each traversal numbers vertices in discovery order and
//! writes, for every vertex, the numbers of its three neighbors read around
//! the vertex starting from the dart it was discovered through. The least
//! such sequence is the code; it fully describes the map up to reflection,
//! which for 3-connected graphs is the same as graph isomorphism.

use std::fmt;

use crate::polyhedron::{CombinatorialPolyhedron, Dart, VertexId};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(2 * self.0.len());
        for b in &self.0 {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if s.len() % 2 != 0 || !s.is_ascii() {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalCode)
    }

    /// Rebuilds the map described by the code.
    pub fn decode(&self) -> Option<CombinatorialPolyhedron> {
        let b = &self.0;
        if b.len() < 4 {
            return None;
        }
        let n = u32::from_be_bytes([b[0], b[1], b[2], b[3]]) as usize;
        if b.len() != 4 + 6 * n {
            return None;
        }
        let label = |i: usize| u16::from_be_bytes([b[4 + 2 * i], b[5 + 2 * i]]) as usize;
        let rotation = (0..n)
            .map(|v| [label(3 * v), label(3 * v + 1), label(3 * v + 2)])
            .collect();
        CombinatorialPolyhedron::from_rotation(rotation).ok()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

struct Traversal {
    labels: Vec<u32>,
    order: Vec<VertexId>,
    entry: Vec<Dart>,
    out: Vec<u16>,
}

impl Traversal {
    fn new(n: usize) -> Self {
        Traversal {
            labels: vec![u32::MAX; n],
            order: Vec::with_capacity(n),
            entry: vec![0; n],
            out: Vec::with_capacity(3 * n),
        }
    }

    /// Runs from `start`. When `best` is given, stops as soon as the output
    /// is known to be larger and returns false.
    fn run(&mut self, p: &CombinatorialPolyhedron, start: Dart, reversed: bool, best: Option<&[u16]>) -> bool {
        self.labels.iter_mut().for_each(|l| *l = u32::MAX);
        self.order.clear();
        self.out.clear();
        let v0 = p.origin(start);
        self.labels[v0] = 0;
        self.entry[v0] = start;
        self.order.push(v0);
        let mut head = 0;
        let mut smaller = false;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let mut d = self.entry[v];
            for _ in 0..3 {
                let w = p.target(d);
                if self.labels[w] == u32::MAX {
                    self.labels[w] = self.order.len() as u32;
                    self.entry[w] = p.twin(d);
                    self.order.push(w);
                }
                let l = self.labels[w] as u16;
                if let (false, Some(b)) = (smaller, best) {
                    let pos = self.out.len();
                    match l.cmp(&b[pos]) {
                        std::cmp::Ordering::Greater => return false,
                        std::cmp::Ordering::Less => smaller = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                self.out.push(l);
                d = if reversed { p.prev(d) } else { p.next(d) };
            }
        }
        true
    }
}

/// Best traversal: its code words and vertex order.
fn best_traversal(p: &CombinatorialPolyhedron) -> (Vec<u16>, Vec<VertexId>) {
    let n = p.num_vertices();
    let mut t = Traversal::new(n);
    let mut best: Option<(Vec<u16>, Vec<VertexId>)> = None;
    for reversed in [false, true] {
        for start in 0..p.num_darts() {
            let accepted = t.run(p, start, reversed, best.as_ref().map(|b| b.0.as_slice()));
            if accepted && best.as_ref().is_none_or(|b| t.out < b.0) {
                best = Some((t.out.clone(), t.order.clone()));
            }
        }
    }
    best.expect("at least one dart")
}

pub fn canonical_code(p: &CombinatorialPolyhedron) -> CanonicalCode {
    let (words, _) = best_traversal(p);
    let mut bytes = Vec::with_capacity(4 + 2 * words.len());
    bytes.extend_from_slice(&(p.num_vertices() as u32).to_be_bytes());
    for w in words {
        bytes.extend_from_slice(&w.to_be_bytes());
    }
    CanonicalCode(bytes)
}

/// The map spelled out by the canonical code: vertex `i` is the `i`-th
/// vertex discovered, with rotations taken from the code. Isomorphic to `p`
/// or to its mirror image.
pub fn canonical_form(p: &CombinatorialPolyhedron) -> CombinatorialPolyhedron {
    canonical_form_with_code(p).0
}

pub fn canonical_form_with_code(p: &CombinatorialPolyhedron) -> (CombinatorialPolyhedron, CanonicalCode) {
    let code = canonical_code(p);
    (code.decode().expect("codes decode"), code)
}

pub fn isomorphic(p: &CombinatorialPolyhedron, q: &CombinatorialPolyhedron) -> bool {
    p.num_vertices() == q.num_vertices() && canonical_code(p) == canonical_code(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prism(n: usize) -> CombinatorialPolyhedron {
        let mut faces = vec![(0..n).collect::<Vec<_>>(), (0..n).rev().map(|i| i + n).collect()];
        for i in 0..n {
            let j = (i + 1) % n;
            faces.push(vec![j, i, i + n, j + n]);
        }
        CombinatorialPolyhedron::from_face_cycles(2 * n, &faces).unwrap()
    }

    #[test]
    fn hex_round_trip() {
        let c = canonical_code(&prism(5));
        assert_eq!(CanonicalCode::from_hex(&c.to_hex()), Some(c.clone()));
        assert!(CanonicalCode::from_hex("abc").is_none());
        assert!(CanonicalCode::from_hex("zz").is_none());
    }

    #[test]
    fn decode_is_isomorphic() {
        let p = prism(6);
        let f = canonical_form(&p);
        assert_eq!(canonical_code(&f), canonical_code(&p));
        assert!(isomorphic(&p, &p.mirror()));
        assert!(!isomorphic(&prism(5), &prism(6)));
    }
}
