//! Pogorelov's realizability criterion for right-angled polyhedra.

use std::collections::VecDeque;

use crate::circuits::{find_circuit, PrismaticCircuit};
use crate::polyhedron::CombinatorialPolyhedron;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub trivalent: bool,
    pub simple: bool,
    pub planar_sphere: bool,
    pub three_connected: bool,
    /// Every face has at least five sides. Implied by the circuit conditions
    /// except on the tetrahedron, where the three edges around a triangle
    /// meet in a vertex.
    pub faces_at_least_five: bool,
    pub prismatic3: Option<PrismaticCircuit>,
    pub prismatic4: Option<PrismaticCircuit>,
    pub valid: bool,
}

pub fn validate_pogorelov(p: &CombinatorialPolyhedron) -> ValidityReport {
    let n = p.num_vertices();
    let trivalent = p.rotations().len() * 3 == p.num_darts();
    let simple = p.rotations().iter().enumerate().all(|(v, nb)| {
        !nb.contains(&v) && nb[0] != nb[1] && nb[1] != nb[2] && nb[0] != nb[2]
    });
    let planar_sphere = n as i64 - p.num_edges() as i64 + p.num_faces() as i64 == 2;
    let three_connected = is_three_connected(p);
    let faces_at_least_five = p.faces().iter().all(|f| f.len() >= 5);
    let prismatic3 = find_circuit(p, 3).expect("3 is a supported length");
    let prismatic4 = find_circuit(p, 4).expect("4 is a supported length");
    let valid = trivalent
        && simple
        && planar_sphere
        && three_connected
        && faces_at_least_five
        && prismatic3.is_none()
        && prismatic4.is_none();
    ValidityReport {
        trivalent,
        simple,
        planar_sphere,
        three_connected,
        faces_at_least_five,
        prismatic3,
        prismatic4,
        valid,
    }
}

pub fn is_pogorelov_valid(p: &CombinatorialPolyhedron) -> bool {
    validate_pogorelov(p).valid
}

/// Vertex 3-connectivity by deleting every pair of vertices.
pub fn is_three_connected(p: &CombinatorialPolyhedron) -> bool {
    let n = p.num_vertices();
    if n < 4 {
        return false;
    }
    let mut removed = vec![false; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::with_capacity(n);
    for a in 0..n {
        for b in a + 1..n {
            removed[a] = true;
            removed[b] = true;
            let start = (0..n).find(|&v| !removed[v]).expect("n >= 4");
            seen.iter_mut().for_each(|s| *s = false);
            seen[start] = true;
            queue.clear();
            queue.push_back(start);
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                for w in p.rotation(v) {
                    if !removed[w] && !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
            removed[a] = false;
            removed[b] = false;
            if count != n - 2 {
                return false;
            }
        }
    }
    true
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
    fn cube_fails_with_four_circuit() {
        let r = validate_pogorelov(&prism(4));
        assert!(!r.valid);
        assert!(r.three_connected);
        assert!(r.prismatic4.is_some());
    }

    #[test]
    fn tetrahedron_caught_by_face_size() {
        let faces = vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![2, 3, 0]];
        let t = CombinatorialPolyhedron::from_face_cycles(4, &faces).unwrap();
        let r = validate_pogorelov(&t);
        assert!(r.prismatic3.is_none() && r.prismatic4.is_none());
        assert!(!r.faces_at_least_five);
        assert!(!r.valid);
    }

    #[test]
    fn prisms_are_three_connected() {
        for n in 3..8 {
            assert!(is_three_connected(&prism(n)));
        }
    }
}
