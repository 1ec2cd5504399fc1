use crate::canon::canonical_code;
use crate::polyhedron::{face_vector, CombinatorialPolyhedron};

use super::SurgeryError;

/// The Löbell polyhedron L_n: two n-gons joined by two rings of n pentagons.
///
/// Vertex layout: `t_i = i` on the top n-gon, a rim of 2n vertices
/// `a_i = n + 2i`, `b_i = n + 2i + 1`, and `s_i = 3n + i` on the bottom.
pub fn lobell(n: usize) -> Result<CombinatorialPolyhedron, SurgeryError> {
    if n < 5 {
        return Err(SurgeryError::LobellTooSmall(n));
    }
    let t = |i: usize| i % n;
    let a = |i: usize| n + 2 * (i % n);
    let b = |i: usize| n + 2 * (i % n) + 1;
    let s = |i: usize| 3 * n + i % n;
    let mut faces = Vec::with_capacity(2 * n + 2);
    faces.push((0..n).map(t).collect::<Vec<_>>());
    for i in 0..n {
        faces.push(vec![t(i + 1), t(i), a(i), b(i), a(i + 1)]);
        faces.push(vec![a(i + 1), b(i), s(i), s(i + 1), b(i + 1)]);
    }
    faces.push((0..n).rev().map(s).collect());
    Ok(CombinatorialPolyhedron::from_face_cycles(4 * n, &faces)?)
}

/// `Some(n)` when `p` is isomorphic to L_n.
pub fn lobell_index(p: &CombinatorialPolyhedron) -> Option<usize> {
    let f = p.num_faces();
    if f < 12 || f % 2 != 0 {
        return None;
    }
    let n = (f - 2) / 2;
    let fv = face_vector(p).ok()?;
    let expected_pentagons = if n == 5 { 12 } else { 2 * n };
    if fv.count(5) != expected_pentagons || (n > 5 && fv.count(n) != 2) {
        return None;
    }
    let l = lobell(n).ok()?;
    (canonical_code(&l) == canonical_code(p)).then_some(n)
}

pub fn is_lobell(p: &CombinatorialPolyhedron) -> bool {
    lobell_index(p).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for n in 5..12 {
            let l = lobell(n).unwrap();
            assert_eq!(l.num_vertices(), 4 * n);
            assert_eq!(l.num_edges(), 6 * n);
            assert_eq!(l.num_faces(), 2 * n + 2);
            assert_eq!(lobell_index(&l), Some(n));
        }
        assert!(lobell(4).is_err());
    }
}
