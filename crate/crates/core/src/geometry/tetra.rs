//! Volumes of compact hyperbolic tetrahedra.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Complex, Matrix4};

use super::minkowski::{inner, spacelike_complement, Vec4};
use super::special::{li2, lobachevsky};
use super::GeometryError;

type C64 = Complex<f64>;

/// Edge order used for dihedral angles: (01, 02, 03, 12, 13, 23).
pub const EDGE_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Gram matrix of the four faces, face `i` opposite vertex `i`. The faces
/// opposite `i` and `j` meet along the edge joining the other two vertices.
pub fn gram_matrix(angles: &[f64; 6]) -> Matrix4<f64> {
    let mut g = Matrix4::identity();
    for (idx, &(a, b)) in EDGE_ORDER.iter().enumerate() {
        // Edge ab is where the faces opposite the other two vertices meet.
        let (i, j) = other_two(a, b);
        let c = -angles[idx].cos();
        g[(i, j)] = c;
        g[(j, i)] = c;
    }
    g
}

fn other_two(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != a && x != b);
    (rest.next().expect("two left"), rest.next().expect("two left"))
}

/// Checks that the angles belong to a compact hyperbolic tetrahedron:
/// Gram determinant negative and every vertex link spherical.
pub fn check_compact(angles: &[f64; 6]) -> Result<Matrix4<f64>, GeometryError> {
    if angles.iter().any(|a| !(*a > 0.0 && *a < std::f64::consts::PI)) {
        return Err(GeometryError::InvalidTetrahedron("angle outside (0, π)".into()));
    }
    let g = gram_matrix(angles);
    let det = g.determinant();
    if !(det < 0.0) {
        return Err(GeometryError::InvalidTetrahedron(format!(
            "Gram determinant {det:e} is not negative"
        )));
    }
    // Vertex i is compact when the 3x3 minor of the faces through it is
    // positive definite; equivalently the diagonal cofactor is positive.
    for i in 0..4 {
        let minor = g.remove_row(i).remove_column(i);
        if !(minor.determinant() > 0.0) {
            return Err(GeometryError::InvalidTetrahedron(format!(
                "vertex {i} is not finite"
            )));
        }
    }
    Ok(g)
}

/// Volume from the six dihedral angles in [`EDGE_ORDER`], by the dilogarithm
/// formula of Murakami and Yano.
pub fn tetrahedron_volume(angles: &[f64; 6]) -> Result<f64, GeometryError> {
    let g = check_compact(angles)?;
    let det = g.determinant();
    // Three angles around vertex 3 and their opposites.
    let [d01, d02, d03, d12, d13, d23] = *angles;
    let (aa, bb, cc, dd, ee, ff) = (d23, d13, d03, d01, d02, d12);
    let e = |t: f64| C64::from_polar(1.0, t);
    let (a, b, c, d, e_, f) = (e(aa), e(bb), e(cc), e(dd), e(ee), e(ff));
    let u = |z: C64| -> C64 {
        (li2(z) + li2(a * b * d * e_ * z) + li2(a * c * d * f * z) + li2(b * c * e_ * f * z)
            - li2(-a * b * c * z)
            - li2(-a * e_ * f * z)
            - li2(-b * d * f * z)
            - li2(-c * d * e_ * z))
            * 0.5
    };
    let s = |t: f64| t.sin();
    let num = -2.0 * (s(aa) * s(dd) + s(bb) * s(ee) + s(cc) * s(ff));
    let root = C64::new(det, 0.0).sqrt() * 2.0;
    let den = a * d + b * e_ + c * f + a * b * f + a * c * e_ + b * c * d + d * e_ * f
        + a * b * c * d * e_ * f;
    let z_minus = (C64::new(num, 0.0) - root) / den;
    let z_plus = (C64::new(num, 0.0) + root) / den;
    let v = 0.5 * (u(z_minus) - u(z_plus)).im;
    Ok(v.abs())
}

/// Birectangular orthoscheme with essential angles `a1`, `a2`, `a3`
/// (Lobachevsky's formula).
pub fn orthoscheme_volume(a1: f64, a2: f64, a3: f64) -> Result<f64, GeometryError> {
    let c2 = a2.cos();
    let under = c2 * c2 - (a1.sin() * a3.sin()).powi(2);
    if !(under > 0.0) {
        return Err(GeometryError::InvalidTetrahedron(
            "orthoscheme angles are not hyperbolic".into(),
        ));
    }
    let delta = (under.sqrt() / (a1.cos() * a3.cos())).atan();
    let l = lobachevsky;
    Ok(0.25
        * (l(a1 + delta) - l(a1 - delta) + l(a3 + delta) - l(a3 - delta)
            - l(FRAC_PI_2 - a2 + delta)
            + l(FRAC_PI_2 - a2 - delta)
            + 2.0 * l(FRAC_PI_2 - delta)))
}

/// Outward unit normals of the faces of a tetrahedron, `m[i]` for the face
/// opposite vertex `i`.
pub fn face_normals(p: &[Vec4; 4]) -> Result<[Vec4; 4], GeometryError> {
    let mut m = [Vec4::zeros(); 4];
    for i in 0..4 {
        let others: Vec<&Vec4> = (0..4).filter(|&j| j != i).map(|j| &p[j]).collect();
        let n = spacelike_complement(others[0], others[1], others[2])
            .ok_or(GeometryError::Degenerate("flat tetrahedron"))?;
        let s = inner(&p[i], &n);
        if s == 0.0 {
            return Err(GeometryError::Degenerate("flat tetrahedron"));
        }
        m[i] = if s < 0.0 { n } else { -n };
    }
    Ok(m)
}

/// Interior dihedral angles in [`EDGE_ORDER`].
pub fn dihedral_angles(p: &[Vec4; 4]) -> Result<[f64; 6], GeometryError> {
    let m = face_normals(p)?;
    let mut out = [0.0; 6];
    for (idx, &(a, b)) in EDGE_ORDER.iter().enumerate() {
        let (i, j) = other_two(a, b);
        out[idx] = (-inner(&m[i], &m[j])).clamp(-1.0, 1.0).acos();
    }
    Ok(out)
}

/// Volume of the tetrahedron spanned by four points of the hyperboloid.
pub fn tetrahedron_volume_from_points(p: &[Vec4; 4]) -> Result<f64, GeometryError> {
    tetrahedron_volume(&dihedral_angles(p)?)
}

/// Volume of an orthoscheme `p0 p1 p2 p3` (p0p1 ⟂ p1p2 ⟂ p2p3) from its
/// points, via its essential angles at p2p3, p0p3 and p0p1.
pub fn orthoscheme_volume_from_points(p: &[Vec4; 4]) -> Result<f64, GeometryError> {
    let a = dihedral_angles(p)?;
    orthoscheme_volume(a[5], a[2], a[0])
}
