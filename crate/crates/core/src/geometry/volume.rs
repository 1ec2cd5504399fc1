use crate::polyhedron::CombinatorialPolyhedron;

use super::minkowski::{flip_time, inner, normalize_point, cross4, Vec4};
use super::realize::{realize_with, Realization, SolverOptions};
use super::tetra::{orthoscheme_volume_from_points, tetrahedron_volume_from_points};
use super::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMethod {
    /// Cone from an interior point over fan-triangulated faces, each
    /// tetrahedron by the dilogarithm formula.
    ConeTetrahedra,
}

#[derive(Debug, Clone)]
pub struct VolumeResult {
    pub volume: f64,
    pub method: VolumeMethod,
    pub tetrahedra_count: usize,
    /// Disagreement with an independent orthoscheme decomposition.
    pub estimated_error: f64,
    pub realization: Realization,
}

pub fn volume(p: &CombinatorialPolyhedron) -> Result<VolumeResult, GeometryError> {
    volume_with(p, &SolverOptions::default())
}

pub fn volume_with(p: &CombinatorialPolyhedron, opts: &SolverOptions) -> Result<VolumeResult, GeometryError> {
    let r = realize_with(p, opts)?;
    let o = vertex_centroid(&r)?;
    let (v, count) = cone_volume(p, &r, &o)?;
    let check = orthoscheme_volume(p, &r, &o)?;
    Ok(VolumeResult {
        volume: v,
        method: VolumeMethod::ConeTetrahedra,
        tetrahedra_count: count,
        estimated_error: (v - check).abs(),
        realization: r,
    })
}

/// The normalized mean of the vertices.
pub fn vertex_centroid(r: &Realization) -> Result<Vec4, GeometryError> {
    let s: Vec4 = r.vertices.iter().sum();
    normalize_point(&s).ok_or(GeometryError::Degenerate("vertex centroid"))
}

/// Sum of the tetrahedra (o, c_f, v_i, v_{i+1}) over faces f and their
/// consecutive vertices, where c_f is the normalized face-vertex mean. `o`
/// must be interior.
pub fn cone_volume(
    p: &CombinatorialPolyhedron,
    r: &Realization,
    o: &Vec4,
) -> Result<(f64, usize), GeometryError> {
    let mut total = 0.0;
    let mut count = 0;
    for f in 0..p.num_faces() {
        let vs = p.face_vertices(f);
        let s: Vec4 = vs.iter().map(|&v| r.vertices[v]).sum();
        let c = normalize_point(&s).ok_or(GeometryError::Degenerate("face centroid"))?;
        for i in 0..vs.len() {
            let a = r.vertices[vs[i]];
            let b = r.vertices[vs[(i + 1) % vs.len()]];
            let v = tetrahedron_volume_from_points(&[*o, c, a, b])?;
            if !(v > 0.0) {
                return Err(GeometryError::NegativeVolume(v));
            }
            total += v;
            count += 1;
        }
    }
    Ok((total, count))
}

/// Volume as a signed sum of orthoschemes (o, foot on face, foot on edge,
/// edge endpoint). `o` must be interior; feet may fall outside.
pub fn orthoscheme_volume(
    p: &CombinatorialPolyhedron,
    r: &Realization,
    o: &Vec4,
) -> Result<f64, GeometryError> {
    let eps = 1e-13;
    let mut total = 0.0;
    for f in 0..p.num_faces() {
        let n = r.normals[f];
        let foot = normalize_point(&(o - n * inner(o, &n))).ok_or(GeometryError::Degenerate("face foot"))?;
        for &d in p.face_darts(f) {
            let g = p.face_of(p.twin(d));
            let m = r.normals[g];
            let side = -inner(&foot, &m);
            if side.abs() < eps {
                continue;
            }
            let q = normalize_point(&(foot - m * inner(&foot, &m)))
                .ok_or(GeometryError::Degenerate("edge foot"))?;
            let t = flip_time(&cross4(&q, &n, &m));
            let t = t / inner(&t, &t).sqrt();
            let ends = [r.vertices[p.origin(d)], r.vertices[p.target(d)]];
            let s: Vec<f64> = ends.iter().map(|x| inner(x, &t)).collect();
            let (lo, hi) = if s[0] < s[1] { (0, 1) } else { (1, 0) };
            let mut edge_part = 0.0;
            for (idx, sign) in [(hi, 1.0), (lo, -1.0)] {
                if s[idx].abs() < eps {
                    continue;
                }
                let v = orthoscheme_volume_from_points(&[*o, foot, q, ends[idx]])?;
                edge_part += sign * s[idx].signum() * v;
            }
            total += side.signum() * edge_part;
        }
    }
    Ok(total)
}
