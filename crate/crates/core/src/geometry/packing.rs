//! Starting normals from a circle packing of the dual triangulation.
//!
//! Faces of the polyhedron are the vertices of the dual triangulation. A
//! Euclidean packing is computed with the three faces at one vertex pinned
//! as equal mutually tangent circles, the remaining radii found by the
//! Collins–Stephenson iteration, and the circles laid out triangle by
//! triangle. After inverse stereographic projection each circle bounds a
//! spherical cap, which is widened so that tangent caps become roughly
//! orthogonal.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::{Vector2, Vector3};

use crate::polyhedron::{CombinatorialPolyhedron, FaceId, VertexId};

use super::minkowski::Vec4;
use super::GeometryError;

const MAX_SWEEPS: usize = 20_000;

/// Angle at a circle of radius `r` in the triangle of centers formed with
/// tangent neighbors of radii `a` and `b`.
fn corner(r: f64, a: f64, b: f64) -> f64 {
    let (x, y, z) = (r + a, r + b, a + b);
    ((x * x + y * y - z * z) / (2.0 * x * y)).clamp(-1.0, 1.0).acos()
}

/// Radii with angle sum 2π at every face not incident to `start`.
fn radii(p: &CombinatorialPolyhedron, start: VertexId) -> Vec<f64> {
    let nf = p.num_faces();
    let outer = p.faces_at(start);
    let triangles: Vec<[FaceId; 3]> = (0..p.num_vertices()).map(|v| p.faces_at(v)).collect();
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (t, tri) in triangles.iter().enumerate() {
        if t == start {
            continue;
        }
        for &f in tri {
            around[f].push(t);
        }
    }
    let mut r = vec![1.0; nf];
    for _ in 0..MAX_SWEEPS {
        let mut worst: f64 = 0.0;
        for f in 0..nf {
            if outer.contains(&f) {
                continue;
            }
            let k = around[f].len() as f64;
            let sum: f64 = around[f]
                .iter()
                .map(|&t| {
                    let [a, b] = others(&triangles[t], f);
                    corner(r[f], r[a], r[b])
                })
                .sum();
            worst = worst.max((sum - 2.0 * PI).abs());
            // Uniform-neighbor model: the radius a flower of k equal
            // neighbors would need to reach 2π.
            let beta = (sum / (2.0 * k)).sin();
            let delta = (PI / k).sin();
            let neighbor = r[f] * beta / (1.0 - beta);
            r[f] = neighbor * (1.0 - delta) / delta;
        }
        if worst < 1e-11 {
            break;
        }
    }
    r
}

fn others(tri: &[FaceId; 3], f: FaceId) -> [FaceId; 2] {
    let i = tri.iter().position(|&g| g == f).expect("face in triangle");
    [tri[(i + 1) % 3], tri[(i + 2) % 3]]
}

/// Circle centers, placing each triangle's corners counterclockwise.
fn layout(p: &CombinatorialPolyhedron, start: VertexId, r: &[f64]) -> Option<Vec<Vector2<f64>>> {
    let nf = p.num_faces();
    let nv = p.num_vertices();
    let triangles: Vec<[FaceId; 3]> = (0..nv).map(|v| p.faces_at(v)).collect();
    let mut center: Vec<Option<Vector2<f64>>> = vec![None; nf];
    let seed = (start + 1) % nv;
    let [a, b, _] = triangles[seed];
    center[a] = Some(Vector2::zeros());
    center[b] = Some(Vector2::new(r[a] + r[b], 0.0));
    let mut done = vec![false; nv];
    done[start] = true;
    let mut queue = VecDeque::from([seed]);
    let mut queued = vec![false; nv];
    queued[seed] = true;
    while let Some(t) = queue.pop_front() {
        let tri = triangles[t];
        // Rotate so the first two corners are placed.
        let Some(i) = (0..3).find(|&i| center[tri[i]].is_some() && center[tri[(i + 1) % 3]].is_some()) else {
            queue.push_back(t);
            continue;
        };
        let (x, y, z) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
        if center[z].is_none() {
            let (cx, cy) = (center[x]?, center[y]?);
            let angle = corner(r[x], r[y], r[z]);
            let dir = (cy - cx).normalize();
            let rot = Vector2::new(
                dir.x * angle.cos() - dir.y * angle.sin(),
                dir.x * angle.sin() + dir.y * angle.cos(),
            );
            center[z] = Some(cx + rot * (r[x] + r[z]));
        }
        done[t] = true;
        // Triangles sharing a side with t are the vertices adjacent to it.
        for v in p.rotation(t) {
            if !done[v] && !queued[v] {
                queued[v] = true;
                queue.push_back(v);
            }
        }
    }
    center.into_iter().collect()
}

/// Inverse stereographic projection from the north pole.
fn to_sphere(x: Vector2<f64>) -> Vector3<f64> {
    let d = 1.0 + x.norm_squared();
    Vector3::new(2.0 * x.x / d, 2.0 * x.y / d, (x.norm_squared() - 1.0) / d)
}

/// Unit normal `n = (u / sin ρ, cot ρ)` of the cap with center `u` and
/// angular radius `ρ`.
fn cap_normal(u: Vector3<f64>, rho: f64) -> Vec4 {
    let s = rho.sin();
    Vec4::new(u.x / s, u.y / s, u.z / s, rho.cos() / s)
}

fn cap_of(n: &Vec4) -> (Vector3<f64>, f64) {
    let m = Vector3::new(n[0], n[1], n[2]);
    let len = m.norm();
    (m / len, (n[3] / len).clamp(-1.0, 1.0).acos())
}

/// Lorentz boosts moving the cap centers' mean toward the origin.
fn center_caps(normals: &mut [Vec4]) {
    for _ in 0..200 {
        let c: Vector3<f64> = normals.iter().map(|n| cap_of(n).0).sum::<Vector3<f64>>() / normals.len() as f64;
        let norm = c.norm();
        if norm < 1e-9 {
            return;
        }
        let dir = c / norm;
        let rapidity = 0.5 * norm.min(0.9).atanh();
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        for n in normals.iter_mut() {
            let m = Vector3::new(n[0], n[1], n[2]);
            let along = m.dot(&dir);
            let t = n[3];
            let m = m + dir * ((ch - 1.0) * along - sh * t);
            let t = ch * t - sh * along;
            *n = Vec4::new(m.x, m.y, m.z, t);
        }
    }
}

/// Starting face normals from the packing, with the faces at `start`
/// outermost in the plane.
pub(super) fn packing_normals(p: &CombinatorialPolyhedron, start: VertexId) -> Result<Vec<Vec4>, GeometryError> {
    let r = radii(p, start);
    let centers = layout(p, start, &r).ok_or(GeometryError::Degenerate("circle packing layout"))?;
    let mut normals = Vec::with_capacity(p.num_faces());
    for (c, &radius) in centers.iter().zip(&r) {
        // Three points of the circle determine the cap.
        let pts: Vec<Vector3<f64>> = (0..3)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / 3.0;
                to_sphere(c + Vector2::new(a.cos(), a.sin()) * radius)
            })
            .collect();
        let mut u = (pts[1] - pts[0]).cross(&(pts[2] - pts[0])).normalize();
        if u.dot(&to_sphere(*c)) < u.dot(&pts[0]) {
            u = -u;
        }
        let rho = u.dot(&pts[0]).clamp(-1.0, 1.0).acos();
        if !(rho > 0.0 && rho < PI) {
            return Err(GeometryError::Degenerate("circle packing cap"));
        }
        normals.push(cap_normal(u, rho));
    }
    center_caps(&mut normals);
    // Tangent caps of equal small radius become orthogonal when the radii
    // grow by √2.
    for n in normals.iter_mut() {
        let (u, rho) = cap_of(n);
        let widened = (2f64.sqrt() * rho.tan()).atan();
        let widened = if rho < PI / 2.0 { widened } else { rho };
        *n = cap_normal(u, widened);
    }
    Ok(normals)
}
