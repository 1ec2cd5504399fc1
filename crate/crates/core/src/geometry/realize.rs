//! Right-angled realization: one spacelike unit normal per face, adjacent
//! normals orthogonal, polyhedron = {x : ⟨x, n_f⟩ ≤ 0 for all f}.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, Matrix4, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyhedron::{CombinatorialPolyhedron, Edge, FaceId};

use super::minkowski::{distance, flip_time, inner, normalize_point, timelike_complement, Vec4};
use super::packing;
use super::GeometryError;

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Largest accepted constraint violation.
    pub tolerance: f64,
    /// Attempts from perturbed starting points before giving up.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-10,
            restarts: 128,
            seed: 0x5eed_2011,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Realization {
    /// Indexed by face id.
    pub normals: Vec<Vec4>,
    /// Indexed by vertex id.
    pub vertices: Vec<Vec4>,
    /// Largest violation of the norm, orthogonality and incidence equations.
    pub residual: f64,
    /// Smallest distance-like margin −⟨v, n_g⟩ over vertices v and faces g
    /// not containing them.
    pub margin: f64,
    /// Attempt that succeeded, counted from zero.
    pub attempt: usize,
}

/// The equations ⟨n_f, n_f⟩ = 1 for every face (in face order) followed by
/// ⟨n_f, n_g⟩ = 0 for every edge (in `p.edges()` order). Unknowns are the
/// four coordinates of each face normal, face by face.
pub struct System {
    num_faces: usize,
    pairs: Vec<(FaceId, FaceId)>,
}

impl System {
    pub fn new(p: &CombinatorialPolyhedron) -> Self {
        let pairs = p
            .edges()
            .into_iter()
            .map(|e| {
                let [f, g] = p.edge_faces(e).expect("edge of p");
                (f, g)
            })
            .collect();
        System {
            num_faces: p.num_faces(),
            pairs,
        }
    }

    pub fn num_unknowns(&self) -> usize {
        4 * self.num_faces
    }

    pub fn num_equations(&self) -> usize {
        self.num_faces + self.pairs.len()
    }

    pub fn pairs(&self) -> &[(FaceId, FaceId)] {
        &self.pairs
    }

    pub fn residual(&self, x: &[f64]) -> DVector<f64> {
        let n = |f: usize| Vec4::new(x[4 * f], x[4 * f + 1], x[4 * f + 2], x[4 * f + 3]);
        let mut r = DVector::zeros(self.num_equations());
        for f in 0..self.num_faces {
            let v = n(f);
            r[f] = inner(&v, &v) - 1.0;
        }
        for (i, &(f, g)) in self.pairs.iter().enumerate() {
            r[self.num_faces + i] = inner(&n(f), &n(g));
        }
        r
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = |f: usize| Vec4::new(x[4 * f], x[4 * f + 1], x[4 * f + 2], x[4 * f + 3]);
        let mut j = DMatrix::zeros(self.num_equations(), self.num_unknowns());
        for f in 0..self.num_faces {
            let d = flip_time(&n(f)) * 2.0;
            for c in 0..4 {
                j[(f, 4 * f + c)] = d[c];
            }
        }
        for (i, &(f, g)) in self.pairs.iter().enumerate() {
            let row = self.num_faces + i;
            let (df, dg) = (flip_time(&n(g)), flip_time(&n(f)));
            for c in 0..4 {
                j[(row, 4 * f + c)] = df[c];
                j[(row, 4 * g + c)] = dg[c];
            }
        }
        j
    }
}

/// The square system left after pinning three faces at a vertex to the
/// coordinate axes e1, e2, e3: equations not involving a free face are
/// dropped, and unknowns are the normals of the free faces.
pub struct GaugedSystem {
    full: System,
    pinned: [FaceId; 3],
    /// Position of each face among the unknowns, `None` when pinned.
    slot: Vec<Option<usize>>,
    rows: Vec<usize>,
}

impl GaugedSystem {
    pub fn new(p: &CombinatorialPolyhedron, pinned: [FaceId; 3]) -> Self {
        let full = System::new(p);
        let mut slot = vec![None; full.num_faces];
        let mut next = 0;
        for (f, s) in slot.iter_mut().enumerate() {
            if !pinned.contains(&f) {
                *s = Some(next);
                next += 1;
            }
        }
        let mut rows: Vec<usize> = (0..full.num_faces).filter(|f| !pinned.contains(f)).collect();
        for (i, &(f, g)) in full.pairs.iter().enumerate() {
            if !(pinned.contains(&f) && pinned.contains(&g)) {
                rows.push(full.num_faces + i);
            }
        }
        GaugedSystem {
            full,
            pinned,
            slot,
            rows,
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn num_unknowns(&self) -> usize {
        4 * (self.full.num_faces - 3)
    }

    /// Full normal vector with the pinned faces on the axes.
    pub fn expand(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.full.num_unknowns()];
        for f in 0..self.full.num_faces {
            match self.slot[f] {
                Some(s) => x[4 * f..4 * f + 4].copy_from_slice(&y[4 * s..4 * s + 4]),
                None => {
                    let axis = self.pinned.iter().position(|&q| q == f).expect("pinned");
                    x[4 * f + axis] = 1.0;
                }
            }
        }
        x
    }

    pub fn restrict(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.num_unknowns()];
        for f in 0..self.full.num_faces {
            if let Some(s) = self.slot[f] {
                y[4 * s..4 * s + 4].copy_from_slice(&x[4 * f..4 * f + 4]);
            }
        }
        y
    }

    pub fn residual(&self, y: &[f64]) -> DVector<f64> {
        let r = self.full.residual(&self.expand(y));
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|&i| r[i]))
    }

    pub fn jacobian(&self, y: &[f64]) -> DMatrix<f64> {
        let j = self.full.jacobian(&self.expand(y));
        let mut out = DMatrix::zeros(self.rows.len(), self.num_unknowns());
        for (ri, &row) in self.rows.iter().enumerate() {
            for f in 0..self.full.num_faces {
                if let Some(s) = self.slot[f] {
                    for c in 0..4 {
                        out[(ri, 4 * s + c)] = j[(row, 4 * f + c)];
                    }
                }
            }
        }
        out
    }
}

pub fn realize(p: &CombinatorialPolyhedron) -> Result<Realization, GeometryError> {
    realize_with(p, &SolverOptions::default())
}

pub fn realize_with(p: &CombinatorialPolyhedron, opts: &SolverOptions) -> Result<Realization, GeometryError> {
    if p.faces().iter().any(|f| f.len() < 5) {
        return Err(GeometryError::NotRealizable("face with fewer than five sides"));
    }
    let system = System::new(p);
    let mut best = f64::INFINITY;
    let nv = p.num_vertices();
    for attempt in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        // Every third attempt, the first included, starts from a circle packing;
        // the others from a Tutte layout, perturbed on odd attempts.
        let x0 = if attempt % 3 == 0 {
            let start = (attempt / 3 * 5) % nv;
            match packing::packing_normals(p, start) {
                Ok(normals) => normals.iter().flat_map(|n| [n[0], n[1], n[2], n[3]]).collect(),
                Err(_) => continue,
            }
        } else {
            let start = if attempt % 2 == 0 { (attempt / 2 * 7) % nv } else { 0 };
            let noise = if attempt % 2 == 0 { 0.0 } else { 0.05 * (1.0 + attempt as f64 / 8.0) };
            let base = initial_directions(p, start)?;
            let dirs: Vec<Vector3<f64>> = base
                .iter()
                .map(|u| {
                    let d = Vector3::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    );
                    (u + d * noise).normalize()
                })
                .collect();
            lift(p, &dirs)
        };
        match solve_from(p, &system, x0, opts) {
            Ok(mut r) => {
                r.attempt = attempt;
                return Ok(r);
            }
            Err(res) => best = best.min(res),
        }
    }
    Err(GeometryError::NoConvergence {
        attempts: opts.restarts.max(1),
        best_residual: best,
    })
}

/// Attempts one solve. On failure returns the best residual reached.
fn solve_from(
    p: &CombinatorialPolyhedron,
    system: &System,
    x0: Vec<f64>,
    opts: &SolverOptions,
) -> Result<Realization, f64> {
    let mut x = levenberg_marquardt(system, x0, 1e-7, 400);
    let r = system.residual(&x).amax();
    if !(r < 1e-4) {
        return Err(r);
    }
    fix_signs(p, &mut x);
    let pinned = p.faces_at(0);
    let Some(x) = gauge_fix(p, &x, pinned) else {
        return Err(r);
    };
    let gauged = GaugedSystem::new(p, pinned);
    let y = newton(&gauged, gauged.restrict(&x), opts.tolerance * 1e-3, 50);
    let x = recenter(p, &gauged.expand(&y)).ok_or(r)?;
    let x = min_norm_newton(system, x, opts.tolerance * 1e-3, 8);
    let residual = system.residual(&x).amax();
    if !(residual <= opts.tolerance) {
        return Err(residual);
    }
    let normals: Vec<Vec4> = (0..p.num_faces())
        .map(|f| Vec4::new(x[4 * f], x[4 * f + 1], x[4 * f + 2], x[4 * f + 3]))
        .collect();
    let vertices = vertices_from_normals(p, &normals).map_err(|_| residual)?;
    let mut incidence: f64 = 0.0;
    let mut margin = f64::INFINITY;
    for (v, pt) in vertices.iter().enumerate() {
        let at = p.faces_at(v);
        for (f, n) in normals.iter().enumerate() {
            let s = inner(pt, n);
            if at.contains(&f) {
                incidence = incidence.max(s.abs());
            } else {
                margin = margin.min(-s);
            }
        }
    }
    let residual = residual.max(incidence);
    if !(margin > 0.0) || !(residual <= opts.tolerance) {
        return Err(residual);
    }
    Ok(Realization {
        normals,
        vertices,
        residual,
        margin,
        attempt: 0,
    })
}

/// Face directions on the unit sphere: a Tutte embedding of the dual graph
/// with the faces at `start` outermost, mapped to the sphere and spread out
/// by repeated centering.
fn initial_directions(p: &CombinatorialPolyhedron, start: usize) -> Result<Vec<Vector3<f64>>, GeometryError> {
    let nf = p.num_faces();
    let dual = p.dual_adjacency();
    let outer = p.faces_at(start);
    let mut pos = vec![[0.0f64; 2]; nf];
    let radius = 1.0;
    for (i, &f) in outer.iter().enumerate() {
        let a = std::f64::consts::TAU * i as f64 / 3.0;
        pos[f] = [radius * a.cos(), radius * a.sin()];
    }
    let free: Vec<FaceId> = (0..nf).filter(|f| !outer.contains(f)).collect();
    let mut index = vec![usize::MAX; nf];
    for (i, &f) in free.iter().enumerate() {
        index[f] = i;
    }
    let m = free.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut b = DMatrix::<f64>::zeros(m, 2);
    for (i, &f) in free.iter().enumerate() {
        a[(i, i)] = dual[f].len() as f64;
        for &(g, _) in &dual[f] {
            if index[g] != usize::MAX {
                a[(i, index[g])] -= 1.0;
            } else {
                b[(i, 0)] += pos[g][0];
                b[(i, 1)] += pos[g][1];
            }
        }
    }
    let sol = a.lu().solve(&b).ok_or(GeometryError::Degenerate("singular dual Laplacian"))?;
    for (i, &f) in free.iter().enumerate() {
        pos[f] = [sol[(i, 0)], sol[(i, 1)]];
    }
    // Inverse stereographic projection from the north pole, with the outer
    // triangle sent near the pole.
    let scale = 0.4;
    let mut u: Vec<Vector3<f64>> = pos
        .iter()
        .map(|&[x, y]| {
            let (x, y) = (x / scale, y / scale);
            let d = 1.0 + x * x + y * y;
            Vector3::new(2.0 * x / d, 2.0 * y / d, (x * x + y * y - 1.0) / d)
        })
        .collect();
    // Alternate centering with a spherical averaging step.
    for _ in 0..200 {
        center(&mut u);
        let avg: Vec<Vector3<f64>> = (0..nf)
            .map(|f| {
                let s: Vector3<f64> = dual[f].iter().map(|&(g, _)| u[g]).sum();
                (u[f] * 0.5 + s.normalize() * 0.5).normalize()
            })
            .collect();
        u = avg;
    }
    center(&mut u);
    Ok(u)
}

/// Applies conformal maps of the sphere until the points have centroid near
/// the origin.
fn center(u: &mut [Vector3<f64>]) {
    for _ in 0..100 {
        let c: Vector3<f64> = u.iter().sum::<Vector3<f64>>() / u.len() as f64;
        let norm = c.norm();
        if norm < 1e-9 {
            return;
        }
        let dir = c / norm;
        let rapidity = 0.5 * norm.min(0.9).atanh();
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        for x in u.iter_mut() {
            // Boost the null vector (x, 1) against dir and renormalize.
            let along = x.dot(&dir);
            let t = ch - sh * along;
            let new_along = ch * along - sh;
            let perp = *x - dir * along;
            *x = (perp + dir * new_along) / t;
        }
    }
}

/// Normals from directions with a common cap size chosen so that adjacent
/// caps meet at right angles on average.
fn lift(p: &CombinatorialPolyhedron, dirs: &[Vector3<f64>]) -> Vec<f64> {
    let mut total = 0.0;
    let mut count = 0.0;
    for e in p.edges() {
        let [f, g] = p.edge_faces(e).expect("edge of p");
        total += dirs[f].dot(&dirs[g]).max(0.0);
        count += 1.0;
    }
    let t2 = (total / count).clamp(0.05, 0.95);
    let t = t2.sqrt();
    let s = 1.0 / (1.0 - t2).sqrt();
    let mut x = Vec::with_capacity(4 * dirs.len());
    for u in dirs {
        x.extend_from_slice(&[u[0] * s, u[1] * s, u[2] * s, t * s]);
    }
    x
}

fn levenberg_marquardt(system: &System, mut x: Vec<f64>, tol: f64, max_iter: usize) -> Vec<f64> {
    let mut r = system.residual(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..max_iter {
        if r.amax() < tol {
            break;
        }
        let j = system.jacobian(&x);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let mut improved = false;
        for _ in 0..20 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = system.residual(&trial);
            let ct = rt.norm_squared();
            if ct < cost {
                x = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Makes most vertex/face pairs satisfy ⟨v, n⟩ ≤ 0, then flips any single
/// face whose normal points the wrong way.
fn fix_signs(p: &CombinatorialPolyhedron, x: &mut [f64]) {
    let get = |x: &[f64], f: usize| Vec4::new(x[4 * f], x[4 * f + 1], x[4 * f + 2], x[4 * f + 3]);
    let normals: Vec<Vec4> = (0..p.num_faces()).map(|f| get(x, f)).collect();
    let Ok(vertices) = vertices_from_normals(p, &normals) else {
        return;
    };
    let mut positive = 0usize;
    let mut negative = 0usize;
    let mut per_face = vec![(0usize, 0usize); p.num_faces()];
    for (v, pt) in vertices.iter().enumerate() {
        let at = p.faces_at(v);
        for (f, n) in normals.iter().enumerate() {
            if at.contains(&f) {
                continue;
            }
            if inner(pt, n) > 0.0 {
                positive += 1;
                per_face[f].0 += 1;
            } else {
                negative += 1;
                per_face[f].1 += 1;
            }
        }
    }
    let global = if positive > negative { -1.0 } else { 1.0 };
    for (f, &(pos, neg)) in per_face.iter().enumerate() {
        let (pos, neg) = if global < 0.0 { (neg, pos) } else { (pos, neg) };
        let s = if pos > 0 && neg == 0 { -global } else { global };
        for c in 0..4 {
            x[4 * f + c] *= s;
        }
    }
}

/// Moves the realization by the Lorentz map sending the three pinned
/// normals to e1, e2, e3 and their common vertex to e4.
fn gauge_fix(p: &CombinatorialPolyhedron, x: &[f64], pinned: [FaceId; 3]) -> Option<Vec<f64>> {
    let get = |f: usize| Vec4::new(x[4 * f], x[4 * f + 1], x[4 * f + 2], x[4 * f + 3]);
    let (a, b, c) = (get(pinned[0]), get(pinned[1]), get(pinned[2]));
    let v = timelike_complement(&a, &b, &c)?;
    let m = Matrix4::from_columns(&[a, b, c, v]);
    let l = m.try_inverse()?;
    let mut out = vec![0.0; x.len()];
    for f in 0..p.num_faces() {
        let y = l * get(f);
        out[4 * f..4 * f + 4].copy_from_slice(y.as_slice());
    }
    Some(out)
}

/// Moves the vertex centroid to e4, keeping coordinates small. The pinned
/// gauge puts one vertex at e4 instead, which inflates far coordinates.
fn recenter(p: &CombinatorialPolyhedron, x: &[f64]) -> Option<Vec<f64>> {
    let get = |f: usize| Vec4::new(x[4 * f], x[4 * f + 1], x[4 * f + 2], x[4 * f + 3]);
    let normals: Vec<Vec4> = (0..p.num_faces()).map(get).collect();
    let vertices = vertices_from_normals(p, &normals).ok()?;
    let c = normalize_point(&vertices.iter().sum())?;
    let e = Vec4::new(0.0, 0.0, 0.0, 1.0);
    let s = c - e;
    let ss = inner(&s, &s);
    let mut out = x.to_vec();
    if ss <= 1e-24 {
        return Some(out);
    }
    for (f, n) in normals.iter().enumerate() {
        // Reflect through s, then through e1 to restore orientation.
        let mut y = n - s * (2.0 * inner(n, &s) / ss);
        y[0] = -y[0];
        out[4 * f..4 * f + 4].copy_from_slice(y.as_slice());
    }
    Some(out)
}

/// Newton's method on the underdetermined full system, taking the
/// minimum-norm step each time.
fn min_norm_newton(system: &System, mut x: Vec<f64>, tol: f64, max_iter: usize) -> Vec<f64> {
    let mut r = system.residual(&x);
    for _ in 0..max_iter {
        let before = r.amax();
        if before < tol {
            break;
        }
        let j = system.jacobian(&x);
        let jjt = &j * j.transpose();
        let Some(z) = jjt.cholesky().map(|c| c.solve(&(-&r))) else {
            break;
        };
        let step = j.transpose() * z;
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        let rt = system.residual(&trial);
        if !(rt.amax() < before) {
            break;
        }
        x = trial;
        r = rt;
    }
    x
}

fn newton(system: &GaugedSystem, mut y: Vec<f64>, tol: f64, max_iter: usize) -> Vec<f64> {
    let mut r = system.residual(&y);
    for _ in 0..max_iter {
        let before = r.amax();
        if before < tol {
            break;
        }
        let j = system.jacobian(&y);
        let Some(step) = j.lu().solve(&(-&r)) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-4 {
            let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(a, b)| a + t * b).collect();
            let rt = system.residual(&trial);
            if rt.amax() < before {
                y = trial;
                r = rt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    y
}

/// Each vertex as the unit timelike vector orthogonal to its three faces.
pub fn vertices_from_normals(
    p: &CombinatorialPolyhedron,
    normals: &[Vec4],
) -> Result<Vec<Vec4>, GeometryError> {
    (0..p.num_vertices())
        .map(|v| {
            let [a, b, c] = p.faces_at(v);
            timelike_complement(&normals[a], &normals[b], &normals[c])
                .ok_or(GeometryError::Degenerate("three faces at a vertex do not meet"))
        })
        .collect()
}

/// Vertex table of a realization.
pub fn vertices_of(p: &CombinatorialPolyhedron, r: &Realization) -> Result<Vec<Vec4>, GeometryError> {
    vertices_from_normals(p, &r.normals)
}

pub fn edge_length(r: &Realization, e: Edge) -> f64 {
    distance(&r.vertices[e.0], &r.vertices[e.1])
}

/// Text dump: one `face <id> <x> <y> <z> <t>` line per normal, then one
/// `vertex <id> <x> <y> <z> <t>` line per vertex, 17 significant digits.
pub fn dump(r: &Realization) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# residual {:.16e} margin {:.16e}", r.residual, r.margin);
    for (tag, rows) in [("face", &r.normals), ("vertex", &r.vertices)] {
        for (i, v) in rows.iter().enumerate() {
            let _ = writeln!(
                s,
                "{tag} {i} {:.16e} {:.16e} {:.16e} {:.16e}",
                v[0], v[1], v[2], v[3]
            );
        }
    }
    s
}
