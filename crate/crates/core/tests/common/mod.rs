//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rapoly::surgery::{compose, edge_additions, lobell, CompositionSite};
use rapoly::{CombinatorialPolyhedron, Edge};

pub fn prism(n: usize) -> CombinatorialPolyhedron {
    let mut faces = vec![(0..n).collect::<Vec<_>>(), (0..n).rev().map(|i| i + n).collect()];
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(vec![j, i, i + n, j + n]);
    }
    CombinatorialPolyhedron::from_face_cycles(2 * n, &faces).unwrap()
}

pub fn tetrahedron() -> CombinatorialPolyhedron {
    CombinatorialPolyhedron::from_face_cycles(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]]).unwrap()
}

/// The unique edge-child of L6.
pub fn a3() -> CombinatorialPolyhedron {
    edge_additions(&lobell(6).unwrap()).swap_remove(0).0
}

pub fn double_l5() -> CombinatorialPolyhedron {
    let l = lobell(5).unwrap();
    compose(
        &l,
        &l,
        &CompositionSite {
            face_p: 0,
            face_q: 0,
            offset: 0,
            flip: false,
        },
    )
    .unwrap()
}

/// Valid polyhedra with at most 16 faces.
pub fn small_valid() -> Vec<(&'static str, CombinatorialPolyhedron)> {
    vec![
        ("L5", lobell(5).unwrap()),
        ("L6", lobell(6).unwrap()),
        ("L7", lobell(7).unwrap()),
        ("A3", a3()),
    ]
}

/// Trivalent maps with at most 24 vertices, valid or not.
pub fn small_maps() -> Vec<(String, CombinatorialPolyhedron)> {
    let mut out = vec![("K4".to_string(), tetrahedron())];
    for n in 3..=12 {
        out.push((format!("prism{n}"), prism(n)));
    }
    out.push(("L5".into(), lobell(5).unwrap()));
    out.push(("L6".into(), lobell(6).unwrap()));
    for n in [5, 6, 7] {
        for (i, (c, _)) in edge_additions(&prism(n)).into_iter().enumerate() {
            out.push((format!("prism{n}+{i}"), c));
        }
    }
    out.retain(|(_, p)| p.num_vertices() <= 24);
    out
}

fn neighbors(p: &CombinatorialPolyhedron) -> Vec<Vec<usize>> {
    (0..p.num_vertices()).map(|v| p.rotation(v).to_vec()).collect()
}

/// Number of connected components after removing `cut`.
fn components_without(p: &CombinatorialPolyhedron, cut: &[Edge]) -> (usize, Vec<usize>) {
    let n = p.num_vertices();
    let adj = neighbors(p);
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX && !cut.contains(&Edge::new(v, w)) {
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (count, comp)
}

/// Prismatic k-circuits as sets of k pairwise vertex-disjoint edges forming
/// a minimal cut: removing them leaves exactly two pieces and each edge
/// joins the two.
pub fn brute_force_circuits(p: &CombinatorialPolyhedron, k: usize) -> BTreeSet<Vec<Edge>> {
    let edges = p.edges();
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    let mut used = vec![false; p.num_vertices()];
    fn rec(
        p: &CombinatorialPolyhedron,
        edges: &[Edge],
        start: usize,
        k: usize,
        chosen: &mut Vec<Edge>,
        used: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<Edge>>,
    ) {
        if chosen.len() == k {
            let (count, comp) = components_without(p, chosen);
            if count == 2 && chosen.iter().all(|e| comp[e.0] != comp[e.1]) {
                let mut key = chosen.clone();
                key.sort();
                out.insert(key);
            }
            return;
        }
        for i in start..edges.len() {
            let e = edges[i];
            if used[e.0] || used[e.1] {
                continue;
            }
            used[e.0] = true;
            used[e.1] = true;
            chosen.push(e);
            rec(p, edges, i + 1, k, chosen, used, out);
            chosen.pop();
            used[e.0] = false;
            used[e.1] = false;
        }
    }
    rec(p, &edges, 0, k, &mut chosen, &mut used, &mut out);
    out
}

/// Graph isomorphism by backtracking over vertex images in BFS order.
pub fn brute_force_isomorphic(p: &CombinatorialPolyhedron, q: &CombinatorialPolyhedron) -> bool {
    let n = p.num_vertices();
    if n != q.num_vertices() {
        return false;
    }
    let (ap, aq) = (neighbors(p), neighbors(q));
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        for &w in &ap[order[i]] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    if order.len() != n {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    fn rec(
        depth: usize,
        order: &[usize],
        ap: &[Vec<usize>],
        aq: &[Vec<usize>],
        map: &mut [usize],
        taken: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for c in 0..aq.len() {
            if taken[c] {
                continue;
            }
            let consistent = ap[v].iter().all(|&w| map[w] == usize::MAX || aq[c].contains(&map[w]));
            if !consistent {
                continue;
            }
            map[v] = c;
            taken[c] = true;
            if rec(depth + 1, order, ap, aq, map, taken) {
                return true;
            }
            map[v] = usize::MAX;
            taken[c] = false;
        }
        false
    }
    rec(0, &order, &ap, &aq, &mut map, &mut taken)
}

/// Lobachevsky function by quadrature for 0 < θ ≤ π/2, splitting off the
/// logarithmic singularity at zero.
pub fn lobachevsky_quadrature(theta: f64) -> f64 {
    assert!(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2 + 1e-12);
    // log(2 sin t) = log 2 + log t + log(sin t / t); the middle term
    // integrates to θ log θ − θ.
    let smooth = |t: f64| if t == 0.0 { 0.0 } else { (t.sin() / t).ln() };
    let n = 4000;
    let h = theta / n as f64;
    let mut s = smooth(0.0) + smooth(theta);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * smooth(i as f64 * h);
    }
    let integral = std::f64::consts::LN_2 * theta + (theta * theta.ln() - theta) + s * h / 3.0;
    -integral
}

/// Lobachevsky function on all of ℝ via oddness and period π, using only
/// the quadrature on (0, π/2].
pub fn lobachevsky_oracle(theta: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let t = theta.rem_euclid(PI);
    if t == 0.0 {
        0.0
    } else if t <= FRAC_PI_2 {
        lobachevsky_quadrature(t)
    } else {
        -lobachevsky_quadrature(PI - t)
    }
}

/// Closed-form volume of the Löbell polyhedron L_n.
pub fn lobell_volume_closed_form(n: usize) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let a = PI / n as f64;
    let theta = FRAC_PI_2 - (1.0 / (2.0 * a.cos())).acos();
    let l = lobachevsky_oracle;
    n as f64 / 2.0 * (2.0 * l(theta) + l(theta + a) + l(theta - a) + l(FRAC_PI_2 - 2.0 * theta))
}

/// Central-difference Jacobian.
pub fn finite_difference_jacobian(
    f: impl Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    h: f64,
) -> Vec<Vec<f64>> {
    let m = f(x).len();
    let mut j = vec![vec![0.0; x.len()]; m];
    let mut xp = x.to_vec();
    for c in 0..x.len() {
        xp[c] = x[c] + h;
        let fp = f(&xp);
        xp[c] = x[c] - h;
        let fm = f(&xp);
        xp[c] = x[c];
        for r in 0..m {
            j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

/// Simple deterministic permutation for relabeling tests.
pub fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (s >> 33) as usize % (i + 1);
        perm.swap(i, j);
    }
    perm
}
