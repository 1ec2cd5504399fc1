//! Minkowski space R^{3,1} with the time coordinate last.

use nalgebra::Vector4;

pub type Vec4 = Vector4<f64>;

/// ⟨x, y⟩ = x0 y0 + x1 y1 + x2 y2 − x3 y3.
#[inline]
pub fn inner(x: &Vec4, y: &Vec4) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]
}

/// The vector with its time coordinate negated, so that
/// `inner(x, y) == flip_time(x).dot(y)`.
#[inline]
pub fn flip_time(x: &Vec4) -> Vec4 {
    Vec4::new(x[0], x[1], x[2], -x[3])
}

/// Euclidean generalized cross product: orthogonal to `a`, `b`, `c` in the
/// ordinary dot product.
pub fn cross4(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let det3 = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    Vec4::new(det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2))
}

/// The future-pointing unit timelike vector Lorentz-orthogonal to three
/// spacelike vectors, if their common complement is timelike.
pub fn timelike_complement(a: &Vec4, b: &Vec4, c: &Vec4) -> Option<Vec4> {
    let v = flip_time(&cross4(a, b, c));
    let q = inner(&v, &v);
    if !(q < 0.0) {
        return None;
    }
    let v = v / (-q).sqrt();
    Some(if v[3] < 0.0 { -v } else { v })
}

/// The unit spacelike vector Lorentz-orthogonal to three points.
pub fn spacelike_complement(a: &Vec4, b: &Vec4, c: &Vec4) -> Option<Vec4> {
    let v = flip_time(&cross4(a, b, c));
    let q = inner(&v, &v);
    if !(q > 0.0) {
        return None;
    }
    Some(v / q.sqrt())
}

/// Hyperbolic distance between two points of the hyperboloid.
pub fn distance(x: &Vec4, y: &Vec4) -> f64 {
    (-inner(x, y)).max(1.0).acosh()
}

/// Projects a timelike vector onto the upper sheet ⟨x, x⟩ = −1.
pub fn normalize_point(x: &Vec4) -> Option<Vec4> {
    let q = inner(x, x);
    if !(q < 0.0) {
        return None;
    }
    let v = x / (-q).sqrt();
    Some(if v[3] < 0.0 { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal() {
        let a = Vec4::new(1.0, 2.0, 0.5, -1.0);
        let b = Vec4::new(0.3, -1.0, 2.0, 0.7);
        let c = Vec4::new(-0.2, 0.1, 1.5, 3.0);
        let w = cross4(&a, &b, &c);
        for x in [a, b, c] {
            assert!(w.dot(&x).abs() < 1e-12);
        }
        let v = flip_time(&w);
        for x in [a, b, c] {
            assert!(inner(&v, &x).abs() < 1e-12);
        }
    }

    #[test]
    fn axis_complement() {
        let e = |i| {
            let mut v = Vec4::zeros();
            v[i] = 1.0;
            v
        };
        let t = timelike_complement(&e(0), &e(1), &e(2)).unwrap();
        assert!((t - e(3)).norm() < 1e-15);
    }
}
