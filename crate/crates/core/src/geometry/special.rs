//! Dilogarithm, Clausen and Lobachevsky functions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::Complex;

type C64 = Complex<f64>;

const TERMS: usize = 40;

/// ζ(2k) for k = 1..=TERMS.
fn zeta_even() -> &'static [f64; TERMS + 1] {
    static TABLE: OnceLock<[f64; TERMS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut z = [0.0; TERMS + 1];
        z[1] = PI * PI / 6.0;
        for (k, zk) in z.iter_mut().enumerate().skip(2) {
            let s = 2 * k as i32;
            let m = 200usize;
            let mut sum = 0.0;
            for n in (1..=m).rev() {
                sum += (n as f64).powi(-s);
            }
            // Euler-Maclaurin tail from m.
            let mf = m as f64;
            let sf = s as f64;
            sum += mf.powf(1.0 - sf) / (sf - 1.0) - 0.5 * mf.powi(-s) + sf / 12.0 * mf.powi(-s - 1);
            *zk = sum;
        }
        z
    })
}

/// Clausen function Cl2(x) = −∫₀ˣ log|2 sin(t/2)| dt.
pub fn clausen2(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let two_pi = 2.0 * PI;
    let mut y = x.rem_euclid(two_pi);
    if y > PI {
        y -= two_pi;
    }
    if y == 0.0 {
        return 0.0;
    }
    let sign = y.signum();
    let y = y.abs();
    let z = zeta_even();
    let r = y / two_pi;
    let r2 = r * r;
    let mut pow = y * r2;
    let mut sum = y - y * y.ln();
    for (k, zk) in z.iter().enumerate().skip(1) {
        let kf = k as f64;
        let term = zk * pow / (kf * (2.0 * kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= r2;
    }
    sign * sum
}

/// Lobachevsky function Λ(θ) = −∫₀^θ log|2 sin t| dt.
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen2(2.0 * theta)
}

/// Principal branch of the dilogarithm.
pub fn li2(z: C64) -> C64 {
    let pi2_6 = PI * PI / 6.0;
    if z.re == 0.0 && z.im == 0.0 {
        return C64::new(0.0, 0.0);
    }
    if z == C64::new(1.0, 0.0) {
        return C64::new(pi2_6, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        let l = (-z).ln();
        return -li2(z.inv()) - l * l * 0.5 - pi2_6;
    }
    if z.re > 0.5 {
        let w = C64::new(1.0, 0.0) - z;
        return C64::new(pi2_6, 0.0) - z.ln() * w.ln() - li2(w);
    }
    li2_series(z)
}

/// Series in u = −log(1 − z); converges for |u| < 2π.
fn li2_series(z: C64) -> C64 {
    let u = -(C64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let zeta = zeta_even();
    let two_pi_sq = 4.0 * PI * PI;
    let mut sum = u - u2 * 0.25;
    let mut pow = u * u2;
    let mut scale = 1.0;
    for (k, zk) in zeta.iter().enumerate().skip(1) {
        scale /= two_pi_sq;
        // B_{2k} / (2k + 1)!
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let coeff = sign * 2.0 * zk * scale / (2.0 * k as f64 + 1.0);
        let term = pow * coeff;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        pow *= u2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((li2(C64::new(-1.0, 0.0)).re + PI * PI / 12.0).abs() < 1e-15);
        let half = li2(C64::new(0.5, 0.0)).re;
        let expect = PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((half - expect).abs() < 1e-15);
        // Catalan's constant: Cl2(π/2) = G.
        assert!((clausen2(PI / 2.0) - 0.915_965_594_177_219).abs() < 1e-14);
    }

    #[test]
    fn li2_on_unit_circle_matches_clausen() {
        for i in 1..50 {
            let t = i as f64 * 0.12;
            let v = li2(C64::from_polar(1.0, t));
            assert!((v.im - clausen2(t)).abs() < 1e-13, "t = {t}");
            let re = PI * PI / 6.0 - t * (2.0 * PI - t) / 4.0;
            assert!((v.re - re).abs() < 1e-13, "t = {t}");
        }
    }
}
