//! The smooth bump `f(x) = (1/(20d)) Σ sin³(π x_i)` on the unit cube.

use std::f64::consts::PI;

use crate::linalg::{factorial, gauss_legendre};

/// `f(x)`, zero outside `[0,1]^d`.
pub fn bump(x: &[f64]) -> f64 {
    if x.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return 0.0;
    }
    let d = x.len() as f64;
    x.iter().map(|&v| (PI * v).sin().powi(3)).sum::<f64>() / (20.0 * d)
}

/// `∂²f/∂x_i²` inside the cube; the Hessian is diagonal.
pub fn bump_second_derivative(x: &[f64], i: usize) -> f64 {
    let d = x.len() as f64;
    let s = (PI * x[i]).sin();
    let c = (PI * x[i]).cos();
    3.0 * PI * PI * s * (2.0 * c * c - s * s) / (20.0 * d)
}

/// `sup f = 1/20`, attained at the cube center.
pub const BUMP_SUP: f64 = 1.0 / 20.0;

/// `∫ f = 1/(15π)` in every dimension.
pub fn bump_l1() -> f64 {
    1.0 / (15.0 * PI)
}

/// Largest Hessian entry magnitude, `3π²/(20d)`.
pub fn bump_hessian_max(d: usize) -> f64 {
    3.0 * PI * PI / (20.0 * d as f64)
}

/// `∫_0^1 sin^n(π x) dx` (Wallis).
pub fn sin_power_integral(n: u32) -> f64 {
    // ∫_0^π sin^n = π (n-1)!!/n!! for even n, 2 (n-1)!!/n!! for odd n
    let mut ratio = 1.0;
    let mut k = n;
    while k >= 2 {
        ratio *= (k - 1) as f64 / k as f64;
        k -= 2;
    }
    if n.is_multiple_of(2) {
        ratio
    } else {
        2.0 * ratio / PI
    }
}

/// `M_p = ∫_{[0,1]^d} f^p`. Integer p expands the multinomial exactly;
/// other p use a tensor Gauss-Legendre rule.
pub fn bump_moment(d: usize, p: f64) -> f64 {
    if p.fract() == 0.0 && (0.0..=60.0).contains(&p) {
        let p = p as u32;
        // Σ over compositions k_1 + ... + k_d = p of p!/Π k_i! Π J(3 k_i)
        fn rec(d: usize, left: u32, acc: f64, out: &mut f64) {
            if d == 1 {
                *out += acc * sin_power_integral(3 * left) / factorial(left as usize);
                return;
            }
            for k in 0..=left {
                rec(d - 1, left - k, acc * sin_power_integral(3 * k) / factorial(k as usize), out);
            }
        }
        let mut sum = 0.0;
        rec(d, p, 1.0, &mut sum);
        return sum * factorial(p as usize) / (20.0 * d as f64).powi(p as i32);
    }
    let (nodes, weights) = gauss_legendre(48);
    let m = nodes.len();
    let total = m.pow(d as u32);
    let mut x = vec![0.0; d];
    let mut sum = 0.0;
    for idx in 0..total {
        let mut r = idx;
        let mut w = 1.0;
        for xk in x.iter_mut() {
            let j = r % m;
            r /= m;
            *xk = 0.5 * (nodes[j] + 1.0);
            w *= 0.5 * weights[j];
        }
        sum += w * bump(&x).powf(p);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample::block_rng;
    use crate::linalg::integrate_gl;
    use rand::Rng;

    #[test]
    fn sup_and_l1() {
        for d in 1..=4 {
            assert!((bump(&vec![0.5; d]) - BUMP_SUP).abs() < 1e-16);
            assert!((bump_moment(d, 1.0) - bump_l1()).abs() < 1e-14);
            assert!(bump_l1() >= 1.0 / (80.0 * d as f64));
        }
        let one_d = integrate_gl(|x| bump(&[x]), 0.0, 1.0, 40);
        assert!((one_d - bump_l1()).abs() < 1e-10);
    }

    #[test]
    fn wallis_values() {
        assert!((sin_power_integral(3) - 4.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((sin_power_integral(6) - 5.0 / 16.0).abs() < 1e-15);
        assert_eq!(sin_power_integral(0), 1.0);
    }

    #[test]
    fn integer_moment_matches_quadrature() {
        // the same integral by tensor Gauss-Legendre
        let (nodes, weights) = gauss_legendre(48);
        let mut q = 0.0;
        for (a, wa) in nodes.iter().zip(&weights) {
            for (b, wb) in nodes.iter().zip(&weights) {
                let x = [0.5 * (a + 1.0), 0.5 * (b + 1.0)];
                q += 0.25 * wa * wb * bump(&x).powi(2);
            }
        }
        assert!((bump_moment(2, 2.0) - q).abs() < 1e-14);
        assert!((bump_moment(2, 1.5) - bump_moment(2, 1.5000001)).abs() < 1e-8);
    }

    #[test]
    fn hessian_is_diagonal_and_bounded() {
        let d = 3;
        let mut rng = block_rng(12, 0);
        let h = 1e-4;
        for _ in 0..1000 {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.01..0.99)).collect();
            // off-diagonal mixed second difference
            let mut pp = x.clone();
            pp[0] += h;
            pp[1] += h;
            let mut pm = x.clone();
            pm[0] += h;
            pm[1] -= h;
            let mut mp = x.clone();
            mp[0] -= h;
            mp[1] += h;
            let mut mm = x.clone();
            mm[0] -= h;
            mm[1] -= h;
            let mixed = (bump(&pp) - bump(&pm) - bump(&mp) + bump(&mm)) / (4.0 * h * h);
            assert!(mixed.abs() <= 1e-6);
            for i in 0..d {
                assert!(bump_second_derivative(&x, i).abs() <= bump_hessian_max(d) + 1e-12);
            }
        }
        // attained where sin(π x_i) = 1
        let x = vec![0.5; d];
        assert!((bump_second_derivative(&x, 0).abs() - bump_hessian_max(d)).abs() < 1e-12);
    }
}
