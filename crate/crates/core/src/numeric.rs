//! Small numerical primitives: gamma at half-integers, adaptive Simpson
//! quadrature and the checked clamp used before inverse trig functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest excursion outside `[-1, 1]` tolerated before `acos`/`asin`.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Clamps `value` into `[-1, 1]`, failing if it lies further out than
/// [`CLAMP_TOLERANCE`].
pub fn clamp_unit(what: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() || value.abs() > 1.0 + CLAMP_TOLERANCE {
        return Err(Error::ClampExcursion { what, value });
    }
    Ok(value.clamp(-1.0, 1.0))
}

/// `Γ(m / 2)` for a positive integer `m`.
///
/// Uses the exact recursion `Γ(x + 1) = x·Γ(x)` from `Γ(1/2) = √π` or
/// `Γ(1) = 1`, so every value is a product of at most `m / 2` exactly
/// representable factors.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m >= 1, "gamma_half needs a positive argument");
    let (mut value, mut x) = if m.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    let target = f64::from(m) / 2.0;
    while x < target {
        value *= x;
        x += 1.0;
    }
    value
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Intervals are bisected until the Richardson error estimate drops below
/// `rel_tol` times the magnitude of the coarse whole-interval estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Seed the scale from a finer pass so a vanishing midpoint cannot fool it.
    let scale = {
        let n = 64;
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h).abs()).sum::<f64>() * h
    };
    let tol = (rel_tol * scale).max(f64::MIN_POSITIVE);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Angle between two nonzero vectors, `2·atan2(|â − b̂|, |â + b̂|)`.
///
/// Accurate to a few ulps over the whole range `[0, π]`, unlike `acos` of
/// the normalised inner product near 0 and π.
pub fn vector_angle(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_small_values() {
        assert_eq!(gamma_half(2), 1.0);
        assert_eq!(gamma_half(1), PI.sqrt());
        assert!((gamma_half(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(gamma_half(10), 24.0);
    }

    #[test]
    fn gamma_half_matches_statrs() {
        for m in 1..=40u32 {
            let expected = statrs::function::gamma::gamma(f64::from(m) / 2.0);
            let got = gamma_half(m);
            assert!(
                ((got - expected) / expected).abs() < 1e-12,
                "m = {m}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn simpson_closed_forms() {
        let v = adaptive_simpson(f64::sin, 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(|x| x.powi(9), 0.0, 1.0, 1e-12);
        assert!((v - 0.1).abs() < 1e-12);
        assert_eq!(adaptive_simpson(f64::sin, 1.0, 1.0, 1e-12), 0.0);
    }

    #[test]
    fn clamp_rejects_large_excursions() {
        assert_eq!(clamp_unit("x", 1.0 + 1e-12).unwrap(), 1.0);
        assert_eq!(clamp_unit("x", -1.0 - 5e-10).unwrap(), -1.0);
        assert!(clamp_unit("x", 1.0 + 1e-6).is_err());
        assert!(clamp_unit("x", f64::NAN).is_err());
    }

    #[test]
    fn vector_angle_extremes() {
        assert_eq!(vector_angle(&[1.0, 0.0], &[2.0, 0.0]), 0.0);
        assert!((vector_angle(&[1.0, 0.0], &[-3.0, 0.0]) - PI).abs() < 1e-15);
        assert!((vector_angle(&[1.0, 0.0], &[0.0, 5.0]) - PI / 2.0).abs() < 1e-15);
    }
}
