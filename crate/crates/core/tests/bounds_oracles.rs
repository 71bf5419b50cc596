use std::f64::consts::PI;

use kuratowski::bounds::*;
use proptest::prelude::*;
use statrs::function::gamma::gamma;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn constants_match_a_gamma_oracle() {
    for n in 2..=40usize {
        let nf = n as f64;
        let oracle = nf * 20f64.powf(nf) * PI.powf((nf - 1.0) / 2.0) * gamma((nf - 1.0) / 2.0);
        assert!(rel(c_const(n).unwrap(), oracle) < 1e-12, "n = {n}");
        let reduced = 2.0 * PI.powf((nf - 1.0) / 2.0) / gamma((nf - 1.0) / 2.0);
        let standard = 2.0 * PI.powf(nf / 2.0) / gamma(nf / 2.0);
        assert!(rel(sphere_volume_paper(n).unwrap(), reduced) < 1e-12);
        assert!(rel(sphere_volume_standard(n).unwrap(), standard) < 1e-12);
    }
}

#[test]
fn closed_forms() {
    assert!(rel(c_const(2).unwrap(), 800.0 * PI) < 1e-12);
    assert!(rel(c_const(3).unwrap(), 24000.0 * PI) < 1e-12);
    assert!(rel(c_const(4).unwrap(), 320_000.0 * PI * PI) < 1e-12);
    let b = theorem_bound(2, 1600.0 * PI, 0.01, 0.2).unwrap();
    assert!(rel(b.bound, 320_000.0 * PI * PI) < 1e-12);
    assert!(b.sphere_volume_discrepancy);
    // unit round 2-sphere: K = 1, area 4π
    let unit = theorem_bound(2, 4.0 * PI, 1.0, 0.2).unwrap();
    assert!(rel(unit.bound, 80_000.0 * PI * PI) < 1e-12);
}

#[test]
fn model_ball_volume_matches_closed_form() {
    // n = 2: ∫ 10 sin(t/10) dt = 100(1 − cos(r/10))
    for r in [0.01, 0.5, 1.0, 5.0, 10.0 * PI / 2.0, 10.0 * PI] {
        let exact = sphere_volume_paper(2).unwrap() * 100.0 * (1.0 - (r / 10.0).cos());
        assert!(rel(model_ball_volume(2, r).unwrap(), exact) < 1e-9, "r = {r}");
    }
    assert!(rel(model_ball_volume(2, 10.0 * PI).unwrap(), 400.0) < 1e-10);
}

proptest! {
    #[test]
    fn final_substitution_is_an_identity(n in 2usize..=10, vol in 1e-3..1e6f64, eps in 1e-4..kuratowski::EPS_THEORY_MAX) {
        let t = theorem_bound(n, vol, 0.01, eps).unwrap().bound;
        let l = lemma32_bound(n, vol, eps).unwrap().bound;
        prop_assert!(rel(t, l) < 1e-12, "{t} vs {l}");
    }

    #[test]
    fn halving_eps_multiplies_by_two_to_the_n(n in 2usize..=12, vol in 1e-3..1e6f64, eps in 1e-4..0.12f64, k in 0.01..10.0f64) {
        let small = theorem_bound(n, vol, k, eps).unwrap().bound;
        let large = theorem_bound(n, vol, k, 2.0 * eps).unwrap().bound;
        prop_assert!(rel(small / large, 2f64.powi(n as i32)) < 1e-12);
    }

    #[test]
    fn bound_scales_with_volume_and_curvature(n in 2usize..=8, vol in 1e-3..1e6f64, k in 0.01..10.0f64, s in 0.1..10.0f64) {
        let base = theorem_bound(n, vol, k, 0.2).unwrap().bound;
        prop_assert!(rel(theorem_bound(n, s * vol, k, 0.2).unwrap().bound, s * base) < 1e-12);
        // the bound is invariant under g ↦ λ²g: vol·λⁿ, K/λ²
        let lambda = s.sqrt();
        let scaled = theorem_bound(n, vol * lambda.powi(n as i32), k / (lambda * lambda), 0.2);
        if k / (lambda * lambda) >= 0.01 {
            prop_assert!(rel(scaled.unwrap().bound, base) < 1e-12);
        }
    }

    #[test]
    fn model_balls_grow_and_stay_below_flat_ones(n in 2usize..=6, r1 in 1e-3..10.0 * PI, r2 in 1e-3..10.0 * PI) {
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        prop_assume!(hi - lo > 1e-6);
        let (v_lo, v_hi) = (model_ball_volume(n, lo).unwrap(), model_ball_volume(n, hi).unwrap());
        prop_assert!(v_lo < v_hi);
        prop_assert!(v_hi <= euclidean_ball_volume_paper(n, hi).unwrap() * (1.0 + 1e-10));
        if lo <= PI {
            prop_assert!(v_lo >= model_ball_lower_bound(n, lo).unwrap() * (1.0 - 1e-10));
        }
    }
}
