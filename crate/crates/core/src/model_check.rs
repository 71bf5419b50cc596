//! Randomised checks of the model-space inequalities behind the witness
//! construction, each reporting its worst margin.
//!
//! Every suite computes a margin per trial that is non-negative when the
//! inequality holds; a trial counts as a violation when its margin drops
//! below `−tolerance`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_open, Result};
use crate::spherical_kernel::{
    angle_floor, check_witness, far_point, law_of_cosines_side, model_distance, perpendicular_foot,
    random_unit_tangent, sample_in_ball, sine_ratio, triangle_angle, witness_angle_cosine, ModelPoint,
    SphericalTriangle, MODEL_RADIUS, WITNESS_PARAMETER,
};
use crate::EPS_THEORY_MAX;

/// Tolerance shared by all suites.
pub const MODEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelCheckConfig {
    pub trials: usize,
    /// ε for the witness Monte Carlo; the other suites draw ε at random.
    pub eps: f64,
    pub seed: u64,
    /// Intrinsic dimension of the model sphere.
    pub dim: usize,
}

impl Default for ModelCheckConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            eps: 0.2,
            seed: 0,
            dim: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub violations: usize,
    /// Smallest margin observed.
    pub min_margin: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCheckReport {
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
    pub dim: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

struct Tally {
    name: &'static str,
    trials: usize,
    violations: usize,
    min_margin: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            trials: 0,
            violations: 0,
            min_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, margin: f64) {
        self.trials += 1;
        self.min_margin = self.min_margin.min(margin);
        if margin.is_nan() || margin < -MODEL_TOLERANCE {
            self.violations += 1;
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            trials: self.trials,
            violations: self.violations,
            min_margin: self.min_margin,
            tolerance: MODEL_TOLERANCE,
        }
    }
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let v: f64 = rng.random();
        if v > 0.0 {
            return v;
        }
    }
}

fn random_eps<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    open_unit(rng) * EPS_THEORY_MAX
}

fn random_model_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ModelPoint {
    let center = ModelPoint::center(dim);
    let dir = random_unit_tangent(&center, rng);
    let r = rng.random_range(0.0..MODEL_RADIUS * PI);
    center.exp(&dir.iter().map(|c| c * r).collect::<Vec<_>>())
}

/// `sin(tx)/sin(x)` is non-decreasing on a uniform grid of `[0, π/2]`.
/// Margin: smallest consecutive increment.
pub fn sine_ratio_monotonicity<R: Rng + ?Sized>(t_values: usize, grid: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut tally = Tally::new("sine_ratio_monotone");
    for _ in 0..t_values {
        let t = open_unit(rng);
        let mut prev = sine_ratio(t, 0.0)?;
        for k in 1..grid {
            let x = (PI / 2.0) * k as f64 / (grid - 1) as f64;
            let cur = sine_ratio(t, x.min(PI / 2.0))?;
            // exact comparison: the grid must show no decrease at all
            let inc = cur - prev;
            tally.trials += 1;
            tally.min_margin = tally.min_margin.min(inc);
            if inc < 0.0 {
                tally.violations += 1;
            }
            prev = cur;
        }
    }
    let mut report = tally.finish();
    report.tolerance = 0.0;
    Ok(report)
}

/// `c(a, b, π) = a + b` and `c(a, b, 0) = |a − b|`.
pub fn collinear_identities<R: Rng + ?Sized>(trials: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut tally = Tally::new("law_of_cosines_collinear");
    let limit = MODEL_RADIUS * PI;
    for _ in 0..trials {
        let a = rng.random_range(0.0..limit);
        let b = rng.random_range(0.0..limit - a);
        let opposite = law_of_cosines_side(a, b, PI)?;
        let same = law_of_cosines_side(a, b, 0.0)?;
        tally.record(-(opposite - (a + b)).abs());
        tally.record(-(same - (a - b).abs()).abs());
    }
    Ok(tally.finish())
}

/// Sides and angles measured on random point triples satisfy the cosine law.
pub fn cosine_law_round_trip<R: Rng + ?Sized>(trials: usize, dim: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut tally = Tally::new("law_of_cosines_round_trip");
    let mut done = 0;
    while done < trials {
        let x = random_model_point(dim, rng);
        let y = random_model_point(dim, rng);
        let s = random_model_point(dim, rng);
        let Ok(tri) = SphericalTriangle::from_points(&x, &y, &s) else {
            continue;
        };
        done += 1;
        tally.record(-tri.cosine_residual().abs());
        let c = law_of_cosines_side(tri.a, tri.b, tri.alpha)?;
        tally.record(-((c / MODEL_RADIUS).cos() - (tri.c / MODEL_RADIUS).cos()).abs());
    }
    Ok(tally.finish())
}

/// For admissible `(ε, δ, d, b)`: `cos(π − β) ≤ −A(ε)` where
/// `β = arcsin(sin(d/10)/sin(b/10))`. Margin: `−A(ε) − cos(π − β)`.
pub fn angle_floor_chain<R: Rng + ?Sized>(trials: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut tally = Tally::new("angle_floor_chain");
    for _ in 0..trials {
        let eps = random_eps(rng);
        let delta = open_unit(rng) * (5.0 * PI / 4.0) * eps;
        let d = open_unit(rng) * delta;
        let b = rng.random_range(WITNESS_PARAMETER - 2.0 * delta..=WITNESS_PARAMETER + 2.0 * delta);
        let cos_alpha = witness_angle_cosine(d, b)?;
        tally.record(-angle_floor(eps)? - cos_alpha);
    }
    Ok(tally.finish())
}

/// If `cos α ≤ −sin((1−ε)a/10)/sin(a/10)` then `c ≥ (1 − ε)a + b`.
/// Margin: `c − (1 − ε)a − b`.
pub fn final_inequality<R: Rng + ?Sized>(trials: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut tally = Tally::new("cosine_law_lower_bound");
    for _ in 0..trials {
        let eps = random_eps(rng);
        let a = open_unit(rng);
        let b = open_unit(rng) * WITNESS_PARAMETER;
        let cap = -sine_ratio(1.0 - eps, a / MODEL_RADIUS)?;
        let cos_alpha = rng.random_range(-1.0..=cap);
        let alpha = cos_alpha.acos();
        let c = law_of_cosines_side(a, b, alpha)?;
        tally.record(c - ((1.0 - eps) * a + b));
    }
    Ok(tally.finish())
}

/// Draws the configuration of the witness construction: `x` the centre,
/// `y` at distance `a ∈ (0, 1)`, `z' = γ(5π)` and `s` in the open δ-ball
/// around `z'` with `δ = (5π/4)·ε`.
fn witness_configuration<R: Rng + ?Sized>(dim: usize, eps: f64, rng: &mut R) -> Result<[ModelPoint; 4]> {
    let x = ModelPoint::center(dim);
    let a = open_unit(rng);
    let dir = random_unit_tangent(&x, rng);
    let y = x.exp(&dir.iter().map(|c| c * a).collect::<Vec<_>>());
    let z_prime = far_point(&x, &y, WITNESS_PARAMETER)?;
    let s = sample_in_ball(&z_prime, 5.0 * PI / 4.0 * eps, rng);
    Ok([x, y, z_prime, s])
}

/// `(1 − ε)·d(x, y) ≤ d(y, s) − d(x, s)` for landmarks near `γ(5π)`.
pub fn witness_monte_carlo<R: Rng + ?Sized>(trials: usize, eps: f64, dim: usize, rng: &mut R) -> Result<SuiteReport> {
    check_open("eps", eps, 0.0, EPS_THEORY_MAX, "(0, 4/(5π))")?;
    let mut tally = Tally::new("witness_margin");
    for _ in 0..trials {
        let [x, y, _, s] = witness_configuration(dim, eps, rng)?;
        tally.record(check_witness(&x, &y, &s, eps));
    }
    Ok(tally.finish())
}

/// Geometry of the perpendicular foot: it lies within 2δ of `z'`, meets
/// the geodesic at a right angle, and the angle at `x` obeys the floor.
pub fn foot_and_angle<R: Rng + ?Sized>(trials: usize, eps: f64, dim: usize, rng: &mut R) -> Result<[SuiteReport; 3]> {
    check_open("eps", eps, 0.0, EPS_THEORY_MAX, "(0, 4/(5π))")?;
    let delta = 5.0 * PI / 4.0 * eps;
    let floor = angle_floor(eps)?;
    let mut near = Tally::new("foot_within_two_delta");
    let mut right = Tally::new("foot_right_angle");
    let mut angle = Tally::new("witness_angle_floor");
    let mut done = 0;
    while done < trials {
        let [x, y, z_prime, s] = witness_configuration(dim, eps, rng)?;
        let z = perpendicular_foot(&s, &x, &y)?;
        // a short segment xy pins the circle's plane only to about
        // 1e-15/d(x, y), and the angle at z amplifies that by 1/d(z, s)
        if model_distance(&z, &s) * model_distance(&x, &y) < 1e-3 {
            continue;
        }
        done += 1;
        near.record(2.0 * delta - model_distance(&z, &z_prime));
        right.record(-(triangle_angle(&z, &s, &x)? - PI / 2.0).abs());
        angle.record(-floor - triangle_angle(&x, &y, &s)?.cos());
    }
    Ok([near.finish(), right.finish(), angle.finish()])
}

/// Runs every suite with one seeded generator.
pub fn run_model_check(cfg: &ModelCheckConfig) -> Result<ModelCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid_t = (cfg.trials / 100).clamp(1, 100);
    let mut suites = vec![
        sine_ratio_monotonicity(grid_t, 1000, &mut rng)?,
        collinear_identities(cfg.trials, &mut rng)?,
        cosine_law_round_trip(cfg.trials, cfg.dim, &mut rng)?,
        angle_floor_chain(cfg.trials, &mut rng)?,
        final_inequality(cfg.trials, &mut rng)?,
        witness_monte_carlo(cfg.trials, cfg.eps, cfg.dim, &mut rng)?,
    ];
    suites.extend(foot_and_angle(cfg.trials, cfg.eps, cfg.dim, &mut rng)?);
    let passed = suites.iter().all(SuiteReport::passed);
    Ok(ModelCheckReport {
        trials: cfg.trials,
        eps: cfg.eps,
        seed: cfg.seed,
        dim: cfg.dim,
        suites,
        passed,
    })
}
