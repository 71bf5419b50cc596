//! Closed-form geometry of the model space of constant curvature 1/100.
//!
//! The model disk of radius 7π with metric `dr² + 100·sin²(r/10)·ds²` is the
//! geodesic ball of radius 7π in the round sphere of radius 10, so every
//! model point is stored as an ambient vector of Euclidean norm 10. Geodesics
//! are great circles and all distances, angles and feet are closed form.
//!
//! The witness construction lives here too. Take `x` the centre, `y` close to
//! `x`, and `z'` at distance 5π from `x` on the far side of `y`. Any landmark
//! within δ of `z'` sees `y` and `x` along almost the same geodesic, so
//! `d(y, s) − d(x, s) ≥ (1 − ε)·d(x, y)` once δ ≤ (5π/4)·ε.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check_closed, check_open, Error, Result};
use crate::numeric::{clamp_unit, dot, norm, vector_angle};
use crate::EPS_THEORY_MAX;

/// Radius of the round sphere realising curvature 1/100.
pub const MODEL_RADIUS: f64 = 10.0;

/// Radius of the model disk around the centre.
pub const MODEL_DISK_RADIUS: f64 = 7.0 * PI;

/// Arc-length parameter at which the witness landmark is sought.
pub const WITNESS_PARAMETER: f64 = 5.0 * PI;

const NORM_TOLERANCE: f64 = 1e-12;
const DEGENERACY_TOLERANCE: f64 = 1e-12;
const POLE_TOLERANCE: f64 = 1e-9;

/// A point of the model space: an ambient vector of norm [`MODEL_RADIUS`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelPoint {
    coords: Vec<f64>,
}

impl ModelPoint {
    /// Wraps ambient coordinates that already have norm 10 (relative
    /// tolerance 1e-12).
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "model points need at least 2 ambient coordinates, got {}",
                coords.len()
            )));
        }
        let r = norm(&coords);
        if !r.is_finite() || (r - MODEL_RADIUS).abs() > NORM_TOLERANCE * MODEL_RADIUS {
            return Err(Error::InvalidPoint(format!(
                "ambient norm {r} differs from the model radius 10"
            )));
        }
        Ok(Self { coords })
    }

    /// Projects a nonzero ambient direction onto the model sphere.
    pub fn from_direction(direction: &[f64]) -> Result<Self> {
        let r = norm(direction);
        if !(r.is_finite() && r > 0.0) || direction.len() < 2 {
            return Err(Error::InvalidPoint("direction must be a finite nonzero vector".into()));
        }
        Ok(Self {
            coords: direction.iter().map(|c| c * MODEL_RADIUS / r).collect(),
        })
    }

    /// Centre of the model disk of dimension `n`: `(10, 0, …, 0)` in `R^{n+1}`.
    pub fn center(n: usize) -> Self {
        assert!(n >= 1, "model dimension must be positive");
        let mut coords = vec![0.0; n + 1];
        coords[0] = MODEL_RADIUS;
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Intrinsic dimension `n`; the ambient space is `R^{n+1}`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Component of an ambient vector tangent to the sphere at `self`.
    pub fn tangent_part(&self, v: &[f64]) -> Vec<f64> {
        let k = dot(v, &self.coords) / (MODEL_RADIUS * MODEL_RADIUS);
        v.iter().zip(&self.coords).map(|(vi, pi)| vi - k * pi).collect()
    }

    /// Exponential map: follows the geodesic leaving `self` along the
    /// tangent part of `v` for arc length `|v|`.
    pub fn exp(&self, v: &[f64]) -> Self {
        let t = self.tangent_part(v);
        let len = norm(&t);
        if len == 0.0 {
            return self.clone();
        }
        let theta = len / MODEL_RADIUS;
        let (s, c) = theta.sin_cos();
        let coords = self
            .coords
            .iter()
            .zip(&t)
            .map(|(p, ti)| c * p + s * MODEL_RADIUS * ti / len)
            .collect();
        Self { coords }
    }

    /// Whether the point lies in the closed model disk of radius 7π around `center`.
    pub fn in_model_disk(&self, center: &ModelPoint) -> bool {
        model_distance(self, center) <= MODEL_DISK_RADIUS
    }
}

/// Geodesic distance on the radius-10 sphere, in `[0, 10π]`.
pub fn model_distance(p: &ModelPoint, q: &ModelPoint) -> f64 {
    MODEL_RADIUS * vector_angle(&p.coords, &q.coords)
}

/// Third side of a spherical triangle from two sides and their included angle.
///
/// Evaluated through the half-angle form
/// `sin²(c'/2) = sin²((a'−b')/2) + sin a'·sin b'·sin²(α/2)` together with its
/// complement, which equals `10·arccos(cos a' cos b' + sin a' sin b' cos α)`
/// (`a' = a/10`, …) but stays accurate for nearly degenerate triangles.
pub fn law_of_cosines_side(a: f64, b: f64, alpha: f64) -> Result<f64> {
    let max_side = MODEL_RADIUS * PI;
    check_closed("side a", a, 0.0, max_side, "[0, 10π]")?;
    check_closed("side b", b, 0.0, max_side, "[0, 10π]")?;
    check_closed("angle alpha", alpha, 0.0, PI, "[0, π]")?;
    let (a, b) = (a / MODEL_RADIUS, b / MODEL_RADIUS);
    let cross = a.sin() * b.sin();
    let half_alpha = 0.5 * alpha;
    let hav = (0.5 * (a - b)).sin().powi(2) + cross * half_alpha.sin().powi(2);
    let hav_complement = (0.5 * (a + b)).cos().powi(2) + cross * half_alpha.cos().powi(2);
    Ok(MODEL_RADIUS * 2.0 * hav.max(0.0).sqrt().atan2(hav_complement.max(0.0).sqrt()))
}

/// Angle opposite the leg `d` in a right triangle with hypotenuse `b`:
/// `arcsin(sin(d/10) / sin(b/10))`.
pub fn right_triangle_angle(d: f64, b: f64) -> Result<f64> {
    check_open("hypotenuse b", b, 0.0, MODEL_RADIUS * PI, "(0, 10π)")?;
    check_closed("leg d", d, 0.0, b, "[0, b]")?;
    let ratio = (d / MODEL_RADIUS).sin() / (b / MODEL_RADIUS).sin();
    if ratio > 1.0 + 1e-12 {
        return Err(Error::Domain {
            what: "sin(d/10) / sin(b/10)",
            value: ratio,
            range: "[0, 1]",
        });
    }
    Ok(ratio.min(1.0).asin())
}

/// `sin(t·x) / sin(x)`, continued by its limit `t` at `x = 0`.
pub fn sine_ratio(t: f64, x: f64) -> Result<f64> {
    check_open("t", t, 0.0, 1.0, "(0, 1)")?;
    check_closed("x", x, 0.0, PI / 2.0, "[0, π/2]")?;
    if x == 0.0 {
        return Ok(t);
    }
    Ok((t * x).sin() / x.sin())
}

/// `A(ε) = sin((1 − ε)·π/2)`, the floor on `−cos` of the witness angle.
pub fn angle_floor(eps: f64) -> Result<f64> {
    check_open("eps", eps, 0.0, EPS_THEORY_MAX, "(0, 4/(5π))")?;
    Ok(((1.0 - eps) * PI / 2.0).sin())
}

/// Orthonormal pair spanning the plane of the great circle through `x` and
/// `y`, with the second vector pointing from `x` towards `y`.
fn great_circle_frame(x: &ModelPoint, y: &ModelPoint) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::InvalidPoint(
            "points live in different ambient dimensions".into(),
        ));
    }
    let w = x.tangent_part(&y.coords);
    let len = norm(&w);
    if len <= DEGENERACY_TOLERANCE * MODEL_RADIUS {
        return Err(Error::DegenerateGeodesic("x and y coincide or are antipodal"));
    }
    let e1 = x.coords.iter().map(|c| c / MODEL_RADIUS).collect();
    let e2 = w.iter().map(|c| c / len).collect();
    Ok((e1, e2))
}

/// Point at arc length `t` from `x` on the geodesic through `x` and `y`,
/// travelling away from `y`.
///
/// The geodesic is parametrised with `γ(0) = x` and `y` at a negative
/// parameter, so `x` lies between `y` and `γ(t)` for small `t`.
pub fn far_point(x: &ModelPoint, y: &ModelPoint, t: f64) -> Result<ModelPoint> {
    if !(0.0..MODEL_RADIUS * PI).contains(&t) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            range: "[0, 10π)",
        });
    }
    let (e1, e2) = great_circle_frame(x, y)?;
    let (s, c) = (t / MODEL_RADIUS).sin_cos();
    let coords = e1
        .iter()
        .zip(&e2)
        .map(|(u, v)| MODEL_RADIUS * (c * u - s * v))
        .collect();
    Ok(ModelPoint { coords })
}

/// Closest point to `s` on the great circle through `x` and `y`.
///
/// The geodesic from `s` to the returned point meets the circle at a right
/// angle. Fails with [`Error::AmbiguousFoot`] when `s` is a pole of the
/// circle, where every point of the circle is equally close.
pub fn perpendicular_foot(s: &ModelPoint, x: &ModelPoint, y: &ModelPoint) -> Result<ModelPoint> {
    let (e1, e2) = great_circle_frame(x, y)?;
    let (p1, p2) = (dot(&s.coords, &e1), dot(&s.coords, &e2));
    let in_plane = p1.hypot(p2);
    if in_plane <= POLE_TOLERANCE * MODEL_RADIUS {
        return Err(Error::AmbiguousFoot);
    }
    let projected: Vec<f64> = e1.iter().zip(&e2).map(|(u, v)| p1 * u + p2 * v).collect();
    let offset: Vec<f64> = s.coords.iter().zip(&projected).map(|(a, b)| a - b).collect();
    if norm(&offset) <= DEGENERACY_TOLERANCE * MODEL_RADIUS {
        return Ok(s.clone());
    }
    Ok(ModelPoint {
        coords: projected.iter().map(|c| c * MODEL_RADIUS / in_plane).collect(),
    })
}

/// Interior angle at `vertex` between the geodesics towards `p` and `q`.
pub fn triangle_angle(vertex: &ModelPoint, p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    let tp = vertex.tangent_part(&p.coords);
    let tq = vertex.tangent_part(&q.coords);
    let floor = DEGENERACY_TOLERANCE * MODEL_RADIUS;
    if norm(&tp) <= floor || norm(&tq) <= floor {
        return Err(Error::DegenerateGeodesic(
            "triangle side has zero length or joins antipodes",
        ));
    }
    Ok(vector_angle(&tp, &tq))
}

/// `d(y, s) − d(x, s) − (1 − ε)·d(x, y)`; non-negative when `s` is a witness
/// for the pair `(x, y)`.
pub fn check_witness(x: &ModelPoint, y: &ModelPoint, s: &ModelPoint, eps: f64) -> f64 {
    model_distance(y, s) - model_distance(x, s) - (1.0 - eps) * model_distance(x, y)
}

/// Sides and angles of the geodesic triangle `(x, y, s)`.
///
/// `a = d(x, y)`, `b = d(x, s)`, `c = d(y, s)`; `alpha` is the angle at `x`
/// (between `a` and `b`, opposite `c`), `beta` the angle at `y` and `gamma`
/// the angle at `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalTriangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl SphericalTriangle {
    pub fn from_points(x: &ModelPoint, y: &ModelPoint, s: &ModelPoint) -> Result<Self> {
        Ok(Self {
            a: model_distance(x, y),
            b: model_distance(x, s),
            c: model_distance(y, s),
            alpha: triangle_angle(x, y, s)?,
            beta: triangle_angle(y, x, s)?,
            gamma: triangle_angle(s, x, y)?,
        })
    }

    /// `cos(c/10) − [cos(a/10)cos(b/10) + sin(a/10)sin(b/10)cos α]`.
    pub fn cosine_residual(&self) -> f64 {
        let (a, b, c) = (self.a / MODEL_RADIUS, self.b / MODEL_RADIUS, self.c / MODEL_RADIUS);
        c.cos() - (a.cos() * b.cos() + a.sin() * b.sin() * self.alpha.cos())
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let max_side = MODEL_RADIUS * PI;
        let sides = [self.a, self.b, self.c].iter().all(|&v| (0.0..=max_side).contains(&v));
        let angles = [self.alpha, self.beta, self.gamma]
            .iter()
            .all(|&v| (0.0..=PI).contains(&v));
        sides && angles && self.cosine_residual().abs() <= tol
    }
}

/// Random point of the open geodesic ball of the given radius around
/// `center`: a tangent vector drawn by rejection from the enclosing cube,
/// then moved onto the sphere with the exponential map.
pub fn sample_in_ball<R: Rng + ?Sized>(center: &ModelPoint, radius: f64, rng: &mut R) -> ModelPoint {
    assert!(
        radius > 0.0 && radius < MODEL_RADIUS * PI,
        "ball radius must lie in (0, 10π)"
    );
    loop {
        let v: Vec<f64> = center
            .coords
            .iter()
            .map(|_| rng.random_range(-radius..radius))
            .collect();
        let t = center.tangent_part(&v);
        let len = norm(&t);
        if len == 0.0 || len >= radius {
            continue;
        }
        let p = center.exp(&t);
        if model_distance(center, &p) < radius {
            return p;
        }
    }
}

/// Unit tangent vector at `p` with a rotation-invariant random direction.
pub fn random_unit_tangent<R: Rng + ?Sized>(p: &ModelPoint, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = p.coords.iter().map(|_| rng.sample(StandardNormal)).collect();
        let t = p.tangent_part(&g);
        let len = norm(&t);
        if len > 1e-6 {
            return t.into_iter().map(|c| c / len).collect();
        }
    }
}

/// `cos` of the angle at `x` that the witness construction guarantees,
/// computed from the right triangle `(x, z, s)`: `−cos(arcsin(sin(d/10)/sin(b/10)))`.
pub fn witness_angle_cosine(d: f64, b: f64) -> Result<f64> {
    let beta = right_triangle_angle(d, b)?;
    clamp_unit("cos(π − β)", (PI - beta).cos())
}
