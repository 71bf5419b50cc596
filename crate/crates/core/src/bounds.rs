//! Closed-form bounds on the size of an ε-good landmark set.
//!
//! For a closed Riemannian manifold of dimension `n` with sectional
//! curvature at most `K ≥ 1/100` and `ε ∈ (0, 4/(5π))`:
//!
//! ```text
//! κ(M, g, ε) ≤ C(n) · Vol(M, g) · K^{n/2} · ε^{−n},
//! C(n) = n · 20ⁿ · π^{(n−1)/2} · Γ((n−1)/2)
//! ```
//!
//! When `K = 1/100` this is the packing count
//! `Vol(M)/Vol(S^{n−1}) · 2n · π^{n−1} · (2/ε)ⁿ`, where `Vol(S^{n−1})` is
//! taken as `2π^{(n−1)/2} / Γ((n−1)/2)`. That normalisation is the one
//! consistent with `C(n)` but differs from the standard measure
//! `2π^{n/2} / Γ(n/2)` of the unit sphere; both are reported.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_open, Error, Result};
use crate::numeric::{adaptive_simpson, gamma_half};
use crate::spherical_kernel::MODEL_RADIUS;
use crate::EPS_THEORY_MAX;

/// Relative tolerance of the model-ball volume quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

fn check_dim(n: usize) -> Result<u32> {
    if !(2..=1000).contains(&n) {
        return Err(Error::Domain {
            what: "dimension n",
            value: n as f64,
            range: "integers 2..=1000",
        });
    }
    Ok(n as u32)
}

/// `C(n) = n · 20ⁿ · π^{(n−1)/2} · Γ((n−1)/2)`.
pub fn c_const(n: usize) -> Result<f64> {
    let m = check_dim(n)?;
    let value = f64::from(m) * 20f64.powi(m as i32) * PI.powf(f64::from(m - 1) / 2.0) * gamma_half(m - 1);
    finite("C(n)", value)
}

/// `2π^{(n−1)/2} / Γ((n−1)/2)`, the `Vol(S^{n−1})` normalisation under which
/// the packing count and `C(n)` agree.
pub fn sphere_volume_paper(n: usize) -> Result<f64> {
    let m = check_dim(n)?;
    Ok(2.0 * PI.powf(f64::from(m - 1) / 2.0) / gamma_half(m - 1))
}

/// Standard measure of the unit sphere `S^{n−1} ⊂ Rⁿ`: `2π^{n/2} / Γ(n/2)`.
pub fn sphere_volume_standard(n: usize) -> Result<f64> {
    let m = check_dim(n)?;
    Ok(2.0 * PI.powf(f64::from(m) / 2.0) / gamma_half(m))
}

fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            range: "finite f64 (result overflows)",
        })
    }
}

/// Which formula produced a [`BoundResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaTag {
    /// `C(n)·Vol·K^{n/2}·ε^{−n}`, any curvature bound.
    CurvatureScaled,
    /// `Vol/Vol(S^{n−1})·2n·π^{n−1}·(2/ε)ⁿ`; assumes sec ≤ 1/100.
    PackingUnitCurvature,
}

/// An evaluated upper bound on the size of an ε-good set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    /// Coefficient multiplying `Vol·ε^{−n}` (and `K^{n/2}` for the scaled form).
    pub c_n: f64,
    pub bound: f64,
    pub formula_tag: FormulaTag,
    /// Caller-side premise the formula relies on.
    pub premise: &'static str,
    pub sphere_volume_paper: f64,
    pub sphere_volume_standard: f64,
    /// The two `Vol(S^{n−1})` conventions differ (always true for n ≥ 2).
    pub sphere_volume_discrepancy: bool,
}

struct Inputs {
    n: u32,
    vol: f64,
    eps: f64,
}

fn check_inputs(n: usize, vol: f64, eps: f64) -> Result<Inputs> {
    let n = check_dim(n)?;
    if !(vol.is_finite() && vol > 0.0) {
        return Err(Error::Domain {
            what: "volume",
            value: vol,
            range: "(0, ∞)",
        });
    }
    check_open("eps", eps, 0.0, EPS_THEORY_MAX, "(0, 4/(5π))")?;
    Ok(Inputs { n, vol, eps })
}

fn conventions(n: usize) -> Result<(f64, f64)> {
    Ok((sphere_volume_paper(n)?, sphere_volume_standard(n)?))
}

/// Packing bound for sec ≤ 1/100:
/// `Vol / Vol(S^{n−1}) · 2n · π^{n−1} · (2/ε)ⁿ`.
///
/// The curvature premise is not checked; it is recorded in the result.
pub fn lemma32_bound(n: usize, vol: f64, eps: f64) -> Result<BoundResult> {
    let inp = check_inputs(n, vol, eps)?;
    let (reduced, standard) = conventions(n)?;
    let nf = f64::from(inp.n);
    let c_n = 2.0 * nf * PI.powi(inp.n as i32 - 1) * 2f64.powi(inp.n as i32) / reduced;
    let bound = finite(
        "bound",
        inp.vol / reduced * 2.0 * nf * PI.powi(inp.n as i32 - 1) * (2.0 / inp.eps).powi(inp.n as i32),
    )?;
    Ok(BoundResult {
        c_n,
        bound,
        formula_tag: FormulaTag::PackingUnitCurvature,
        premise: "sectional curvature ≤ 1/100",
        sphere_volume_paper: reduced,
        sphere_volume_standard: standard,
        sphere_volume_discrepancy: reduced != standard,
    })
}

/// `C(n) · Vol · K^{n/2} · ε^{−n}` with `K ≥ 1/100`.
pub fn theorem_bound(n: usize, vol: f64, k: f64, eps: f64) -> Result<BoundResult> {
    let inp = check_inputs(n, vol, eps)?;
    if !(k.is_finite() && k >= 0.01) {
        return Err(Error::Domain {
            what: "curvature bound K",
            value: k,
            range: "[1/100, ∞)",
        });
    }
    let (reduced, standard) = conventions(n)?;
    let c_n = c_const(n)?;
    let half_n = f64::from(inp.n) / 2.0;
    let bound = finite("bound", c_n * inp.vol * k.powf(half_n) * inp.eps.powi(-(inp.n as i32)))?;
    Ok(BoundResult {
        c_n,
        bound,
        formula_tag: FormulaTag::CurvatureScaled,
        premise: "sectional curvature ≤ K",
        sphere_volume_paper: reduced,
        sphere_volume_standard: standard,
        sphere_volume_discrepancy: reduced != standard,
    })
}

/// Volume of the geodesic ball of radius `r` in the curvature-1/100 model,
/// `Vol(S^{n−1}) · ∫₀ʳ 10^{n−1} sin^{n−1}(t/10) dt`, with the reduced
/// normalisation of `Vol(S^{n−1})`.
pub fn model_ball_volume(n: usize, r: f64) -> Result<f64> {
    Ok(sphere_volume_paper(n)? * model_ball_radial_integral(n, r)?)
}

/// Same as [`model_ball_volume`] with the standard sphere measure.
pub fn model_ball_volume_standard(n: usize, r: f64) -> Result<f64> {
    Ok(sphere_volume_standard(n)? * model_ball_radial_integral(n, r)?)
}

/// `∫₀ʳ 10^{n−1} sin^{n−1}(t/10) dt` by adaptive Simpson.
pub fn model_ball_radial_integral(n: usize, r: f64) -> Result<f64> {
    let m = check_dim(n)? as i32;
    if !(r > 0.0 && r <= MODEL_RADIUS * PI) {
        return Err(Error::Domain {
            what: "radius r",
            value: r,
            range: "(0, 10π]",
        });
    }
    let integrand = |t: f64| (MODEL_RADIUS * (t / MODEL_RADIUS).sin()).powi(m - 1);
    Ok(adaptive_simpson(integrand, 0.0, r, QUADRATURE_TOLERANCE))
}

/// Euclidean comparison volume `Vol(S^{n−1})·rⁿ/n` (reduced normalisation).
pub fn euclidean_ball_volume_paper(n: usize, r: f64) -> Result<f64> {
    let vol = sphere_volume_paper(n)?;
    Ok(vol * r.powi(n as i32) / n as f64)
}

/// Lower bound `Vol(S^{n−1})·(2/π)^{n−1}·rⁿ/n` on the model ball volume,
/// from `sin x ≥ 2x/π` on `[0, π/2]`; valid for `r ≤ 5π`.
pub fn model_ball_lower_bound(n: usize, r: f64) -> Result<f64> {
    let vol = sphere_volume_paper(n)?;
    Ok(vol * (2.0 / PI).powi(n as i32 - 1) * r.powi(n as i32) / n as f64)
}

/// Greedy-net size compared with the volume count `Vol(M) / V(δ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PackingReport {
    pub landmarks: usize,
    /// `Vol(M) / model_ball_volume_standard(n, δ/2)`.
    pub count_bound: f64,
    /// Allowance for the gap between a finite sample and the manifold.
    pub slack: f64,
    /// `landmarks ≤ count_bound · (1 + slack)`.
    pub within: bool,
}

/// Compares a net's size with the disjoint-ball volume count, using the
/// standard sphere measure on both sides.
pub fn packing_check(n: usize, vol: f64, delta: f64, landmarks: usize, slack: f64) -> Result<PackingReport> {
    let ball = model_ball_volume_standard(n, delta / 2.0)?;
    let count_bound = vol / ball;
    Ok(PackingReport {
        landmarks,
        count_bound,
        slack,
        within: landmarks as f64 <= count_bound * (1.0 + slack),
    })
}
