//! δ-nets by farthest-first traversal, and curvature rescaling.
//!
//! A greedy net with parameter δ keeps adding the sample point farthest from
//! the current landmarks while that distance is at least δ. On exit every
//! point is within `< δ` of a landmark (covering) and landmarks are pairwise
//! `≥ δ` apart (packing), so the open δ/2-balls around them are disjoint.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_open, Error, Result};
use crate::metric_spaces::PointSample;
use crate::EPS_THEORY_MAX;

/// Landmark set with its covering parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net {
    /// Covering radius parameter δ: every sample point is `< δ` from a landmark.
    pub delta: f64,
    /// Landmarks in the order they were chosen.
    pub landmark_indices: Vec<usize>,
    /// Smallest distance between two landmarks; `None` for a single landmark.
    pub min_pairwise: Option<f64>,
    /// Largest distance from a sample point to its nearest landmark.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering_radius: Option<f64>,
}

impl Net {
    pub fn len(&self) -> usize {
        self.landmark_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.landmark_indices.is_empty()
    }

    /// Net made of every sample point.
    pub fn full(sample: &PointSample) -> Self {
        let landmark_indices: Vec<usize> = (0..sample.len()).collect();
        let min_pairwise = min_pairwise(sample, &landmark_indices);
        Self {
            delta: min_pairwise.filter(|&m| m > 0.0).unwrap_or(f64::MIN_POSITIVE),
            landmark_indices,
            min_pairwise,
            covering_radius: Some(0.0),
        }
    }

    /// Net from explicit landmark indices; δ is set just above the covering
    /// radius.
    pub fn from_indices(sample: &PointSample, landmark_indices: Vec<usize>) -> Result<Self> {
        if landmark_indices.is_empty() {
            return Err(Error::InvalidPoint("a net needs at least one landmark".into()));
        }
        if let Some(&index) = landmark_indices.iter().find(|&&i| i >= sample.len()) {
            return Err(Error::IndexOutOfRange {
                index,
                len: sample.len(),
            });
        }
        let covering = covering_radius(sample, &landmark_indices);
        Ok(Self {
            delta: covering.next_up(),
            min_pairwise: min_pairwise(sample, &landmark_indices),
            landmark_indices,
            covering_radius: Some(covering),
        })
    }
}

fn min_pairwise(sample: &PointSample, landmarks: &[usize]) -> Option<f64> {
    (0..landmarks.len())
        .into_par_iter()
        .filter_map(|a| {
            landmarks[a + 1..]
                .iter()
                .map(|&b| sample.dist(landmarks[a], b))
                .reduce(f64::min)
        })
        .reduce_with(f64::min)
}

fn covering_radius(sample: &PointSample, landmarks: &[usize]) -> f64 {
    (0..sample.len())
        .into_par_iter()
        .map(|i| {
            landmarks
                .iter()
                .map(|&s| sample.dist(i, s))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

/// Order and insertion radii of a farthest-first traversal from index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FarthestFirst {
    /// Chosen indices in order.
    pub order: Vec<usize>,
    /// `radii[k]` is the distance from `order[k]` to `order[..k]` when it was
    /// chosen; `radii[0] = ∞`. Non-increasing.
    pub radii: Vec<f64>,
    /// Largest distance to the chosen set among points never chosen (0 when
    /// every point is within zero distance of a landmark).
    pub residual: f64,
}

/// Index of the maximum, lowest index on ties.
fn argmax(values: &[f64]) -> (usize, f64) {
    values.par_iter().enumerate().map(|(i, &v)| (i, v)).reduce(
        || (usize::MAX, f64::NEG_INFINITY),
        |a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        },
    )
}

fn traverse(sample: &PointSample, keep: impl Fn(f64) -> bool) -> FarthestFirst {
    let n = sample.len();
    if n == 0 {
        return FarthestFirst {
            order: Vec::new(),
            radii: Vec::new(),
            residual: 0.0,
        };
    }
    let mut nearest: Vec<f64> = (0..n).into_par_iter().map(|j| sample.dist(0, j)).collect();
    nearest[0] = 0.0;
    let mut order = vec![0];
    let mut radii = vec![f64::INFINITY];
    loop {
        let (next, far) = argmax(&nearest);
        if !keep(far) || far <= 0.0 {
            return FarthestFirst {
                order,
                radii,
                residual: far.max(0.0),
            };
        }
        order.push(next);
        radii.push(far);
        nearest.par_iter_mut().enumerate().for_each(|(j, v)| {
            let d = sample.dist(next, j);
            if d < *v {
                *v = d;
            }
        });
        nearest[next] = 0.0;
    }
}

impl FarthestFirst {
    /// Traversal over every distinct point of the sample.
    pub fn full(sample: &PointSample) -> Self {
        traverse(sample, |_| true)
    }

    fn next_radius(&self, k: usize) -> f64 {
        self.radii.get(k).copied().unwrap_or(self.residual)
    }

    /// Prefix lengths `k` that some greedy net reproduces exactly, i.e. those
    /// where the next insertion radius is strictly smaller than the last.
    pub fn valid_prefixes(&self) -> Vec<usize> {
        (1..=self.order.len())
            .filter(|&k| self.next_radius(k) < self.radii[k - 1])
            .collect()
    }

    /// The greedy net made of the first `k` chosen points, with the largest δ
    /// that produces it.
    pub fn prefix_net(&self, k: usize) -> Net {
        assert!(k >= 1 && k <= self.order.len(), "prefix length out of range");
        let next = self.next_radius(k);
        let last = self.radii[k - 1];
        let delta = if last.is_finite() { last } else { next.next_up() };
        let min_pairwise = self.radii[1..k].iter().copied().reduce(f64::min);
        Net {
            delta,
            landmark_indices: self.order[..k].to_vec(),
            min_pairwise,
            covering_radius: Some(next),
        }
    }
}

/// Farthest-first δ-net starting from index 0.
///
/// Points are added while the largest distance to the chosen set is `≥ δ`;
/// ties go to the lowest index.
pub fn greedy_net(sample: &PointSample, delta: f64) -> Result<Net> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            range: "(0, ∞)",
        });
    }
    if sample.is_empty() {
        return Err(Error::InvalidPoint("cannot build a net on an empty sample".into()));
    }
    let walk = traverse(sample, |far| far >= delta);
    let min_pairwise = walk.radii[1..].iter().copied().reduce(f64::min);
    Ok(Net {
        delta,
        landmark_indices: walk.order,
        min_pairwise,
        covering_radius: Some(walk.residual),
    })
}

/// Exhaustive check of the covering and packing properties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetAudit {
    pub covering_radius: f64,
    pub min_pairwise: Option<f64>,
    /// Every sample point is strictly closer than δ to some landmark.
    pub covering_ok: bool,
    /// Landmarks are pairwise at least δ apart.
    pub packing_ok: bool,
}

impl NetAudit {
    pub fn holds(&self) -> bool {
        self.covering_ok && self.packing_ok
    }
}

/// Recomputes covering radius and landmark separation from scratch.
pub fn audit_net(sample: &PointSample, net: &Net) -> Result<NetAudit> {
    if let Some(&index) = net.landmark_indices.iter().find(|&&i| i >= sample.len()) {
        return Err(Error::IndexOutOfRange {
            index,
            len: sample.len(),
        });
    }
    let covering = covering_radius(sample, &net.landmark_indices);
    let min_pair = min_pairwise(sample, &net.landmark_indices);
    Ok(NetAudit {
        covering_radius: covering,
        min_pairwise: min_pair,
        covering_ok: !net.landmark_indices.is_empty() && covering < net.delta,
        packing_ok: min_pair.is_none_or(|m| m >= net.delta),
    })
}

/// Curvature data driving the rescaling `g ↦ t²·g` that brings sectional
/// curvature down to at most 1/100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleContext {
    /// User-supplied (or analytic) upper bound on sectional curvature.
    pub sec_sup: f64,
    /// Effective bound `K = max(1/100, sec_sup)`.
    pub k: f64,
    /// Scale factor `t = 10·√K ≥ 1`.
    pub t: f64,
}

/// Builds the [`ScaleContext`] for a curvature upper bound.
pub fn scale_context(sec_sup: f64) -> Result<ScaleContext> {
    if !sec_sup.is_finite() {
        return Err(Error::Domain {
            what: "sectional curvature bound",
            value: sec_sup,
            range: "finite reals",
        });
    }
    let k = sec_sup.max(0.01);
    Ok(ScaleContext {
        sec_sup,
        k,
        t: 10.0 * k.sqrt(),
    })
}

/// Net parameter in the original metric: `(ε/2) / t`.
///
/// ε-goodness is unchanged by rescaling, but distances are not, so the
/// half-ε net of the rescaled metric shrinks by `t` in the original one.
pub fn required_delta(eps: f64, ctx: &ScaleContext) -> Result<f64> {
    check_open("eps", eps, 0.0, EPS_THEORY_MAX, "(0, 4/(5π))")?;
    Ok(0.5 * eps / ctx.t)
}

/// The same sample with all distances multiplied by `t`.
pub fn scale_sample(sample: &PointSample, t: f64) -> Result<PointSample> {
    sample.scaled(t)
}
