//! The landmark (Kuratowski) embedding `x ↦ (d(x, s))_{s ∈ S}` into
//! `l^∞(S)` and certification of its Lipschitz constants.
//!
//! For every pair the embedding satisfies
//! `max_s |d(x,s) − d(y,s)| ≤ d(x,y)` by the triangle inequality. The lower
//! constant is the smallest ratio `max_s |d(x,s) − d(y,s)| / d(x,y)` over the
//! tested pairs; `S` is ε-good on those pairs when it is at least `1 − ε`.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric_spaces::PointSample;
use crate::net_builder::{FarthestFirst, Net};

/// Slack on the pass threshold and on the upper Lipschitz check.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;

/// Pair count above which callers must pass an explicit budget.
pub const EXHAUSTIVE_PAIR_LIMIT: u64 = 5_000_000;

/// Distances from every sample point to every landmark.
#[derive(Debug, Clone, PartialEq)]
pub struct KuratowskiImage {
    landmarks: Vec<usize>,
    rows: usize,
    data: Vec<f64>,
}

impl KuratowskiImage {
    pub fn landmarks(&self) -> &[usize] {
        &self.landmarks
    }

    /// Number of sample points (rows).
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    /// Coordinates of point `i` in `l^∞(S)`.
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.landmarks.len();
        &self.data[i * k..(i + 1) * k]
    }

    /// `max_s |d(x_i, s) − d(x_j, s)|`.
    pub fn linf_distance(&self, i: usize, j: usize) -> f64 {
        linf(self.row(i), self.row(j)).0
    }
}

/// l^∞ distance and the first column attaining it.
fn linf(a: &[f64], b: &[f64]) -> (f64, usize) {
    let mut best = (0.0, 0);
    for (col, (x, y)) in a.iter().zip(b).enumerate() {
        let d = (x - y).abs();
        if d > best.0 {
            best = (d, col);
        }
    }
    best
}

/// Tabulates `d(x_i, s_j)` for every sample point and landmark.
pub fn embed(sample: &PointSample, net: &Net) -> Result<KuratowskiImage> {
    embed_landmarks(sample, &net.landmark_indices)
}

fn embed_landmarks(sample: &PointSample, landmarks: &[usize]) -> Result<KuratowskiImage> {
    if let Some(&index) = landmarks.iter().find(|&&s| s >= sample.len()) {
        return Err(Error::IndexOutOfRange {
            index,
            len: sample.len(),
        });
    }
    let k = landmarks.len();
    let rows = sample.len();
    let mut data = vec![0.0; rows * k];
    if k > 0 {
        data.par_chunks_mut(k).enumerate().for_each(|(i, row)| {
            for (v, &s) in row.iter_mut().zip(landmarks) {
                *v = sample.dist(i, s);
            }
        });
    }
    Ok(KuratowskiImage {
        landmarks: landmarks.to_vec(),
        rows,
        data,
    })
}

/// Which pairs to test and how.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Target ε in `(0, 1)`.
    pub eps: f64,
    /// Maximum number of pairs; 0 means every pair.
    pub pair_budget: u64,
    pub seed: u64,
    /// Pairs closer than this are skipped and counted in `filtered_pairs`.
    pub min_pair_distance: f64,
}

impl VerifyOptions {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            pair_budget: 0,
            seed: 0,
            min_pair_distance: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The pair attaining the lower Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstPair {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    /// `max_s |d(x_i, s) − d(x_j, s)|`.
    pub linf_distance: f64,
    /// Sample index of the landmark attaining `linf_distance`.
    pub best_landmark: usize,
}

/// Outcome of checking the embedding inequalities on a set of pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    /// `min over pairs of max_s |d(x,s) − d(y,s)| / d(x,y)`; 1 when no pair was tested.
    pub lower_const: f64,
    /// `max over pairs of (l^∞ distance − d(x,y))`; never above 1e-9 for a metric.
    pub upper_excess: f64,
    pub worst_pair: Option<WorstPair>,
    pub pairs_tested: u64,
    /// Pairs of coincident points, for which the lower bound is vacuous.
    pub zero_distance_pairs: u64,
    /// Pairs skipped by `min_pair_distance`.
    pub filtered_pairs: u64,
    pub total_pairs: u64,
    pub exhaustive: bool,
    pub eps_target: f64,
    pub verdict: Verdict,
    pub sample_size: usize,
    pub landmark_count: usize,
}

impl DistortionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// One line of the per-pair dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairRatio {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub linf_distance: f64,
    pub ratio: f64,
}

fn total_pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Start of row `i` in the row-major enumeration of pairs `i < j`.
fn row_offset(n: u64, i: u64) -> u64 {
    i * (2 * n - i - 1) / 2
}

fn decode_pair(n: usize, p: u64) -> (usize, usize) {
    let n64 = n as u64;
    // largest row i in [0, n - 2] whose offset is ≤ p
    let (mut lo, mut hi) = (0u64, n64 - 2);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if row_offset(n64, mid) <= p {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let j = p - row_offset(n64, lo) + lo + 1;
    (lo as usize, j as usize)
}

/// Pair indices to test, or `None` for all of them.
fn pair_selection(n: usize, opts: &VerifyOptions) -> Option<Vec<u64>> {
    let total = total_pairs(n);
    if opts.pair_budget == 0 || total <= opts.pair_budget {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut picked: Vec<u64> = rand::seq::index::sample(&mut rng, total as usize, opts.pair_budget as usize)
        .into_iter()
        .map(|p| p as u64)
        .collect();
    picked.sort_unstable();
    Some(picked)
}

#[derive(Clone, Copy)]
struct Accumulator {
    worst: Option<(f64, u64, WorstPair)>,
    max_excess: f64,
    tested: u64,
    zero: u64,
    filtered: u64,
}

impl Accumulator {
    const EMPTY: Self = Self {
        worst: None,
        max_excess: f64::NEG_INFINITY,
        tested: 0,
        zero: 0,
        filtered: 0,
    };

    // Associative and commutative: min ratio with lowest pair index on ties,
    // so any reduction tree gives the same bits.
    fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
            (a, b) => a.or(b),
        };
        Self {
            worst,
            max_excess: self.max_excess.max(other.max_excess),
            tested: self.tested + other.tested,
            zero: self.zero + other.zero,
            filtered: self.filtered + other.filtered,
        }
    }
}

fn evaluate_pair(
    sample: &PointSample,
    image: &KuratowskiImage,
    i: usize,
    j: usize,
    opts: &VerifyOptions,
) -> Option<PairRatio> {
    let d = sample.dist(i, j);
    if d < opts.min_pair_distance || d == 0.0 {
        return None;
    }
    let (linf_distance, _) = linf(image.row(i), image.row(j));
    Some(PairRatio {
        i,
        j,
        distance: d,
        linf_distance,
        ratio: linf_distance / d,
    })
}

fn accumulate(
    sample: &PointSample,
    image: &KuratowskiImage,
    n: u64,
    i: usize,
    j: usize,
    opts: &VerifyOptions,
) -> Accumulator {
    let mut acc = Accumulator::EMPTY;
    let d = sample.dist(i, j);
    if d < opts.min_pair_distance {
        acc.filtered = 1;
        return acc;
    }
    if d == 0.0 {
        acc.zero = 1;
        return acc;
    }
    let (linf_distance, col) = linf(image.row(i), image.row(j));
    let index = row_offset(n, i as u64) + (j - i - 1) as u64;
    acc.tested = 1;
    acc.max_excess = linf_distance - d;
    acc.worst = Some((
        linf_distance / d,
        index,
        WorstPair {
            i,
            j,
            distance: d,
            linf_distance,
            best_landmark: image.landmarks.get(col).copied().unwrap_or(usize::MAX),
        },
    ));
    acc
}

/// Checks ε-goodness of `net` on all pairs, or on `pair_budget` seeded
/// random distinct pairs when there are more than that.
pub fn verify_eps_good(
    sample: &PointSample,
    net: &Net,
    eps: f64,
    pair_budget: u64,
    seed: u64,
) -> Result<DistortionReport> {
    verify_with(
        sample,
        net,
        &VerifyOptions {
            eps,
            pair_budget,
            seed,
            min_pair_distance: 0.0,
        },
    )
}

/// [`verify_eps_good`] with every option exposed.
pub fn verify_with(sample: &PointSample, net: &Net, opts: &VerifyOptions) -> Result<DistortionReport> {
    if !(opts.eps > 0.0 && opts.eps < 1.0) {
        return Err(Error::Domain {
            what: "eps",
            value: opts.eps,
            range: "(0, 1)",
        });
    }
    let image = embed(sample, net)?;
    verify_image(sample, &image, opts)
}

/// Verification against a precomputed image.
pub fn verify_image(sample: &PointSample, image: &KuratowskiImage, opts: &VerifyOptions) -> Result<DistortionReport> {
    let n = sample.len();
    let n64 = n as u64;
    let selection = pair_selection(n, opts);
    let exhaustive = selection.is_none();
    let acc = match &selection {
        None => (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| accumulate(sample, image, n64, i, j, opts))
                    .fold(Accumulator::EMPTY, Accumulator::merge)
            })
            .reduce(|| Accumulator::EMPTY, Accumulator::merge),
        Some(pairs) => pairs
            .par_iter()
            .map(|&p| {
                let (i, j) = decode_pair(n, p);
                accumulate(sample, image, n64, i, j, opts)
            })
            .reduce(|| Accumulator::EMPTY, Accumulator::merge),
    };
    let lower_const = acc.worst.map_or(1.0, |w| w.0);
    let verdict = if lower_const >= 1.0 - opts.eps - LIPSCHITZ_SLACK {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(DistortionReport {
        lower_const,
        upper_excess: if acc.tested > 0 { acc.max_excess } else { 0.0 },
        worst_pair: acc.worst.map(|w| w.2),
        pairs_tested: acc.tested,
        zero_distance_pairs: acc.zero,
        filtered_pairs: acc.filtered,
        total_pairs: total_pairs(n),
        exhaustive,
        eps_target: opts.eps,
        verdict,
        sample_size: n,
        landmark_count: image.landmarks.len(),
    })
}

/// Ratio of every tested pair, in pair-index order (the same pairs that
/// [`verify_with`] examines, minus zero-distance and filtered pairs).
pub fn pair_ratios(sample: &PointSample, net: &Net, opts: &VerifyOptions) -> Result<Vec<PairRatio>> {
    let image = embed(sample, net)?;
    let n = sample.len();
    let out = match pair_selection(n, opts) {
        None => (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let image = &image;
                (i + 1..n).filter_map(move |j| evaluate_pair(sample, image, i, j, opts))
            })
            .collect(),
        Some(pairs) => pairs
            .par_iter()
            .filter_map(|&p| {
                let (i, j) = decode_pair(n, p);
                evaluate_pair(sample, &image, i, j, opts)
            })
            .collect(),
    };
    Ok(out)
}

/// Writes pair ratios as CSV with a header row.
pub fn write_pair_csv<W: Write>(writer: W, ratios: &[PairRatio]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in ratios {
        w.serialize(r)?;
    }
    w.flush()
}

/// Exhaustive pass/fail check that stops at the first failing pair.
fn passes_exhaustively(sample: &PointSample, image: &KuratowskiImage, eps: f64) -> bool {
    let n = sample.len();
    let factor = 1.0 - eps - LIPSCHITZ_SLACK;
    (0..n).into_par_iter().all(|i| {
        let ri = image.row(i);
        (i + 1..n).all(|j| {
            let d = sample.dist(i, j);
            if d == 0.0 {
                return true;
            }
            let need = factor * d;
            ri.iter().zip(image.row(j)).any(|(a, b)| (a - b).abs() >= need)
        })
    })
}

/// Smallest net in the nested farthest-first family that is ε-good on every
/// pair of the sample: an upper estimate of the minimal ε-good set size.
///
/// Prefixes of a farthest-first traversal are exactly the greedy nets for
/// decreasing δ and ε-goodness only improves with more landmarks, so a
/// binary search over prefix lengths finds the largest passing δ.
pub fn empirical_kappa_net(sample: &PointSample, eps: f64) -> Result<Net> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            what: "eps",
            value: eps,
            range: "(0, 1)",
        });
    }
    if sample.is_empty() {
        return Err(Error::InvalidPoint("empty sample".into()));
    }
    let walk = FarthestFirst::full(sample);
    let candidates = walk.valid_prefixes();
    let check = |k: usize| -> Result<bool> {
        let image = embed_landmarks(sample, &walk.order[..k])?;
        Ok(passes_exhaustively(sample, &image, eps))
    };
    let last = *candidates.last().ok_or(Error::NoPassingNet)?;
    if !check(last)? {
        return Err(Error::NoPassingNet);
    }
    // invariant: candidates[hi] passes, everything below lo fails
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if check(candidates[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(walk.prefix_net(candidates[hi]))
}

/// Size of [`empirical_kappa_net`].
pub fn empirical_kappa(sample: &PointSample, eps: f64) -> Result<usize> {
    empirical_kappa_net(sample, eps).map(|net| net.len())
}
