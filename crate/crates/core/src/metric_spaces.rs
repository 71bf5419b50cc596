//! Finite samples of metric spaces and their distance oracles.
//!
//! A [`PointSample`] is the metric space every downstream check runs on: the
//! continuum is replaced by the sample, so covering radii, Lipschitz
//! constants and ε-goodness are decided exactly over the sample points.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Component, Error, MetricDefect, Result};
use crate::numeric::{gamma_half, norm, vector_angle};

/// Default tolerance for the triangle inequality on tabulated metrics.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Dense symmetric table of pairwise distances, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a square table; metric axioms are checked separately by
    /// [`DistanceMatrix::validate`].
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidPoint(format!(
                "distance matrix row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Tabulates `f(i, j)` for `i < j` and mirrors it.
    pub fn from_fn<F: Fn(usize, usize) -> f64 + Sync>(n: usize, f: F) -> Self {
        let mut data = vec![0.0; n * n];
        data.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = match i.cmp(&j) {
                    Ordering::Less => f(i, j),
                    Ordering::Greater => f(j, i),
                    Ordering::Equal => 0.0,
                };
            }
        });
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Checks entries, diagonal, symmetry and then the triangle inequality
    /// `d(i,k) ≤ d(i,j) + d(j,k) + tol`, reporting the first offending
    /// triple in lexicographic `(i, j, k)` order.
    pub fn validate(&self, tol: f64) -> Result<(), MetricDefect> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(MetricDefect::BadEntry { i, j, value: v });
                }
            }
        }
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                return Err(MetricDefect::NonZeroDiagonal { i });
            }
            for j in i + 1..n {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return Err(MetricDefect::Asymmetric { i, j });
                }
            }
        }
        let hit = (0..n).into_par_iter().find_map_first(|i| {
            let ri = self.row(i);
            for j in (0..n).filter(|&j| j != i) {
                let rj = self.row(j);
                let dij = ri[j];
                for k in (0..n).filter(|&k| k != i && k != j) {
                    if ri[k] > dij + rj[k] + tol {
                        return Some(MetricDefect::Triangle { i, j, k });
                    }
                }
            }
            None
        });
        hit.map_or(Ok(()), Err)
    }
}

/// How distances between sample points are computed.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceOracle {
    /// Great-circle distance on the round sphere of the given radius; points
    /// are ambient vectors.
    Sphere { radius: f64, points: Vec<Vec<f64>> },
    /// Flat torus `∏ R/L_k Z`; coordinates are stored reduced into `[0, L_k)`.
    FlatTorus { periods: Vec<f64>, points: Vec<Vec<f64>> },
    /// Straight-line distance in `R^d`.
    Euclidean { points: Vec<Vec<f64>> },
    /// Distances given verbatim.
    Matrix(DistanceMatrix),
    /// Shortest paths in the symmetric k-nearest-neighbor graph of a point
    /// cloud.
    Graph {
        k: usize,
        points: Vec<Vec<f64>>,
        table: DistanceMatrix,
    },
}

impl DistanceOracle {
    fn len(&self) -> usize {
        match self {
            DistanceOracle::Sphere { points, .. }
            | DistanceOracle::FlatTorus { points, .. }
            | DistanceOracle::Euclidean { points }
            | DistanceOracle::Graph { points, .. } => points.len(),
            DistanceOracle::Matrix(m) => m.len(),
        }
    }

    #[inline]
    fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            DistanceOracle::Sphere { radius, points } => {
                if i == j {
                    0.0
                } else {
                    radius * vector_angle(&points[i], &points[j])
                }
            }
            DistanceOracle::FlatTorus { periods, points } => torus_distance(periods, &points[i], &points[j]),
            DistanceOracle::Euclidean { points } => euclidean(&points[i], &points[j]),
            DistanceOracle::Matrix(m) => m.get(i, j),
            DistanceOracle::Graph { table, .. } => table.get(i, j),
        }
    }

    /// Short tag naming the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            DistanceOracle::Sphere { .. } => "sphere",
            DistanceOracle::FlatTorus { .. } => "flat-torus",
            DistanceOracle::Euclidean { .. } => "euclidean",
            DistanceOracle::Matrix(_) => "matrix",
            DistanceOracle::Graph { .. } => "graph-geodesic",
        }
    }
}

/// Euclidean distance between two coordinate vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Flat-torus distance: each coordinate difference is reduced into
/// `[−L/2, L/2]` before taking the Euclidean norm.
pub fn torus_distance(periods: &[f64], a: &[f64], b: &[f64]) -> f64 {
    periods
        .iter()
        .zip(a.iter().zip(b))
        .map(|(l, (x, y))| {
            let diff = x - y;
            let r = diff - l * (diff / l).round();
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Intrinsic dimension and Riemannian volume of the manifold a sample was
/// drawn from, when known analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManifoldInfo {
    pub dim: usize,
    pub volume: f64,
}

/// A finite metric space: sample points together with a distance oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    oracle: DistanceOracle,
    scale: f64,
    label: String,
    sec_sup: Option<f64>,
    manifold: Option<ManifoldInfo>,
}

impl PointSample {
    fn with_oracle(oracle: DistanceOracle, label: String) -> Self {
        Self {
            oracle,
            scale: 1.0,
            label,
            sec_sup: None,
            manifold: None,
        }
    }

    /// Points on the round sphere of the given radius, each of norm `radius`
    /// within `1e-9·max(1, radius)`.
    pub fn sphere(radius: f64, points: Vec<Vec<f64>>) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain {
                what: "radius",
                value: radius,
                range: "(0, ∞)",
            });
        }
        let ambient = points.first().map_or(0, Vec::len);
        for (i, p) in points.iter().enumerate() {
            if p.len() != ambient || ambient < 2 {
                return Err(Error::InvalidPoint(format!(
                    "sphere point {i} has inconsistent dimension"
                )));
            }
            if (norm(p) - radius).abs() > 1e-9 * radius.max(1.0) {
                return Err(Error::InvalidPoint(format!(
                    "sphere point {i} does not have norm {radius}"
                )));
            }
        }
        let n = ambient.saturating_sub(1);
        let volume = if n >= 1 {
            sphere_measure(n) * radius.powi(n as i32)
        } else {
            0.0
        };
        let mut sample = Self::with_oracle(
            DistanceOracle::Sphere { radius, points },
            format!("sphere S^{n} of radius {radius}"),
        );
        sample.sec_sup = Some(1.0 / (radius * radius));
        sample.manifold = Some(ManifoldInfo { dim: n, volume });
        Ok(sample)
    }

    /// Points on the flat torus with the given periods; coordinates are
    /// reduced into `[0, L)`.
    pub fn torus(periods: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::InvalidPoint("a torus needs at least one period".into()));
        }
        for &l in &periods {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Domain {
                    what: "period",
                    value: l,
                    range: "(0, ∞)",
                });
            }
        }
        let mut reduced = points;
        for (i, p) in reduced.iter_mut().enumerate() {
            if p.len() != periods.len() {
                return Err(Error::InvalidPoint(format!(
                    "torus point {i} has {} coordinates",
                    p.len()
                )));
            }
            for (c, l) in p.iter_mut().zip(&periods) {
                if !c.is_finite() {
                    return Err(Error::InvalidPoint(format!(
                        "torus point {i} has a non-finite coordinate"
                    )));
                }
                *c = c.rem_euclid(*l);
                if *c >= *l {
                    *c = 0.0;
                }
            }
        }
        let dim = periods.len();
        let volume = periods.iter().product();
        let label = format!(
            "flat torus with periods [{}]",
            periods.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
        );
        let mut sample = Self::with_oracle(
            DistanceOracle::FlatTorus {
                periods,
                points: reduced,
            },
            label,
        );
        sample.sec_sup = Some(0.0);
        sample.manifold = Some(ManifoldInfo { dim, volume });
        Ok(sample)
    }

    /// Points of `R^d` under the straight-line metric.
    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self> {
        check_cloud(&points)?;
        let d = points.first().map_or(0, Vec::len);
        let mut sample = Self::with_oracle(DistanceOracle::Euclidean { points }, format!("euclidean R^{d}"));
        sample.sec_sup = Some(0.0);
        Ok(sample)
    }

    /// A tabulated metric; the axioms are validated with tolerance `tol`.
    pub fn from_matrix(matrix: DistanceMatrix, tol: f64) -> Result<Self> {
        matrix.validate(tol).map_err(Error::MetricViolation)?;
        let n = matrix.len();
        Ok(Self::with_oracle(
            DistanceOracle::Matrix(matrix),
            format!("distance matrix of {n} points"),
        ))
    }

    pub fn len(&self) -> usize {
        self.oracle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn oracle(&self) -> &DistanceOracle {
        &self.oracle
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// Multiplier applied to every oracle distance (1 unless rescaled).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Upper bound on sectional curvature, when the oracle is analytic or the
    /// caller supplied one.
    pub fn sec_sup(&self) -> Option<f64> {
        self.sec_sup
    }

    pub fn set_sec_sup(&mut self, sec_sup: f64) {
        self.sec_sup = Some(sec_sup);
    }

    pub fn manifold(&self) -> Option<ManifoldInfo> {
        self.manifold
    }

    pub fn set_manifold(&mut self, info: ManifoldInfo) {
        self.manifold = Some(info);
    }

    /// Coordinates of point `i`, if the oracle keeps coordinates.
    pub fn coords(&self, i: usize) -> Option<&[f64]> {
        match &self.oracle {
            DistanceOracle::Sphere { points, .. }
            | DistanceOracle::FlatTorus { points, .. }
            | DistanceOracle::Euclidean { points }
            | DistanceOracle::Graph { points, .. } => points.get(i).map(Vec::as_slice),
            DistanceOracle::Matrix(_) => None,
        }
    }

    /// Distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let len = self.len();
        for index in [i, j] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        Ok(self.dist(i, j))
    }

    /// Unchecked variant of [`PointSample::distance`]; panics on an index
    /// out of range.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.scale * self.oracle.distance(i, j)
    }

    /// Copy of the sample with every distance multiplied by `t`.
    ///
    /// Curvature bounds scale by `t⁻²` and volumes by `tⁿ`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain {
                what: "scale factor",
                value: t,
                range: "(0, ∞)",
            });
        }
        let mut out = self.clone();
        out.scale *= t;
        out.sec_sup = self.sec_sup.map(|k| k / (t * t));
        out.manifold = self.manifold.map(|m| ManifoldInfo {
            dim: m.dim,
            volume: m.volume * t.powi(m.dim as i32),
        });
        out.label = format!("{} scaled by {t}", self.label);
        Ok(out)
    }

    /// Largest pairwise distance (exhaustive).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).map(|j| self.dist(i, j)).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }

    /// Full distance table.
    pub fn to_matrix(&self) -> DistanceMatrix {
        DistanceMatrix::from_fn(self.len(), |i, j| self.dist(i, j))
    }
}

/// Standard measure of the unit `n`-sphere in `R^{n+1}`: `2π^{(n+1)/2} / Γ((n+1)/2)`.
pub fn sphere_measure(n: usize) -> f64 {
    let m = n as u32 + 1;
    2.0 * PI.powf(f64::from(m) / 2.0) / gamma_half(m)
}

fn check_cloud(points: &[Vec<f64>]) -> Result<()> {
    let d = points.first().map_or(0, Vec::len);
    for (i, p) in points.iter().enumerate() {
        if p.len() != d || d == 0 {
            return Err(Error::InvalidPoint(format!(
                "point {i} has {} coordinates, expected {d}",
                p.len()
            )));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("point {i} has a non-finite coordinate")));
        }
    }
    Ok(())
}

/// `count` points uniform on the `n`-sphere of radius `radius` in `R^{n+1}`,
/// from normalised Gaussian vectors. Deterministic in `seed`.
pub fn sample_sphere(n: usize, radius: f64, count: usize, seed: u64) -> Result<PointSample> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidPoint("sphere samples need n ≥ 1 and count ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| loop {
            let g: Vec<f64> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
            let r = norm(&g);
            if r > 1e-12 {
                break g.into_iter().map(|c| c * radius / r).collect();
            }
        })
        .collect();
    PointSample::sphere(radius, points)
}

/// Point placement for [`sample_torus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusLayout {
    /// `resolution` equally spaced points along each axis.
    Grid { resolution: usize },
    /// Independent uniform points.
    Random { count: usize, seed: u64 },
}

/// Grid or uniform random sample of the flat torus with the given periods.
pub fn sample_torus(periods: &[f64], layout: TorusLayout) -> Result<PointSample> {
    let dim = periods.len();
    let points = match layout {
        TorusLayout::Grid { resolution } => {
            if resolution == 0 || dim == 0 {
                return Err(Error::InvalidPoint("torus grid needs a positive resolution".into()));
            }
            let total = resolution
                .checked_pow(dim as u32)
                .ok_or_else(|| Error::InvalidPoint(format!("grid of {resolution}^{dim} points is too large")))?;
            (0..total)
                .map(|mut idx| {
                    let mut p = vec![0.0; dim];
                    for axis in (0..dim).rev() {
                        p[axis] = (idx % resolution) as f64 * periods[axis] / resolution as f64;
                        idx /= resolution;
                    }
                    p
                })
                .collect()
        }
        TorusLayout::Random { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidPoint("torus sample needs count ≥ 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| periods.iter().map(|&l| rng.random_range(0.0..l)).collect())
                .collect()
        }
    };
    PointSample::torus(periods.to_vec(), points)
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    vertex: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adjacency: &[Vec<(usize, f64)>], source: usize, out: &mut [f64]) {
    out.fill(f64::INFINITY);
    out[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Frontier {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Frontier { dist, vertex }) = heap.pop() {
        if dist > out[vertex] {
            continue;
        }
        for &(next, w) in &adjacency[vertex] {
            let candidate = dist + w;
            if candidate < out[next] {
                out[next] = candidate;
                heap.push(Frontier {
                    dist: candidate,
                    vertex: next,
                });
            }
        }
    }
}

fn components(adjacency: &[Vec<(usize, f64)>]) -> Vec<Component> {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out.push(Component { first: start, size });
    }
    out
}

/// Approximate geodesic metric of a point cloud: shortest paths in the
/// symmetrised k-nearest-neighbor graph with Euclidean edge weights.
///
/// The full all-pairs table is stored. Fails with
/// [`Error::DisconnectedGraph`] when the graph has several components.
pub fn build_graph_metric(points: Vec<Vec<f64>>, k: usize) -> Result<PointSample> {
    if k == 0 || points.len() < 2 {
        return Err(Error::InvalidPoint(
            "graph metric needs k ≥ 1 and at least 2 points".into(),
        ));
    }
    check_cloud(&points)?;
    let n = points.len();
    let neighbors: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(usize, f64)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (j, euclidean(&points[i], &points[j])))
                .collect();
            cand.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            cand.truncate(k);
            cand
        })
        .collect();
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, list) in neighbors.into_iter().enumerate() {
        for (j, w) in list {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
    }
    for list in &mut adjacency {
        list.sort_by_key(|a| a.0);
        list.dedup_by_key(|e| e.0);
    }
    let comps = components(&adjacency);
    if comps.len() > 1 {
        return Err(Error::DisconnectedGraph { components: comps });
    }
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n)
        .enumerate()
        .for_each(|(source, row)| dijkstra(&adjacency, source, row));
    // Dijkstra sums edges in path order, so d(i,j) and d(j,i) can differ in
    // the last bit; keep the table exactly symmetric.
    for i in 0..n {
        for j in i + 1..n {
            let v = data[i * n + j].min(data[j * n + i]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    let table = DistanceMatrix { n, data };
    Ok(PointSample::with_oracle(
        DistanceOracle::Graph { k, points, table },
        format!("{k}-NN graph geodesics on {n} points"),
    ))
}

/// On-disk encoding of a point cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    /// One point per row, optional header row.
    Csv,
    /// A JSON array of coordinate arrays.
    Json,
}

impl PointFormat {
    /// Guesses the format from the file extension (`.json` or anything else).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => PointFormat::Json,
            _ => PointFormat::Csv,
        }
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses numeric CSV rows; returns `(line, values)` pairs. A first row that
/// does not parse is taken as a header when `allow_header` is set.
fn parse_csv_rows(path: &Path, text: &str, allow_header: bool) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(index + 1, |p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(index + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => rows.push((line, values)),
            Err(_) if allow_header && index == 0 => {}
            Err(e) => return Err(parse_error(path, line, format!("not a number: {e}"))),
        }
    }
    Ok(rows)
}

/// Reads a point cloud from CSV or JSON.
pub fn read_point_cloud(path: impl AsRef<Path>, format: PointFormat) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let points: Vec<Vec<f64>> = match format {
        PointFormat::Csv => {
            let rows = parse_csv_rows(path, &text, true)?;
            if let Some((_, first)) = rows.first() {
                if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != first.len()) {
                    return Err(parse_error(
                        path,
                        *line,
                        format!("expected {} columns, found {}", first.len(), row.len()),
                    ));
                }
            }
            rows.into_iter().map(|(_, r)| r).collect()
        }
        PointFormat::Json => serde_json::from_str(&text).map_err(|e| parse_error(path, e.line(), e.to_string()))?,
    };
    if points.is_empty() {
        return Err(parse_error(path, 1, "no points found"));
    }
    let dim = points[0].len();
    if let Some(i) = points.iter().position(|p| p.len() != dim || p.is_empty()) {
        return Err(parse_error(
            path,
            i + 1,
            format!("point {i} has {} coordinates, expected {dim}", points[i].len()),
        ));
    }
    Ok(points)
}

/// Loads a point cloud; with `k` the graph-geodesic metric is attached,
/// otherwise the Euclidean one.
pub fn load_points(path: impl AsRef<Path>, format: PointFormat, k: Option<usize>) -> Result<PointSample> {
    let path = path.as_ref();
    let points = read_point_cloud(path, format)?;
    let mut sample = match k {
        Some(k) => build_graph_metric(points, k)?,
        None => PointSample::euclidean(points)?,
    };
    sample.label = format!("{} from {}", sample.label, path.display());
    Ok(sample)
}

/// Loads and validates a square CSV distance matrix.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<PointSample> {
    let path: PathBuf = path.as_ref().to_path_buf();
    let text = read_text(&path)?;
    let rows = parse_csv_rows(&path, &text, false)?;
    if rows.is_empty() {
        return Err(parse_error(&path, 1, "empty distance matrix"));
    }
    let n = rows.len();
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(parse_error(
            &path,
            *line,
            format!("expected {n} columns, found {}", row.len()),
        ));
    }
    let matrix = DistanceMatrix::from_rows(rows.into_iter().map(|(_, r)| r).collect())?;
    let mut sample = PointSample::from_matrix(matrix, METRIC_TOLERANCE)?;
    sample.label = format!("distance matrix from {}", path.display());
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_file(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn torus_wraparound() {
        let s = PointSample::torus(vec![1.0, 1.0], vec![vec![0.1, 0.1], vec![0.9, 0.1]]).unwrap();
        assert!((s.distance(0, 1).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn torus_reduces_coordinates() {
        let s = PointSample::torus(vec![2.0], vec![vec![-0.5], vec![4.25]]).unwrap();
        assert_eq!(s.coords(0).unwrap(), &[1.5]);
        assert_eq!(s.coords(1).unwrap(), &[0.25]);
    }

    #[test]
    fn sphere_antipodes() {
        let s = PointSample::sphere(10.0, vec![vec![10.0, 0.0, 0.0], vec![-10.0, 0.0, 0.0]]).unwrap();
        assert!((s.distance(0, 1).unwrap() - 10.0 * PI).abs() < 1e-12);
        assert_eq!(s.sec_sup(), Some(0.01));
        assert!(PointSample::sphere(10.0, vec![vec![9.0, 0.0]]).is_err());
    }

    #[test]
    fn matrix_lookup_and_index_errors() {
        let m = DistanceMatrix::from_rows(vec![vec![0.0, 1.5], vec![1.5, 0.0]]).unwrap();
        let s = PointSample::from_matrix(m, METRIC_TOLERANCE).unwrap();
        assert_eq!(s.distance(0, 1).unwrap(), 1.5);
        assert!(matches!(
            s.distance(0, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn sphere_sampling_is_deterministic() {
        let a = sample_sphere(2, 10.0, 50, 9).unwrap();
        let b = sample_sphere(2, 10.0, 50, 9).unwrap();
        assert_eq!(a, b);
        let one = sample_sphere(2, 10.0, 1, 9).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.distance(0, 0).unwrap(), 0.0);
    }

    #[test]
    fn sphere_mean_distance() {
        // mean geodesic distance between uniform points is (π/2)·R
        let s = sample_sphere(2, 10.0, 10_000, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 200_000;
        let mut total = 0.0;
        for _ in 0..trials {
            let i = rng.random_range(0..s.len());
            let j = rng.random_range(0..s.len());
            total += s.dist(i, j);
        }
        let mean = total / trials as f64;
        assert!((mean / (5.0 * PI) - 1.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn torus_grid_examples() {
        let s = sample_torus(&[1.0, 1.0], TorusLayout::Grid { resolution: 2 }).unwrap();
        assert_eq!(s.len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let d = s.dist(i, j);
                    assert!((d - 0.5).abs() < 1e-15 || (d - 0.5f64.sqrt()).abs() < 1e-15, "{d}");
                }
            }
        }
        let big = sample_torus(&[1.0, 1.0], TorusLayout::Grid { resolution: 60 }).unwrap();
        assert!(big.diameter() <= 0.5f64.sqrt() + 1e-15);
        let spacing = (0..big.len())
            .map(|i| {
                (0..big.len())
                    .filter(|&j| j != i)
                    .map(|j| big.dist(i, j))
                    .fold(f64::MAX, f64::min)
            })
            .fold(0.0, f64::max);
        assert!((spacing - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn random_torus_points_in_range() {
        let s = sample_torus(&[2.0, 0.5, 1.0], TorusLayout::Random { count: 100, seed: 4 }).unwrap();
        for i in 0..s.len() {
            let c = s.coords(i).unwrap();
            assert!(c[0] < 2.0 && c[1] < 0.5 && c[2] < 1.0);
        }
        assert_eq!(s.manifold().unwrap().volume, 1.0);
    }

    #[test]
    fn graph_metric_collinear_path() {
        let s = build_graph_metric(vec![vec![0.0], vec![1.0], vec![2.0]], 1).unwrap();
        assert_eq!(s.distance(0, 2).unwrap(), 2.0);
    }

    #[test]
    fn graph_metric_disconnected() {
        let pts = vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![10.0, 0.0], vec![10.1, 0.0]];
        match build_graph_metric(pts, 1) {
            Err(Error::DisconnectedGraph { components }) => {
                assert_eq!(
                    components,
                    vec![Component { first: 0, size: 2 }, Component { first: 2, size: 2 }]
                );
            }
            other => panic!("expected disconnected graph, got {other:?}"),
        }
    }

    #[test]
    fn graph_metric_approximates_circle_arcs() {
        let n = 400;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let s = build_graph_metric(pts, 8).unwrap();
        for i in 0..n / 2 {
            let d = s.dist(i, i + n / 2);
            assert!((d / PI - 1.0).abs() < 0.05, "{d}");
        }
    }

    #[test]
    fn matrix_validation() {
        let bad =
            DistanceMatrix::from_rows(vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]]).unwrap();
        assert_eq!(bad.validate(1e-9), Err(MetricDefect::Triangle { i: 0, j: 1, k: 2 }));
        let asym = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(asym.validate(1e-9), Err(MetricDefect::Asymmetric { i: 0, j: 1 }));
        let diag = DistanceMatrix::from_rows(vec![vec![1.0]]).unwrap();
        assert_eq!(diag.validate(1e-9), Err(MetricDefect::NonZeroDiagonal { i: 0 }));
        let neg = DistanceMatrix::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(matches!(neg.validate(1e-9), Err(MetricDefect::BadEntry { .. })));
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn load_matrix_files() {
        let ok = temp_file("0,1\n1,0\n", ".csv");
        let s = load_matrix(ok.path()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.distance(0, 1).unwrap(), 1.0);

        let bad = temp_file("0,1,3\n1,0,1\n3,1,0\n", ".csv");
        assert!(matches!(
            load_matrix(bad.path()),
            Err(Error::MetricViolation(MetricDefect::Triangle { i: 0, j: 1, k: 2 }))
        ));

        let empty = temp_file("", ".csv");
        assert!(matches!(load_matrix(empty.path()), Err(Error::Parse { .. })));

        let ragged = temp_file("0,1\n1,0,4\n", ".csv");
        assert!(matches!(load_matrix(ragged.path()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn load_point_files() {
        let csv = temp_file("x,y\n0,0\n3,4\n", ".csv");
        let s = load_points(csv.path(), PointFormat::Csv, None).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.distance(0, 1).unwrap(), 5.0);

        let json = temp_file("[[0, 0], [0, 1], [0, 2]]", ".json");
        assert_eq!(PointFormat::from_path(json.path()), PointFormat::Json);
        let g = load_points(json.path(), PointFormat::Json, Some(1)).unwrap();
        assert_eq!(g.distance(0, 2).unwrap(), 2.0);

        let empty = temp_file("", ".csv");
        assert!(matches!(
            read_point_cloud(empty.path(), PointFormat::Csv),
            Err(Error::Parse { .. })
        ));

        let garbage = temp_file("1,2\n3,x\n", ".csv");
        assert!(matches!(
            read_point_cloud(garbage.path(), PointFormat::Csv),
            Err(Error::Parse { line: 2, .. })
        ));

        let ragged = temp_file("[[0, 0], [1]]", ".json");
        assert!(read_point_cloud(ragged.path(), PointFormat::Json).is_err());

        let missing = Path::new("/nonexistent/points.csv");
        assert!(matches!(
            read_point_cloud(missing, PointFormat::Csv),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn scaling_multiplies_distances() {
        let m = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = PointSample::from_matrix(m, 1e-9).unwrap().scaled(2.0).unwrap();
        assert_eq!(s.distance(0, 1).unwrap(), 2.0);
        let t = sample_torus(&[1.0, 1.0], TorusLayout::Grid { resolution: 3 }).unwrap();
        let t2 = t.scaled(3.0).unwrap();
        assert_eq!(t2.manifold().unwrap().volume, 9.0);
        assert_eq!(t2.sec_sup(), Some(0.0));
        assert!(t.scaled(0.0).is_err());
    }
}
