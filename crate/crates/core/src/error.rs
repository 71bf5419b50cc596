use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the geometry, sampling and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("{what} = {value} leaves [-1, 1] by more than the clamp tolerance")]
    ClampExcursion { what: &'static str, value: f64 },

    #[error("geodesic through the given points is not unique: {0}")]
    DegenerateGeodesic(&'static str),

    #[error("perpendicular foot is ambiguous: the point is a pole of the great circle")]
    AmbiguousFoot,

    #[error("point index {index} out of range for a sample of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("k-nearest-neighbor graph is disconnected: {}", describe_components(.components))]
    DisconnectedGraph { components: Vec<Component> },

    #[error("{}: line {line}: {message}", .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("metric violation: {0}")]
    MetricViolation(MetricDefect),

    #[error("no net in the greedy family passes; the distance oracle is inconsistent")]
    NoPassingNet,

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A connected component of a neighbor graph, named by its lowest vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub first: usize,
    pub size: usize,
}

fn describe_components(components: &[Component]) -> String {
    let parts: Vec<String> = components
        .iter()
        .map(|c| format!("{{first vertex {}, {} vertices}}", c.first, c.size))
        .collect();
    format!("{} components {}", components.len(), parts.join(", "))
}

/// The first axiom a distance table was found to break.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricDefect {
    /// `d(i, k) > d(i, j) + d(j, k)` beyond tolerance.
    Triangle {
        i: usize,
        j: usize,
        k: usize,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    NonZeroDiagonal {
        i: usize,
    },
    /// Negative, NaN or infinite entry.
    BadEntry {
        i: usize,
        j: usize,
        value: f64,
    },
}

impl std::fmt::Display for MetricDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            MetricDefect::Triangle { i, j, k } => {
                write!(
                    f,
                    "triangle inequality fails for ({i}, {j}, {k}): d({i},{k}) > d({i},{j}) + d({j},{k})"
                )
            }
            MetricDefect::Asymmetric { i, j } => write!(f, "d({i},{j}) != d({j},{i})"),
            MetricDefect::NonZeroDiagonal { i } => write!(f, "d({i},{i}) != 0"),
            MetricDefect::BadEntry { i, j, value } => {
                write!(f, "entry ({i},{j}) = {value} is not a finite non-negative length")
            }
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_open(what: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<f64> {
    if value > lo && value < hi {
        Ok(value)
    } else {
        Err(Error::Domain { what, value, range })
    }
}

pub(crate) fn check_closed(what: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<f64> {
    if value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::Domain { what, value, range })
    }
}
