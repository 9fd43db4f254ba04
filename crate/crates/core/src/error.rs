use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("raster dimensions {width}x{height} do not match {len} values")]
    Dimensions { width: usize, height: usize, len: usize },

    #[error("heatmap value {value} at ({x}, {y}) is outside [0, 1]")]
    HeatmapRange { x: usize, y: usize, value: f64 },

    #[error("polyline needs at least 2 distinct points, got {0}")]
    DegeneratePolyline(usize),

    #[error("polyline has identical consecutive points at index {0}")]
    RepeatedPoint(usize),

    #[error("path has {0} pixels, at least 2 are required")]
    PathTooShort(usize),

    #[error(transparent)]
    PageXml(#[from] PageXmlError),

    #[error("infeasible synthetic page: {0}")]
    Infeasible(String),

    #[error("page sets differ: missing predictions {missing:?}, unexpected predictions {unexpected:?}")]
    PageMismatch {
        missing: Vec<String>,
        unexpected: Vec<String>,
    },

    #[error("split manifest lists {0:?} in both train and test")]
    OverlappingSplit(Vec<String>),

    #[error("cannot access {path}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Errors raised while reading PAGE XML. Every variant carries the 1-based
/// line and column of the offending element.
#[derive(Debug, Error)]
pub enum PageXmlError {
    #[error("malformed XML at {line}:{column}: {message}")]
    Malformed { line: u32, column: u32, message: String },

    #[error("no Page element found")]
    MissingPage,

    #[error("Page element at {line}:{column}: bad or missing {attribute}")]
    BadDimension {
        line: u32,
        column: u32,
        attribute: &'static str,
    },

    #[error("Baseline at {line}:{column} has no points attribute")]
    MissingPoints { line: u32, column: u32 },

    #[error("Baseline at {line}:{column}: cannot parse point {token:?}")]
    BadPoint { line: u32, column: u32, token: String },

    #[error("Baseline at {line}:{column}: point ({x}, {y}) outside page {width}x{height}")]
    OutOfBounds {
        line: u32,
        column: u32,
        x: f64,
        y: f64,
        width: usize,
        height: usize,
    },
}
