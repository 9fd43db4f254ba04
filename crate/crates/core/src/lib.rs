//! Baseline detection post-processing for handwritten document pages.
//!
//! The pipeline turns a per-pixel baseline probability map into vectorized
//! baselines ([`baseline`]), cuts straightened line images around each
//! baseline ([`rectify`]) and scores detections against ground truth
//! ([`eval`]). [`formats`] holds PAGE XML, PNG carriers and reports, and
//! [`synth`] generates pages with known baselines.

pub mod baseline;
pub mod error;
pub mod eval;
pub mod formats;
pub mod geometry;
pub mod raster;
pub mod rectify;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{Point, Polyline};
pub use raster::{BinaryMask, ComponentLabels, GrayImage, Heatmap, Raster};
