//! Straightened line images around a baseline.
//!
//! Every polyline segment is walked pixel by pixel along its Bresenham
//! rasterization. At each step the segment normal gives a column of source
//! pixels running from `above` pixels on the upper side to `below` pixels on
//! the lower side; the columns are concatenated into the output strip.
//!
//! The upper side is the one reached by turning the segment direction by
//! -90 degrees in image coordinates, i.e. visually up for a baseline drawn
//! left to right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bresenham, point_segment_distance, round_half_up, Point, Polyline};
use crate::raster::{label_components, BinaryMask, ComponentLabels, GrayImage, Raster};

/// Fill value for samples outside the page.
pub const BACKGROUND: u8 = 255;

/// Extent of the strip cut around a baseline, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineEnvironment {
    pub above: usize,
    pub below: usize,
}

impl LineEnvironment {
    pub fn new(above: usize, below: usize) -> Result<Self> {
        if above + below == 0 {
            return Err(Error::Parameter(
                "line environment must extend at least one pixel".into(),
            ));
        }
        Ok(Self { above, below })
    }

    pub fn height(&self) -> usize {
        self.above + self.below + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    /// Ink components with a pixel this close to the baseline belong to the line.
    pub band_radius: f64,
    pub clamp_max: usize,
    /// Used when no ink component reaches the band.
    pub fallback: LineEnvironment,
}

impl Default for EnvironmentParams {
    fn default() -> Self {
        Self {
            band_radius: 15.0,
            clamp_max: 120,
            fallback: LineEnvironment { above: 24, below: 12 },
        }
    }
}

/// Connected ink components of a page, labelled once and shared by all of
/// its baselines.
#[derive(Debug, Clone)]
pub struct InkComponents {
    labels: ComponentLabels,
    pixels: Vec<Vec<(usize, usize)>>,
}

impl InkComponents {
    pub fn new(ink: &BinaryMask) -> Self {
        let labels = label_components(ink);
        let pixels = labels.pixels();
        Self { labels, pixels }
    }

    pub fn count(&self) -> usize {
        self.pixels.len()
    }
}

/// Signed distance of `p` to the nearest segment; positive on the upper side.
fn signed_distance(p: Point, segments: &[(Point, Point)]) -> f64 {
    let mut best = f64::INFINITY;
    let mut sign = 1.0;
    for &(a, b) in segments {
        let d = point_segment_distance(p, a, b);
        if d < best {
            best = d;
            // cross((b - a), (p - a)) < 0 means p lies on the upper side
            let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            sign = if cross < 0.0 { 1.0 } else { -1.0 };
        }
    }
    sign * best
}

fn distinct_segments(baseline: &Polyline) -> Vec<(Point, Point)> {
    baseline.segments().filter(|(a, b)| a != b).collect()
}

pub fn estimate_environment(baseline: &Polyline, ink: &BinaryMask, params: &EnvironmentParams) -> LineEnvironment {
    estimate_environment_with(baseline, &InkComponents::new(ink), params)
}

/// Largest orthogonal extents above and below `baseline` of the ink
/// components that come within `band_radius` of it.
pub fn estimate_environment_with(
    baseline: &Polyline,
    ink: &InkComponents,
    params: &EnvironmentParams,
) -> LineEnvironment {
    let segments = distinct_segments(baseline);
    if segments.is_empty() {
        return params.fallback;
    }
    let labels = ink.labels.labels();
    let (w, h) = (labels.width() as i64, labels.height() as i64);
    let band = params.band_radius;
    let reach = band.ceil() as i64;
    let mut touching = vec![false; ink.count()];
    for &(a, b) in &segments {
        let x0 = (a.x.min(b.x).floor() as i64 - reach).max(0);
        let x1 = (a.x.max(b.x).ceil() as i64 + reach).min(w - 1);
        let y0 = (a.y.min(b.y).floor() as i64 - reach).max(0);
        let y1 = (a.y.max(b.y).ceil() as i64 + reach).min(h - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let label = labels.get(x as usize, y as usize);
                if label == 0 || touching[label as usize - 1] {
                    continue;
                }
                if point_segment_distance(Point::new(x as f64, y as f64), a, b) <= band {
                    touching[label as usize - 1] = true;
                }
            }
        }
    }
    if !touching.iter().any(|&t| t) {
        return params.fallback;
    }
    let mut above = 0.0f64;
    let mut below = 0.0f64;
    for (pixels, _) in ink.pixels.iter().zip(&touching).filter(|(_, &t)| t) {
        for &(x, y) in pixels {
            let d = signed_distance(Point::new(x as f64, y as f64), &segments);
            if d > 0.0 {
                above = above.max(d);
            } else {
                below = below.max(-d);
            }
        }
    }
    let to_px = |d: f64| ((d - 1e-9).ceil().max(0.0) as usize).min(params.clamp_max);
    let (mut above, below) = (to_px(above), to_px(below));
    if above + below == 0 {
        above = 1;
    }
    LineEnvironment { above, below }
}

/// Source pixels that produced one output column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSource {
    /// Baseline pixel of this column.
    pub anchor: (i64, i64),
    /// Control point `above` pixels along the normal (row 0).
    pub top: (i64, i64),
    /// Control point `below` pixels against the normal (last row).
    pub bottom: (i64, i64),
}

#[derive(Debug, Clone)]
pub struct RectifiedLine {
    pub image: GrayImage,
    /// Row holding the baseline; always `env.above`.
    pub baseline_row: usize,
    pub source_polyline: Polyline,
    pub source_map: Vec<ColumnSource>,
}

/// Straightens the neighbourhood of `baseline` into a strip of height
/// `above + below + 1`.
///
/// The column at a baseline pixel `p` with upper unit normal `n` samples,
/// for row `r`, the pixel nearest to `p + (above - r) * n` (a digital line
/// between the two control points; for axis-aligned segments this is the
/// Bresenham line itself). Shared joints between segments contribute a
/// single column.
pub fn rectify(page: &GrayImage, baseline: &Polyline, env: LineEnvironment) -> Result<RectifiedLine> {
    let pixels = baseline.to_pixels();
    if pixels.len() < 2 {
        return Err(Error::DegeneratePolyline(pixels.len()));
    }
    let height = env.height();
    let mut columns: Vec<Vec<u8>> = Vec::new();
    let mut source_map = Vec::new();
    for (i, seg) in pixels.windows(2).enumerate() {
        let (a, b) = (seg[0], seg[1]);
        let (dx, dy) = ((b.0 - a.0) as f64, (b.1 - a.1) as f64);
        let len = dx.hypot(dy);
        let normal = (dy / len, -dx / len);
        let steps = bresenham(a, b);
        let skip = usize::from(i > 0);
        for &p in &steps[skip..] {
            let at = |offset: f64| {
                (
                    round_half_up(p.0 as f64 + offset * normal.0),
                    round_half_up(p.1 as f64 + offset * normal.1),
                )
            };
            let column: Vec<u8> = (0..height)
                .map(|r| {
                    let (x, y) = at(env.above as f64 - r as f64);
                    page.get_signed(x, y).unwrap_or(BACKGROUND)
                })
                .collect();
            columns.push(column);
            source_map.push(ColumnSource {
                anchor: p,
                top: at(env.above as f64),
                bottom: at(-(env.below as f64)),
            });
        }
    }
    let width = columns.len();
    let image = Raster::from_fn(width, height, |x, y| columns[x][y]);
    Ok(RectifiedLine {
        image,
        baseline_row: env.above,
        source_polyline: baseline.clone(),
        source_map,
    })
}

/// Number of output columns `rectify` produces for `baseline`.
pub fn strip_width(baseline: &Polyline) -> usize {
    let pixels = baseline.to_pixels();
    pixels
        .windows(2)
        .enumerate()
        .map(|(i, s)| bresenham(s[0], s[1]).len() - usize::from(i > 0))
        .sum()
}
