//! Deterministic synthetic pages with known baselines.
//!
//! A page is a set of baselines laid out in rows, an ideal heatmap
//! `exp(-d^2 / 2 sigma^2)` of the distance `d` to the nearest baseline
//! (optionally with clamped Gaussian noise), and a grayscale page image with
//! word-like ink blocks resting on each baseline.
//!
//! Page `i` of a set draws its geometry from ChaCha stream `2i` and its noise
//! from stream `2i + 1` of the seed, so pages can be generated in any order
//! or in parallel, and adding noise leaves the geometry untouched.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::Page;
use crate::geometry::{point_segment_distance_sq, round_half_up, Point, Polyline};
use crate::raster::{GrayImage, Heatmap, Raster};

const MARGIN: usize = 40;
const GUTTER: f64 = 80.0;
const BACKGROUND: u8 = 232;
const INK: u8 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Horizontal,
    Sloped,
    Sinusoidal,
    /// Two horizontal lines per row, separated by a gutter.
    TwoColumn,
    /// A single closed circular baseline.
    Ring,
    /// Horizontal, sloped and sinusoidal lines chosen per line.
    Mixed,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "horizontal" => Family::Horizontal,
            "sloped" => Family::Sloped,
            "sinusoidal" => Family::Sinusoidal,
            "two-column" => Family::TwoColumn,
            "ring" => Family::Ring,
            "mixed" => Family::Mixed,
            other => return Err(Error::Parameter(format!("unknown line family {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub min_lines: usize,
    pub max_lines: usize,
    pub family: Family,
    pub stroke_width: usize,
    /// Cross-section sigma of the ideal heatmap.
    pub heatmap_sigma: f64,
    /// Standard deviation of the additive heatmap noise; 0 disables it.
    pub noise_sigma: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            width: 900,
            height: 1100,
            min_lines: 5,
            max_lines: 40,
            family: Family::Mixed,
            stroke_width: 3,
            heatmap_sigma: 2.0,
            noise_sigma: 0.0,
        }
    }
}

impl SynthSpec {
    /// Smallest allowed vertical distance between neighbouring baselines.
    pub fn min_gap(&self) -> f64 {
        ((3 * self.stroke_width) as f64).max(6.0 * self.heatmap_sigma)
    }

    /// Rejects specs that cannot produce a page.
    pub fn check(&self) -> Result<()> {
        if self.min_lines > self.max_lines {
            return Err(Error::Infeasible(format!(
                "line range {}..={} is empty",
                self.min_lines, self.max_lines
            )));
        }
        if self.width <= 4 * MARGIN || self.height <= 2 * MARGIN {
            return Err(Error::Infeasible(format!(
                "page {}x{} leaves no room inside the {MARGIN} px margins",
                self.width, self.height
            )));
        }
        if self.stroke_width == 0
            || self.heatmap_sigma.is_nan()
            || self.heatmap_sigma <= 0.0
            || self.noise_sigma.is_nan()
            || self.noise_sigma < 0.0
        {
            return Err(Error::Parameter(
                "stroke width and heatmap sigma must be positive, noise sigma non-negative".into(),
            ));
        }
        let usable = (self.height - 2 * MARGIN) as f64;
        if self.max_lines > 0 && usable / (self.max_lines as f64) < self.min_gap() {
            return Err(Error::Infeasible(format!(
                "{} lines do not fit into {usable} px with a {} px gap",
                self.max_lines,
                self.min_gap()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthPage {
    pub page: Page,
    pub heatmap: Heatmap,
    pub image: GrayImage,
}

pub fn page_id(index: u64) -> String {
    format!("page_{index:04}")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// First page of `spec`.
pub fn generate(spec: &SynthSpec) -> Result<SynthPage> {
    generate_page(spec, 0)
}

/// Pages `0..count`, generated in parallel.
pub fn generate_set(spec: &SynthSpec, count: u64) -> Result<Vec<SynthPage>> {
    (0..count).into_par_iter().map(|i| generate_page(spec, i)).collect()
}

pub fn generate_page(spec: &SynthSpec, index: u64) -> Result<SynthPage> {
    spec.check()?;
    let mut rng = rng_for(spec.seed, 2 * index);
    let (baselines, x_height) = layout(spec, &mut rng);
    let id = page_id(index);
    let mut page = Page::new(id.clone(), format!("{id}.png"), spec.width, spec.height);
    page.baselines = baselines;

    let mut heatmap = render_heatmap(&page, spec.heatmap_sigma);
    if spec.noise_sigma > 0.0 {
        let mut noise_rng = rng_for(spec.seed, 2 * index + 1);
        let normal = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::Parameter(format!("noise sigma: {e}")))?;
        for v in heatmap.data_mut() {
            *v = (*v + normal.sample(&mut noise_rng)).clamp(0.0, 1.0);
        }
    }
    let image = render_image(&page, x_height, &mut rng);
    Ok(SynthPage {
        page,
        heatmap: Heatmap::from_raster(heatmap)?,
        image,
    })
}

fn layout(spec: &SynthSpec, rng: &mut ChaCha8Rng) -> (Vec<Polyline>, f64) {
    let (w, h) = (spec.width as f64, spec.height as f64);
    let margin = MARGIN as f64;
    if spec.family == Family::Ring {
        let centre = Point::new((w / 2.0).round(), (h / 2.0).round());
        let radius = (w.min(h) / 2.0 - margin) * rng.random_range(0.5..0.8);
        let n = 72;
        let points: Vec<Point> = (0..=n)
            .map(|i| {
                let t = (i % n) as f64 / n as f64 * TAU;
                Point::new(centre.x + radius * t.cos(), centre.y + radius * t.sin())
            })
            .collect();
        let line = Polyline::new(points).expect("ring has distinct consecutive points");
        return (vec![line], 14.0);
    }

    let count = rng.random_range(spec.min_lines..=spec.max_lines);
    if count == 0 {
        return (Vec::new(), 10.0);
    }
    let pitch = (h - 2.0 * margin) / count as f64;
    let extent = pitch - spec.min_gap();
    let x_height = (0.4 * pitch).min(16.0);
    let mut lines = Vec::new();
    for k in 0..count {
        let yc = margin + (k as f64 + 0.5) * pitch;
        let family = match spec.family {
            Family::Mixed => [Family::Horizontal, Family::Sloped, Family::Sinusoidal][rng.random_range(0..3)],
            f => f,
        };
        let x0 = (margin + rng.random_range(0.0..40.0)).round();
        let x1 = (w - margin - rng.random_range(0.0..40.0)).round();
        match family {
            Family::TwoColumn => {
                let y = yc.round();
                let mid = (w / 2.0).round();
                let a = Polyline::new(vec![Point::new(x0, y), Point::new(mid - GUTTER / 2.0, y)]);
                let b = Polyline::new(vec![Point::new(mid + GUTTER / 2.0, y), Point::new(x1, y)]);
                lines.extend([a, b].into_iter().map(|l| l.expect("columns are non-degenerate")));
            }
            Family::Horizontal => {
                let y = yc.round();
                lines.push(Polyline::new(vec![Point::new(x0, y), Point::new(x1, y)]).expect("non-degenerate"));
            }
            Family::Sloped => {
                let rise = rng.random_range(-1.0..1.0) * extent.min(0.15 * (x1 - x0));
                lines.push(
                    Polyline::new(vec![Point::new(x0, yc - rise / 2.0), Point::new(x1, yc + rise / 2.0)])
                        .expect("non-degenerate"),
                );
            }
            Family::Sinusoidal => {
                let amplitude = rng.random_range(0.3..1.0) * (extent / 2.0).min(10.0);
                let period = rng.random_range(150.0..400.0);
                let phase = rng.random_range(0.0..TAU);
                let steps = ((x1 - x0) / 8.0).ceil() as usize;
                let points = (0..=steps)
                    .map(|i| {
                        let x = x0 + (x1 - x0) * i as f64 / steps as f64;
                        Point::new(x, yc + amplitude * (TAU * x / period + phase).sin())
                    })
                    .collect();
                lines.push(Polyline::new(points).expect("non-degenerate"));
            }
            Family::Ring | Family::Mixed => unreachable!(),
        }
    }
    (lines, x_height)
}

fn render_heatmap(page: &Page, sigma: f64) -> Raster<f64> {
    let (w, h) = (page.width, page.height);
    let reach = (5.0 * sigma).ceil();
    let mut dist_sq = Raster::filled(w, h, f64::INFINITY);
    for line in &page.baselines {
        for (a, b) in line.segments() {
            let x0 = ((a.x.min(b.x) - reach).floor().max(0.0)) as usize;
            let y0 = ((a.y.min(b.y) - reach).floor().max(0.0)) as usize;
            let x1 = ((a.x.max(b.x) + reach).ceil() as usize).min(w - 1);
            let y1 = ((a.y.max(b.y) + reach).ceil() as usize).min(h - 1);
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let d = point_segment_distance_sq(Point::new(x as f64, y as f64), a, b);
                    let cell = &mut dist_sq.data_mut()[y * w + x];
                    if d < *cell {
                        *cell = d;
                    }
                }
            }
        }
    }
    let limit = reach * reach;
    let denom = 2.0 * sigma * sigma;
    dist_sq.map(|d| if d <= limit { (-d / denom).exp() } else { 0.0 })
}

/// Light background with word-like ink blocks of height `x_height` on the upper side of
/// every baseline.
fn render_image(page: &Page, x_height: f64, rng: &mut ChaCha8Rng) -> GrayImage {
    let mut img = Raster::filled(page.width, page.height, BACKGROUND);
    for line in &page.baselines {
        let mut in_word = true;
        let mut remaining = rng.random_range(20.0..80.0);
        for (a, b) in line.segments() {
            let len = a.distance(b);
            let (ux, uy) = ((b.x - a.x) / len, (b.y - a.y) / len);
            // upper normal
            let (nx, ny) = (uy, -ux);
            let mut s = 0.0;
            while s < len {
                if in_word {
                    let base = Point::new(a.x + s * ux, a.y + s * uy);
                    let mut t = 0.0;
                    while t <= x_height {
                        let (x, y) = (round_half_up(base.x + t * nx), round_half_up(base.y + t * ny));
                        if img.contains(x, y) {
                            img.set(x as usize, y as usize, INK);
                        }
                        t += 0.5;
                    }
                }
                s += 0.5;
                remaining -= 0.5;
                if remaining <= 0.0 {
                    in_word = !in_word;
                    remaining = if in_word {
                        rng.random_range(20.0..80.0)
                    } else {
                        rng.random_range(6.0..16.0)
                    };
                }
            }
        }
    }
    img
}
