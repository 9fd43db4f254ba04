//! Points, polylines and the small amount of plane geometry the pipeline needs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    /// Nearest pixel, rounding halves towards +infinity.
    pub fn to_pixel(self) -> (i64, i64) {
        (round_half_up(self.x), round_half_up(self.y))
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

pub fn round_half_up(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// An ordered list of points describing one baseline.
///
/// [`Polyline::new`] enforces at least two points and no identical
/// consecutive points. Polylines read from annotation files may violate
/// that (see [`Polyline::from_points_unchecked`]); guideline validation
/// reports them instead of rejecting the page.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegeneratePolyline(points.len()));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::RepeatedPoint(i + 1));
        }
        Ok(Self { points })
    }

    pub fn from_points_unchecked(points: Vec<Point>) -> Self {
        Self { points }
    }

    /// Builds a polyline from pixel coordinates.
    pub fn from_pixels(pixels: &[(i64, i64)]) -> Result<Self> {
        Self::new(pixels.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.points.len() >= 2 && self.points.windows(2).all(|w| w[0] != w[1])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn mean(&self) -> Point {
        let n = self.points.len().max(1) as f64;
        let (sx, sy) = self.points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point::new(sx / n, sy / n)
    }

    /// Distance from `p` to the closest point of the polyline.
    pub fn distance_to(&self, p: Point) -> f64 {
        match self.points.len() {
            0 => f64::INFINITY,
            1 => p.distance(self.points[0]),
            _ => self
                .segments()
                .map(|(a, b)| point_segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Samples the polyline at `spacing` arc-length steps, starting at the
    /// first point. The last point is always included.
    pub fn resample(&self, spacing: f64) -> Vec<Point> {
        debug_assert!(spacing > 0.0);
        let Some(&first) = self.points.first() else {
            return Vec::new();
        };
        let mut out = vec![first];
        // distance still to travel before the next sample
        let mut pending = spacing;
        for (a, b) in self.segments() {
            let seg = a.distance(b);
            if seg == 0.0 {
                continue;
            }
            let mut pos = 0.0;
            while seg - pos >= pending {
                pos += pending;
                let t = pos / seg;
                out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
                pending = spacing;
            }
            pending -= seg - pos;
        }
        let last = *self.points.last().unwrap();
        if out.last().is_some_and(|p| p.distance(last) > 1e-9) {
            out.push(last);
        }
        out
    }

    /// Rounds each point to the nearest pixel and drops the consecutive
    /// repeats rounding may create.
    pub fn to_pixels(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let px = p.to_pixel();
            if out.last() != Some(&px) {
                out.push(px);
            }
        }
        out
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    point_segment_distance_sq(p, a, b).sqrt()
}

pub fn point_segment_distance_sq(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len_sq = dx * dx + dy * dy;
    if len_sq == 0.0 {
        return p.distance_sq(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq).clamp(0.0, 1.0);
    p.distance_sq(Point::new(a.x + t * dx, a.y + t * dy))
}

fn orientation(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test; touching and collinear overlap count.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Integer line rasterization between two pixels, endpoints included.
pub fn bresenham(from: (i64, i64), to: (i64, i64)) -> Vec<(i64, i64)> {
    let (mut x, mut y) = from;
    let dx = (to.0 - x).abs();
    let dy = -(to.1 - y).abs();
    let sx = if x < to.0 { 1 } else { -1 };
    let sy = if y < to.1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        out.push((x, y));
        if (x, y) == to {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    out
}
