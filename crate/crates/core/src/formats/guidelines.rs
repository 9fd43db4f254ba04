//! Mechanical checks of baseline annotations.

use serde::{Deserialize, Serialize};

use super::Page;
use crate::geometry::{segments_intersect, Point, Polyline};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// A baseline needs at least two distinct points.
    #[serde(rename = "a-min-points")]
    MinPoints,
    #[serde(rename = "b-self-intersection")]
    SelfIntersection,
    /// Two baselines whose resampled points lie within 1 px of each other.
    #[serde(rename = "c-duplicate")]
    Duplicate,
    /// A segment heading more than 90 degrees away from the line's overall
    /// direction (first to last point).
    #[serde(rename = "d-doubling-back")]
    DoublingBack,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::MinPoints => "a-min-points",
            Rule::SelfIntersection => "b-self-intersection",
            Rule::Duplicate => "c-duplicate",
            Rule::DoublingBack => "d-doubling-back",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub page_id: String,
    pub line: usize,
    pub rule: Rule,
    pub message: String,
}

fn distinct_points(line: &Polyline) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for &p in line.points() {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out
}

/// Index pair of the first crossing between non-adjacent segments.
///
/// Segments are swept in order of their left x; only pairs with overlapping
/// x-ranges are tested. In a closed line the first and last segment share the
/// closing vertex and count as adjacent.
pub(crate) fn self_intersection(points: &[Point]) -> Option<(usize, usize)> {
    let n = points.len().saturating_sub(1);
    if n < 3 {
        return None;
    }
    let closed = points[0] == points[n];
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |i: usize| points[i].x.min(points[i + 1].x);
    let max_x = |i: usize| points[i].x.max(points[i + 1].x);
    order.sort_by(|&a, &b| min_x(a).total_cmp(&min_x(b)).then(a.cmp(&b)));
    let mut found: Option<(usize, usize)> = None;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if min_x(j) > max_x(i) {
                break;
            }
            let (a, b) = (i.min(j), i.max(j));
            if b - a == 1 || (closed && a == 0 && b == n - 1) {
                continue;
            }
            if segments_intersect(points[a], points[a + 1], points[b], points[b + 1]) {
                found = Some(found.map_or((a, b), |f| f.min((a, b))));
            }
        }
    }
    found
}

fn is_duplicate(a: &[Point], b: &[Point]) -> bool {
    let within = |p: &Point, set: &[Point]| set.iter().any(|q| q.distance_sq(*p) < 1.0);
    a.iter().all(|p| within(p, b)) && b.iter().all(|p| within(p, a))
}

fn doubling_back(points: &[Point]) -> Option<usize> {
    let (first, last) = (points[0], points[points.len() - 1]);
    let (dx, dy) = (last.x - first.x, last.y - first.y);
    if dx == 0.0 && dy == 0.0 {
        return None;
    }
    points
        .windows(2)
        .position(|w| (w[1].x - w[0].x) * dx + (w[1].y - w[0].y) * dy < 0.0)
}

/// Runs every rule over the page's baselines.
pub fn validate_guidelines(page: &Page) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut push = |line: usize, rule: Rule, message: String| {
        findings.push(Finding {
            page_id: page.id.clone(),
            line,
            rule,
            message,
        })
    };
    let lines: Vec<Vec<Point>> = page.baselines.iter().map(distinct_points).collect();
    for (i, pts) in lines.iter().enumerate() {
        if pts.len() < 2 {
            push(
                i,
                Rule::MinPoints,
                format!("baseline has {} distinct point(s)", pts.len()),
            );
            continue;
        }
        if let Some((a, b)) = self_intersection(pts) {
            push(i, Rule::SelfIntersection, format!("segments {a} and {b} intersect"));
        }
        if let Some(s) = doubling_back(pts) {
            push(
                i,
                Rule::DoublingBack,
                format!("segment {s} runs against the line direction"),
            );
        }
    }
    let samples: Vec<Option<Vec<Point>>> = lines
        .iter()
        .map(|pts| (pts.len() >= 2).then(|| Polyline::from_points_unchecked(pts.clone()).resample(1.0)))
        .collect();
    for j in 0..samples.len() {
        let Some(sj) = &samples[j] else { continue };
        if let Some(i) = (0..j).find(|&i| samples[i].as_ref().is_some_and(|si| is_duplicate(si, sj))) {
            push(j, Rule::Duplicate, format!("duplicates baseline {i}"));
        }
    }
    findings.sort_by_key(|f| (f.line, f.rule));
    findings
}
