//! Precision / recall / F-value of detected baselines.
//!
//! Both sides are resampled at 1 px arc-length spacing. A sample is covered
//! when it lies within the tolerance of a sample of its counterpart line.
//! Lines are paired one-to-one. Precision uses the pairing that covers the
//! most predicted samples, recall the pairing that covers the most truth
//! samples (both maximum-weight bipartite matchings). Each weight can only
//! grow with the tolerance, so P, R and F are monotone in it, and swapping
//! predicted and truth transposes the weights, which swaps P and R exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

pub const METRIC_NAME: &str = "BADAM-toolkit metric";
pub const DEFAULT_TOLERANCE: f64 = 20.0;
/// Fraction of the median line gap used by [`Tolerance::Auto`].
pub const AUTO_TOLERANCE_FACTOR: f64 = 0.25;
const SAMPLE_SPACING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Fixed(f64),
    /// A quarter of the median vertical gap between consecutive truth lines.
    Auto,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::Fixed(DEFAULT_TOLERANCE)
    }
}

impl FromStr for Tolerance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Tolerance::Auto);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parameter(format!("tolerance must be a number or \"auto\", got {s:?}")))?;
        check_tolerance(v)?;
        Ok(Tolerance::Fixed(v))
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Fixed(v) => write!(f, "{v}"),
            Tolerance::Auto => f.write_str("auto"),
        }
    }
}

impl Serialize for Tolerance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tolerance::Fixed(v) => s.serialize_f64(*v),
            Tolerance::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for Tolerance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(Tolerance::Fixed(v)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Tolerance {
    /// Tolerance in pixels for a page with the given truth lines.
    pub fn resolve(&self, truth: &[Polyline]) -> f64 {
        match *self {
            Tolerance::Fixed(v) => v,
            Tolerance::Auto => {
                let mut ys: Vec<f64> = truth.iter().map(|l| l.mean().y).collect();
                ys.sort_by(f64::total_cmp);
                // lines sharing a row (columns) are not vertically separated
                let mut gaps: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).filter(|&g| g >= 1.0).collect();
                if gaps.is_empty() {
                    return DEFAULT_TOLERANCE;
                }
                gaps.sort_by(f64::total_cmp);
                let n = gaps.len();
                let median = if n % 2 == 1 {
                    gaps[n / 2]
                } else {
                    0.5 * (gaps[n / 2 - 1] + gaps[n / 2])
                };
                AUTO_TOLERANCE_FACTOR * median
            }
        }
    }
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance > 0.0 && tolerance.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tolerance must be positive, got {tolerance}")))
    }
}

/// One truth/prediction pairing with the samples each side has covered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineMatch {
    pub truth: usize,
    pub predicted: usize,
    pub covered_truth: usize,
    pub covered_predicted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageScore {
    pub precision: f64,
    pub recall: f64,
    pub f_value: f64,
    /// Pairing behind the precision value, by truth index.
    pub precision_matches: Vec<LineMatch>,
    /// Pairing behind the recall value, by truth index.
    pub recall_matches: Vec<LineMatch>,
}

pub fn f_value(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Uniform grid over one line's samples for radius queries.
struct SampleIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<Point>>,
    min: Point,
    max: Point,
}

impl SampleIndex {
    fn new(samples: &[Point], cell: f64) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<Point>> = HashMap::new();
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &p in samples {
            cells.entry(Self::key(p, cell)).or_default().push(p);
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        Self { cell, cells, min, max }
    }

    fn key(p: Point, cell: f64) -> (i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    fn near(&self, other: &SampleIndex, tolerance: f64) -> bool {
        self.min.x - tolerance <= other.max.x
            && other.min.x - tolerance <= self.max.x
            && self.min.y - tolerance <= other.max.y
            && other.min.y - tolerance <= self.max.y
    }

    fn any_within(&self, p: Point, tolerance_sq: f64) -> bool {
        let (cx, cy) = Self::key(p, self.cell);
        (cy - 1..=cy + 1).any(|y| {
            (cx - 1..=cx + 1).any(|x| {
                self.cells
                    .get(&(x, y))
                    .is_some_and(|pts| pts.iter().any(|q| q.distance_sq(p) <= tolerance_sq))
            })
        })
    }

    fn covered(&self, samples: &[Point], tolerance_sq: f64) -> usize {
        samples.iter().filter(|&&p| self.any_within(p, tolerance_sq)).count()
    }
}

/// Column assigned to each row by a maximum-weight assignment
/// (Kuhn-Munkres with potentials); requires `rows <= columns`.
fn assign_rows(weight: impl Fn(usize, usize) -> i64, rows: usize, columns: usize) -> Vec<usize> {
    const INF: i64 = i64::MAX / 4;
    // 1-based; row 0 / column 0 are sentinels
    let mut u = vec![0i64; rows + 1];
    let mut v = vec![0i64; columns + 1];
    let mut owner = vec![0usize; columns + 1];
    let mut way = vec![0usize; columns + 1];
    for row in 1..=rows {
        owner[0] = row;
        let mut j0 = 0;
        let mut min_slack = vec![INF; columns + 1];
        let mut used = vec![false; columns + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=columns {
                if used[j] {
                    continue;
                }
                let slack = -weight(i0 - 1, j - 1) - u[i0] - v[j];
                if slack < min_slack[j] {
                    min_slack[j] = slack;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=columns {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        while j0 != 0 {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        }
    }
    let mut assigned = vec![0; rows];
    for j in 1..=columns {
        if owner[j] != 0 {
            assigned[owner[j] - 1] = j - 1;
        }
    }
    assigned
}

/// Maximum-weight one-to-one pairing of truth lines (rows) and predictions
/// (columns); only pairs with positive weight are returned.
fn best_pairing(weights: &[Vec<i64>], columns: usize) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let pairs: Vec<(usize, usize)> = if rows <= columns {
        assign_rows(|r, c| weights[r][c], rows, columns)
            .into_iter()
            .enumerate()
            .collect()
    } else {
        assign_rows(|c, r| weights[r][c], columns, rows)
            .into_iter()
            .enumerate()
            .map(|(c, r)| (r, c))
            .collect()
    };
    pairs.into_iter().filter(|&(r, c)| weights[r][c] > 0).collect()
}

pub fn evaluate_page(predicted: &[Polyline], truth: &[Polyline], tolerance: f64) -> Result<PageScore> {
    check_tolerance(tolerance)?;
    if truth.is_empty() && predicted.is_empty() {
        return Ok(PageScore {
            precision: 1.0,
            recall: 1.0,
            f_value: 1.0,
            precision_matches: Vec::new(),
            recall_matches: Vec::new(),
        });
    }
    if truth.is_empty() || predicted.is_empty() {
        return Ok(PageScore {
            precision: 0.0,
            recall: 0.0,
            f_value: 0.0,
            precision_matches: Vec::new(),
            recall_matches: Vec::new(),
        });
    }

    let resample =
        |lines: &[Polyline]| -> Vec<Vec<Point>> { lines.iter().map(|l| l.resample(SAMPLE_SPACING)).collect() };
    let truth_samples = resample(truth);
    let pred_samples = resample(predicted);
    let truth_index: Vec<SampleIndex> = truth_samples.iter().map(|s| SampleIndex::new(s, tolerance)).collect();
    let pred_index: Vec<SampleIndex> = pred_samples.iter().map(|s| SampleIndex::new(s, tolerance)).collect();
    let tol_sq = tolerance * tolerance;

    let (nt, np) = (truth.len(), predicted.len());
    let mut covered_pred = vec![vec![0i64; np]; nt];
    let mut covered_truth = vec![vec![0i64; np]; nt];
    for (ti, t_idx) in truth_index.iter().enumerate() {
        for (pi, p_idx) in pred_index.iter().enumerate() {
            if t_idx.near(p_idx, tolerance) {
                covered_pred[ti][pi] = t_idx.covered(&pred_samples[pi], tol_sq) as i64;
                covered_truth[ti][pi] = p_idx.covered(&truth_samples[ti], tol_sq) as i64;
            }
        }
    }
    let to_matches = |pairs: Vec<(usize, usize)>| -> Vec<LineMatch> {
        let mut out: Vec<LineMatch> = pairs
            .into_iter()
            .map(|(t, p)| LineMatch {
                truth: t,
                predicted: p,
                covered_truth: covered_truth[t][p] as usize,
                covered_predicted: covered_pred[t][p] as usize,
            })
            .collect();
        out.sort_by_key(|m| m.truth);
        out
    };
    let precision_matches = to_matches(best_pairing(&covered_pred, np));
    let recall_matches = to_matches(best_pairing(&covered_truth, np));

    let total_pred: usize = pred_samples.iter().map(Vec::len).sum();
    let total_truth: usize = truth_samples.iter().map(Vec::len).sum();
    let precision = precision_matches.iter().map(|m| m.covered_predicted).sum::<usize>() as f64 / total_pred as f64;
    let recall = recall_matches.iter().map(|m| m.covered_truth).sum::<usize>() as f64 / total_truth as f64;
    Ok(PageScore {
        precision,
        recall,
        f_value: f_value(precision, recall),
        precision_matches,
        recall_matches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageReport {
    pub id: String,
    pub tolerance: f64,
    #[serde(flatten)]
    pub score: PageScore,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub precision: f64,
    pub recall: f64,
    pub f_value: f64,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub metric: String,
    pub tolerance: Tolerance,
    /// Unweighted means of the per-page values.
    pub aggregate: Aggregate,
    pub per_page: Vec<PageReport>,
}

/// Scores every page; both maps must hold the same page ids.
pub fn evaluate_set(
    predicted: &BTreeMap<String, Vec<Polyline>>,
    truth: &BTreeMap<String, Vec<Polyline>>,
    tolerance: Tolerance,
) -> Result<EvalReport> {
    if let Tolerance::Fixed(v) = tolerance {
        check_tolerance(v)?;
    }
    let missing: Vec<String> = truth.keys().filter(|k| !predicted.contains_key(*k)).cloned().collect();
    let unexpected: Vec<String> = predicted.keys().filter(|k| !truth.contains_key(*k)).cloned().collect();
    if !missing.is_empty() || !unexpected.is_empty() {
        return Err(Error::PageMismatch { missing, unexpected });
    }
    let pages: Vec<(&String, &Vec<Polyline>)> = truth.iter().collect();
    let per_page = pages
        .par_iter()
        .map(|(id, truth_lines)| {
            let tol = tolerance.resolve(truth_lines);
            let score = evaluate_page(&predicted[*id], truth_lines, tol)?;
            Ok(PageReport {
                id: (*id).clone(),
                tolerance: tol,
                score,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = per_page.len().max(1) as f64;
    let mean = |f: fn(&PageScore) -> f64| per_page.iter().map(|p| f(&p.score)).sum::<f64>() / n;
    let aggregate = if per_page.is_empty() {
        Aggregate {
            precision: 1.0,
            recall: 1.0,
            f_value: 1.0,
        }
    } else {
        Aggregate {
            precision: mean(|s| s.precision),
            recall: mean(|s| s.recall),
            f_value: mean(|s| s.f_value),
        }
    };
    Ok(EvalReport {
        schema_version: REPORT_SCHEMA_VERSION,
        metric: METRIC_NAME.to_string(),
        tolerance,
        aggregate,
        per_page,
    })
}
