//! Vectorization of a binarized baseline mask.
//!
//! Each skeleton component is treated as a pixel graph. The baseline is the
//! shortest path between the two skeleton end points that lie furthest apart
//! along the skeleton, simplified with Douglas-Peucker.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Point, Polyline};
use crate::raster::{
    gaussian_smooth, hysteresis_threshold, label_components, skeletonize, BinaryMask, Heatmap, NEIGHBORS_8,
};

pub const DEFAULT_SIGMA: f64 = 1.5;
pub const DEFAULT_T_LOW: f64 = 0.3;
pub const DEFAULT_T_HIGH: f64 = 0.5;
pub const DEFAULT_EPSILON: f64 = 3.0;
pub const DEFAULT_MIN_LENGTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractParams {
    /// Douglas-Peucker tolerance in pixels.
    pub epsilon: f64,
    /// Components whose diameter path has fewer edges are dropped.
    pub min_length: usize,
}

impl Default for ExtractParams {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            min_length: DEFAULT_MIN_LENGTH,
        }
    }
}

/// Parameters of the full heatmap to polyline pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectParams {
    pub sigma: f64,
    pub t_low: f64,
    pub t_high: f64,
    pub extract: ExtractParams,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            sigma: DEFAULT_SIGMA,
            t_low: DEFAULT_T_LOW,
            t_high: DEFAULT_T_HIGH,
            extract: ExtractParams::default(),
        }
    }
}

/// Foreground pixels with exactly one foreground 8-neighbour, in raster order.
///
/// Computed as a 3x3 convolution whose centre weight (10) separates the pixel
/// itself from its neighbours (1 each): end points respond with exactly 11.
pub fn find_endpoints(skeleton: &BinaryMask) -> Vec<(usize, usize)> {
    const CENTER: u32 = 10;
    let mut out = Vec::new();
    for y in 0..skeleton.height() {
        for x in 0..skeleton.width() {
            let mut response = if skeleton.get(x, y) { CENTER } else { 0 };
            for (dx, dy) in NEIGHBORS_8 {
                if skeleton.get_signed(x as i64 + dx, y as i64 + dy) == Some(true) {
                    response += 1;
                }
            }
            if response == CENTER + 1 {
                out.push((x, y));
            }
        }
    }
    out
}

/// Pixels of a skeleton as graph nodes joined by 8-neighbour edges.
#[derive(Debug, Clone)]
pub struct SkeletonGraph {
    nodes: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    endpoints: Vec<usize>,
}

impl SkeletonGraph {
    pub fn from_pixels(pixels: &[(usize, usize)]) -> Self {
        let mut nodes = pixels.to_vec();
        nodes.sort_unstable_by_key(|&(x, y)| (y, x));
        nodes.dedup();
        let index: HashMap<(usize, usize), usize> = nodes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let adjacency: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&(x, y)| {
                NEIGHBORS_8
                    .iter()
                    .filter_map(|(dx, dy)| {
                        let nx = x.checked_add_signed(*dx as isize)?;
                        let ny = y.checked_add_signed(*dy as isize)?;
                        index.get(&(nx, ny)).copied()
                    })
                    .collect()
            })
            .collect();
        let endpoints = (0..nodes.len()).filter(|&i| adjacency[i].len() == 1).collect();
        Self {
            nodes,
            adjacency,
            endpoints,
        }
    }

    pub fn from_mask(mask: &BinaryMask) -> Self {
        Self::from_pixels(&mask.foreground().collect::<Vec<_>>())
    }

    /// Nodes in raster order.
    pub fn nodes(&self) -> &[(usize, usize)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn endpoint_indices(&self) -> &[usize] {
        &self.endpoints
    }

    pub fn endpoints(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.endpoints.iter().map(|&i| self.nodes[i])
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.is_empty() || self.bfs(0).0.iter().all(|&d| d != u32::MAX)
    }

    /// Hop distances from `start` (`u32::MAX` if unreachable) and BFS parents.
    pub fn bfs(&self, start: usize) -> (Vec<u32>, Vec<usize>) {
        let mut dist = vec![u32::MAX; self.nodes.len()];
        let mut parent = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::from([start]);
        dist[start] = 0;
        while let Some(n) = queue.pop_front() {
            for &m in &self.adjacency[n] {
                if dist[m] == u32::MAX {
                    dist[m] = dist[n] + 1;
                    parent[m] = n;
                    queue.push_back(m);
                }
            }
        }
        (dist, parent)
    }

    fn path(&self, start: usize, end: usize) -> Vec<(usize, usize)> {
        let (_, parent) = self.bfs(start);
        let mut path = vec![self.nodes[end]];
        let mut n = end;
        while n != start {
            n = parent[n];
            path.push(self.nodes[n]);
        }
        path.reverse();
        path
    }

    fn farthest(&self, start: usize) -> usize {
        let (dist, _) = self.bfs(start);
        // first node in raster order among the farthest
        let max = dist.iter().copied().filter(|&d| d != u32::MAX).max().unwrap_or(0);
        dist.iter().position(|&d| d == max).unwrap_or(start)
    }
}

/// Longest geodesic path between skeleton end points.
///
/// Among all end point pairs the one with the largest hop distance wins;
/// ties go to the larger straight-line distance, then to the
/// lexicographically smallest `(x, y)` start (and end). The path runs from
/// the smaller to the larger end point. Components without two end points
/// (closed loops) fall back to a double BFS from the sole end point, or from
/// the first node in raster order.
pub fn diameter_path(graph: &SkeletonGraph) -> Result<Vec<(usize, usize)>> {
    if graph.len() < 2 {
        return Err(Error::PathTooShort(graph.len()));
    }
    let ends = graph.endpoint_indices();
    if ends.len() < 2 {
        let seed = ends.first().copied().unwrap_or(0);
        let u = if ends.is_empty() { graph.farthest(seed) } else { seed };
        let v = graph.farthest(u);
        return Ok(graph.path(u, v));
    }

    struct Best {
        hops: u32,
        euclid_sq: usize,
        start: usize,
        end: usize,
    }
    let mut best: Option<Best> = None;
    for (i, &a) in ends.iter().enumerate() {
        let (dist, _) = graph.bfs(a);
        for &b in &ends[i + 1..] {
            let hops = dist[b];
            if hops == u32::MAX {
                continue;
            }
            let (pa, pb) = (graph.nodes[a], graph.nodes[b]);
            let (start, end) = if pa <= pb { (a, b) } else { (b, a) };
            let euclid_sq = pa.0.abs_diff(pb.0).pow(2) + pa.1.abs_diff(pb.1).pow(2);
            let better = match &best {
                None => true,
                Some(cur) => {
                    hops.cmp(&cur.hops)
                        .then(euclid_sq.cmp(&cur.euclid_sq))
                        .then_with(|| graph.nodes[cur.start].cmp(&graph.nodes[start]))
                        .then_with(|| graph.nodes[cur.end].cmp(&graph.nodes[end]))
                        == Ordering::Greater
                }
            };
            if better {
                best = Some(Best {
                    hops,
                    euclid_sq,
                    start,
                    end,
                });
            }
        }
    }
    let best = best.expect("at least two end points in a connected component");
    Ok(graph.path(best.start, best.end))
}

/// Douglas-Peucker simplification.
///
/// A point is kept when its distance to the current chord (as a segment)
/// exceeds `epsilon`; the farthest point, first on ties, splits the chord.
pub fn vectorize(path: &[Point], epsilon: f64) -> Result<Polyline> {
    if path.len() < 2 {
        return Err(Error::PathTooShort(path.len()));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Parameter(format!(
            "simplification epsilon must be >= 0, got {epsilon}"
        )));
    }
    let mut keep = vec![false; path.len()];
    keep[0] = true;
    keep[path.len() - 1] = true;
    let mut stack = vec![(0, path.len() - 1)];
    while let Some((first, last)) = stack.pop() {
        if last <= first + 1 {
            continue;
        }
        let (a, b) = (path[first], path[last]);
        let mut split = first;
        let mut max = -1.0;
        for (i, &p) in path.iter().enumerate().take(last).skip(first + 1) {
            let d = point_segment_distance(p, a, b);
            if d > max {
                max = d;
                split = i;
            }
        }
        if max > epsilon {
            keep[split] = true;
            stack.push((split, last));
            stack.push((first, split));
        }
    }
    let mut points: Vec<Point> = Vec::new();
    for (p, _) in path.iter().zip(&keep).filter(|(_, &k)| k) {
        if points.last() != Some(p) {
            points.push(*p);
        }
    }
    Polyline::new(points)
}

pub fn pixels_to_points(pixels: &[(usize, usize)]) -> Vec<Point> {
    pixels.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect()
}

/// Skeletonizes `mask` and returns one polyline per skeleton component that
/// survives the length filter, ordered top to bottom by mean y, then left to
/// right by mean x (means over the component's diameter path).
pub fn extract_baselines(mask: &BinaryMask, params: &ExtractParams) -> Vec<Polyline> {
    let skeleton = skeletonize(mask);
    let components = label_components(&skeleton).pixels();
    let mut lines: Vec<(f64, f64, Polyline)> = components
        .par_iter()
        .filter_map(|pixels| {
            let graph = SkeletonGraph::from_pixels(pixels);
            let path = diameter_path(&graph).ok()?;
            if path.len() - 1 < params.min_length {
                return None;
            }
            let n = path.len() as f64;
            let mean_x = path.iter().map(|p| p.0 as f64).sum::<f64>() / n;
            let mean_y = path.iter().map(|p| p.1 as f64).sum::<f64>() / n;
            let line = vectorize(&pixels_to_points(&path), params.epsilon).ok()?;
            Some((mean_y, mean_x, line))
        })
        .collect();
    lines.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    lines.into_iter().map(|(_, _, l)| l).collect()
}

/// Heatmap to polylines: smoothing, hysteresis, then [`extract_baselines`].
pub fn detect(heatmap: &Heatmap, params: &DetectParams) -> Result<Vec<Polyline>> {
    let smoothed = gaussian_smooth(heatmap, params.sigma)?;
    let mask = hysteresis_threshold(&smoothed, params.t_low, params.t_high)?;
    if params.extract.epsilon.is_nan() || params.extract.epsilon < 0.0 {
        return Err(Error::Parameter(format!(
            "simplification epsilon must be >= 0, got {}",
            params.extract.epsilon
        )));
    }
    Ok(extract_baselines(&mask, &params.extract))
}
