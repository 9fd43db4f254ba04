//! Pixel-level primitives: rasters, smoothing, thresholding, thinning and
//! connected components.
//!
//! All operations are pure functions of their inputs. Connectivity is
//! 8-connected throughout.

mod components;
mod hysteresis;
mod sauvola;
mod smooth;
mod thinning;

pub use components::{label_components, ComponentLabels};
pub use hysteresis::hysteresis_threshold;
pub use sauvola::{sauvola_binarize, SAUVOLA_DYNAMIC_RANGE, SAUVOLA_K, SAUVOLA_WINDOW};
pub use smooth::{gaussian_kernel, gaussian_smooth};
pub use thinning::{is_simple, skeletonize};

use crate::error::{Error, Result};

/// Row-major 2-D grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

pub type BinaryMask = Raster<bool>;
pub type GrayImage = Raster<u8>;

/// The 8-neighbourhood offsets in raster order.
pub const NEIGHBORS_8: [(i64, i64); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

impl<T: Copy> Raster<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Dimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be positive");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "raster dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.data[y * self.width + x] = value;
    }

    /// Value at signed coordinates, `None` outside the raster.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> Option<T> {
        self.contains(x, y).then(|| self.get(x as usize, y as usize))
    }

    #[inline]
    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    pub fn same_size<U>(&self, other: &Raster<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Raster<U> {
        Raster {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Raster<bool> {
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Foreground pixel coordinates in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| (i % self.width, i / self.width))
    }

    /// Number of foreground 8-neighbours of `(x, y)`.
    pub fn neighbor_count(&self, x: usize, y: usize) -> usize {
        NEIGHBORS_8
            .iter()
            .filter(|(dx, dy)| self.get_signed(x as i64 + dx, y as i64 + dy).unwrap_or(false))
            .count()
    }
}

/// Baseline probability map with every value in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap(Raster<f64>);

impl Heatmap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        Self::from_raster(Raster::new(width, height, values)?)
    }

    pub fn from_raster(raster: Raster<f64>) -> Result<Self> {
        if let Some(i) = raster.data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::HeatmapRange {
                x: i % raster.width,
                y: i / raster.width,
                value: raster.data[i],
            });
        }
        Ok(Self(raster))
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self(Raster::filled(width, height, 0.0))
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(x, y)
    }

    pub fn values(&self) -> &[f64] {
        &self.0.data
    }

    pub fn as_raster(&self) -> &Raster<f64> {
        &self.0
    }

    pub fn into_raster(self) -> Raster<f64> {
        self.0
    }
}

/// Half-sample symmetric reflection of `i` into `0..n` (`dcba|abcd|dcba`).
#[inline]
pub(crate) fn reflect(i: i64, n: usize) -> usize {
    let n = n as i64;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}
