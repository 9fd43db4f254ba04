use super::{reflect, BinaryMask, GrayImage, Raster};
use crate::error::{Error, Result};

pub const SAUVOLA_WINDOW: usize = 25;
pub const SAUVOLA_K: f64 = 0.2;
/// Half the 8-bit dynamic range.
pub const SAUVOLA_DYNAMIC_RANGE: f64 = 128.0;

/// Local adaptive binarization. A pixel is ink (`true`) when its intensity
/// is strictly below `mean * (1 + k * (std / 128 - 1))` over the
/// `window x window` neighbourhood (reflected at the borders).
///
/// Window sums come from integral images over the reflected image; the
/// statistics are formed from exact integer sums.
pub fn sauvola_binarize(img: &GrayImage, window: usize, k: f64) -> Result<BinaryMask> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "sauvola window must be odd and >= 3, got {window}"
        )));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Parameter(format!("sauvola k must lie in (0, 1), got {k}")));
    }
    let (w, h) = (img.width(), img.height());
    let r = (window / 2) as i64;
    let (pw, ph) = (w + window - 1, h + window - 1);
    // integral images with a zero first row/column
    let stride = pw + 1;
    let mut sum = vec![0u64; stride * (ph + 1)];
    let mut sum_sq = vec![0u64; stride * (ph + 1)];
    for py in 0..ph {
        let sy = reflect(py as i64 - r, h);
        let mut row_sum = 0u64;
        let mut row_sq = 0u64;
        for px in 0..pw {
            let v = img.get(reflect(px as i64 - r, w), sy) as u64;
            row_sum += v;
            row_sq += v * v;
            let i = (py + 1) * stride + px + 1;
            sum[i] = sum[i - stride] + row_sum;
            sum_sq[i] = sum_sq[i - stride] + row_sq;
        }
    }
    let area = |t: &[u64], x: usize, y: usize| {
        let (x1, y1) = (x + window, y + window);
        t[y1 * stride + x1] + t[y * stride + x] - t[y * stride + x1] - t[y1 * stride + x]
    };
    let n = (window * window) as u64;
    Ok(Raster::from_fn(w, h, |x, y| {
        let s = area(&sum, x, y);
        let sq = area(&sum_sq, x, y);
        (img.get(x, y) as f64) < threshold(s, sq, n, k)
    }))
}

fn threshold(sum: u64, sum_sq: u64, n: u64, k: f64) -> f64 {
    let nf = n as f64;
    let mean = sum as f64 / nf;
    let numerator = n as u128 * sum_sq as u128 - sum as u128 * sum as u128;
    let std = (numerator as f64 / (nf * nf)).sqrt();
    mean * (1.0 + k * (std / SAUVOLA_DYNAMIC_RANGE - 1.0))
}
