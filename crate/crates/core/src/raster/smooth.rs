use super::{reflect, Heatmap, Raster};
use crate::error::{Error, Result};

/// Normalized 1-D Gaussian weights for offsets `-r..=r`, `r = ceil(3 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Parameter(format!(
            "gaussian sigma must be positive, got {sigma}"
        )));
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let denom = 2.0 * sigma * sigma;
    let mut kernel: Vec<f64> = (-radius..=radius).map(|k| (-((k * k) as f64) / denom).exp()).collect();
    let total: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|w| *w /= total);
    Ok(kernel)
}

/// Separable Gaussian blur with reflected borders.
pub fn gaussian_smooth(heatmap: &Heatmap, sigma: f64) -> Result<Heatmap> {
    let kernel = gaussian_kernel(sigma)?;
    let radius = (kernel.len() / 2) as i64;
    let src = heatmap.as_raster();
    let (w, h) = (src.width(), src.height());

    let mut horizontal = vec![0.0; w * h];
    for y in 0..h {
        let row = &src.data()[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (i, weight) in kernel.iter().enumerate() {
                acc += weight * row[reflect(x as i64 + i as i64 - radius, w)];
            }
            horizontal[y * w + x] = acc;
        }
    }

    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (i, weight) in kernel.iter().enumerate() {
            let sy = reflect(y as i64 + i as i64 - radius, h);
            let src_row = &horizontal[sy * w..(sy + 1) * w];
            let dst_row = &mut out[y * w..(y + 1) * w];
            for (d, s) in dst_row.iter_mut().zip(src_row) {
                *d += weight * s;
            }
        }
    }
    out.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
    Heatmap::from_raster(Raster::new(w, h, out)?)
}
