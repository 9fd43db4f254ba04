use super::{BinaryMask, Heatmap, Raster, NEIGHBORS_8};
use crate::error::{Error, Result};

/// Two-level threshold: pixels `>= high` seed the mask, which then grows
/// through 8-connected pixels `>= low`.
pub fn hysteresis_threshold(heatmap: &Heatmap, low: f64, high: f64) -> Result<BinaryMask> {
    if !(0.0..=1.0).contains(&low) || !(0.0..=1.0).contains(&high) || low > high {
        return Err(Error::Parameter(format!(
            "hysteresis thresholds need 0 <= low <= high <= 1, got low {low}, high {high}"
        )));
    }
    let src = heatmap.as_raster();
    let (w, h) = (src.width(), src.height());
    let mut mask = Raster::filled(w, h, false);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for (i, &v) in src.data().iter().enumerate() {
        if v >= high && !mask.data()[i] {
            mask.data_mut()[i] = true;
            stack.push((i % w, i / w));
            while let Some((x, y)) = stack.pop() {
                for (dx, dy) in NEIGHBORS_8 {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if !mask.contains(nx, ny) {
                        continue;
                    }
                    let (nx, ny) = (nx as usize, ny as usize);
                    if !mask.get(nx, ny) && src.get(nx, ny) >= low {
                        mask.set(nx, ny, true);
                        stack.push((nx, ny));
                    }
                }
            }
        }
    }
    Ok(mask)
}
