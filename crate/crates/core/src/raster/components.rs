use super::{BinaryMask, Raster, NEIGHBORS_8};

/// 8-connected component labels; 0 is background and components are
/// numbered `1..=count` in raster order of their first pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabels {
    labels: Raster<u32>,
    count: usize,
}

impl ComponentLabels {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn labels(&self) -> &Raster<u32> {
        &self.labels
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels.get(x, y)
    }

    /// Pixels of each component (index `label - 1`), each list in raster order.
    pub fn pixels(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.count];
        let w = self.labels.width();
        for (i, &l) in self.labels.data().iter().enumerate() {
            if l > 0 {
                out[l as usize - 1].push((i % w, i / w));
            }
        }
        out
    }
}

pub fn label_components(mask: &BinaryMask) -> ComponentLabels {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = Raster::filled(w, h, 0u32);
    let mut count = 0u32;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.data()[start] || labels.data()[start] != 0 {
            continue;
        }
        count += 1;
        labels.data_mut()[start] = count;
        stack.push((start % w, start / w));
        while let Some((x, y)) = stack.pop() {
            for (dx, dy) in NEIGHBORS_8 {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if mask.get_signed(nx, ny) == Some(true) {
                    let (nx, ny) = (nx as usize, ny as usize);
                    if labels.get(nx, ny) == 0 {
                        labels.set(nx, ny, count);
                        stack.push((nx, ny));
                    }
                }
            }
        }
    }
    ComponentLabels {
        labels,
        count: count as usize,
    }
}
