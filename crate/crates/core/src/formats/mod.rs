//! Persistence: PAGE XML baselines, PNG carriers for heatmaps, masks and
//! page images, split manifests, guideline checks and atomic file writes.

mod guidelines;
mod manifest;
mod pagexml;
mod png;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use guidelines::{validate_guidelines, Finding, Rule};
pub use manifest::{SplitManifest, PUBLISHED_TEST_PAGES, PUBLISHED_TRAIN_PAGES};
pub use pagexml::{read_page_xml, write_page_xml, PAGE_NAMESPACE_2013};
pub use png::{read_gray_image, read_heatmap, read_mask, write_gray_image, write_heatmap, write_mask};

use crate::error::{Error, Result};
use crate::geometry::{bresenham, Polyline};
use crate::raster::{BinaryMask, Raster};

/// One annotated page.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page {
    pub id: String,
    pub image_path: String,
    pub width: usize,
    pub height: usize,
    pub baselines: Vec<Polyline>,
}

impl Page {
    pub fn new(id: impl Into<String>, image_path: impl Into<String>, width: usize, height: usize) -> Self {
        Self {
            id: id.into(),
            image_path: image_path.into(),
            width,
            height,
            baselines: Vec::new(),
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64
    }
}

/// Draws every baseline with Bresenham and dilates it with a
/// `stroke_width x stroke_width` square.
pub fn rasterize_baselines(page: &Page, stroke_width: usize) -> Result<BinaryMask> {
    if stroke_width == 0 {
        return Err(Error::Parameter("stroke width must be at least 1".into()));
    }
    if page.width == 0 || page.height == 0 {
        return Err(Error::Dimensions {
            width: page.width,
            height: page.height,
            len: 0,
        });
    }
    let mut mask = Raster::filled(page.width, page.height, false);
    let lo = -((stroke_width as i64 - 1) / 2);
    let hi = stroke_width as i64 / 2;
    for line in &page.baselines {
        let pixels = line.to_pixels();
        let mut centre = Vec::new();
        if pixels.len() == 1 {
            centre.push(pixels[0]);
        }
        for seg in pixels.windows(2) {
            centre.extend(bresenham(seg[0], seg[1]));
        }
        for (x, y) in centre {
            for dy in lo..=hi {
                for dx in lo..=hi {
                    if mask.contains(x + dx, y + dy) {
                        mask.set((x + dx) as usize, (y + dy) as usize, true);
                    }
                }
            }
        }
    }
    Ok(mask)
}

/// Sidecar written next to a heatmap produced at a different scale than the
/// original page: `processing = original * scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSidecar {
    pub scale: f64,
    pub original_width: usize,
    pub original_height: usize,
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let file_err = |source| Error::File {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(file_err)?;
    tmp.write_all(bytes).map_err(file_err)?;
    tmp.persist(path).map_err(|e| file_err(e.error))?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

/// File name up to the first dot: `page_0003.heatmap.png` -> `page_0003`.
pub fn page_stem(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default();
    name.split('.').next().unwrap_or_default().to_string()
}

/// Reads every `*.xml` file of `dir`, keyed by [`page_stem`].
pub fn read_page_dir(dir: &Path) -> Result<BTreeMap<String, Page>> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|source| Error::File {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")))
        .collect();
    paths.sort();
    for path in paths {
        let page = read_page_xml(&read_file(&path)?)?;
        out.insert(page_stem(&path), page);
    }
    Ok(out)
}
