//! PNG carriers. Heatmaps are single-channel 16-bit (`v / 65535`), masks and
//! page images 8-bit grayscale.

use std::io::Cursor;

use image::{DynamicImage, ImageBuffer, ImageFormat, Luma};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, Heatmap, Raster};

fn encode(img: DynamicImage) -> Result<Vec<u8>> {
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

fn decode(bytes: &[u8]) -> Result<DynamicImage> {
    Ok(image::load_from_memory_with_format(bytes, ImageFormat::Png)?)
}

/// Reads a single-channel PNG; 16-bit values map to `v / 65535` (8-bit
/// files are accepted as `v / 255`).
pub fn read_heatmap(bytes: &[u8]) -> Result<Heatmap> {
    let (w, h, values) = match decode(bytes)? {
        DynamicImage::ImageLuma16(img) => (
            img.width(),
            img.height(),
            img.into_raw().into_iter().map(|v| v as f64 / 65535.0).collect(),
        ),
        DynamicImage::ImageLuma8(img) => (
            img.width(),
            img.height(),
            img.into_raw().into_iter().map(|v| v as f64 / 255.0).collect(),
        ),
        other => {
            return Err(Error::Parameter(format!(
                "heatmap must be a single-channel PNG, got {:?}",
                other.color()
            )))
        }
    };
    Heatmap::new(w as usize, h as usize, values)
}

pub fn write_heatmap(heatmap: &Heatmap) -> Result<Vec<u8>> {
    let raw: Vec<u16> = heatmap.values().iter().map(|v| (v * 65535.0).round() as u16).collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(heatmap.width() as u32, heatmap.height() as u32, raw).expect("buffer matches dimensions");
    encode(DynamicImage::ImageLuma16(img))
}

/// Any non-zero pixel is foreground.
pub fn read_mask(bytes: &[u8]) -> Result<BinaryMask> {
    let img = decode(bytes)?.to_luma8();
    let (w, h) = img.dimensions();
    Raster::new(
        w as usize,
        h as usize,
        img.into_raw().into_iter().map(|v| v > 0).collect(),
    )
}

/// Foreground as 255, background as 0.
pub fn write_mask(mask: &BinaryMask) -> Result<Vec<u8>> {
    write_gray_image(&mask.map(|v| if v { 255u8 } else { 0 }))
}

/// Reads any PNG, converting colour to luminance.
pub fn read_gray_image(bytes: &[u8]) -> Result<GrayImage> {
    let img = image::load_from_memory(bytes)?.to_luma8();
    let (w, h) = img.dimensions();
    Raster::new(w as usize, h as usize, img.into_raw())
}

pub fn write_gray_image(img: &GrayImage) -> Result<Vec<u8>> {
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
            .expect("buffer matches dimensions");
    encode(DynamicImage::ImageLuma8(buf))
}
