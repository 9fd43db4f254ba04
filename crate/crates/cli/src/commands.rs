use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::json;

use badam::baseline::{detect as detect_baselines, extract_baselines, DetectParams, ExtractParams};
use badam::eval::{evaluate_set, Tolerance, METRIC_NAME};
use badam::formats::{
    page_stem, rasterize_baselines, read_file, read_gray_image, read_heatmap, read_mask, read_page_dir, read_page_xml,
    validate_guidelines, write_atomic, write_gray_image, write_heatmap, write_mask, write_page_xml, Page, ScaleSidecar,
};
use badam::raster::sauvola_binarize;
use badam::rectify::{estimate_environment_with, rectify as rectify_line, EnvironmentParams, InkComponents};
use badam::synth::{generate_page, SynthSpec};
use badam::{Point, Polyline};

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn sidecar_path(heatmap: &Path) -> PathBuf {
    heatmap.with_file_name(format!("{}.scale.json", page_stem(heatmap)))
}

/// Maps baselines found at processing scale back to original page pixels.
fn unscale(lines: Vec<Polyline>, sidecar: &ScaleSidecar) -> Vec<Polyline> {
    let max_x = sidecar.original_width.saturating_sub(1) as f64;
    let max_y = sidecar.original_height.saturating_sub(1) as f64;
    lines
        .into_iter()
        .filter_map(|line| {
            let mut pts: Vec<Point> = Vec::with_capacity(line.len());
            for p in line.points() {
                let q = Point::new(
                    (p.x / sidecar.scale).clamp(0.0, max_x),
                    (p.y / sidecar.scale).clamp(0.0, max_y),
                );
                if pts.last() != Some(&q) {
                    pts.push(q);
                }
            }
            (pts.len() >= 2).then(|| Polyline::from_points_unchecked(pts))
        })
        .collect()
}

fn detect_one(heatmap_path: &Path, out_dir: &Path, params: &DetectParams) -> Result<PathBuf> {
    let heatmap =
        read_heatmap(&read_file(heatmap_path)?).with_context(|| format!("reading {}", heatmap_path.display()))?;
    let stem = page_stem(heatmap_path);
    let mut lines = detect_baselines(&heatmap, params)?;
    let (mut width, mut height) = (heatmap.width(), heatmap.height());
    let sidecar = sidecar_path(heatmap_path);
    if sidecar.exists() {
        let scale: ScaleSidecar =
            serde_json::from_slice(&read_file(&sidecar)?).with_context(|| format!("parsing {}", sidecar.display()))?;
        if !(scale.scale.is_finite() && scale.scale > 0.0) {
            bail!("{}: scale must be positive", sidecar.display());
        }
        lines = unscale(lines, &scale);
        (width, height) = (scale.original_width, scale.original_height);
    }
    let mut page = Page::new(stem.clone(), format!("{stem}.png"), width, height);
    page.baselines = lines;
    let out = out_dir.join(format!("{stem}.xml"));
    write_atomic(&out, &write_page_xml(&page))?;
    Ok(out)
}

pub fn detect(heatmaps: &[PathBuf], out_dir: &Path, params: &DetectParams) -> Result<()> {
    ensure_dir(out_dir)?;
    let written = heatmaps
        .par_iter()
        .map(|h| detect_one(h, out_dir, params))
        .collect::<Result<Vec<_>>>()?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

pub fn rectify(page_xml: &Path, image: &Path, out_dir: &Path, window: usize, k: f64) -> Result<()> {
    let page = read_page_xml(&read_file(page_xml)?).with_context(|| format!("reading {}", page_xml.display()))?;
    let img = read_gray_image(&read_file(image)?).with_context(|| format!("reading {}", image.display()))?;
    ensure_dir(out_dir)?;
    let ink = InkComponents::new(&sauvola_binarize(&img, window, k)?);
    let params = EnvironmentParams::default();
    let results = page
        .baselines
        .par_iter()
        .enumerate()
        .map(|(i, baseline)| {
            let env = estimate_environment_with(baseline, &ink, &params);
            let line = rectify_line(&img, baseline, env)?;
            let file = format!("{}_line_{i:03}.png", page.id);
            write_atomic(&out_dir.join(&file), &write_gray_image(&line.image)?)?;
            Ok(json!({
                "index": i,
                "file": file,
                "above": env.above,
                "below": env.below,
                "width": line.image.width(),
                "height": line.image.height(),
                "baseline_row": line.baseline_row,
                "baseline": line.source_polyline,
                "source_map": line.source_map,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let sidecar = json!({ "page": page.id, "image": image.display().to_string(), "lines": results });
    let out = out_dir.join(format!("{}_lines.json", page.id));
    write_atomic(&out, &serde_json::to_vec_pretty(&sidecar)?)?;
    println!("{} line(s) -> {}", page.baselines.len(), out.display());
    Ok(())
}

fn baselines_by_page(dir: &Path) -> Result<BTreeMap<String, Vec<Polyline>>> {
    Ok(read_page_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .into_iter()
        .map(|(id, page)| (id, page.baselines))
        .collect())
}

pub fn eval(pred_dir: &Path, truth_dir: &Path, tolerance: Tolerance, report: Option<&Path>) -> Result<()> {
    let predicted = baselines_by_page(pred_dir)?;
    let truth = baselines_by_page(truth_dir)?;
    let result = evaluate_set(&predicted, &truth, tolerance)?;
    if let Some(path) = report {
        write_atomic(path, &serde_json::to_vec_pretty(&result)?)?;
    }
    let a = &result.aggregate;
    println!(
        "{METRIC_NAME} (tolerance {}): pages={} precision={:.4} recall={:.4} f={:.4}",
        result.tolerance,
        result.per_page.len(),
        a.precision,
        a.recall,
        a.f_value
    );
    Ok(())
}

pub fn synth(spec: &SynthSpec, pages: u64, out_dir: &Path) -> Result<()> {
    spec.check()?;
    ensure_dir(out_dir)?;
    (0..pages).into_par_iter().try_for_each(|i| -> Result<()> {
        let s = generate_page(spec, i)?;
        let id = &s.page.id;
        write_atomic(&out_dir.join(format!("{id}.xml")), &write_page_xml(&s.page))?;
        write_atomic(&out_dir.join(format!("{id}.heatmap.png")), &write_heatmap(&s.heatmap)?)?;
        write_atomic(&out_dir.join(format!("{id}.png")), &write_gray_image(&s.image)?)?;
        Ok(())
    })?;
    println!("{pages} page(s) -> {}", out_dir.display());
    Ok(())
}

/// Prints every finding and returns how many there were.
pub fn validate(files: &[PathBuf], as_json: bool) -> Result<usize> {
    let mut total = 0;
    for path in files {
        let page = read_page_xml(&read_file(path)?).with_context(|| format!("reading {}", path.display()))?;
        for f in validate_guidelines(&page) {
            total += 1;
            if as_json {
                println!("{}", serde_json::to_string(&f)?);
            } else {
                println!("{}: line {}: {}: {}", path.display(), f.line, f.rule.id(), f.message);
            }
        }
    }
    if !as_json {
        println!("{total} finding(s) in {} file(s)", files.len());
    }
    Ok(total)
}

pub fn to_bitmask(inputs: &[PathBuf], out_dir: &Path, stroke_width: usize) -> Result<()> {
    ensure_dir(out_dir)?;
    inputs.par_iter().try_for_each(|path| -> Result<()> {
        let page = read_page_xml(&read_file(path)?).with_context(|| format!("reading {}", path.display()))?;
        let mask = rasterize_baselines(&page, stroke_width)?;
        write_atomic(
            &out_dir.join(format!("{}.mask.png", page_stem(path))),
            &write_mask(&mask)?,
        )?;
        Ok(())
    })
}

pub fn to_pagexml(inputs: &[PathBuf], out_dir: &Path, params: &ExtractParams) -> Result<()> {
    ensure_dir(out_dir)?;
    inputs.par_iter().try_for_each(|path| -> Result<()> {
        let mask = read_mask(&read_file(path)?).with_context(|| format!("reading {}", path.display()))?;
        let stem = page_stem(path);
        let mut page = Page::new(stem.clone(), format!("{stem}.png"), mask.width(), mask.height());
        page.baselines = extract_baselines(&mask, params);
        write_atomic(&out_dir.join(format!("{stem}.xml")), &write_page_xml(&page))?;
        Ok(())
    })
}
