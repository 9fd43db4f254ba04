//! PAGE XML subset: `Page` dimensions plus `TextRegion / TextLine / Baseline`.
//!
//! Any PAGE content namespace (2013-07-15 or later) or no namespace is
//! accepted on read. Elements outside the subset are skipped. The writer
//! emits the 2013-07-15 schema with fixed metadata so that identical pages
//! serialize to identical bytes.

use std::fmt::Write as _;

use roxmltree::{Document, Node};

use super::Page;
use crate::error::{PageXmlError, Result};
use crate::geometry::{round_half_up, Point, Polyline};

pub const PAGE_NAMESPACE_2013: &str = "http://schema.primaresearch.org/PAGE/gts/pagecontent/2013-07-15";
const PAGE_NAMESPACE_PREFIX: &str = "http://schema.primaresearch.org/PAGE/gts/pagecontent/";
const FIXED_TIMESTAMP: &str = "1970-01-01T00:00:00";

fn is_page_element(node: &Node, name: &str) -> bool {
    node.is_element()
        && node.tag_name().name() == name
        && node
            .tag_name()
            .namespace()
            .is_none_or(|ns| ns.starts_with(PAGE_NAMESPACE_PREFIX))
}

fn position(doc: &Document, node: &Node) -> (u32, u32) {
    let pos = doc.text_pos_at(node.range().start);
    (pos.row, pos.col)
}

pub fn read_page_xml(bytes: &[u8]) -> Result<Page> {
    let text = std::str::from_utf8(bytes).map_err(|e| PageXmlError::Malformed {
        line: 1,
        column: 1,
        message: format!("invalid UTF-8: {e}"),
    })?;
    let doc = Document::parse(text).map_err(|e| {
        let pos = e.pos();
        PageXmlError::Malformed {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;
    let root = doc.root_element();
    let page_node = root
        .descendants()
        .find(|n| is_page_element(n, "Page"))
        .ok_or(PageXmlError::MissingPage)?;
    let (line, column) = position(&doc, &page_node);
    let dimension = |attribute: &'static str| -> Result<usize, PageXmlError> {
        page_node
            .attribute(attribute)
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .ok_or(PageXmlError::BadDimension {
                line,
                column,
                attribute,
            })
    };
    let width = dimension("imageWidth")?;
    let height = dimension("imageHeight")?;
    let image_path = page_node.attribute("imageFilename").unwrap_or_default().to_string();
    let id = root
        .attribute("pcGtsId")
        .map(str::to_string)
        .unwrap_or_else(|| image_path.split('.').next().unwrap_or_default().to_string());

    let mut page = Page::new(id, image_path, width, height);
    for node in page_node.descendants().filter(|n| is_page_element(n, "Baseline")) {
        let (line, column) = position(&doc, &node);
        let raw = node
            .attribute("points")
            .ok_or(PageXmlError::MissingPoints { line, column })?;
        let mut points = Vec::new();
        for token in raw.split_whitespace() {
            let bad = || PageXmlError::BadPoint {
                line,
                column,
                token: token.to_string(),
            };
            let (x, y) = token.split_once(',').ok_or_else(bad)?;
            let x: f64 = x.trim().parse().map_err(|_| bad())?;
            let y: f64 = y.trim().parse().map_err(|_| bad())?;
            if !x.is_finite() || !y.is_finite() {
                return Err(bad().into());
            }
            if !page.contains(x, y) {
                return Err(PageXmlError::OutOfBounds {
                    line,
                    column,
                    x,
                    y,
                    width,
                    height,
                }
                .into());
            }
            points.push(Point::new(x, y));
        }
        page.baselines.push(Polyline::from_points_unchecked(points));
    }
    Ok(page)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn clamp_pixel(v: f64, size: usize) -> i64 {
    round_half_up(v).clamp(0, size as i64 - 1)
}

fn points_attr(points: &[(i64, i64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x},{y}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn bbox_polygon(points: &[(i64, i64)]) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
    for &(x, y) in points {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    points_attr(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
}

/// Serializes `page`; coordinates are rounded half up and clamped to the page,
/// and vertices that collapse onto their predecessor are dropped.
pub fn write_page_xml(page: &Page) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<PcGts xmlns=\"{ns}\" xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"{ns} {ns}/pagecontent.xsd\" pcGtsId=\"{id}\">",
        ns = PAGE_NAMESPACE_2013,
        id = escape(&page.id)
    );
    out.push_str("  <Metadata>\n    <Creator>badam</Creator>\n");
    let _ = writeln!(out, "    <Created>{FIXED_TIMESTAMP}</Created>");
    let _ = writeln!(out, "    <LastChange>{FIXED_TIMESTAMP}</LastChange>");
    out.push_str("  </Metadata>\n");
    let _ = write!(
        out,
        "  <Page imageFilename=\"{}\" imageWidth=\"{}\" imageHeight=\"{}\"",
        escape(&page.image_path),
        page.width,
        page.height
    );
    let lines: Vec<Vec<(i64, i64)>> = page
        .baselines
        .iter()
        .map(|l| {
            let mut pts: Vec<(i64, i64)> = l
                .points()
                .iter()
                .map(|p| (clamp_pixel(p.x, page.width), clamp_pixel(p.y, page.height)))
                .collect();
            pts.dedup();
            pts
        })
        .filter(|pts| !pts.is_empty())
        .collect();
    if lines.is_empty() {
        out.push_str("/>\n</PcGts>\n");
        return out.into_bytes();
    }
    out.push_str(">\n");
    let all: Vec<(i64, i64)> = lines.iter().flatten().copied().collect();
    let _ = writeln!(out, "    <TextRegion id=\"r0\">");
    let _ = writeln!(out, "      <Coords points=\"{}\"/>", bbox_polygon(&all));
    for (i, pts) in lines.iter().enumerate() {
        let _ = writeln!(out, "      <TextLine id=\"r0_l{i}\">");
        let _ = writeln!(out, "        <Coords points=\"{}\"/>", bbox_polygon(pts));
        let _ = writeln!(out, "        <Baseline points=\"{}\"/>", points_attr(pts));
        out.push_str("      </TextLine>\n");
    }
    out.push_str("    </TextRegion>\n  </Page>\n</PcGts>\n");
    out.into_bytes()
}
