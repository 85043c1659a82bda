//! Contour overlays: the edge map with each solver's contour, a hollow
//! circle at the fixation point and a cross at the start pixel.

use std::fmt::Write as _;
use std::io::Cursor;
use std::path::Path;

use fixtrace_core::synth::line_pixels;
use fixtrace_core::{Algorithm, EdgeMap, Pixel, Point};
use image::{ImageFormat, Rgb, RgbImage};

use crate::report::SolveReport;
use crate::{CliError, CliResult};

const MARKER: [u8; 3] = [255, 64, 64];

fn color(algorithm: Algorithm) -> [u8; 3] {
    match algorithm {
        Algorithm::Baseline => [230, 160, 40],
        Algorithm::Alg1Dijkstra => [60, 200, 90],
        Algorithm::Alg1Sweep => [60, 200, 200],
        Algorithm::Alg2 => [70, 130, 255],
        Algorithm::Oracle => [200, 80, 200],
    }
}

fn hex([r, g, b]: [u8; 3]) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

pub fn svg(map: &EdgeMap, report: &SolveReport) -> String {
    let (w, h) = (map.width(), map.height());
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"black\"/>\n<path fill=\"#bbbbbb\" d=\""
    );
    for p in map.edgels() {
        let _ = write!(out, "M{} {}h1v1h-1z", p.x, p.y);
    }
    out.push_str("\"/>\n");
    for run in &report.runs {
        let Some(path) = &run.path else { continue };
        let points: Vec<String> =
            path.polygon.iter().map(|p| format!("{},{}", p.x as f64 + 0.5, p.y as f64 + 0.5)).collect();
        let _ = writeln!(
            out,
            "<polygon class=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\"/>",
            run.algorithm.name(),
            points.join(" "),
            hex(color(run.algorithm))
        );
    }
    let o = report.query.fixation;
    let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"{}\"/>", o.x, o.y, hex(MARKER));
    let (sx, sy) = (report.start.x as f64 + 0.5, report.start.y as f64 + 0.5);
    let _ = writeln!(
        out,
        "<path d=\"M{} {}L{} {}M{} {}L{} {}\" stroke=\"{}\"/>",
        sx - 3.0,
        sy - 3.0,
        sx + 3.0,
        sy + 3.0,
        sx - 3.0,
        sy + 3.0,
        sx + 3.0,
        sy - 3.0,
        hex(MARKER)
    );
    out.push_str("</svg>\n");
    out
}

fn put(img: &mut RgbImage, p: Pixel, c: [u8; 3]) {
    if p.x >= 0 && p.y >= 0 && (p.x as u32) < img.width() && (p.y as u32) < img.height() {
        img.put_pixel(p.x as u32, p.y as u32, Rgb(c));
    }
}

fn circle(o: Point, r: f64) -> Vec<Pixel> {
    let steps = (r * 16.0) as usize;
    (0..steps)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / steps as f64;
            Pixel::new((o.x + r * a.cos()).floor() as i64, (o.y + r * a.sin()).floor() as i64)
        })
        .collect()
}

pub fn png(map: &EdgeMap, report: &SolveReport) -> CliResult<Vec<u8>> {
    let mut img = RgbImage::new(map.width() as u32, map.height() as u32);
    for p in map.edgels() {
        put(&mut img, p, [110, 110, 110]);
    }
    for run in &report.runs {
        let Some(path) = &run.path else { continue };
        let poly = &path.polygon;
        for i in 0..poly.len() {
            for p in line_pixels(poly[i], poly[(i + 1) % poly.len()]) {
                put(&mut img, p, color(run.algorithm));
            }
        }
    }
    for p in circle(report.query.fixation, 3.0) {
        put(&mut img, p, MARKER);
    }
    let s = report.start;
    for d in -3..=3 {
        put(&mut img, Pixel::new(s.x + d, s.y + d), MARKER);
        put(&mut img, Pixel::new(s.x + d, s.y - d), MARKER);
    }
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png).map_err(|e| CliError::Invalid(format!("png encoding failed: {e}")))?;
    Ok(buf.into_inner())
}

/// Writes an overlay whose format follows the file extension.
pub fn write(path: &Path, map: &EdgeMap, report: &SolveReport) -> CliResult<()> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let bytes = match ext.as_deref() {
        Some("svg") => svg(map, report).into_bytes(),
        Some("png") => png(map, report)?,
        _ => return Err(CliError::Invalid(format!("overlay path {} must end in .svg or .png", path.display()))),
    };
    crate::write_file(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AlgorithmChoice, RunConfig};
    use fixtrace_core::synth::gen_star;

    fn report() -> (EdgeMap, SolveReport) {
        let inst = gen_star(5, 20.0, 28.0, 2, 4).unwrap();
        let map = inst.edge_map().unwrap();
        let cfg = RunConfig { algorithm: AlgorithmChoice::All, ..Default::default() };
        let set = fixtrace_core::pipeline::prepare_fragments(&map, &cfg.pipeline()).unwrap();
        let r = crate::report::solve(&set, inst.query.fixation, inst.query.interest, &cfg).unwrap();
        (map, r)
    }

    #[test]
    fn svg_has_one_polygon_per_contour_and_markers() {
        let (map, r) = report();
        let s = svg(&map, &r);
        assert_eq!(s.matches("<polygon").count(), 3);
        assert_eq!(s.matches("<circle").count(), 1);
        assert!(s.contains("class=\"alg2\""));
    }

    #[test]
    fn png_decodes_with_image_size_and_marked_start() {
        let (map, r) = report();
        let bytes = png(&map, &r).unwrap();
        let img = image::load_from_memory(&bytes).unwrap().to_rgb8();
        assert_eq!((img.width() as usize, img.height() as usize), (map.width(), map.height()));
        let s = r.start;
        assert_eq!(img.get_pixel((s.x + 2) as u32, (s.y + 2) as u32).0, MARKER);
    }
}
