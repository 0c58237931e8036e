//! CSV, JSON and SVG output for scans, contours and phase maps.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::contour::ContourSet;
use crate::phase::PhaseMap;
use crate::scan::GridScan;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// Writes `contents` to `path`, attaching the path to any I/O error.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `# x, y, quantity` header then one `x,y,value` row per cell, `x` fastest.
pub fn scan_to_csv(scan: &GridScan) -> String {
    let (xs, ys) = (scan.x.values(), scan.y.values());
    let mut out = format!("# {}, {}, {}\n", scan.x.axis.name(), scan.y.axis.name(), scan.quantity);
    for (iy, y) in ys.iter().enumerate() {
        for (ix, x) in xs.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", num(*x), num(*y), num(scan.value(ix, iy)));
        }
    }
    out
}

pub fn scan_to_json(scan: &GridScan) -> Result<String> {
    Ok(serde_json::to_string_pretty(scan)?)
}

/// Parses a scan and checks its shape and values.
pub fn scan_from_json(text: &str) -> Result<GridScan> {
    let scan: GridScan = serde_json::from_str(text)?;
    validate_scan(&scan)?;
    Ok(scan)
}

pub fn validate_scan(scan: &GridScan) -> Result<()> {
    for a in [&scan.x, &scan.y] {
        crate::scan::GridRange::new(a.min, a.max, a.count)?;
    }
    let expected = scan.x.count * scan.y.count;
    if scan.values.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: scan.values.len() });
    }
    if scan.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NonFinite("scan values must be finite and non-negative"));
    }
    Ok(())
}

/// `# isovalue, line, x, y` rows, one per polyline vertex.
pub fn contours_to_csv(c: &ContourSet, x_name: &str, y_name: &str) -> String {
    let mut out = format!("# isovalue, line, {x_name}, {y_name}\n");
    for level in &c.levels {
        for (i, line) in level.polylines.iter().enumerate() {
            for [x, y] in line {
                let _ = writeln!(out, "{},{i},{},{}", num(level.isovalue), num(*x), num(*y));
            }
        }
    }
    out
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// One row per cell: `x,y,"phase"`.
pub fn phases_to_csv(map: &PhaseMap) -> String {
    let (xs, ys) = (map.x.values(), map.y.values());
    let mut out = format!("# {}, {}, phase\n", map.x.axis.name(), map.y.axis.name());
    for (iy, y) in ys.iter().enumerate() {
        for (ix, x) in xs.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", num(*x), num(*y), quoted(&map.cell(ix, iy).to_string()));
        }
    }
    out
}

/// One row per boundary vertex: `line,x,y,"phase_a","phase_b"`.
pub fn boundaries_to_csv(map: &PhaseMap) -> String {
    let mut out = format!("# line, {}, {}, phase_a, phase_b\n", map.x.axis.name(), map.y.axis.name());
    for (i, b) in map.boundaries.iter().enumerate() {
        let (a, c) = (quoted(&b.phases.0.to_string()), quoted(&b.phases.1.to_string()));
        for [x, y] in &b.points {
            let _ = writeln!(out, "{i},{},{},{a},{c}", num(*x), num(*y));
        }
    }
    out
}

const VIRIDIS: [(f64, f64, f64); 9] = [
    (68.0, 1.0, 84.0),
    (71.0, 44.0, 122.0),
    (59.0, 81.0, 139.0),
    (44.0, 113.0, 142.0),
    (33.0, 144.0, 141.0),
    (39.0, 173.0, 129.0),
    (92.0, 200.0, 99.0),
    (170.0, 220.0, 50.0),
    (253.0, 231.0, 37.0),
];

/// Position of `v` on the colormap, clamped to `[0, 1]`.
pub fn color_position(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Viridis-like color at position `t ∈ [0, 1]`, linearly interpolated
/// between anchors. Luminance increases with `t`.
pub fn colormap(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let i = (t.floor() as usize).min(VIRIDIS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    let mix = |x: f64, y: f64| (x + f * (y - x)).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Heatmap with one `<path class="contour">` per contour polyline, axis
/// labels and a colorbar.
pub fn scan_to_svg(scan: &GridScan, contours: Option<&ContourSet>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const LEFT: f64 = 70.0;
    const TOP: f64 = 20.0;
    const PW: f64 = 460.0;
    const PH: f64 = 400.0;
    let (nx, ny) = (scan.x.count, scan.y.count);
    let (lo, hi) = scan.min_max();
    let sx = |x: f64| LEFT + (x - scan.x.min) / (scan.x.max - scan.x.min) * PW;
    let sy = |y: f64| TOP + PH - (y - scan.y.min) / (scan.y.max - scan.y.min) * PH;
    let (cw, ch) = (PW / nx as f64, PH / ny as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    out.push_str("<g class=\"heatmap\" shape-rendering=\"crispEdges\">\n");
    for iy in 0..ny {
        for ix in 0..nx {
            let (r, g, b) = colormap(color_position(scan.value(ix, iy), lo, hi));
            let x = LEFT + ix as f64 * cw;
            let y = TOP + PH - (iy + 1) as f64 * ch;
            let _ = writeln!(
                out,
                r##"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    out.push_str("</g>\n");
    if let Some(c) = contours {
        out.push_str("<g class=\"contours\" fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n");
        for level in &c.levels {
            for line in &level.polylines {
                let mut d = String::new();
                for (k, [x, y]) in line.iter().enumerate() {
                    let _ = write!(d, "{}{:.3},{:.3}", if k == 0 { "M" } else { " L" }, sx(*x), sy(*y));
                }
                let _ = writeln!(out, r#"<path class="contour" data-isovalue="{}" d="{d}"/>"#, level.isovalue);
            }
        }
        out.push_str("</g>\n");
    }
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PW}" height="{PH}" fill="none" stroke="black"/>"#
    );
    let bottom = TOP + PH;
    for (v, anchor, x) in [(scan.x.min, "start", LEFT), (scan.x.max, "end", LEFT + PW)] {
        let _ = writeln!(out, r#"<text x="{x}" y="{}" text-anchor="{anchor}">{v}</text>"#, bottom + 16.0);
    }
    for (v, y) in [(scan.y.min, bottom), (scan.y.max, TOP + 10.0)] {
        let _ = writeln!(out, r#"<text x="{}" y="{y}" text-anchor="end">{v}</text>"#, LEFT - 6.0);
    }
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + PW / 2.0,
        bottom + 36.0,
        xml_escape(scan.x.axis.name())
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        TOP + PH / 2.0,
        TOP + PH / 2.0,
        xml_escape(scan.y.axis.name())
    );
    let bar_x = LEFT + PW + 30.0;
    out.push_str("<g class=\"colorbar\">\n");
    let steps = 64;
    for k in 0..steps {
        let (r, g, b) = colormap((k as f64 + 0.5) / steps as f64);
        let y = TOP + PH - (k + 1) as f64 * PH / steps as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{bar_x}" y="{y:.3}" width="16" height="{:.3}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
            PH / steps as f64 + 0.05
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}">{hi:.4}</text>"#, bar_x + 20.0, TOP + 10.0);
    let _ = writeln!(out, r#"<text x="{}" y="{bottom}">{lo:.4}</text>"#, bar_x + 20.0);
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{}" y="{}" text-anchor="middle">{}</text>"#,
        bar_x + 8.0,
        bottom + 16.0,
        xml_escape(scan.quantity.name())
    );
    out.push_str("</g>\n</svg>\n");
    out
}

/// Writes `scan` in `format`. Contours go into the SVG; for CSV and JSON
/// they are written to a sibling `*.contours.csv` file.
pub fn export_scan(scan: &GridScan, contours: Option<&ContourSet>, format: Format, path: &Path) -> Result<()> {
    match format {
        Format::Csv => write_file(path, &scan_to_csv(scan))?,
        Format::Json => write_file(path, &scan_to_json(scan)?)?,
        Format::Svg => return write_file(path, &scan_to_svg(scan, contours)),
    }
    if let Some(c) = contours {
        let sibling = path.with_extension("contours.csv");
        write_file(&sibling, &contours_to_csv(c, scan.x.axis.name(), scan.y.axis.name()))?;
    }
    Ok(())
}
