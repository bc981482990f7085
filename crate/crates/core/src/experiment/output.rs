//! File formats: CSV tables, SVG line plots and the JSON manifest.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Comma-separated table with a header row; every number carries 17
/// significant digits so values round-trip exactly.
pub fn csv_table(header: &[String], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..rows {
        for (j, col) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{:.16e}", col[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#e6b400", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Static SVG with one polyline per series over a shared abscissa.
pub fn svg_plot(title: &str, x: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 150.0, 40.0, 50.0);
    let (x0, x1) = bounds(x.iter().copied());
    let (mut y0, mut y1) = bounds(series.iter().flat_map(|(_, v)| v.iter().copied()));
    if y1 - y0 < 1e-300 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let px = |v: f64| left + (v - x0) / (x1 - x0) * (w - left - right);
    let py = |v: f64| h - bottom - (v - y0) / (y1 - y0) * (h - top - bottom);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title)).unwrap();
    writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - left - right,
        h - top - bottom
    )
    .unwrap();
    for (v, anchor, xp) in [(x0, "start", px(x0)), (x1, "end", px(x1))] {
        writeln!(s, r#"<text x="{xp:.2}" y="{}" text-anchor="{anchor}">{v:.4}</text>"#, h - bottom + 18.0).unwrap();
    }
    for v in [y0, y1] {
        writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.4e}</text>"#, left - 6.0, py(v) + 4.0).unwrap();
    }
    if y0 < 0.0 && y1 > 0.0 {
        writeln!(
            s,
            r##"<line x1="{left}" x2="{:.2}" y1="{y:.2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            w - right,
            y = py(0.0)
        )
        .unwrap();
    }
    for (i, (name, values)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = x
            .iter()
            .zip(values)
            .map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = top + 16.0 + 18.0 * i as f64;
        let lx = w - right + 12.0;
        writeln!(
            s,
            r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    USnapshots,
    Source,
    Verification,
    Plot,
    EnergyTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub role: Role,
    pub sha256: String,
}

/// Every file written by a run, in write order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    /// Writes `contents` to `dir/name` and records it.
    pub fn write(&mut self, dir: &Path, name: &str, role: Role, contents: &str) -> Result<()> {
        std::fs::write(dir.join(name), contents)?;
        self.files.push(ManifestEntry {
            file: name.to_string(),
            role,
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn finish(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }

    pub fn by_role(&self, role: Role) -> impl Iterator<Item = &ManifestEntry> {
        self.files.iter().filter(move |e| e.role == role)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_doubles() {
        let x = [0.1, 1.0 / 3.0, -2.5e-300];
        let y = [std::f64::consts::PI, 0.0, 1e300];
        let text = csv_table(&["x".into(), "y".into()], &[&x, &y]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y"));
        for (line, (a, b)) in lines.zip(x.iter().zip(&y)) {
            let parsed: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(parsed, vec![*a, *b]);
        }
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let x = [0.0, 1.0, 2.0];
        let svg = svg_plot(
            "a < b",
            &x,
            &[("one".into(), vec![0.0, 1.0, 0.0]), ("two".into(), vec![1.0, 1.0, 1.0])],
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
