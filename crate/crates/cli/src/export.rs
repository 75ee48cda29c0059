use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// Version of the CSV column layouts; bump when columns change.
pub const CSV_VERSION: u32 = 1;

/// Writes `# ssdesign <kind> v<version>` plus extra `# key: value` lines,
/// then a header row and the data.
pub fn write_csv(path: &Path, kind: &str, meta: &[(&str, String)], columns: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    let mut file = File::create(path)?;
    writeln!(file, "# ssdesign {kind} v{CSV_VERSION}")?;
    for (k, v) in meta {
        writeln!(file, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()
}

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

/// Line chart of several series sharing the axes. With `log_y` the values
/// are plotted as `log10(y)`; non-positive values are dropped.
pub fn svg_plot(title: &str, x_label: &str, series: &[Series], log_y: bool) -> String {
    let tf = |y: f64| if log_y { y.log10() } else { y };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| s.points.iter().map(|&(x, y)| (x, tf(y))).filter(|p| p.0.is_finite() && p.1.is_finite()).collect())
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 < x1) {
        (x0, x1) = (x0 - 1.0, x0 + 1.0);
    }
    if !(y0 < y1) {
        (y0, y1) = (y0 - 1.0, y0 + 1.0);
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out.push('\n');
    out.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    ));
    out.push('\n');
    out.push_str(&format!(r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#));
    out.push('\n');
    out.push_str(&format!(
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));
    out.push('\n');
    out.push_str(&format!(r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#, WIDTH / 2.0, escape(title)));
    out.push('\n');
    out.push_str(&format!(
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    ));
    out.push('\n');
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let ylab = if log_y { format!("1e{}", fmt_tick(y)) } else { fmt_tick(y) };
        out.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
            sx(x),
            HEIGHT - MARGIN + 16.0,
            fmt_tick(x)
        ));
        out.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
            MARGIN - 6.0,
            sy(y) + 4.0,
            ylab
        ));
        out.push('\n');
    }
    for (i, (s, p)) in series.iter().zip(&pts).enumerate() {
        let coords: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        out.push_str(&format!(
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
            s.color,
            coords.join(" ")
        ));
        out.push('\n');
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        out.push_str(&format!(
            r#"<text x="{:.2}" y="{ly:.2}" font-size="12" fill="{}">{}</text>"#,
            WIDTH - MARGIN - 90.0,
            s.color,
            escape(s.label)
        ));
        out.push('\n');
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_versioned_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_csv(&p, "potential", &[("preset", "x".into())], &["x", "y"], &[vec![1.0, 2.5], vec![-0.5, 1e-20]]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# ssdesign potential v1");
        assert_eq!(lines[1], "# preset: x");
        assert_eq!(lines[2], "x,y");
        assert_eq!(lines[3], "1e0,2.5e0");
        assert_eq!(lines[4].split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>(), vec![-0.5, 1e-20]);
    }

    #[test]
    fn svg_is_well_formed_and_drops_nonpositive_on_log_scale() {
        let s = Series { label: "|T|", color: "black", points: vec![(0.0, 1.0), (1.0, 0.0), (2.0, 100.0)] };
        let svg = svg_plot("t", "k", &[s], true);
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(poly.split("points=\"").nth(1).unwrap().split(' ').count(), 2);
    }
}
