//! Minimal log-log SVG plots on a fixed 800×600 canvas.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Drawn as a line instead of markers.
    pub line: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(name: &str, title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn with(mut self, label: &str, points: Vec<(f64, f64)>, line: bool) -> Self {
        self.series.push(Series { label: label.into(), points, line });
        self
    }

    /// Renders the plot; points with a nonpositive coordinate are skipped.
    pub fn to_svg(&self) -> String {
        let logs: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.points
                    .iter()
                    .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
                    .map(|(x, y)| (x.log10(), y.log10()))
                    .collect()
            })
            .collect();
        let all: Vec<(f64, f64)> = logs.iter().flatten().copied().collect();
        let (mut x0, mut x1, mut y0, mut y1) = (0.0, 1.0, 0.0, 1.0);
        if !all.is_empty() {
            x0 = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).floor();
            x1 = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).ceil();
            y0 = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).floor();
            y1 = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).ceil();
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="30" font-size="18" text-anchor="middle" font-family="sans-serif">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        // axes box and decade ticks
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        for e in (x0 as i64)..=(x1 as i64) {
            let x = sx(e as f64);
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ddd"/>"##, MARGIN, HEIGHT - MARGIN);
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{}" font-size="12" text-anchor="middle" font-family="sans-serif">1e{e}</text>"#,
                HEIGHT - MARGIN + 18.0
            );
        }
        for e in (y0 as i64)..=(y1 as i64) {
            let y = sy(e as f64);
            let _ = writeln!(s, r##"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##, MARGIN, WIDTH - MARGIN);
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.2}" font-size="12" text-anchor="end" font-family="sans-serif">1e{e}</text>"#,
                MARGIN - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="14" text-anchor="middle" font-family="sans-serif">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{}" font-size="14" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 20 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for (i, (series, pts)) in self.series.iter().zip(&logs).enumerate() {
            let color = COLORS[i % COLORS.len()];
            if series.line {
                let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, path.join(" "));
            } else {
                for (x, y) in pts {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#, sx(*x), sy(*y));
                }
            }
            let ly = MARGIN + 20.0 + 18.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{ly}" font-size="12" fill="{color}" font-family="sans-serif">{}</text>"#,
                MARGIN + 10.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_canvas_and_markers() {
        let p = Plot::new("t", "a < b", "x", "y").with("pts", vec![(1.0, 10.0), (10.0, 100.0), (0.0, 1.0)], false);
        let svg = p.to_svg();
        assert!(svg.starts_with(r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600""#));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("a &lt; b"));
    }
}
