use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::evolution::EvolutionRow;

/// The charted series, in the order they are written.
pub const CHART_SERIES: [&str; 9] = [
    "ncloc",
    "packages",
    "classes",
    "classes_per_package",
    "functions_per_class",
    "ncloc_per_class",
    "avg_p_q",
    "s_a",
    "m_i",
];

/// Quality series live on a fixed [0, 1] axis.
fn is_unit_series(name: &str) -> bool {
    matches!(name, "avg_p_q" | "s_a" | "m_i")
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 90.0;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Upper axis bound: the smallest 1/2/5 × 10^k step multiple covering `max`.
fn nice_ceiling(max: f64) -> f64 {
    if max <= 0.0 {
        return 1.0;
    }
    let magnitude = 10f64.powf(max.log10().floor());
    for step in [1.0, 2.0, 5.0, 10.0] {
        if step * magnitude >= max {
            return step * magnitude;
        }
    }
    10.0 * magnitude
}

fn tick_label(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// A self-contained SVG line chart of one series over versions.
pub fn render_chart(name: &str, labels: &[String], values: &[f64]) -> Result<String> {
    if values.is_empty() || labels.len() != values.len() {
        return Err(Error::Usage(format!(
            "chart `{name}` needs one label per value and at least one point"
        )));
    }
    let (y_min, y_max) = if is_unit_series(name) {
        (0.0, 1.0)
    } else {
        let low = values.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
        let high = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (low, nice_ceiling(high))
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let n = values.len();
    let x_at = |i: usize| {
        if n == 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + plot_w * i as f64 / (n - 1) as f64
        }
    };
    let y_at = |v: f64| TOP + plot_h * (1.0 - (v - y_min) / (y_max - y_min));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"  <title>{}</title>"#, escape(name));
    let _ = writeln!(s, r#"  <rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"  <text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(name)
    );
    for k in 0..=5 {
        let v = y_min + (y_max - y_min) * f64::from(k) / 5.0;
        let y = y_at(v);
        let _ = writeln!(
            s,
            r##"  <line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            WIDTH - RIGHT
        );
        let _ = writeln!(
            s,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        s,
        r##"  <line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="#333333"/>"##,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r##"  <line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333333"/>"##,
        TOP + plot_h,
        WIDTH - RIGHT,
        TOP + plot_h
    );
    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{:.2},{:.2}", x_at(i), y_at(v)))
        .collect();
    let _ = writeln!(
        s,
        r##"  <polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##,
        points.join(" ")
    );
    for (i, (&v, label)) in values.iter().zip(labels).enumerate() {
        let (x, y) = (x_at(i), y_at(v));
        let _ = writeln!(
            s,
            r##"  <circle class="marker" cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f77b4"><title>{}: {}</title></circle>"##,
            escape(label),
            super::number::format_number(v)
        );
        let ly = TOP + plot_h + 14.0;
        let _ = writeln!(
            s,
            r#"  <text x="{x:.2}" y="{ly:.2}" text-anchor="end" transform="rotate(-45 {x:.2} {ly:.2})">{}</text>"#,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes one `<series>.svg` per charted series into `dir`.
pub fn write_charts(dir: &Path, rows: &[EvolutionRow]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
    let mut written = Vec::new();
    for name in CHART_SERIES {
        let values: Vec<f64> = rows
            .iter()
            .map(|r| {
                r.values()
                    .iter()
                    .find(|(k, _)| *k == name)
                    .map(|(_, v)| *v)
                    .expect("every charted series is a row column")
            })
            .collect();
        let svg = render_chart(name, &labels, &values)?;
        let path = dir.join(format!("{name}.svg"));
        std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
