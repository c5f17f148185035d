//! Minimal SVG charts. Coordinates are printed with two decimals so the
//! output is byte-stable.

use std::fmt::Write;

use super::format::fixed;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub struct Series<'a> {
    pub name: &'a str,
    pub values: Vec<f64>,
}

fn c(x: f64) -> String {
    fixed(x, 2)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn plot_w() -> f64 {
    WIDTH - LEFT - RIGHT
}

fn plot_h() -> f64 {
    HEIGHT - TOP - BOTTOM
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">"#,
        WIDTH, HEIGHT, WIDTH, HEIGHT
    );
    let _ = writeln!(out, "<metadata>knowmetric {}</metadata>", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        c(WIDTH / 2.0),
        escape(title)
    );
}

fn axes(out: &mut String, max: f64, percent: bool) {
    let (x0, y0) = (LEFT, TOP + plot_h());
    let _ = writeln!(
        out,
        r#"<path d="M{} {}V{}H{}" fill="none" stroke="black"/>"#,
        c(x0),
        c(TOP),
        c(y0),
        c(LEFT + plot_w())
    );
    for i in 0..=4 {
        let v = max * i as f64 / 4.0;
        let y = y0 - plot_h() * i as f64 / 4.0;
        let label = if percent { format!("{}%", fixed(v * 100.0, 0)) } else { fixed(v, 0) };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            c(x0 - 6.0),
            c(y + 4.0),
            label
        );
    }
}

fn x_labels(out: &mut String, labels: &[String], centre: impl Fn(usize) -> f64) {
    // thin crowded axes to about a dozen labels
    let stride = labels.len().div_ceil(12).max(1);
    for (i, l) in labels.iter().enumerate().filter(|(i, _)| i % stride == 0) {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            c(centre(i)),
            c(TOP + plot_h() + 16.0),
            escape(l)
        );
    }
}

fn legend(out: &mut String, names: &[&str]) {
    for (i, name) in names.iter().enumerate() {
        let y = TOP + 16.0 * i as f64;
        let x = WIDTH - RIGHT + 14.0;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            c(x),
            c(y),
            PALETTE[i % PALETTE.len()],
            c(x + 14.0),
            c(y + 9.0),
            escape(name)
        );
    }
}

fn nice_max(max: f64) -> f64 {
    if max <= 0.0 {
        1.0
    } else {
        max
    }
}

/// One polyline per series over shared x labels.
pub fn line_chart(title: &str, labels: &[String], series: &[Series]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    let max = nice_max(series.iter().flat_map(|s| s.values.iter().copied()).fold(0.0, f64::max));
    axes(&mut out, max, false);
    let n = labels.len();
    let x_at = |i: usize| {
        if n <= 1 {
            LEFT + plot_w() / 2.0
        } else {
            LEFT + plot_w() * i as f64 / (n - 1) as f64
        }
    };
    x_labels(&mut out, labels, x_at);
    for (si, s) in series.iter().enumerate() {
        let points: Vec<String> = s
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{},{}", c(x_at(i)), c(TOP + plot_h() - plot_h() * v / max)))
            .collect();
        let colour = PALETTE[si % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            points.join(" "),
            colour
        );
    }
    legend(&mut out, &series.iter().map(|s| s.name).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

/// Stacked bars; `series[k].values[i]` is the share of series k in bar i.
pub fn stacked_bars(title: &str, labels: &[String], series: &[Series]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, 1.0, true);
    let slot = plot_w() / labels.len().max(1) as f64;
    let x_at = |i: usize| LEFT + slot * (i as f64 + 0.5);
    x_labels(&mut out, labels, x_at);
    for i in 0..labels.len() {
        let mut base = 0.0;
        for (si, s) in series.iter().enumerate() {
            let v = s.values.get(i).copied().unwrap_or(0.0);
            if v <= 0.0 {
                continue;
            }
            let h = plot_h() * v;
            let y = TOP + plot_h() - plot_h() * base - h;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                c(x_at(i) - slot * 0.4),
                c(y),
                c(slot * 0.8),
                c(h),
                PALETTE[si % PALETTE.len()]
            );
            base += v;
        }
    }
    legend(&mut out, &series.iter().map(|s| s.name).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

/// Side-by-side bars per label, one per series.
pub fn grouped_bars(title: &str, labels: &[String], series: &[Series]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    let max = nice_max(series.iter().flat_map(|s| s.values.iter().copied()).fold(0.0, f64::max));
    axes(&mut out, max, false);
    let slot = plot_w() / labels.len().max(1) as f64;
    let x_at = |i: usize| LEFT + slot * (i as f64 + 0.5);
    x_labels(&mut out, labels, x_at);
    let bar = slot * 0.8 / series.len().max(1) as f64;
    for i in 0..labels.len() {
        for (si, s) in series.iter().enumerate() {
            let v = s.values.get(i).copied().unwrap_or(0.0);
            let h = plot_h() * v / max;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                c(x_at(i) - slot * 0.4 + bar * si as f64),
                c(TOP + plot_h() - h),
                c(bar),
                c(h),
                PALETTE[si % PALETTE.len()]
            );
        }
    }
    legend(&mut out, &series.iter().map(|s| s.name).collect::<Vec<_>>());
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn years() -> Vec<String> {
        vec!["2001".into(), "2002".into()]
    }

    #[test]
    fn line_chart_has_one_polyline_per_series() {
        let svg = line_chart(
            "Growth",
            &years(),
            &[
                Series { name: "a", values: vec![1.0, 2.0] },
                Series { name: "b", values: vec![0.0, 1.0] },
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(roxmltree::Document::parse(&svg).is_ok());
    }

    #[test]
    fn stacked_bars_skip_empty_segments() {
        let svg = stacked_bars(
            "Relations",
            &years(),
            &[Series { name: "x & y", values: vec![1.0, 0.25] }, Series { name: "z", values: vec![0.0, 0.75] }],
        );
        // background rect, 3 bars and 2 legend swatches
        assert_eq!(svg.matches("<rect").count(), 6);
        assert!(svg.contains("x &amp; y"));
        assert!(roxmltree::Document::parse(&svg).is_ok());
    }

    #[test]
    fn charts_are_stable() {
        let s = || grouped_bars("S", &years(), &[Series { name: "h", values: vec![3.0, 1.0] }]);
        assert_eq!(s(), s());
    }
}
