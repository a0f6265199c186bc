//! Minimal deterministic SVG charts: multi-series line charts for binned or
//! yearly series, and back-to-back pyramid bars for stage distributions.
//! Layout is fixed-function — same input, same bytes.

use crate::distribution::Pyramid;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// One plotted line.
#[derive(Debug, Clone)]
pub struct ChartSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct ChartLabels {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

pub fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
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

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick positions covering [min, max] with a 1/2/5·10^k step.
fn nice_ticks(min: f64, max: f64, target: usize) -> Vec<f64> {
    let span = (max - min).abs();
    if span == 0.0 {
        return vec![min];
    }
    let raw_step = span / target.max(1) as f64;
    let magnitude = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * magnitude)
        .find(|s| span / s <= target as f64)
        .unwrap_or(10.0 * magnitude);
    let first = (min / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut t = first;
    while t <= max + step * 1e-9 {
        // avoid "-0"
        ticks.push(if t == 0.0 { 0.0 } else { t });
        t += step;
    }
    ticks
}

fn tick_label(v: f64) -> String {
    let abs = v.abs();
    if abs >= 1e9 {
        format!("{}B", fmt_short(v / 1e9))
    } else if abs >= 1e6 {
        format!("{}M", fmt_short(v / 1e6))
    } else if abs >= 1e3 {
        format!("{}k", fmt_short(v / 1e3))
    } else {
        fmt_short(v)
    }
}

fn fmt_short(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Renders a multi-series line chart. Each series becomes a `<g>` tagged
/// with `data-series`, a polyline, circle markers carrying the data values,
/// and a legend entry.
pub fn line_chart(labels: &ChartLabels, series: &[ChartSeries]) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let all_points: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.clone()).collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (0.0f64, f64::NEG_INFINITY);
    for &(x, y) in &all_points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if all_points.is_empty() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }

    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        fmt2(MARGIN_LEFT + plot_w / 2.0),
        xml_escape(&labels.title)
    ));

    // axes
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt2(x0),
        fmt2(MARGIN_TOP),
        fmt2(x0),
        fmt2(y0)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt2(x0),
        fmt2(y0),
        fmt2(MARGIN_LEFT + plot_w),
        fmt2(y0)
    ));

    for t in nice_ticks(x_min, x_max, 8) {
        let x = sx(t);
        svg.push_str(&format!(
            "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
            fmt2(x),
            fmt2(y0),
            fmt2(y0 + 6.0)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            fmt2(x),
            fmt2(y0 + 20.0),
            xml_escape(&fmt_short(t))
        ));
    }
    for t in nice_ticks(y_min, y_max, 6) {
        let y = sy(t);
        svg.push_str(&format!(
            "  <line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#cccccc\"/>\n",
            fmt2(x0),
            fmt2(MARGIN_LEFT + plot_w),
            fmt2(y)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            fmt2(x0 - 8.0),
            fmt2(y + 4.0),
            xml_escape(&tick_label(t))
        ));
    }

    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        fmt2(MARGIN_LEFT + plot_w / 2.0),
        fmt2(HEIGHT - 16.0),
        xml_escape(&labels.x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"20\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {})\">{}</text>\n",
        fmt2(MARGIN_TOP + plot_h / 2.0),
        fmt2(MARGIN_TOP + plot_h / 2.0),
        xml_escape(&labels.y_label)
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        svg.push_str(&format!(
            "  <g data-series=\"{}\">\n",
            xml_escape(&s.name)
        ));
        if s.points.len() > 1 {
            let coords: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{},{}", fmt2(sx(x)), fmt2(sy(y))))
                .collect();
            svg.push_str(&format!(
                "    <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
                color,
                coords.join(" ")
            ));
        }
        for &(x, y) in &s.points {
            svg.push_str(&format!(
                "    <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\" data-x=\"{}\" data-y=\"{}\"/>\n",
                fmt2(sx(x)),
                fmt2(sy(y)),
                color,
                xml_escape(&fmt_short(x)),
                xml_escape(&crate::output::fmt_sig(y, crate::output::SIG_DIGITS)),
            ));
        }
        svg.push_str("  </g>\n");

        let ly = MARGIN_TOP + 14.0 + i as f64 * 20.0;
        svg.push_str(&format!(
            "  <rect x=\"{}\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{}\"/>\n",
            fmt2(WIDTH - MARGIN_RIGHT + 16.0),
            fmt2(ly - 11.0),
            color
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
            fmt2(WIDTH - MARGIN_RIGHT + 36.0),
            fmt2(ly),
            xml_escape(&s.name)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Renders a stage pyramid: amount shares on the top panel, round-count
/// shares on the bottom, left ecosystem bars growing leftward and right
/// ecosystem bars growing rightward from a central stage axis.
pub fn pyramid_chart(title: &str, pyramid: &Pyramid) -> String {
    let panel_h = (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM - 40.0) / 2.0;
    let center_x = WIDTH / 2.0;
    let half_w = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / 2.0 - 40.0;
    let max_share = pyramid
        .rows
        .iter()
        .flat_map(|r| {
            [
                r.left_amount_share,
                r.right_amount_share,
                r.left_count_share,
                r.right_count_share,
            ]
        })
        .fold(0.0f64, f64::max)
        .max(1e-9);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"26\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        fmt2(center_x),
        xml_escape(title)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"44\" font-size=\"13\" text-anchor=\"end\" data-series=\"{}\">{}</text>\n",
        fmt2(center_x - 60.0),
        xml_escape(&pyramid.left),
        xml_escape(&pyramid.left)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"44\" font-size=\"13\" text-anchor=\"start\" data-series=\"{}\">{}</text>\n",
        fmt2(center_x + 60.0),
        xml_escape(&pyramid.right),
        xml_escape(&pyramid.right)
    ));

    let n = pyramid.rows.len().max(1);
    let row_h = panel_h / n as f64;
    let bar_h = row_h * 0.62;

    for (panel, view_name) in [(0usize, "amount share"), (1usize, "round share")] {
        let panel_top = MARGIN_TOP + 10.0 + panel as f64 * (panel_h + 40.0);
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            fmt2(center_x),
            fmt2(panel_top - 2.0),
            xml_escape(view_name)
        ));
        svg.push_str(&format!(
            "  <g data-panel=\"{}\">\n",
            xml_escape(view_name)
        ));
        for (i, row) in pyramid.rows.iter().enumerate() {
            let y = panel_top + i as f64 * row_h + (row_h - bar_h) / 2.0;
            let (left_share, right_share) = if panel == 0 {
                (row.left_amount_share, row.right_amount_share)
            } else {
                (row.left_count_share, row.right_count_share)
            };
            let lw = left_share / max_share * half_w;
            let rw = right_share / max_share * half_w;
            svg.push_str(&format!(
                "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" \
                 data-stage=\"{}\" data-share=\"{}\"/>\n",
                fmt2(center_x - 52.0 - lw),
                fmt2(y),
                fmt2(lw),
                fmt2(bar_h),
                PALETTE[2],
                row.stage.canonical_name(),
                crate::output::fmt_sig(left_share, crate::output::SIG_DIGITS),
            ));
            svg.push_str(&format!(
                "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" \
                 data-stage=\"{}\" data-share=\"{}\"/>\n",
                fmt2(center_x + 52.0),
                fmt2(y),
                fmt2(rw),
                fmt2(bar_h),
                PALETTE[0],
                row.stage.canonical_name(),
                crate::output::fmt_sig(right_share, crate::output::SIG_DIGITS),
            ));
            svg.push_str(&format!(
                "    <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                fmt2(center_x),
                fmt2(y + bar_h / 2.0 + 4.0),
                row.stage.canonical_name()
            ));
        }
        svg.push_str("  </g>\n");
    }

    svg.push_str("</svg>\n");
    svg
}
