//! Minimal self-contained SVG line charts for experiment output.
//!
//! No styling dependencies and no external assets: one `<svg>` document with
//! axes, gridlines, tick labels, a legend, and one polyline per series.

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 44.0;
const MARGIN_B: f64 = 56.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// One labelled polyline.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

/// Chart description; `x_ticks` overrides the automatic numeric ticks with
/// explicit `(position, label)` pairs (used for categorical x axes).
pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: &'a [Series<'a>],
    pub x_ticks: Option<&'a [(f64, String)]>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:.4}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn bounds(series: &[Series<'_>], pick_x: bool) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in s.points {
            let v = if pick_x { x } else { y };
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

/// Renders the chart to a complete standalone SVG document.
pub fn line_chart(chart: &Chart<'_>) -> String {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let (xmin, xmax) = bounds(chart.series, true);
    let (ymin0, ymax0) = bounds(chart.series, false);
    let ypad = (ymax0 - ymin0) * 0.05;
    let (ymin, ymax) = (ymin0 - ypad, ymax0 + ypad);

    let sx = |x: f64| MARGIN_L + (x - xmin) / (xmax - xmin) * plot_w;
    let sy = |y: f64| MARGIN_T + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h;

    let mut out = String::with_capacity(8 * 1024);
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        WIDTH / 2.0,
        escape(chart.title)
    ));

    // Gridlines and ticks.
    let x_ticks: Vec<(f64, String)> = match chart.x_ticks {
        Some(t) => t.to_vec(),
        None => (0..=4)
            .map(|i| {
                let v = xmin + (xmax - xmin) * i as f64 / 4.0;
                (v, fmt_tick(v))
            })
            .collect(),
    };
    for (v, label) in &x_ticks {
        let x = sx(*v);
        out.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{MARGIN_T}\" x2=\"{x:.1}\" y2=\"{:.1}\" \
             stroke=\"#ddd\"/>\n",
            MARGIN_T + plot_h
        ));
        out.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_T + plot_h + 18.0,
            escape(label)
        ));
    }
    for i in 0..=4 {
        let v = ymin + (ymax - ymin) * i as f64 / 4.0;
        let y = sy(v);
        out.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"#ddd\"/>\n",
            MARGIN_L + plot_w
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 8.0,
            y + 4.0,
            fmt_tick(v)
        ));
    }
    if ymin < 0.0 && ymax > 0.0 {
        let y = sy(0.0);
        out.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
            MARGIN_L + plot_w
        ));
    }

    // Axes.
    out.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#333\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(chart.x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(chart.y_label)
    ));

    // Series polylines.
    for (i, s) in chart.series.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for (j, &(x, y)) in s.points.iter().enumerate() {
            path.push_str(if j == 0 { "M" } else { " L" });
            path.push_str(&format!("{:.2} {:.2}", sx(x), sy(y)));
        }
        out.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }

    // Legend, top-right inside the plot area.
    for (i, s) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_T + 16.0 + 18.0 * i as f64;
        let x = MARGIN_L + plot_w - 150.0;
        out.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            x + 24.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>\n",
            x + 30.0,
            y + 4.0,
            escape(s.label)
        ));
    }

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_contains_series_and_labels() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)];
        let chart = Chart {
            title: "curve <1>",
            x_label: "offset",
            y_label: "value",
            series: &[Series {
                label: "run A",
                points: &pts,
            }],
            x_ticks: None,
        };
        let svg = line_chart(&chart);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("curve &lt;1&gt;"), "title must be escaped");
        assert!(svg.contains("run A"));
        assert!(svg.contains("<path"));
    }

    #[test]
    fn explicit_ticks_and_degenerate_ranges_render() {
        let pts = [(0.0, 0.5), (1.0, 0.5)];
        let ticks = vec![(0.0, "inf".to_string()), (1.0, "10".to_string())];
        let chart = Chart {
            title: "flat",
            x_label: "snr",
            y_label: "rate",
            series: &[Series {
                label: "only",
                points: &pts,
            }],
            x_ticks: Some(&ticks),
        };
        let svg = line_chart(&chart);
        assert!(svg.contains(">inf</text>"));
        assert!(svg.contains("<path"), "flat series must still draw");
    }

    #[test]
    fn tick_formatting_is_compact() {
        assert_eq!(fmt_tick(0.0), "0");
        assert_eq!(fmt_tick(1.5), "1.5");
        assert_eq!(fmt_tick(-288.0), "-288");
        assert_eq!(fmt_tick(0.25), "0.25");
    }
}
