//! Deterministic static SVG line charts.
//!
//! Self-contained SVG 1.1 documents with no scripting; coordinates are
//! formatted with fixed precision so equal inputs serialize to equal
//! bytes.

/// One polyline.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// One chart panel.
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 860.0;
const PANEL_HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;
const COLORS: [&str; 4] = ["#1f6fb2", "#d1495b", "#3a7d44", "#8d6a9f"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    if !(1e-3..1e4).contains(&magnitude) {
        format!("{v:.2e}")
    } else {
        let text = format!("{v:.3}");
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    }
}

struct Range {
    min: f64,
    max: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            if v.is_finite() {
                min = min.min(v);
                max = max.max(v);
            }
        }
        if !min.is_finite() || !max.is_finite() {
            return Range { min: 0.0, max: 1.0 };
        }
        if min == max {
            // Widen a degenerate range so the line sits mid-panel.
            let pad = if min == 0.0 { 1.0 } else { min.abs() * 0.5 };
            return Range {
                min: min - pad,
                max: max + pad,
            };
        }
        let pad = (max - min) * 0.05;
        Range {
            min: min - pad,
            max: max + pad,
        }
    }

    fn to_unit(&self, v: f64) -> f64 {
        (v - self.min) / (self.max - self.min)
    }
}

fn render_panel(svg: &mut String, chart: &Chart, y_offset: f64) {
    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_height = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x0 = MARGIN_LEFT;
    let y0 = y_offset + MARGIN_TOP;

    let x_range = Range::of(
        chart
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0)),
    );
    let y_range = Range::of(
        chart
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1)),
    );

    let to_x = |v: f64| x0 + x_range.to_unit(v) * plot_width;
    let to_y = |v: f64| y0 + (1.0 - y_range.to_unit(v)) * plot_height;

    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"16\" font-weight=\"bold\">{}</text>\n",
        coord(WIDTH / 2.0),
        coord(y_offset + 24.0),
        escape(&chart.title)
    ));

    // Frame.
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n",
        coord(x0),
        coord(y0),
        coord(plot_width),
        coord(plot_height)
    ));

    // Ticks and grid lines, five per axis.
    for i in 0..=4 {
        let fraction = i as f64 / 4.0;
        let xv = x_range.min + fraction * (x_range.max - x_range.min);
        let x = to_x(xv);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            x = coord(x),
            y1 = coord(y0),
            y2 = coord(y0 + plot_height)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            coord(x),
            coord(y0 + plot_height + 18.0),
            escape(&tick_label(xv))
        ));

        let yv = y_range.min + fraction * (y_range.max - y_range.min);
        let y = to_y(yv);
        svg.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
            x1 = coord(x0),
            x2 = coord(x0 + plot_width),
            y = coord(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            coord(x0 - 6.0),
            coord(y + 4.0),
            escape(&tick_label(yv))
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
        coord(x0 + plot_width / 2.0),
        coord(y0 + plot_height + 40.0),
        escape(&chart.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\" transform=\"rotate(-90 {} {})\">{}</text>\n",
        coord(x0 - 58.0),
        coord(y0 + plot_height / 2.0),
        coord(x0 - 58.0),
        coord(y0 + plot_height / 2.0),
        escape(&chart.y_label)
    ));

    // Series polylines and legend.
    for (index, series) in chart.series.iter().enumerate() {
        let color = COLORS[index % COLORS.len()];
        let mut path = String::new();
        for (i, (px, py)) in series.points.iter().enumerate() {
            let command = if i == 0 { 'M' } else { 'L' };
            path.push_str(&format!(
                "{command}{} {} ",
                coord(to_x(*px)),
                coord(to_y(*py))
            ));
        }
        svg.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"/>\n",
            path.trim_end(),
            color
        ));
        if chart.series.len() > 1 {
            let legend_y = y0 + 16.0 + 18.0 * index as f64;
            svg.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
                coord(x0 + 10.0),
                coord(legend_y - 10.0),
                color
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">{}</text>\n",
                coord(x0 + 28.0),
                coord(legend_y),
                escape(&series.label)
            ));
        }
    }
}

/// Renders one or more stacked chart panels into an SVG document.
pub fn render(charts: &[Chart]) -> String {
    let height = PANEL_HEIGHT * charts.len() as f64;
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        WIDTH as u32, height as u32, WIDTH as u32, height as u32
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    for (index, chart) in charts.iter().enumerate() {
        render_panel(&mut svg, chart, PANEL_HEIGHT * index as f64);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Keeps at most `limit` points, striding evenly; endpoint included.
pub fn downsample(points: &[(f64, f64)], limit: usize) -> Vec<(f64, f64)> {
    if points.len() <= limit || limit < 2 {
        return points.to_vec();
    }
    let stride = points.len().div_ceil(limit);
    let mut out: Vec<(f64, f64)> = points.iter().step_by(stride).copied().collect();
    if let Some(&last) = points.last() {
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}
