//! Minimal deterministic SVG emitters for the report plots. No styling
//! ambitions; every byte is a pure function of the data.

use std::fmt::Write;

use crate::analytics::FiveNumberSummary;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 90.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn new(title: &str) -> Canvas {
        let mut body = String::new();
        write!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
             font-family=\"sans-serif\" font-size=\"12\">\n\
             <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
             <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            WIDTH / 2.0,
            escape(title)
        )
        .unwrap();
        Canvas { body }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2)
        )
        .unwrap();
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"black\"/>",
            fmt(x),
            fmt(y),
            fmt(w.max(0.0)),
            fmt(h.max(0.0))
        )
        .unwrap();
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\"/>",
            fmt(x),
            fmt(y)
        )
        .unwrap();
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, content: &str, extra: &str) {
        writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" {extra}>{}</text>",
            fmt(x),
            fmt(y),
            escape(content)
        )
        .unwrap();
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        self.line(
            MARGIN_LEFT,
            HEIGHT - MARGIN_BOTTOM,
            WIDTH - MARGIN_RIGHT,
            HEIGHT - MARGIN_BOTTOM,
            "black",
            1.0,
        );
        self.line(
            MARGIN_LEFT,
            MARGIN_TOP,
            MARGIN_LEFT,
            HEIGHT - MARGIN_BOTTOM,
            "black",
            1.0,
        );
        self.text(
            (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
            HEIGHT - 14.0,
            "middle",
            x_label,
            "",
        );
        self.text(
            16.0,
            (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
            "middle",
            y_label,
            &format!(
                "transform=\"rotate(-90 16 {})\"",
                fmt((MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0)
            ),
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Scale {
    lo: f64,
    hi: f64,
    out_lo: f64,
    out_hi: f64,
}

impl Scale {
    fn fit(values: impl Iterator<Item = f64>, out_lo: f64, out_hi: f64) -> Scale {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Scale {
            lo: lo - pad,
            hi: hi + pad,
            out_lo,
            out_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.out_lo + (v - self.lo) / (self.hi - self.lo) * (self.out_hi - self.out_lo)
    }
}

/// Vertical bar chart, one bar per labelled value, in the given order.
pub fn bar_chart(title: &str, x_label: &str, y_label: &str, bars: &[(String, f64)]) -> String {
    let mut canvas = Canvas::new(title);
    canvas.axes(x_label, y_label);
    if bars.is_empty() {
        return canvas.finish();
    }
    let y = Scale::fit(
        bars.iter().map(|(_, v)| *v).chain(std::iter::once(0.0)),
        HEIGHT - MARGIN_BOTTOM,
        MARGIN_TOP,
    );
    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let step = plot_width / bars.len() as f64;
    let bar_width = step * 0.7;
    let zero = y.map(0.0);
    for (i, (label, value)) in bars.iter().enumerate() {
        let x = MARGIN_LEFT + step * i as f64 + (step - bar_width) / 2.0;
        let yv = y.map(*value);
        let (top, h) = if yv < zero { (yv, zero - yv) } else { (zero, yv - zero) };
        canvas.rect(x, top, bar_width, h, PALETTE[0]);
        canvas.text(
            x + bar_width / 2.0,
            HEIGHT - MARGIN_BOTTOM + 14.0,
            "end",
            label,
            &format!(
                "transform=\"rotate(-45 {} {})\"",
                fmt(x + bar_width / 2.0),
                fmt(HEIGHT - MARGIN_BOTTOM + 14.0)
            ),
        );
    }
    // y-axis ticks at min/zero/max
    for v in [y.lo, 0.0, y.hi] {
        let yy = y.map(v);
        canvas.line(MARGIN_LEFT - 4.0, yy, MARGIN_LEFT, yy, "black", 1.0);
        canvas.text(MARGIN_LEFT - 8.0, yy + 4.0, "end", &format!("{v:.2}"), "");
    }
    canvas.finish()
}

/// Grouped boxplot, one box per labelled five-number summary.
pub fn grouped_boxplot(title: &str, y_label: &str, groups: &[(String, FiveNumberSummary)]) -> String {
    let mut canvas = Canvas::new(title);
    canvas.axes("", y_label);
    if groups.is_empty() {
        return canvas.finish();
    }
    let all_values = groups.iter().flat_map(|(_, s)| {
        s.outliers
            .iter()
            .copied()
            .chain([s.lower_whisker, s.upper_whisker, s.q1, s.q3, s.median])
            .collect::<Vec<_>>()
    });
    let y = Scale::fit(all_values, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let step = plot_width / groups.len() as f64;
    let box_width = step * 0.5;
    for (i, (label, s)) in groups.iter().enumerate() {
        let cx = MARGIN_LEFT + step * (i as f64 + 0.5);
        let color = PALETTE[i % PALETTE.len()];
        canvas.line(cx, y.map(s.lower_whisker), cx, y.map(s.q1), "black", 1.0);
        canvas.line(cx, y.map(s.q3), cx, y.map(s.upper_whisker), "black", 1.0);
        canvas.line(
            cx - box_width / 4.0,
            y.map(s.lower_whisker),
            cx + box_width / 4.0,
            y.map(s.lower_whisker),
            "black",
            1.0,
        );
        canvas.line(
            cx - box_width / 4.0,
            y.map(s.upper_whisker),
            cx + box_width / 4.0,
            y.map(s.upper_whisker),
            "black",
            1.0,
        );
        canvas.rect(
            cx - box_width / 2.0,
            y.map(s.q3),
            box_width,
            (y.map(s.q1) - y.map(s.q3)).abs(),
            color,
        );
        canvas.line(
            cx - box_width / 2.0,
            y.map(s.median),
            cx + box_width / 2.0,
            y.map(s.median),
            "black",
            2.0,
        );
        for &o in &s.outliers {
            canvas.circle(cx, y.map(o), 2.5, "black");
        }
        canvas.text(
            cx,
            HEIGHT - MARGIN_BOTTOM + 14.0,
            "end",
            label,
            &format!(
                "transform=\"rotate(-30 {} {})\"",
                fmt(cx),
                fmt(HEIGHT - MARGIN_BOTTOM + 14.0)
            ),
        );
    }
    for v in [y.lo, y.hi] {
        let yy = y.map(v);
        canvas.line(MARGIN_LEFT - 4.0, yy, MARGIN_LEFT, yy, "black", 1.0);
        canvas.text(MARGIN_LEFT - 8.0, yy + 4.0, "end", &format!("{v:.2}"), "");
    }
    canvas.finish()
}

/// Overlayed line chart, one polyline per named series of (x, y) points.
pub fn multi_line(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    let mut canvas = Canvas::new(title);
    canvas.axes(x_label, y_label);
    let xs = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1));
    let x = Scale::fit(xs, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let y = Scale::fit(ys, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(px, py)| format!("{},{}", fmt(x.map(px)), fmt(y.map(py))))
            .collect();
        writeln!(
            canvas.body,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            path.join(" ")
        )
        .unwrap();
        canvas.text(
            WIDTH - MARGIN_RIGHT - 8.0,
            MARGIN_TOP + 16.0 * i as f64 + 12.0,
            "end",
            label,
            &format!("fill=\"{color}\""),
        );
    }
    canvas.finish()
}

/// Scatter of labelled points colored by class.
pub fn scatter(title: &str, points: &[(f64, f64, String, usize)]) -> String {
    let mut canvas = Canvas::new(title);
    canvas.axes("component 0", "component 1");
    let x = Scale::fit(points.iter().map(|p| p.0), MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let y = Scale::fit(points.iter().map(|p| p.1), HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    for &(px, py, ref label, class) in points {
        let color = PALETTE[class % PALETTE.len()];
        canvas.circle(x.map(px), y.map(py), 3.0, color);
        canvas.text(x.map(px) + 5.0, y.map(py) - 3.0, "start", label, "font-size=\"9\"");
    }
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::boxplot_stats;

    #[test]
    fn bar_chart_is_deterministic_and_well_formed() {
        let bars = vec![("alpha".to_string(), 1.5), ("beta".to_string(), -0.5)];
        let a = bar_chart("t", "x", "y", &bars);
        let b = bar_chart("t", "x", "y", &bars);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("alpha"));
    }

    #[test]
    fn boxplot_handles_single_group() {
        let s = boxplot_stats(&[1.0, 2.0, 3.0]).unwrap();
        let svg = grouped_boxplot("t", "rho", &[("g".to_string(), s)]);
        assert!(svg.contains("rect"));
    }

    #[test]
    fn multi_line_renders_all_series() {
        let svg = multi_line(
            "t",
            "theta",
            "p",
            &[
                ("c0".to_string(), vec![(0.0, 0.1), (1.0, 0.9)]),
                ("c1".to_string(), vec![(0.0, 0.2), (1.0, 0.8)]),
            ],
        );
        assert_eq!(svg.matches("polyline").count(), 2);
    }

    #[test]
    fn escape_special_characters() {
        let svg = bar_chart("a<b&c", "x", "y", &[]);
        assert!(svg.contains("a&lt;b&amp;c"));
    }
}
