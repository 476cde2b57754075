//! Self-contained SVG figures: a histogram with a density overlay and a
//! step plot of rescaled Young diagrams against the limit shape.

use std::fmt::Write;

use crate::asymptotics::LimitShape;
use crate::harmonic::DistributionCurve;
use crate::partition::Partition;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const MARGIN: f64 = 50.0;

/// Affine map from data coordinates into the plot area.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn polyline(&self, points: impl IntoIterator<Item = (f64, f64)>, style: &str) -> String {
        let mut d = String::new();
        for (x, y) in points {
            let _ = write!(d, "{:.2},{:.2} ", self.px(x), self.py(y));
        }
        format!("<polyline fill=\"none\" {style} points=\"{}\"/>\n", d.trim_end())
    }

    fn axes(&self, title: &str, xlabel: &str) -> String {
        let mut s = String::new();
        let (l, r) = (MARGIN, WIDTH - MARGIN);
        let (t, b) = (MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            "<rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>",
            r - l,
            b - t
        );
        for i in 0..=4 {
            let fx = self.x0 + (self.x1 - self.x0) * f64::from(i) / 4.0;
            let fy = self.y0 + (self.y1 - self.y0) * f64::from(i) / 4.0;
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{fx:.2}</text>",
                self.px(fx),
                b + 16.0
            );
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{fy:.2}</text>",
                l - 6.0,
                self.py(fy) + 4.0
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            t - 18.0,
            escape(title)
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            HEIGHT - 12.0,
            escape(xlabel)
        );
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn document(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// Normalized histogram of `values` on `[lo, hi)` with `bins` bars, overlaid
/// with `density`.
pub fn histogram_svg(values: &[f64], density: &DistributionCurve, lo: f64, hi: f64, bins: usize, title: &str) -> String {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in values {
        if v >= lo && v < hi {
            counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let scale = 1.0 / (values.len().max(1) as f64 * width);
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 * scale).collect();
    let curve: Vec<(f64, f64)> = density.points().filter(|&(x, _)| x >= lo && x <= hi).collect();
    let top = heights.iter().chain(curve.iter().map(|(_, y)| y)).fold(0.0f64, |a, &b| a.max(b)) * 1.1;
    let frame = Frame { x0: lo, x1: hi, y0: 0.0, y1: if top > 0.0 { top } else { 1.0 } };

    let mut body = String::new();
    for (i, h) in heights.iter().enumerate() {
        let x = lo + i as f64 * width;
        let (px, py) = (frame.px(x), frame.py(*h));
        let _ = writeln!(
            body,
            "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#9ecae1\" stroke=\"#6baed6\"/>",
            frame.px(x + width) - px,
            frame.py(0.0) - py
        );
    }
    body.push_str(&frame.polyline(curve, "stroke=\"#d62728\" stroke-width=\"2\""));
    body.push_str(&frame.axes(title, "2S(λ) − log √(3|λ|)"));
    document(&body)
}

/// Rescaled shape functions `t ↦ φ_λ(t√N)/√N` of `partitions` (each with its
/// own normalizer `N`), with `L(t)` and the band `L(t) ± band`.
pub fn shape_svg(partitions: &[(Partition, u64)], band: f64, title: &str) -> String {
    let shape = LimitShape::default();
    let t_max = partitions
        .iter()
        .map(|(p, norm)| f64::from(p.largest()) / (*norm as f64).sqrt())
        .fold(1.0f64, f64::max)
        * 1.05;
    let y_max = shape.asymptote().max(
        partitions.iter().map(|(p, norm)| p.len() as f64 / (*norm as f64).sqrt()).fold(0.0, f64::max),
    ) + band;
    let frame = Frame { x0: 0.0, x1: t_max, y0: 0.0, y1: y_max * 1.05 };

    let mut body = String::new();
    let curve = |offset: f64| {
        (0..=400).map(move |i| {
            let t = t_max * f64::from(i) / 400.0;
            (t, (shape.value(t) + offset).max(0.0))
        })
    };
    body.push_str(&frame.polyline(curve(band), "stroke=\"#999\" stroke-dasharray=\"5,4\""));
    body.push_str(&frame.polyline(curve(-band), "stroke=\"#999\" stroke-dasharray=\"5,4\""));
    body.push_str(&frame.polyline(curve(0.0), "stroke=\"#d62728\" stroke-width=\"2\""));
    for (p, norm) in partitions {
        let root = (*norm as f64).sqrt();
        let mut points = vec![(0.0, 0.0)];
        let mut height = 0.0;
        for &part in p.parts().iter().rev() {
            let t = f64::from(part) / root;
            points.push((t, height));
            height += 1.0 / root;
            points.push((t, height));
        }
        points.push((t_max, height));
        body.push_str(&frame.polyline(points, "stroke=\"#1f77b4\" stroke-width=\"1\" stroke-opacity=\"0.7\""));
    }
    body.push_str(&frame.axes(title, "t"));
    document(&body)
}
