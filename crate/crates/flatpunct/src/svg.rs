//! Deterministic SVG rendering of boundary developments.
//!
//! The development of the boundary into the plane is drawn as a polyline at
//! a fixed 100-units-per-length scale, with vertex markers labeled by the
//! curvature. Ghost copies rotated by the closing holonomy hint at the cone
//! structure at infinity, and a plan's first cut triangle can be overlaid.
//! All coordinates are written with four decimals so identical inputs
//! produce byte-identical files.

use std::fmt::Write as _;

use crate::geom::{develop_boundary, Point};
use crate::metric::DiskMetric;
use crate::moves::{ModificationPlan, PlanStep};

/// Pixels per unit of boundary length.
pub const SCALE: f64 = 100.0;

/// Number of holonomy ghost copies drawn after the real development.
const GHOSTS: usize = 2;

fn fmt(x: f64) -> String {
    // Normalize negative zero so output is stable across math paths.
    let v = if x.abs() < 5e-5 { 0.0 } else { x };
    format!("{v:.4}")
}

struct Canvas {
    body: String,
    min: Point,
    max: Point,
}

impl Canvas {
    fn new() -> Canvas {
        Canvas {
            body: String::new(),
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn see(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    fn polyline(&mut self, pts: &[Point], style: &str) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            self.see(*p);
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{}{} {} ", cmd, fmt(p.x * SCALE), fmt(p.y * SCALE));
        }
        let _ = writeln!(self.body, "  <path d=\"{}\" {} />", d.trim_end(), style);
    }

    fn circle(&mut self, p: Point, r: f64, style: &str) {
        self.see(p);
        let _ = writeln!(
            self.body,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" {} />",
            fmt(p.x * SCALE),
            fmt(p.y * SCALE),
            fmt(r),
            style
        );
    }

    fn label(&mut self, p: Point, text: &str) {
        let _ = writeln!(
            self.body,
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#333\">{}</text>",
            fmt(p.x * SCALE + 6.0),
            fmt(p.y * SCALE - 6.0),
            text
        );
    }
}

/// Renders the developed boundary of `metric`. When `plan` has a leading
/// triangle cut, the removed triangle is overlaid on the segment it sits on.
pub fn render_development(metric: &DiskMetric, plan: Option<&ModificationPlan>) -> String {
    let dev = develop_boundary(metric);
    let mut canvas = Canvas::new();

    // Closed traversal: vertices plus the return to the image of the start.
    let mut traversal = dev.points.clone();
    traversal.push(dev.closing_motion.apply(Point::ORIGIN));

    // Holonomy ghost copies first, so the real boundary draws on top.
    let mut motion = dev.closing_motion;
    for _ in 0..GHOSTS {
        let ghost: Vec<Point> = traversal.iter().map(|p| motion.apply(*p)).collect();
        canvas.polyline(
            &ghost,
            "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"",
        );
        motion = motion.compose(&dev.closing_motion);
    }

    canvas.polyline(&traversal, "fill=\"none\" stroke=\"#1f3d7a\" stroke-width=\"2\"");
    for (i, p) in dev.points.iter().enumerate() {
        canvas.circle(*p, 3.0, "fill=\"#1f3d7a\"");
        canvas.label(*p, &format!("k{} = {}", i, metric.kappas()[i]));
    }

    if let Some(plan) = plan {
        if let Some(PlanStep::TriCut { i, a, v }) = plan.steps.first() {
            if *i + 1 < traversal.len() {
                let p = traversal[*i];
                let q = traversal[*i + 1];
                // Third vertex of the removed triangle: wedge `a` opens at p.
                let heading = (q.y - p.y).atan2(q.x - p.x);
                let w = std::f64::consts::PI - a.radians() - v.radians();
                let chord = p.distance(&q) * v.sin() / w.sin();
                let apex = Point::new(
                    p.x + chord * (heading + a.radians()).cos(),
                    p.y + chord * (heading + a.radians()).sin(),
                );
                canvas.polyline(
                    &[p, apex, q, p],
                    "fill=\"#d9534f22\" stroke=\"#d9534f\" stroke-width=\"1.5\"",
                );
            }
        }
    }

    let pad = 40.0;
    let min_x = canvas.min.x * SCALE - pad;
    let min_y = canvas.min.y * SCALE - pad;
    let width = (canvas.max.x - canvas.min.x) * SCALE + 2.0 * pad;
    let height = (canvas.max.y - canvas.min.y) * SCALE + 2.0 * pad;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n{}</svg>\n",
        fmt(min_x),
        fmt(min_y),
        fmt(width.max(1.0)),
        fmt(height.max(1.0)),
        canvas.body
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use num_rational::Rational64;

    fn sample() -> DiskMetric {
        DiskMetric::new(
            vec![Angle::from_pi_exact(Rational64::new(-2, 3)); 3],
            vec![1.0, 2.0, 1.5],
        )
        .unwrap()
    }

    #[test]
    fn rendering_is_deterministic() {
        let m = sample();
        assert_eq!(
            render_development(&m, None),
            render_development(&m, None)
        );
    }

    #[test]
    fn polyline_lengths_match_the_metric() {
        let m = sample();
        let svg = render_development(&m, None);
        // First path is a ghost; the boundary path carries the main stroke.
        let main = svg
            .lines()
            .find(|l| l.contains("#1f3d7a\" stroke-width=\"2\""))
            .expect("boundary path present");
        let d = main.split('"').nth(1).unwrap();
        let coords: Vec<f64> = d
            .split(|c| c == 'M' || c == 'L' || c == ' ')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().unwrap())
            .collect();
        let pts: Vec<(f64, f64)> = coords.chunks(2).map(|c| (c[0], c[1])).collect();
        for (i, len) in m.lengths().iter().enumerate() {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[i + 1];
            let drawn = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
            assert!((drawn - len * SCALE).abs() < 1e-6 * SCALE + 1e-3);
        }
    }

    #[test]
    fn cut_overlay_appears() {
        let m = sample();
        let mut plan = ModificationPlan::empty();
        plan.push(PlanStep::TriCut {
            i: 0,
            a: Angle::from_pi_exact(Rational64::new(1, 6)),
            v: Angle::from_pi_exact(Rational64::new(1, 6)),
        });
        let svg = render_development(&m, Some(&plan));
        assert!(svg.contains("#d9534f"));
    }
}
