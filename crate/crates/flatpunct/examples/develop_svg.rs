//! Develop a boundary into the plane and write an SVG of the unfolding.

use flatpunct::geom::develop_boundary;
use flatpunct::svg::render_development;
use flatpunct::{Angle, DiskMetric};

fn main() {
    let metric = DiskMetric::new(
        vec![
            Angle::from_pi(-0.5),
            Angle::from_pi(-0.25),
            Angle::from_pi(-0.75),
        ],
        vec![1.0, 1.5, 0.8],
    )
    .unwrap();

    let dev = develop_boundary(&metric);
    for (i, p) in dev.points.iter().enumerate() {
        println!("vertex {i}: ({:+.6}, {:+.6})", p.x, p.y);
    }
    println!(
        "closing holonomy: rotation {:+.6} rad, translation ({:+.6}, {:+.6})",
        dev.closing_motion.rotation, dev.closing_motion.translation.x, dev.closing_motion.translation.y
    );

    let svg = render_development(&metric, None);
    let path = std::env::temp_dir().join("development.svg");
    std::fs::write(&path, svg).unwrap();
    println!("wrote {}", path.display());
}
