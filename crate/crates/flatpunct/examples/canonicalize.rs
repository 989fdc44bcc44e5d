//! Reduce a five-vertex metric to its canonical form and replay the plan.

use flatpunct::moves::{canonicalize, verify_plan};
use flatpunct::{Angle, DiskMetric};

fn main() {
    let metric = DiskMetric::new(
        vec![
            Angle::from_pi(-0.55),
            Angle::from_pi(-0.40),
            Angle::from_pi(-0.35),
            Angle::from_pi(-0.60),
            Angle::from_pi(-0.30),
        ],
        vec![1.0, 0.7, 1.3, 0.9, 1.1],
    )
    .expect("valid boundary data");

    println!("input K = {} (k = {} vertices)", metric.total_curvature(), metric.vertex_count());

    let (canonical, plan) = canonicalize(&metric).expect("canonicalization");
    println!(
        "canonical form: n = {}, vertex curvature = {}, lengths = {:?}",
        canonical.n(),
        canonical.vertex_curvature(),
        canonical.lengths
    );
    println!("plan has {} steps", plan.steps.len());

    let ok = verify_plan(
        &flatpunct::FlatDiskMetric::Disk(metric),
        &plan,
        &flatpunct::FlatDiskMetric::Disk(canonical.to_disk()),
        true,
    )
    .expect("replay");
    println!("plan replays to the canonical form: {ok}");
}
