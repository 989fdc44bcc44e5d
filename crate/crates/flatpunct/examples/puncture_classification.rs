//! Classify punctures: regular everywhere except the 4pi torsion classes.
//!
//! A puncture is irregular exactly when the cone point carries curvature 4pi,
//! i.e. total boundary curvature -2pi with a nonzero length invariant. The
//! complement of a planar triangle is the model regular case at -2pi.

use flatpunct::classify::{classify_regularity, invariant};
use flatpunct::{Angle, FlatDiskMetric};

fn report(label: &str, metric: &FlatDiskMetric) {
    let reg = classify_regularity(metric).expect("classification");
    print!(
        "{label}: K = {}, puncture curvature = {}, {}",
        reg.total_curvature,
        reg.puncture_curvature,
        if reg.regular { "regular" } else { "irregular" }
    );
    let inv = invariant(metric).expect("invariant");
    match inv.alpha_beta {
        Some((a, b)) => println!(", invariant (alpha, beta) = ({a:.6}, {b:.6})"),
        None => println!(),
    }
}

fn main() {
    let third = Angle::from_pi(-2.0 / 3.0);

    // Generic negative curvature: always regular.
    report(
        "generic",
        &FlatDiskMetric::disk(vec![Angle::from_pi(-0.9); 2], vec![1.0, 2.0]).unwrap(),
    );

    // Boundary of a planar triangle complement: kappa_i = A_i - pi with the
    // side from vertex i to i+1 (the one opposite A_{i+2}) as lengths[i].
    // A 3-4-5 right triangle lands in the trivial class.
    let (a, b, c) = (3.0f64, 4.0, 5.0);
    let alpha = ((b * b + c * c - a * a) / (2.0 * b * c)).acos();
    let beta = ((a * a + c * c - b * b) / (2.0 * a * c)).acos();
    let gamma = std::f64::consts::PI - alpha - beta;
    report(
        "triangle complement",
        &FlatDiskMetric::disk(
            vec![
                Angle::from_radians(alpha - std::f64::consts::PI),
                Angle::from_radians(beta - std::f64::consts::PI),
                Angle::from_radians(gamma - std::f64::consts::PI),
            ],
            vec![c, a, b],
        )
        .unwrap(),
    );

    // Unequal lengths at K = -2pi: torsion class, curvature 4pi, irregular.
    report(
        "torsion",
        &FlatDiskMetric::disk(vec![third; 3], vec![1.0, 2.0, 3.0]).unwrap(),
    );
}
