//! Decide modification equivalence of two metrics and print the certificate.
//!
//! Away from total curvature -2pi every pair with the same K is equivalent;
//! the interesting output is the pair of plans carrying both metrics to a
//! common canonical representative.

use flatpunct::classify::equivalent;
use flatpunct::{Angle, FlatDiskMetric};

fn metric(kappas: &[f64], lengths: &[f64]) -> FlatDiskMetric {
    FlatDiskMetric::disk(
        kappas.iter().map(|&k| Angle::from_pi(k)).collect(),
        lengths.to_vec(),
    )
    .expect("valid metric")
}

fn main() {
    // Same total curvature -9/4 pi, different boundary shapes.
    let a = metric(&[-0.75, -0.75, -0.75], &[1.0, 2.0, 3.0]);
    let b = metric(&[-0.50, -0.85, -0.90], &[2.0, 1.0, 0.5]);

    let result = equivalent(&a, &b, false).expect("decision");
    println!("equivalent: {}", result.equivalent);
    if let Some(cert) = result.certificate {
        println!(
            "certificate: {} + {} steps meeting at n = {} lengths {:?}",
            cert.plan_left.steps.len(),
            cert.plan_right.steps.len(),
            cert.common.n(),
            cert.common.lengths
        );
        println!("{}", serde_json::to_string_pretty(&cert).unwrap());
    }

    // At K = -2pi the torsion invariant separates classes.
    let c = metric(&[-2.0 / 3.0; 3], &[1.0, 2.0, 3.0]);
    let d = metric(&[-2.0 / 3.0; 3], &[1.0, 2.0, 4.0]);
    let r = equivalent(&c, &d, false).expect("decision");
    println!("(1,2,3) vs (1,2,4) at K = -2pi: equivalent = {}", r.equivalent);
}
