//! Complete canonical metrics to flat cones and print the gluing data.

use flatpunct::classify::{cone_completion, ConeCompletion};
use flatpunct::{Angle, FlatDiskMetric};

fn show(metric: &FlatDiskMetric) {
    match cone_completion(metric) {
        Ok(ConeCompletion::Cylinder { width }) => {
            println!("half-cylinder of width {width}, completes to the cylinder C_0");
        }
        Ok(ConeCompletion::Cone {
            cone_angle,
            pieces,
            gluing,
        }) => {
            println!("cone of angle {cone_angle} ({} triangle pieces)", pieces.len());
            for p in &pieces {
                println!(
                    "  apex {:.6} base angles ({:.6}, {:.6}) sides base {:.6} legs ({:.6}, {:.6})",
                    p.apex_angle, p.base_angles[0], p.base_angles[1], p.base, p.legs[0], p.legs[1]
                );
            }
            println!("  gluing: {gluing}");
        }
        Err(e) => println!("no completion: {e}"),
    }
}

fn main() {
    // n = 1: single isoceles triangle over the boundary loop.
    show(&FlatDiskMetric::disk(vec![Angle::from_pi(-0.5)], vec![1.0]).unwrap());

    // n = 2: kite of two triangles sharing the split diagonal.
    show(
        &FlatDiskMetric::disk(
            vec![Angle::from_pi(-0.75), Angle::from_pi(-0.75)],
            vec![1.0, 1.4],
        )
        .unwrap(),
    );

    // K = 0: cylinder class.
    show(&FlatDiskMetric::cylinder(2.0).unwrap());
}
