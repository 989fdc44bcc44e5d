//! Planar Euclidean primitives: triangle solvers, rigid motions, and the
//! development of a boundary polyline into the plane.
//!
//! Conventions: angles in radians, positive boundary curvature turns left,
//! and the boundary is traversed with the surface on the left.

use thiserror::Error;

use crate::metric::{DiskMetric, EPS_ANGLE};

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
}

/// A solved Euclidean triangle. `sides[k]` is opposite `angles[k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleSolution {
    pub angles: [f64; 3],
    pub sides: [f64; 3],
}

/// Rotation followed by translation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidMotion {
    pub rotation: f64,
    pub translation: Point,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl RigidMotion {
    pub fn identity() -> RigidMotion {
        RigidMotion {
            rotation: 0.0,
            translation: Point::ORIGIN,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        Point::new(
            c * p.x - s * p.y + self.translation.x,
            s * p.x + c * p.y + self.translation.y,
        )
    }

    /// `self` after `other`: the motion mapping p to self(other(p)).
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        RigidMotion {
            rotation: self.rotation + other.rotation,
            translation: self.apply(other.translation),
        }
    }

    pub fn inverse(&self) -> RigidMotion {
        let (s, c) = self.rotation.sin_cos();
        RigidMotion {
            rotation: -self.rotation,
            translation: Point::new(
                -(c * self.translation.x + s * self.translation.y),
                -(-s * self.translation.x + c * self.translation.y),
            ),
        }
    }
}

/// Planar unrolling of a disk metric's boundary polyline.
#[derive(Clone, Debug)]
pub struct DevelopedBoundary {
    /// One point per boundary vertex, in order; the first is the origin.
    pub points: Vec<Point>,
    /// Maps the start frame to the frame reached after one full traversal.
    pub closing_motion: RigidMotion,
}

/// Side-angle-side solver. The two given sides enclose `apex`.
pub fn solve_sas(side_a: f64, side_b: f64, apex: f64) -> Result<TriangleSolution, GeomError> {
    if !(side_a > 0.0) || !(side_b > 0.0) {
        return Err(GeomError::Domain(format!(
            "sides must be positive, got {side_a}, {side_b}"
        )));
    }
    if !(apex > 0.0 && apex < std::f64::consts::PI) {
        return Err(GeomError::Domain(format!(
            "apex angle must lie in (0, pi), got {apex}"
        )));
    }
    let third = (side_a * side_a + side_b * side_b - 2.0 * side_a * side_b * apex.cos()).sqrt();
    // Angle opposite side_a, by the law of sines; clamp guards roundoff.
    let sin_a = (side_a * apex.sin() / third).clamp(-1.0, 1.0);
    let mut angle_a = sin_a.asin();
    // asin is ambiguous past pi/2; the larger side carries the obtuse angle.
    if side_a > side_b && side_a * side_a > side_b * side_b + third * third {
        angle_a = std::f64::consts::PI - angle_a;
    }
    let angle_b = std::f64::consts::PI - apex - angle_a;
    Ok(TriangleSolution {
        angles: [angle_a, angle_b, apex],
        sides: [side_a, side_b, third],
    })
}

/// Angle-side-angle solver: `base` joins the vertices carrying `angle_a` and
/// `angle_v`; the remaining angle is `pi - angle_a - angle_v`.
///
/// The side adjacent to `angle_a` (opposite `angle_v`) has length
/// `base*sin(angle_v)/sin(w)`; symmetrically for the other chord. These are
/// the chord lengths of every boundary cut.
pub fn solve_asa(angle_a: f64, base: f64, angle_v: f64) -> Result<TriangleSolution, GeomError> {
    if !(angle_a > 0.0) || !(angle_v > 0.0) {
        return Err(GeomError::Domain(format!(
            "angles must be positive, got {angle_a}, {angle_v}"
        )));
    }
    if !(base > 0.0) {
        return Err(GeomError::Domain(format!("base must be positive, got {base}")));
    }
    let w = std::f64::consts::PI - angle_a - angle_v;
    if w <= EPS_ANGLE {
        return Err(GeomError::DegenerateTriangle(format!(
            "angle sum {} leaves no room for the third vertex",
            angle_a + angle_v
        )));
    }
    let chord_a = base * angle_v.sin() / w.sin();
    let chord_v = base * angle_a.sin() / w.sin();
    Ok(TriangleSolution {
        angles: [angle_a, angle_v, w],
        sides: [chord_a, chord_v, base],
    })
}

/// Unrolls the boundary into the plane: start at the origin heading along +x,
/// advance by each segment length and turn by the curvature at each vertex.
pub fn develop_boundary(metric: &DiskMetric) -> DevelopedBoundary {
    let k = metric.vertex_count();
    let mut points = Vec::with_capacity(k);
    let mut pos = Point::ORIGIN;
    let mut heading = 0.0_f64;
    points.push(pos);
    for i in 0..k {
        let l = metric.lengths()[i];
        pos = Point::new(pos.x + l * heading.cos(), pos.y + l * heading.sin());
        heading += metric.kappas()[(i + 1) % k].radians();
        if i + 1 < k {
            points.push(pos);
        }
    }
    // After the final segment we also turn by the curvature at vertex 0, so
    // the closing rotation is the full sum of curvatures.
    DevelopedBoundary {
        points,
        closing_motion: RigidMotion {
            rotation: heading,
            translation: pos,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use num_rational::Rational64;
    use std::f64::consts::PI;

    fn metric(kappas_pi: &[Rational64], lengths: &[f64]) -> DiskMetric {
        DiskMetric::new(
            kappas_pi.iter().map(|r| Angle::from_pi_exact(*r)).collect(),
            lengths.to_vec(),
        )
        .unwrap()
    }

    /// Coordinate-geometry oracle: place the SAS data explicitly and measure.
    fn sas_oracle(a: f64, b: f64, apex: f64) -> TriangleSolution {
        // Apex at origin, one side along +x, the other rotated by apex.
        let p = Point::new(b, 0.0);
        let q = Point::new(a * apex.cos(), a * apex.sin());
        let third = p.distance(&q);
        let angle_at = |v: Point, u: Point, w: Point| -> f64 {
            let (ux, uy) = (u.x - v.x, u.y - v.y);
            let (wx, wy) = (w.x - v.x, w.y - v.y);
            ((ux * wx + uy * wy) / (ux.hypot(uy) * wx.hypot(wy)))
                .clamp(-1.0, 1.0)
                .acos()
        };
        TriangleSolution {
            angles: [angle_at(p, Point::ORIGIN, q), angle_at(q, Point::ORIGIN, p), apex],
            sides: [a, b, third],
        }
    }

    #[test]
    fn sas_equilateral() {
        let t = solve_sas(1.0, 1.0, PI / 3.0).unwrap();
        assert!((t.sides[2] - 1.0).abs() < 1e-12);
        for a in t.angles {
            assert!((a - PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sas_right_isoceles() {
        let t = solve_sas(1.0, 1.0, PI / 2.0).unwrap();
        assert!((t.sides[2] - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((t.angles[0] - PI / 4.0).abs() < 1e-12);
        assert!((t.angles[1] - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn sas_against_coordinate_oracle() {
        let t = solve_sas(2.0, 3.0, PI / 4.0).unwrap();
        let o = sas_oracle(2.0, 3.0, PI / 4.0);
        assert!((t.sides[2] - o.sides[2]).abs() < 1e-12);
        for k in 0..3 {
            assert!((t.angles[k] - o.angles[k]).abs() < 1e-12, "angle {k}");
        }
    }

    #[test]
    fn sas_obtuse_branch() {
        // side 5 opposite an obtuse angle; check against the oracle.
        let t = solve_sas(5.0, 1.0, 0.3).unwrap();
        let o = sas_oracle(5.0, 1.0, 0.3);
        for k in 0..3 {
            assert!((t.angles[k] - o.angles[k]).abs() < 1e-9, "angle {k}");
        }
    }

    #[test]
    fn sas_rejects_bad_input() {
        assert!(matches!(solve_sas(0.0, 1.0, 1.0), Err(GeomError::Domain(_))));
        assert!(matches!(solve_sas(1.0, 1.0, PI), Err(GeomError::Domain(_))));
        assert!(matches!(solve_sas(1.0, 1.0, -0.1), Err(GeomError::Domain(_))));
    }

    #[test]
    fn asa_equilateral() {
        let t = solve_asa(PI / 3.0, 1.0, PI / 3.0).unwrap();
        for s in t.sides {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn asa_right_isoceles_chords() {
        let t = solve_asa(PI / 2.0, 1.0, PI / 4.0).unwrap();
        assert!((t.angles[2] - PI / 4.0).abs() < 1e-12);
        assert!((t.sides[0] - 1.0).abs() < 1e-12);
        assert!((t.sides[1] - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn asa_against_coordinate_oracle() {
        let (a, v) = (0.2333 * PI, 0.3 * PI);
        let t = solve_asa(a, 1.0, v).unwrap();
        // Place the base on the x-axis and intersect the two rays.
        let slope_a = a.tan();
        let slope_v = (PI - v).tan();
        let x = slope_v / (slope_v - slope_a);
        let y = slope_a * x;
        let p = Point::new(x, y);
        let chord_a = p.distance(&Point::ORIGIN);
        let chord_v = p.distance(&Point::new(1.0, 0.0));
        assert!((t.sides[0] - chord_a).abs() < 1e-12);
        assert!((t.sides[1] - chord_v).abs() < 1e-12);
    }

    #[test]
    fn asa_degenerate() {
        assert!(matches!(
            solve_asa(PI / 2.0, 1.0, PI / 2.0),
            Err(GeomError::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn develop_equilateral_complement() {
        let m = metric(
            &[Rational64::new(-2, 3), Rational64::new(-2, 3), Rational64::new(-2, 3)],
            &[1.0, 1.0, 1.0],
        );
        let dev = develop_boundary(&m);
        let rot = dev.closing_motion.rotation;
        // Closing rotation is -2pi, i.e. 0 mod 2pi.
        assert!((rot + 2.0 * PI).abs() < 1e-12);
        assert_eq!(dev.points.len(), 3);
    }

    #[test]
    fn develop_single_vertex() {
        let m = metric(&[Rational64::new(-1, 2)], &[4.0]);
        let dev = develop_boundary(&m);
        assert!((dev.closing_motion.rotation + PI / 2.0).abs() < 1e-12);
        assert_eq!(dev.points.len(), 1);
    }

    #[test]
    fn develop_right_isoceles_complement() {
        // Complement of the right isoceles triangle with legs 1.
        let m = DiskMetric::new(
            vec![
                Angle::from_pi_exact(Rational64::new(-1, 2)),
                Angle::from_pi_exact(Rational64::new(-3, 4)),
                Angle::from_pi_exact(Rational64::new(-3, 4)),
            ],
            vec![1.0, 2.0_f64.sqrt(), 1.0],
        )
        .unwrap();
        let dev = develop_boundary(&m);
        // Hand-placed coordinates: start at the right-angle vertex heading +x.
        assert!(dev.points[0].distance(&Point::ORIGIN) < 1e-12);
        assert!(dev.points[1].distance(&Point::new(1.0, 0.0)) < 1e-12);
        // Turn by -3pi/4 after the first segment: heading becomes -3pi/4.
        let expect = Point::new(
            1.0 + 2.0_f64.sqrt() * (-3.0 * PI / 4.0).cos(),
            2.0_f64.sqrt() * (-3.0 * PI / 4.0).sin(),
        );
        assert!(dev.points[2].distance(&expect) < 1e-12);
        // Closing point returns to the origin (the polygon closes up since
        // the total curvature is -2pi).
        assert!(dev.closing_motion.translation.distance(&Point::ORIGIN) < 1e-12);
    }

    #[test]
    fn rigid_motion_composition() {
        let a = RigidMotion { rotation: 0.3, translation: Point::new(1.0, 2.0) };
        let b = RigidMotion { rotation: -1.1, translation: Point::new(-0.5, 0.25) };
        let c = RigidMotion { rotation: 2.0, translation: Point::new(0.0, -3.0) };
        let p = Point::new(0.7, -0.2);
        let left = a.compose(&b).compose(&c).apply(p);
        let right = a.compose(&b.compose(&c)).apply(p);
        assert!(left.distance(&right) < 1e-12);
        let id = RigidMotion::identity();
        assert_eq!(id.compose(&a), a);
    }
}
