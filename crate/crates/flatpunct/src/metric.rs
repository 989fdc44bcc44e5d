//! Data model and validation for complete flat cone metrics on the
//! once-punctured disk, plus the global invariants: total boundary curvature,
//! puncture curvature, canonical vertex count and the Gauss-Bonnet check.

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;

/// Uniform degeneracy cutoff for angles, in radians.
pub const EPS_ANGLE: f64 = 1e-9;
/// Same cutoff expressed in pi units, for `Angle` comparisons.
pub const EPS_ANGLE_PI: f64 = EPS_ANGLE / std::f64::consts::PI;
/// Length agreement tolerance for replay and endpoint comparison.
pub const TOL_LENGTH: f64 = 1e-9;
/// Tolerance for orbit comparison in the K = -2pi classification.
pub const TOL_ORBIT: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("invalid metric: {}", .0.join("; "))]
    InvalidMetric(Vec<String>),
    #[error("total curvature is positive: {0} pi")]
    PositiveCurvature(f64),
}

/// Cyclic boundary data of a complete flat metric on the punctured disk:
/// vertex curvatures and the segment lengths between consecutive vertices.
/// `lengths[i]` joins vertex `i` to vertex `i+1` (indices mod k).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskMetric {
    kappas: Vec<Angle>,
    lengths: Vec<f64>,
}

/// The half-cylinder: the distinguished K = 0 case, kept apart from the
/// vertex-list representation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderMetric {
    pub width: f64,
}

/// A complete flat cone metric on the once-punctured disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlatDiskMetric {
    Disk(DiskMetric),
    Cylinder(CylinderMetric),
}

/// A metric with n boundary vertices of equal curvature K/n, stored by its
/// length data alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalMetric {
    pub total_curvature: Angle,
    pub lengths: Vec<f64>,
}

/// Result of `canonical_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalClass {
    Cylinder,
    Vertices(usize),
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Curvature totals at the puncture.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PunctureInfo {
    /// Total boundary curvature K.
    pub boundary_total: Angle,
    /// 2pi - K.
    pub puncture_curvature: Angle,
    /// Angle of the cone at infinity, -(2pi - puncture_curvature) = K... by
    /// the convention theta(v_inf) = -theta this equals K.
    pub puncture_angle: Angle,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussBonnetReport {
    pub boundary_total_pi: f64,
    pub puncture_curvature_pi: f64,
    /// (sum kappa + puncture curvature) - 2 pi, in pi units.
    pub residual_pi: f64,
    pub exact: bool,
}

impl DiskMetric {
    pub fn new(kappas: Vec<Angle>, lengths: Vec<f64>) -> Result<DiskMetric, MetricError> {
        let m = DiskMetric { kappas, lengths };
        let report = m.validate();
        if report.is_valid() {
            Ok(m)
        } else {
            Err(MetricError::InvalidMetric(report.errors))
        }
    }

    /// Constructs without validating; used by move operations whose outputs
    /// are valid by construction.
    pub(crate) fn new_unchecked(kappas: Vec<Angle>, lengths: Vec<f64>) -> DiskMetric {
        DiskMetric { kappas, lengths }
    }

    pub fn kappas(&self) -> &[Angle] {
        &self.kappas
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn vertex_count(&self) -> usize {
        self.kappas.len()
    }

    pub fn total_curvature(&self) -> Angle {
        self.kappas.iter().copied().sum()
    }

    /// Interior angle at vertex i: theta = pi - kappa.
    pub fn theta(&self, i: usize) -> Angle {
        Angle::STRAIGHT - self.kappas[i]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.kappas.len() != self.lengths.len() {
            report.errors.push(format!(
                "vertex count {} does not match segment count {}",
                self.kappas.len(),
                self.lengths.len()
            ));
        }
        if self.kappas.is_empty() {
            report
                .errors
                .push("a disk metric needs at least one boundary vertex".into());
        }
        for (i, l) in self.lengths.iter().enumerate() {
            if !(*l > 0.0) || !l.is_finite() {
                report
                    .errors
                    .push(format!("segment {i} has nonpositive length {l}"));
            }
        }
        for (i, kappa) in self.kappas.iter().enumerate() {
            let theta = Angle::STRAIGHT - *kappa;
            if theta.pi_units() <= EPS_ANGLE_PI {
                report.errors.push(format!(
                    "vertex {i} has nonpositive angle theta = {} pi (kappa >= pi)",
                    theta.pi_units()
                ));
            } else if kappa.pi_units() > EPS_ANGLE_PI {
                // Positive curvature is allowed in intermediate states but
                // violates the normal-form input contract.
                report.warnings.push(format!(
                    "vertex {i} has positive curvature {} pi (not in normal form)",
                    kappa.pi_units()
                ));
            }
        }
        report
    }

    /// Drops vertices with zero curvature, merging their adjacent segments.
    /// The underlying metric is unchanged: a zero-curvature vertex is an
    /// ordinary boundary point.
    pub fn strip_flat_vertices(&self) -> DiskMetric {
        let k = self.kappas.len();
        let first = match (0..k).find(|&i| !self.kappas[i].is_zero(EPS_ANGLE_PI)) {
            Some(i) => i,
            None => return self.clone(),
        };
        let mut kappas = Vec::new();
        let mut lengths: Vec<f64> = Vec::new();
        for t in 0..k {
            let i = (first + t) % k;
            if self.kappas[i].is_zero(EPS_ANGLE_PI) {
                *lengths.last_mut().unwrap() += self.lengths[i];
            } else {
                kappas.push(self.kappas[i]);
                lengths.push(self.lengths[i]);
            }
        }
        DiskMetric { kappas, lengths }
    }

    /// Cyclic rotation of the labels: vertex `offset` becomes vertex 0.
    pub fn rotated(&self, offset: usize) -> DiskMetric {
        let k = self.kappas.len();
        let offset = offset % k;
        DiskMetric {
            kappas: self
                .kappas
                .iter()
                .cycle()
                .skip(offset)
                .take(k)
                .copied()
                .collect(),
            lengths: self
                .lengths
                .iter()
                .cycle()
                .skip(offset)
                .take(k)
                .copied()
                .collect(),
        }
    }

    /// Equality of boundary data within the given length tolerance. When
    /// `up_to_rotation` is set, vertices may be relabeled cyclically.
    pub fn approx_eq(&self, other: &DiskMetric, tol: f64, up_to_rotation: bool) -> bool {
        let a = self.strip_flat_vertices();
        let b = other.strip_flat_vertices();
        if a.kappas.len() != b.kappas.len() {
            return false;
        }
        let k = a.kappas.len();
        let offsets: Vec<usize> = if up_to_rotation { (0..k).collect() } else { vec![0] };
        offsets.into_iter().any(|off| {
            (0..k).all(|i| {
                let j = (i + off) % k;
                a.kappas[j].approx_eq(&b.kappas[i], EPS_ANGLE_PI)
                    && (a.lengths[j] - b.lengths[i]).abs() <= tol
            })
        })
    }
}

impl FlatDiskMetric {
    pub fn disk(kappas: Vec<Angle>, lengths: Vec<f64>) -> Result<FlatDiskMetric, MetricError> {
        Ok(FlatDiskMetric::Disk(DiskMetric::new(kappas, lengths)?))
    }

    pub fn cylinder(width: f64) -> Result<FlatDiskMetric, MetricError> {
        if !(width > 0.0) {
            return Err(MetricError::InvalidMetric(vec![format!(
                "cylinder width must be positive, got {width}"
            )]));
        }
        Ok(FlatDiskMetric::Cylinder(CylinderMetric { width }))
    }

    pub fn as_disk(&self) -> Option<&DiskMetric> {
        match self {
            FlatDiskMetric::Disk(d) => Some(d),
            FlatDiskMetric::Cylinder(_) => None,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            FlatDiskMetric::Disk(d) => d.validate(),
            FlatDiskMetric::Cylinder(c) => {
                let mut report = ValidationReport::default();
                if !(c.width > 0.0) {
                    report
                        .errors
                        .push(format!("cylinder width must be positive, got {}", c.width));
                }
                report
            }
        }
    }

    /// Total boundary curvature K; zero for the half-cylinder.
    pub fn total_curvature(&self) -> Angle {
        match self {
            FlatDiskMetric::Disk(d) => d.total_curvature(),
            FlatDiskMetric::Cylinder(_) => Angle::ZERO,
        }
    }

    /// Curvature at the puncture: 2pi - K.
    pub fn puncture_curvature(&self) -> Angle {
        Angle::from_pi_exact(Rational64::from_integer(2)) - self.total_curvature()
    }

    pub fn puncture_info(&self) -> PunctureInfo {
        let k = self.total_curvature();
        PunctureInfo {
            boundary_total: k,
            puncture_curvature: self.puncture_curvature(),
            puncture_angle: k,
        }
    }

    pub fn gauss_bonnet_check(&self) -> GaussBonnetReport {
        let k = self.total_curvature();
        let pc = self.puncture_curvature();
        let total = k + pc;
        let residual = total - Angle::from_pi_exact(Rational64::from_integer(2));
        GaussBonnetReport {
            boundary_total_pi: k.pi_units(),
            puncture_curvature_pi: pc.pi_units(),
            residual_pi: residual.pi_units(),
            exact: residual.exact().map(|r| r.is_zero()).unwrap_or(false),
        }
    }
}

impl CanonicalMetric {
    pub fn new(total_curvature: Angle, lengths: Vec<f64>) -> CanonicalMetric {
        CanonicalMetric {
            total_curvature,
            lengths,
        }
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    pub fn vertex_curvature(&self) -> Angle {
        self.total_curvature / self.n() as i64
    }

    pub fn to_disk(&self) -> DiskMetric {
        DiskMetric::new_unchecked(
            vec![self.vertex_curvature(); self.n()],
            self.lengths.clone(),
        )
    }
}

/// The unique n >= 1 with (n-1) pi <= |K| < n pi, or the cylinder when K = 0.
pub fn canonical_count(total_curvature: Angle) -> Result<CanonicalClass, MetricError> {
    if total_curvature.pi_units() > EPS_ANGLE_PI {
        return Err(MetricError::PositiveCurvature(total_curvature.pi_units()));
    }
    if total_curvature.is_zero(EPS_ANGLE_PI) {
        return Ok(CanonicalClass::Cylinder);
    }
    let n = match total_curvature.exact() {
        Some(r) => {
            let abs = -r;
            (abs.floor().to_integer()) as usize + 1
        }
        None => {
            let abs = -total_curvature.pi_units();
            // Snap values within tolerance of an integer multiple down to it,
            // so -3pi (floating) lands in [3pi, 4pi) like the exact path.
            let rounded = abs.round();
            if (abs - rounded).abs() <= EPS_ANGLE_PI {
                rounded as usize + 1
            } else {
                abs.floor() as usize + 1
            }
        }
    };
    Ok(CanonicalClass::Vertices(n))
}

/// True when the total curvature equals -2 pi: exact comparison for rational
/// inputs, 1e-9 tolerance (in radians) otherwise.
pub fn is_minus_two_pi(total_curvature: Angle) -> bool {
    total_curvature.is_pi_multiple(Rational64::from_integer(-2), EPS_ANGLE_PI)
}

/// The CLI warns when a floating K is suspiciously close to the -2pi wall.
pub fn near_minus_two_pi_warning(total_curvature: Angle) -> bool {
    total_curvature.exact().is_none()
        && !is_minus_two_pi(total_curvature)
        && (total_curvature.radians() + 2.0 * std::f64::consts::PI).abs() < 1e-6
}
