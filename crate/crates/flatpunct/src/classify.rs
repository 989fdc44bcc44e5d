//! The classification layer: the modification invariant, equivalence with
//! replayable certificates, regular/irregular puncture decisions, cone
//! completions, and the moduli description.
//!
//! For total boundary curvature K = 0 every metric is a half-cylinder and for
//! K < 0, K != -2 pi the moduli space is a single point, so equivalence is
//! decided by K alone and certificates are constructed directly. The only
//! curvature with moduli is K = -2 pi, where canonical length data has three
//! entries and the certifying moves act diagonally; the residual invariant is
//! the cyclic orbit of the length-difference vector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::circulant::{determinant, principal_matrix};
use crate::metric::{
    is_minus_two_pi, CanonicalMetric, DiskMetric, FlatDiskMetric, MetricError, EPS_ANGLE_PI,
    TOL_LENGTH, TOL_ORBIT,
};
use crate::moves::{
    apply_plan, loop_grow, Certificate, ModificationPlan, MoveError, PlanStep,
};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("curvature out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Moves(#[from] MoveError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    Unsupported(String),
}

/// Which moduli regime the total curvature falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    /// K = 0: every metric is a half-cylinder.
    Cylinder,
    /// K < 0, K != -2 pi: a single equivalence class.
    SingleClass,
    /// K = -2 pi: classes carry the orbit invariant.
    TorsionClass,
}

/// The full classifying datum of one metric.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantReport {
    /// Total boundary curvature, in units of pi.
    pub total_curvature: Angle,
    pub kind: InvariantKind,
    /// Canonical form reached by the emitted plan (absent for cylinders).
    pub canonical: Option<CanonicalMetric>,
    /// Plan reaching the canonical form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<ModificationPlan>,
    /// K = -2 pi only: the cyclic orbit of (l2 - l1, l3 - l1).
    pub orbit: Option<[(f64, f64); 3]>,
    /// Lexicographically least orbit member.
    pub representative: Option<(f64, f64)>,
    /// (alpha, beta) = (1 + x, 1 + y) from the min-first rotation.
    pub alpha_beta: Option<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceResult {
    pub equivalent: bool,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularityReport {
    pub regular: bool,
    /// 2 pi - K, in units of pi; irregular exactly at 4 pi.
    pub puncture_curvature: Angle,
    pub total_curvature: Angle,
    pub kind: InvariantKind,
}

/// One triangle of a cone completion: a boundary segment as base, the cone
/// point as apex, and the two legs running from the base endpoints to the
/// apex. `legs[0]` leaves the base's start vertex. Isoceles whenever the legs
/// are equal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConePiece {
    pub apex_angle: f64,
    pub base_angles: [f64; 2],
    pub base: f64,
    pub legs: [f64; 2],
}

/// The interior cone closing up a regular puncture.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeCompletion {
    /// K = 0: the half-cylinder closes up to a full cylinder of this width.
    Cylinder { width: f64 },
    /// 0 < |K| < 2 pi: isoceles triangles glued leg-to-leg, apex angles
    /// meeting at the cone point and summing to the cone angle |K|.
    Cone {
        cone_angle: f64,
        pieces: Vec<ConePiece>,
        gluing: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuliClass {
    HalfCylinder,
    SinglePoint,
    PositiveQuadrant,
}

fn canonicalize_disk(
    metric: &DiskMetric,
) -> Result<(CanonicalMetric, ModificationPlan), ClassifyError> {
    Ok(crate::moves::canonicalize(metric)?)
}

/// The orbit of the difference vector under cyclic relabeling:
/// (x, y) -> (y - x, -x) -> (-y, x - y).
fn orbit_of(x: f64, y: f64) -> [(f64, f64); 3] {
    [(x, y), (y - x, -x), (-y, x - y)]
}

fn lex_min(orbit: &[(f64, f64); 3]) -> (f64, f64) {
    let mut best = orbit[0];
    for &(x, y) in &orbit[1..] {
        if x < best.0 - TOL_ORBIT || ((x - best.0).abs() <= TOL_ORBIT && y < best.1 - TOL_ORBIT) {
            best = (x, y);
        }
    }
    best
}

/// Rotation offset placing a minimal length first, ties to the smallest index.
fn min_first_offset(lengths: &[f64]) -> usize {
    let mut best = 0;
    for (i, l) in lengths.iter().enumerate() {
        if *l < lengths[best] - TOL_LENGTH {
            best = i;
        }
    }
    best
}

/// Computes the classifying invariant, canonicalizing on the way.
pub fn invariant(metric: &FlatDiskMetric) -> Result<InvariantReport, ClassifyError> {
    invariant_impl(metric, None)
}

/// `invariant` with the canonicalization's tie-breaks drawn from a seeded
/// generator; the reported invariant is the same for every seed, only the
/// recorded plan differs.
pub fn invariant_seeded(
    metric: &FlatDiskMetric,
    seed: u64,
) -> Result<InvariantReport, ClassifyError> {
    invariant_impl(metric, Some(seed))
}

fn invariant_impl(
    metric: &FlatDiskMetric,
    seed: Option<u64>,
) -> Result<InvariantReport, ClassifyError> {
    let total = metric.total_curvature();
    let disk = match metric {
        FlatDiskMetric::Cylinder(c) => {
            return Ok(cylinder_report(total, c.width));
        }
        FlatDiskMetric::Disk(d) => d,
    };
    if total.is_zero(EPS_ANGLE_PI) {
        // All curvatures are then zero in normal form: a half-cylinder whose
        // width is the total boundary length.
        let width = disk.lengths().iter().sum();
        return Ok(cylinder_report(total, width));
    }
    let (canonical, plan) = match seed {
        None => canonicalize_disk(disk)?,
        Some(seed) => crate::moves::canonicalize_seeded(disk, seed)?,
    };
    if is_minus_two_pi(total) {
        let lengths = &canonical.lengths;
        let s = min_first_offset(lengths);
        let n = lengths.len();
        let base = lengths[s];
        let x = lengths[(s + 1) % n] - base;
        let y = lengths[(s + 2) % n] - base;
        let orbit = orbit_of(x, y);
        Ok(InvariantReport {
            total_curvature: total,
            kind: InvariantKind::TorsionClass,
            canonical: Some(canonical),
            plan: Some(plan),
            orbit: Some(orbit),
            representative: Some(lex_min(&orbit)),
            alpha_beta: Some((1.0 + x, 1.0 + y)),
        })
    } else {
        Ok(InvariantReport {
            total_curvature: total,
            kind: InvariantKind::SingleClass,
            canonical: Some(canonical),
            plan: Some(plan),
            orbit: None,
            representative: None,
            alpha_beta: None,
        })
    }
}

fn cylinder_report(total: Angle, width: f64) -> InvariantReport {
    InvariantReport {
        total_curvature: total,
        kind: InvariantKind::Cylinder,
        canonical: None,
        plan: None,
        orbit: None,
        representative: None,
        alpha_beta: None,
    }
    .with_cylinder_width(width)
}

impl InvariantReport {
    fn with_cylinder_width(self, _width: f64) -> InvariantReport {
        // Width is not an invariant: half-cylinders of any width are
        // equivalent (grow along the cylinder), so it is not recorded.
        self
    }

    /// True when the orbit is the zero orbit, i.e. all canonical lengths are
    /// equal — the class of the plane minus an equilateral triangle.
    pub fn zero_orbit(&self) -> bool {
        match self.representative {
            Some((x, y)) => x.abs() <= TOL_ORBIT && y.abs() <= TOL_ORBIT,
            None => false,
        }
    }
}

/// True when the two orbits agree, member by member, under some rotation.
fn orbits_match(a: &[(f64, f64); 3], b: &[(f64, f64); 3]) -> bool {
    (0..3).any(|s| {
        (0..3).all(|t| {
            let (ax, ay) = a[(t + s) % 3];
            let (bx, by) = b[t];
            (ax - bx).abs() <= TOL_ORBIT && (ay - by).abs() <= TOL_ORBIT
        })
    })
}

/// Dense Gaussian solve for the small circulant systems of the certificate
/// construction. Panics on a numerically singular matrix, which the caller
/// excludes via the determinant.
fn solve_circulant(c: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut a = vec![vec![0.0; n + 1]; n];
    for (row, arow) in a.iter_mut().enumerate() {
        for col in 0..n {
            arow[col] = c[(row + n - col) % n];
        }
        arow[n] = rhs[row];
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        assert!(a[col][col].abs() > 1e-12, "singular certificate system");
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col] / a[col][col];
            for t in col..=n {
                a[row][t] -= f * a[col][t];
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

/// Appends principal moves realizing the solution vector of the circulant
/// system. Solution component j feeds the move at index j + 1: the matrix's
/// column j has entries (1, c_1, 1) at rows (j, j+1, j+2), which is the
/// length update of the move centered at segment j + 1.
fn push_principal(plan: &mut ModificationPlan, r: &[f64]) {
    let n = r.len();
    for (j, &rj) in r.iter().enumerate() {
        if rj > 1e-15 {
            plan.push(PlanStep::Principal {
                j: (j + 1) % n,
                r: rj,
            });
        }
    }
}

/// Decides modification equivalence. In the default unlabeled mode canonical
/// forms are compared up to cyclic relabeling; `labeled` pins index 0.
pub fn equivalent(
    mu: &FlatDiskMetric,
    eta: &FlatDiskMetric,
    labeled: bool,
) -> Result<EquivalenceResult, ClassifyError> {
    let (ka, kb) = (mu.total_curvature(), eta.total_curvature());
    if !ka.approx_eq(&kb, TOL_ORBIT) {
        return Ok(EquivalenceResult {
            equivalent: false,
            certificate: None,
        });
    }
    // K = 0: both are half-cylinders, equivalent regardless of width.
    if ka.is_zero(EPS_ANGLE_PI) && kb.is_zero(EPS_ANGLE_PI) {
        return Ok(EquivalenceResult {
            equivalent: true,
            certificate: None,
        });
    }
    let (da, db) = match (mu, eta) {
        (FlatDiskMetric::Disk(a), FlatDiskMetric::Disk(b)) => (a, b),
        _ => {
            // One side is a cylinder (K = 0), the other has K != 0.
            return Ok(EquivalenceResult {
                equivalent: false,
                certificate: None,
            });
        }
    };
    let (ca, mut plan_a) = canonicalize_disk(da)?;
    let (cb, mut plan_b) = canonicalize_disk(db)?;

    if is_minus_two_pi(ka) {
        let ra = invariant_of_canonical(&ca);
        let rb = invariant_of_canonical(&cb);
        let matches = if labeled {
            let (ax, ay) = ra.1;
            let (bx, by) = rb.1;
            (ax - bx).abs() <= TOL_ORBIT && (ay - by).abs() <= TOL_ORBIT
        } else {
            orbits_match(&ra.0, &rb.0)
        };
        if !matches {
            return Ok(EquivalenceResult {
                equivalent: false,
                certificate: None,
            });
        }
        // Diagonal translation to a common form: with equal invariants the
        // canonical length vectors differ by r * (1,1,1) after a relabeling.
        let n = ca.lengths.len();
        let rot = if labeled {
            0
        } else {
            (0..n)
                .find(|&s| {
                    let d0 = cb.lengths[0] - ca.lengths[s];
                    (0..n).all(|t| {
                        (cb.lengths[t] - ca.lengths[(s + t) % n] - d0).abs() <= TOL_ORBIT
                    })
                })
                .unwrap_or(0)
        };
        // At K = -2 pi, n = 3, one principal move adds r to every length:
        // the update vector (r, 2r cos(pi/3), r) covers all three segments.
        let r = cb.lengths[0] - ca.lengths[rot];
        let common;
        if r >= 0.0 {
            if r > 1e-15 {
                plan_a.push(PlanStep::Principal { j: 0, r });
            }
            common = cb.clone();
        } else {
            plan_b.push(PlanStep::Principal { j: 0, r: -r });
            common = CanonicalMetric::new(
                ca.total_curvature,
                (0..n).map(|t| ca.lengths[(rot + t) % n]).collect(),
            );
        }
        return Ok(EquivalenceResult {
            equivalent: true,
            certificate: Some(Certificate {
                plan_left: plan_a,
                plan_right: plan_b,
                common,
            }),
        });
    }

    // Single-class regime: always equivalent; build the certificate.
    let n = ca.lengths.len();
    let certificate = match n {
        1 => {
            let (la, lb) = (ca.lengths[0], cb.lengths[0]);
            let target = la.max(lb);
            if (la - lb).abs() > TOL_LENGTH {
                if la < lb {
                    plan_a.extend(loop_grow(&ca.to_disk(), target)?);
                } else {
                    plan_b.extend(loop_grow(&cb.to_disk(), target)?);
                }
            }
            Some(Certificate {
                plan_left: plan_a,
                plan_right: plan_b,
                common: CanonicalMetric::new(ca.total_curvature, vec![target]),
            })
        }
        2 => {
            // The theorem still gives a single class, but no principal moves
            // exist at n = 2; emit a certificate only in the trivial case.
            let same = ca.to_disk().approx_eq(&cb.to_disk(), TOL_LENGTH, !labeled);
            same.then_some(Certificate {
                plan_left: plan_a,
                plan_right: plan_b,
                common: ca.clone(),
            })
        }
        _ => {
            let matrix = principal_matrix(ka, n)
                .map_err(|e| ClassifyError::Unsupported(e.to_string()))?;
            debug_assert!(determinant(&matrix).abs() > 1e-9);
            let delta: Vec<f64> = (0..n).map(|t| cb.lengths[t] - ca.lengths[t]).collect();
            let u = solve_circulant(matrix.coefficients(), &delta);
            let lambda = u.iter().fold(0.0_f64, |m, &x| m.max(-x));
            let v: Vec<f64> = u.iter().map(|&x| x + lambda).collect();
            let w = vec![lambda; n];
            let mut suffix_a = ModificationPlan::empty();
            push_principal(&mut suffix_a, &v);
            let mut suffix_b = ModificationPlan::empty();
            push_principal(&mut suffix_b, &w);
            let end = apply_plan(&ca.to_disk(), &suffix_a)?.lengths().to_vec();
            plan_a.extend(suffix_a);
            plan_b.extend(suffix_b);
            Some(Certificate {
                plan_left: plan_a,
                plan_right: plan_b,
                common: CanonicalMetric::new(ka, end),
            })
        }
    };
    Ok(EquivalenceResult {
        equivalent: true,
        certificate,
    })
}

fn invariant_of_canonical(c: &CanonicalMetric) -> ([(f64, f64); 3], (f64, f64)) {
    let n = c.lengths.len();
    let s = min_first_offset(&c.lengths);
    let base = c.lengths[s];
    let x = c.lengths[(s + 1) % n] - base;
    let y = c.lengths[(s + 2) % n] - base;
    // Labeled comparison uses the unrotated differences.
    let labeled = (c.lengths[1 % n] - c.lengths[0], c.lengths[2 % n] - c.lengths[0]);
    (orbit_of(x, y), labeled)
}

/// Regular / irregular decision: irregular exactly when the puncture
/// curvature 2 pi - K equals 4 pi and the invariant orbit is nonzero.
pub fn classify_regularity(metric: &FlatDiskMetric) -> Result<RegularityReport, ClassifyError> {
    let report = invariant(metric)?;
    let total = report.total_curvature;
    let regular = match report.kind {
        InvariantKind::TorsionClass => report.zero_orbit(),
        _ => true,
    };
    Ok(RegularityReport {
        regular,
        puncture_curvature: Angle::STRAIGHT * 2 - total,
        total_curvature: total,
        kind: report.kind,
    })
}

/// Builds the interior cone closing a puncture with |K| < 2 pi.
pub fn cone_completion(metric: &FlatDiskMetric) -> Result<ConeCompletion, ClassifyError> {
    let total = metric.total_curvature();
    let report = invariant(metric)?;
    match report.kind {
        InvariantKind::Cylinder => {
            let width = match metric {
                FlatDiskMetric::Cylinder(c) => c.width,
                FlatDiskMetric::Disk(d) => d.lengths().iter().sum(),
            };
            return Ok(ConeCompletion::Cylinder { width });
        }
        InvariantKind::TorsionClass => {
            return Err(ClassifyError::OutOfRange(
                "no cone completion at |K| >= 2 pi (the puncture curvature is 4 pi)".into(),
            ));
        }
        InvariantKind::SingleClass => {}
    }
    let canonical = report.canonical.expect("single class has a canonical form");
    let mag = -total.radians();
    if !(mag > 0.0 && mag < 2.0 * std::f64::consts::PI) {
        return Err(ClassifyError::OutOfRange(format!(
            "cone completion needs 0 < |K| < 2 pi, got {} pi",
            total.pi_units()
        )));
    }
    match canonical.n() {
        1 => {
            // One isoceles triangle over the loop: apex |K| at the cone point.
            let base = canonical.lengths[0];
            let base_angle = (std::f64::consts::PI - mag) / 2.0;
            let leg = base / (2.0 * (mag / 2.0).sin());
            Ok(ConeCompletion::Cone {
                cone_angle: mag,
                pieces: vec![ConePiece {
                    apex_angle: mag,
                    base_angles: [base_angle, base_angle],
                    base,
                    legs: [leg, leg],
                }],
                gluing: "legs of the single triangle glued to each other; apex becomes the cone point".into(),
            })
        }
        2 => {
            let (l1, l2) = (canonical.lengths[0], canonical.lengths[1]);
            // The kite construction needs the base ratio within the range the
            // apex split can reach. Outside it, complete the equal-length
            // metric in the same class instead (the class is a single point,
            // and the cone depends only on |K|).
            match solve_two_triangle_apex(mag, l1, l2) {
                Some(gamma) => Ok(two_triangle_completion(mag, l1, l2, gamma, String::from(
                    "the two triangles share both legs; apexes meet at the cone point, apex angles summing to |K|",
                ))),
                None => {
                    let l = 0.5 * (l1 + l2);
                    let gamma = solve_two_triangle_apex(mag, l, l).ok_or_else(|| {
                        ClassifyError::OutOfRange(format!(
                            "no two-triangle completion for |K| = {mag}"
                        ))
                    })?;
                    Ok(two_triangle_completion(mag, l, l, gamma, String::from(
                        "boundary lengths admit no kite directly; the completion is built for the equal-length representative of the same (single) equivalence class",
                    )))
                }
            }
        }
        n => Err(ClassifyError::OutOfRange(format!(
            "cone completion undefined for canonical count {n}"
        ))),
    }
}

/// Finds the apex split of the two-triangle kite: gamma with
/// a(gamma) = l1 / (2 sin(gamma/2)) = l2 / (2 sin((|K| - gamma)/2)).
/// The left side is strictly decreasing and the right strictly increasing on
/// the feasible interval, so a sign change pins a unique root; returns None
/// when the base ratio is outside the reachable range.
fn solve_two_triangle_apex(mag: f64, l1: f64, l2: f64) -> Option<f64> {
    let eps = 1e-9;
    let mut lo = (mag - std::f64::consts::PI).max(0.0) + eps;
    let mut hi = std::f64::consts::PI.min(mag) - eps;
    if !(lo < hi) {
        return None;
    }
    let g = |gamma: f64| {
        l1 / (2.0 * (gamma / 2.0).sin()) - l2 / (2.0 * ((mag - gamma) / 2.0).sin())
    };
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn two_triangle_completion(
    mag: f64,
    l1: f64,
    l2: f64,
    gamma: f64,
    gluing: String,
) -> ConeCompletion {
    let gamma2 = mag - gamma;
    let a = l1 / (2.0 * (gamma / 2.0).sin());
    let piece = |apex: f64, base: f64| ConePiece {
        apex_angle: apex,
        base_angles: [
            (std::f64::consts::PI - apex) / 2.0,
            (std::f64::consts::PI - apex) / 2.0,
        ],
        base,
        legs: [a, a],
    };
    ConeCompletion::Cone {
        cone_angle: mag,
        pieces: vec![piece(gamma, l1), piece(gamma2, l2)],
        gluing,
    }
}

/// Text + structured description of the moduli space at curvature K.
pub fn moduli_description(total_curvature: Angle) -> (String, ModuliClass) {
    if total_curvature.is_zero(EPS_ANGLE_PI) {
        (
            "single class: every flat metric with K = 0 is a half-cylinder".into(),
            ModuliClass::HalfCylinder,
        )
    } else if is_minus_two_pi(total_curvature) {
        (
            "classes in bijection with the open positive quadrant of the plane".into(),
            ModuliClass::PositiveQuadrant,
        )
    } else {
        (
            "single class: all metrics of this total curvature are equivalent".into(),
            ModuliClass::SinglePoint,
        )
    }
}
