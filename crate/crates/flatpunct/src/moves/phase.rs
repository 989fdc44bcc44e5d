//! Phase pinning for canonical data at K = -2 pi.
//!
//! At this curvature the developed boundary closes up to a pure translation
//! (the rotation part of the holonomy is a full turn), and for canonical
//! lengths (l0, l1, l2) that translation is encoded by the closing vector
//! T = l0 + l1 w + l2 w^2 with w = exp(-2 pi i / 3). Every triangle cut
//! preserves |T| exactly, but different cut routes to canonical form land on
//! different values of arg T modulo 2 pi / 3, so canonicalization pins the
//! phase: extra cuts rotate T until arg T = pi, at which point the canonical
//! lengths read (c, c + d, c + d) with d = |T|. This makes the endpoint of
//! the pipeline independent of how the earlier planners broke their ties.
//!
//! The rotating gadget is a pair of slanted cuts followed by re-equalizing
//! snaps: a cut of wedge `a` at vertex 0 flattening vertex 1, then a fixed
//! quarter-turn cut at vertex 2 flattening vertex 0. Re-equalized, the net
//! effect on the closing vector is multiplication by exp(-i a), so the
//! required rotation is spent directly, a quarter turn per round at most.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use num_rational::Rational64;

use crate::angle::Angle;
use crate::metric::DiskMetric;

use super::{apply_tri_cut, ModificationPlan, MoveError, PlanStep, TriCut};

/// One third of a full turn, the relabeling period of the closing vector.
const THIRD: f64 = 2.0 * PI / 3.0;

/// Phase residuals below this count as pinned; the orbit comparisons
/// downstream tolerate 1e-6.
const TOL_PHASE: f64 = 1e-9;

/// The closing vector T = l0 + l1 w + l2 w^2, w = exp(-2 pi i / 3).
pub(super) fn closing_vector(lengths: &[f64]) -> Complex64 {
    let w = Complex64::from_polar(1.0, -THIRD);
    lengths
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &l| acc * w + l)
}

/// Rotates the closing vector of a canonical K = -2 pi metric to arg T = pi.
///
/// No-op when the lengths are already pinned or all equal (T = 0 has no
/// phase). Every emitted step is an ordinary triangle cut.
pub(super) fn normalize_phase(
    metric: &DiskMetric,
) -> Result<(DiskMetric, ModificationPlan), MoveError> {
    let mut current = metric.clone();
    let mut plan = ModificationPlan::empty();
    let scale: f64 = current.lengths().iter().sum();
    for _ in 0..16 {
        let t = closing_vector(current.lengths());
        if t.norm() <= TOL_PHASE * scale {
            return Ok((current, plan));
        }
        let residual = (t.arg() - PI).rem_euclid(THIRD);
        if residual <= TOL_PHASE || THIRD - residual <= TOL_PHASE {
            return Ok((current, plan));
        }
        let wedge = residual.min(FRAC_PI_4);
        let first = TriCut {
            i: 0,
            a: Angle::from_pi(wedge / PI),
            v: -current.kappas()[1],
        };
        current = push_cut(&mut plan, &current, first)?;
        let second = TriCut {
            i: 2,
            a: Angle::from_pi_exact(Rational64::new(1, 4)),
            v: -current.kappas()[0],
        };
        current = push_cut(&mut plan, &current, second)?;
        current = snap_equal(&mut plan, current)?;
    }
    Err(MoveError::IterationLimit(
        "phase pinning did not converge within 16 rounds".into(),
    ))
}

fn push_cut(
    plan: &mut ModificationPlan,
    metric: &DiskMetric,
    cut: TriCut,
) -> Result<DiskMetric, MoveError> {
    let next = apply_tri_cut(metric, &cut)?;
    plan.push(PlanStep::TriCut {
        i: cut.i,
        a: cut.a,
        v: cut.v,
    });
    Ok(next)
}

/// Restores equal curvatures with straddling snap cuts (a below-average and
/// an above-average vertex are adjacent after each gadget cut, so plain
/// snaps suffice; the general equalizer is not needed here).
fn snap_equal(
    plan: &mut ModificationPlan,
    mut current: DiskMetric,
) -> Result<DiskMetric, MoveError> {
    let target = current.total_curvature() / 3i64;
    for _ in 0..8 {
        if current
            .kappas()
            .iter()
            .all(|kappa| kappa.approx_eq(&target, 1e-11))
        {
            return Ok(current);
        }
        let mut advanced = false;
        'pairs: for i in 0..3 {
            let ki = current.kappas()[i];
            let kj = current.kappas()[(i + 1) % 3];
            for cut in [
                TriCut { i, a: target - ki, v: -kj },
                TriCut { i, a: -ki, v: target - kj },
            ] {
                if !cut.a.is_positive() || !cut.v.is_positive() {
                    continue;
                }
                if !(Angle::STRAIGHT - cut.a - cut.v).is_positive() {
                    continue;
                }
                if let Ok(next) = apply_tri_cut(&current, &cut) {
                    if next.vertex_count() == 3 {
                        plan.push(PlanStep::TriCut {
                            i: cut.i,
                            a: cut.a,
                            v: cut.v,
                        });
                        current = next;
                        advanced = true;
                        break 'pairs;
                    }
                }
            }
        }
        if !advanced {
            break;
        }
    }
    Err(MoveError::SearchExhausted(
        "phase pinning could not re-equalize after a gadget cut".into(),
    ))
}
