//! Loop growth for single-vertex boundaries.
//!
//! With one boundary vertex of curvature K (-pi < K < 0), a full cut whose
//! two wedges both sit at that vertex and sum to |K| flattens it, leaves the
//! fresh vertex as the new single vertex with the same curvature, and scales
//! the loop length by (sin a + sin v) / sin|K| >= 1. Splitting the wedge
//! evenly gives the largest factor 1 / cos(|K|/2); skewing it arbitrarily
//! close to (|K|, 0) gives factors arbitrarily close to 1. Any target length
//! at least the current one is therefore reachable: take maximal steps while
//! they fit, then solve one partial step for the remainder by bisection.

use crate::angle::Angle;
use crate::metric::{DiskMetric, EPS_ANGLE_PI, TOL_LENGTH};

use super::{ModificationPlan, MoveError, PlanStep};

/// Produces a plan of full cuts taking a single-vertex loop of the given
/// metric to the target length. The curvature is unchanged throughout.
pub fn loop_grow(metric: &DiskMetric, target: f64) -> Result<ModificationPlan, MoveError> {
    let current = metric.strip_flat_vertices();
    if current.vertex_count() != 1 {
        return Err(MoveError::Unsupported(format!(
            "loop growth needs exactly one vertex, got {}",
            current.vertex_count()
        )));
    }
    let kappa = current.kappas()[0];
    let mag = (-kappa).pi_units();
    if mag <= EPS_ANGLE_PI || mag >= 1.0 - EPS_ANGLE_PI {
        return Err(MoveError::Unsupported(format!(
            "loop growth needs curvature strictly between -pi and 0, got {} pi",
            kappa.pi_units()
        )));
    }
    let mut length = current.lengths()[0];
    if target <= length + TOL_LENGTH {
        return Err(MoveError::TargetNotGreater {
            target,
            current: length,
        });
    }
    let mut plan = ModificationPlan::empty();
    let total = -kappa;
    let half = total / 2;
    let sin_total = total.sin();
    let max_factor = (half.sin() * 2.0) / sin_total; // = 1 / cos(|K|/2)

    // Full-rate steps while the remaining ratio exceeds one maximal step.
    let mut guard = 0usize;
    while target / length > max_factor && guard < 4096 {
        plan.push(PlanStep::TriCut {
            i: 0,
            a: half,
            v: half,
        });
        length *= max_factor;
        guard += 1;
    }
    if guard == 4096 {
        return Err(MoveError::IterationLimit(
            "loop growth exceeded the step budget".into(),
        ));
    }

    // One partial step for the remainder: find a in (0, |K|/2] with
    // (sin a + sin(|K| - a)) / sin|K| = target / length.
    let want = target / length;
    if want > 1.0 + 1e-15 {
        let f = |a: f64| (a.sin() + (total.radians() - a).sin()) / sin_total;
        let mut lo = 0.0_f64;
        let mut hi = half.radians();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < want {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = Angle::from_radians(0.5 * (lo + hi));
        let v = total - a;
        if a.radians() > 0.0 && v.radians() > 0.0 {
            plan.push(PlanStep::TriCut { i: 0, a, v });
        }
    }
    Ok(plan)
}
