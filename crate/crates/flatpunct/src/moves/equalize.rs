//! Curvature equalization: repeated boundary cuts driving every vertex
//! curvature to the average K/k, plus the staging pass that breaks vertices
//! with |kappa| >= pi into pieces the cut lemma can handle.

use num_rational::Rational64;

use crate::angle::Angle;
use crate::metric::{DiskMetric, EPS_ANGLE_PI};

use super::{apply_tri_cut, Chooser, ModificationPlan, MoveError, PlanStep, TriCut};

/// Equality cutoff against the target curvature, in pi units.
const EQ_TOL_PI: f64 = 1e-12;

fn matches_target(kappa: &Angle, target: &Angle) -> bool {
    kappa.approx_eq(target, EQ_TOL_PI)
}

/// Drives all vertex curvatures to K/k without changing the vertex count.
///
/// Strategy, following the cut lemma's case split: a cut across a pair that
/// straddles the average strictly reduces the number of off-average vertices;
/// a cut at a pair where one side already sits on the average permutes the
/// curvatures, eventually creating a strict straddle.
pub fn equalize(metric: &DiskMetric) -> Result<(DiskMetric, ModificationPlan), MoveError> {
    equalize_with(metric, &mut Chooser::First)
}

/// `equalize` with an explicit tie-breaking policy among equally ranked cuts.
pub(super) fn equalize_with(
    metric: &DiskMetric,
    chooser: &mut Chooser,
) -> Result<(DiskMetric, ModificationPlan), MoveError> {
    let mut current = metric.strip_flat_vertices();
    let mut plan = ModificationPlan::empty();
    let k = current.vertex_count();
    if k <= 1 {
        return Ok((current, plan));
    }
    for (idx, kappa) in current.kappas().iter().enumerate() {
        if kappa.pi_units() > EPS_ANGLE_PI {
            return Err(MoveError::Unsupported(format!(
                "equalize expects nonpositive curvatures; vertex {idx} has {} pi",
                kappa.pi_units()
            )));
        }
        if (-*kappa).pi_units() >= 1.0 {
            return Err(MoveError::Unsupported(format!(
                "vertex {idx} has |kappa| >= pi; stage it first"
            )));
        }
    }
    let target = current.total_curvature() / k as i64;
    let limit = 4 * k * k + 16;
    for _ in 0..limit {
        if current
            .kappas()
            .iter()
            .all(|kappa| matches_target(kappa, &target))
        {
            return Ok((current, plan));
        }
        let cut = match choose_equalizing_cut(&current, &target) {
            Ok(ranked) => {
                let best = ranked[0].0;
                let ties = ranked.iter().take_while(|(score, _)| *score == best).count();
                ranked[chooser.pick(ties)].1
            }
            // No straddle and no below-vertex left to route: the remaining
            // deviation is classification slack of the per-vertex tolerance,
            // bounded by k * EQ_TOL and far inside downstream tolerances.
            Err(MoveError::AllEqual)
                if current
                    .kappas()
                    .iter()
                    .all(|kappa| matches_target(kappa, &target) || {
                        (kappa.pi_units() - target.pi_units()).abs() < 64.0 * EQ_TOL_PI
                    }) =>
            {
                return Ok((current, plan));
            }
            Err(e) => return Err(e),
        };
        current = apply_tri_cut(&current, &cut)?;
        plan.push(PlanStep::TriCut {
            i: cut.i,
            a: cut.a,
            v: cut.v,
        });
        if current.vertex_count() != k {
            return Err(MoveError::SearchExhausted(format!(
                "equalizing cut changed the vertex count from {k} to {}",
                current.vertex_count()
            )));
        }
    }
    Err(MoveError::IterationLimit(format!(
        "equalization did not converge within {limit} cuts"
    )))
}

/// Lists the cuts usable in the current state, best first; the caller takes
/// the top-ranked one, or draws among top-ranked ties when seeded.
///
/// Candidates, by how much they shrink the count of off-average vertices:
///   2: a cut across a pair straddling the average, fixing one endpoint on
///      the average and flattening the other;
///   1: any cut flattening one endpoint that lands either the surviving
///      endpoint or the fresh vertex exactly on the average;
///   0: a permute through an on-average right neighbor, which rotates the
///      deviation one slot and can unlock an embeddable cut elsewhere.
/// Permutes route below-average vertices rightward only; mixing both
/// directions can ping-pong one vertex between two slots forever.
fn choose_equalizing_cut(
    metric: &DiskMetric,
    target: &Angle,
) -> Result<Vec<(u8, TriCut)>, MoveError> {
    let k = metric.vertex_count();
    let side = |idx: usize| -> i8 {
        let kappa = &metric.kappas()[idx];
        if matches_target(kappa, target) {
            0
        } else if *kappa < *target {
            -1
        } else {
            1
        }
    };
    let valid = |cut: &TriCut| {
        cut.a.is_positive()
            && cut.v.is_positive()
            && (Angle::STRAIGHT - cut.a - cut.v).pi_units() > EPS_ANGLE_PI
    };
    let mut ranked: Vec<(u8, TriCut)> = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        let (ki, kj) = (metric.kappas()[i], metric.kappas()[j]);
        match (side(i), side(j)) {
            (-1, 1) => {
                ranked.push((0, cut_below_above(metric, target, i)));
                // Flatten j, fresh vertex on the average, i keeps its deficit.
                ranked.push((1, TriCut { i, a: kj - *target, v: -kj }));
            }
            (1, -1) => {
                ranked.push((0, cut_above_below(metric, target, i)));
                // Flatten i, fresh vertex on the average, j keeps its deficit.
                ranked.push((1, TriCut { i, a: -ki, v: ki - *target }));
            }
            (-1, -1) => {
                // Fix one endpoint; the fresh vertex absorbs both deficits.
                ranked.push((1, cut_below_above(metric, target, i)));
                ranked.push((1, cut_above_below(metric, target, i)));
            }
            (1, 1) => {
                // Flatten one endpoint, fresh vertex on the average.
                ranked.push((1, TriCut { i, a: kj - *target, v: -kj }));
                ranked.push((1, TriCut { i, a: -ki, v: ki - *target }));
            }
            (-1, 0) => ranked.push((2, cut_below_above(metric, target, i))),
            _ => {}
        }
    }
    ranked.retain(|(_, cut)| valid(cut));
    if ranked.is_empty() {
        return Err(MoveError::AllEqual);
    }
    ranked.sort_by_key(|(score, _)| *score);
    Ok(ranked)
}

/// kappa_i < target <= kappa_{i+1}: wedge a = target - kappa_i lands vertex i
/// on the average; wedge v = |kappa_{i+1}| flattens vertex i+1, and the new
/// vertex absorbs the difference.
fn cut_below_above(metric: &DiskMetric, target: &Angle, i: usize) -> TriCut {
    let j = (i + 1) % metric.vertex_count();
    TriCut {
        i,
        a: *target - metric.kappas()[i],
        v: -metric.kappas()[j],
    }
}

/// kappa_i >= target > kappa_{i+1}: mirror case, flattening vertex i.
fn cut_above_below(metric: &DiskMetric, target: &Angle, i: usize) -> TriCut {
    let j = (i + 1) % metric.vertex_count();
    TriCut {
        i,
        a: -metric.kappas()[i],
        v: *target - metric.kappas()[j],
    }
}

/// Splits every vertex with |kappa| >= pi into pieces of curvature magnitude
/// below pi. A single Euclidean wedge is less than pi, so such vertices are
/// drained across several cuts, each moving at most 63pi/64 of curvature
/// onto a fresh vertex. Conserves total curvature; may grow the vertex
/// count (reduced later).
pub fn stage_large(metric: &DiskMetric) -> Result<(DiskMetric, ModificationPlan), MoveError> {
    let mut current = metric.strip_flat_vertices();
    let mut plan = ModificationPlan::empty();
    for (idx, kappa) in current.kappas().iter().enumerate() {
        if kappa.pi_units() > EPS_ANGLE_PI {
            return Err(MoveError::Unsupported(format!(
                "staging expects nonpositive curvatures; vertex {idx} has {} pi",
                kappa.pi_units()
            )));
        }
    }
    let budget_pi: f64 = current.kappas().iter().map(|k| -k.pi_units()).sum();
    let limit = 16 + (4.0 * budget_pi).ceil() as usize;
    let big = Angle::from_pi_exact(Rational64::from_integer(-1));
    let cap = Angle::from_pi_exact(Rational64::new(63, 64));
    let quarter = Angle::from_pi_exact(Rational64::new(1, 4));
    for _ in 0..limit {
        let k = current.vertex_count();
        let target = match (0..k).find(|&i| current.kappas()[i] <= big) {
            Some(i) => i,
            None => return Ok((current, plan)),
        };
        let cut = if k == 1 {
            // Wedges at both ends of the loop segment hit the same vertex.
            let total = cap.min(-current.kappas()[0]);
            TriCut {
                i: 0,
                a: total / 2,
                v: total / 2,
            }
        } else {
            let j = (target + 1) % k;
            let v = quarter.min(-current.kappas()[j]);
            let a = (cap - v).min(-current.kappas()[target]);
            TriCut { i: target, a, v }
        };
        current = apply_tri_cut(&current, &cut)?;
        plan.push(PlanStep::TriCut {
            i: cut.i,
            a: cut.a,
            v: cut.v,
        });
    }
    Err(MoveError::IterationLimit(format!(
        "staging did not finish within {limit} cuts"
    )))
}
