//! Vertex-count reduction: drives the number of singular boundary vertices
//! down to the canonical count n with (n-1)pi <= |K| < n pi, using triangle
//! cuts only.
//!
//! Moves, in preference order:
//!   1. greedy merge: a full cut over an adjacent pair whose curvature
//!      magnitudes sum below the merge threshold removes both vertices and
//!      inserts one;
//!   2. shed transfer: a cut that flattens one neighbor while shaving a
//!      wedge off vertex i, leaving the pair before i light enough to merge
//!      on the next pass;
//!   3. concentration: when every adjacent pair is blocked (sum >= pi), a
//!      partial cut drains one unsaturated vertex to a sliver while the new
//!      vertex lands just short of -pi; the sliver then merges away, so the
//!      mass held by near-pi vertices grows until some pair unblocks.
//!
//! Candidates are screened against the developed boundary: a cut whose
//! triangle crosses another boundary segment does not excise an embedded
//! region of the surface, so it fails to stay inside the modification class.
//! Screening matters at K = -2 pi, the one curvature whose classes carry a
//! residual invariant; elsewhere equivalence is decided by K alone and a
//! formal fallback move is harmless, so when no candidate passes the screen
//! the best formal one is applied anyway.
//!
//! Thresholds scale with the headroom 1 - |K|/(n pi): canonical forms close
//! to the |K| = n pi wall need correspondingly deep vertices, which fixed
//! margins could never build.

use crate::angle::Angle;
use crate::metric::{canonical_count, CanonicalClass, DiskMetric, EPS_ANGLE_PI};

use super::{Chooser, ModificationPlan, MoveError, PlanStep};

/// Margin bundle, all in units of the headroom rho = pi - |K|/n.
struct Margins {
    /// Residue left behind when a vertex is drained: rho/4096.
    slim: Angle,
    /// Saturation threshold for concentration sources: pi - rho/256.
    bulk: Angle,
    /// Merge threshold on pair sums: pi - rho/1024.
    cap: Angle,
}

impl Margins {
    fn for_target(total: Angle, n: usize) -> Margins {
        let mu = total / n as i64;
        let rho = Angle::STRAIGHT + mu; // mu is negative: pi - |K|/n
        Margins {
            slim: rho / 4096,
            bulk: Angle::STRAIGHT - rho / 256,
            cap: Angle::STRAIGHT - rho / 1024,
        }
    }
}

struct State {
    kappas: Vec<Angle>,
    lengths: Vec<f64>,
    plan: ModificationPlan,
}

impl State {
    fn k(&self) -> usize {
        self.kappas.len()
    }

    fn mag(&self, i: usize) -> Angle {
        -self.kappas[i]
    }

    /// Cut with wedge `a` at vertex i and `v` at vertex i+1; exact-zero
    /// remainders flatten and drop, merging their outgoing length backward.
    fn cut(&mut self, i: usize, a: Angle, v: Angle) -> Result<(), MoveError> {
        let k = self.k();
        let j = (i + 1) % k;
        let w = Angle::STRAIGHT - a - v;
        if !a.is_positive() || !v.is_positive() || w.pi_units() <= EPS_ANGLE_PI {
            return Err(MoveError::DegenerateTriangle(format!(
                "planner cut wedges a = {} pi, v = {} pi",
                a.pi_units(),
                v.pi_units()
            )));
        }
        let base = self.lengths[i];
        let sin_w = w.sin();
        let chord_to_p = base * v.sin() / sin_w;
        let chord_from_p = base * a.sin() / sin_w;

        let mut entries: Vec<(Angle, f64)> = Vec::with_capacity(k + 1);
        for t in 0..k {
            if t == i {
                entries.push((self.kappas[t] + a, chord_to_p));
                entries.push((-(a + v), chord_from_p));
            } else if t == j {
                entries.push((self.kappas[t] + v, self.lengths[t]));
            } else {
                entries.push((self.kappas[t], self.lengths[t]));
            }
        }
        while let Some(pos) = entries
            .iter()
            .position(|(kappa, _)| kappa.is_zero(EPS_ANGLE_PI))
        {
            let (_, len) = entries.remove(pos);
            let prev = (pos + entries.len() - 1) % entries.len();
            entries[prev].1 += len;
        }
        self.kappas = entries.iter().map(|(kappa, _)| *kappa).collect();
        self.lengths = entries.iter().map(|(_, l)| *l).collect();
        self.plan.push(PlanStep::TriCut { i, a, v });
        Ok(())
    }

}

#[derive(Clone, Copy)]
struct Candidate {
    i: usize,
    a: Angle,
    v: Angle,
}

/// Reduces the vertex count to the canonical count, returning the reduced
/// boundary data and the plan that reaches it. All output curvatures are
/// strictly negative.
pub fn reduce_count(metric: &DiskMetric) -> Result<(DiskMetric, ModificationPlan), MoveError> {
    reduce_count_with(metric, &mut Chooser::First)
}

/// `reduce_count` with an explicit tie-breaking policy; only the choice of
/// merge is randomized, since the transfer schedule is order-sensitive.
pub(super) fn reduce_count_with(
    metric: &DiskMetric,
    chooser: &mut Chooser,
) -> Result<(DiskMetric, ModificationPlan), MoveError> {
    let current = metric.strip_flat_vertices();
    for (idx, kappa) in current.kappas().iter().enumerate() {
        if kappa.pi_units() > EPS_ANGLE_PI {
            return Err(MoveError::Unsupported(format!(
                "reduction expects nonpositive curvatures; vertex {idx} has {} pi",
                kappa.pi_units()
            )));
        }
        if (-*kappa).pi_units() >= 1.0 {
            return Err(MoveError::Unsupported(format!(
                "vertex {idx} has |kappa| >= pi; stage it first"
            )));
        }
    }
    let n = match canonical_count(current.total_curvature()) {
        Ok(CanonicalClass::Vertices(n)) => n,
        Ok(CanonicalClass::Cylinder) => {
            return Err(MoveError::Unsupported(
                "zero total curvature has no vertex reduction".into(),
            ))
        }
        Err(e) => return Err(MoveError::SearchExhausted(e.to_string())),
    };
    let margins = Margins::for_target(current.total_curvature(), n);
    let mut state = State {
        kappas: current.kappas().to_vec(),
        lengths: current.lengths().to_vec(),
        plan: ModificationPlan::empty(),
    };
    let limit = 64 + 16 * state.k();
    for _ in 0..limit {
        if state.k() == n {
            return Ok((
                DiskMetric::new_unchecked(state.kappas.clone(), state.lengths.clone()),
                state.plan,
            ));
        }
        let (candidates, merging) = collect_candidates(&state, &margins);
        if candidates.is_empty() {
            return Err(MoveError::SearchExhausted(format!(
                "no applicable move with {} vertices toward canonical count {n}",
                state.k()
            )));
        }
        let pick = if merging {
            candidates[chooser.pick(candidates.len())]
        } else {
            candidates[0]
        };
        state.cut(pick.i, pick.a, pick.v)?;
    }
    Err(MoveError::IterationLimit(format!(
        "reduction did not converge within {limit} moves"
    )))
}

fn collect_candidates(state: &State, margins: &Margins) -> (Vec<Candidate>, bool) {
    let k = state.k();
    let mut out = Vec::new();

    // Greedy merges, lightest pair first to keep merged vertices shallow. A
    // pair with a sliver endpoint gets a relaxed threshold: its partner may
    // have been driven arbitrarily close to the cap.
    let mut merges: Vec<(Angle, usize)> = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        let (mi, mj) = (state.mag(i), state.mag(j));
        let s = mi + mj;
        let sliver_end = mi <= margins.slim + margins.slim || mj <= margins.slim + margins.slim;
        let threshold = if sliver_end {
            Angle::STRAIGHT - margins.slim
        } else {
            margins.cap
        };
        if s <= threshold {
            merges.push((s, i));
        }
    }
    merges.sort_by(|(a, _), (b, _)| a.pi_units().total_cmp(&b.pi_units()));
    for (_, i) in &merges {
        out.push(Candidate {
            i: *i,
            a: state.mag(*i),
            v: state.mag((*i + 1) % k),
        });
    }
    if !out.is_empty() {
        // Shed/concentration only matter when nothing merges.
        return (out, true);
    }

    // Shed transfers: shave `a` off vertex i while flattening vertex i+1;
    // choosing a above the window floor leaves the pair (i-1, i) mergeable
    // on the next pass, so each shed buys one merge.
    let delta = margins.slim;
    for i in 0..k {
        let j = (i + 1) % k;
        let prev = (i + k - 1) % k;
        let (mi, mj) = (state.mag(i), state.mag(j));
        let pair_prev = state.mag(prev) + mi;
        let lo = (pair_prev - margins.cap + delta).max(delta);
        let hi = (mi - delta).min(Angle::STRAIGHT - delta - mj);
        if lo < hi {
            let mid = lo + (hi - lo) / 2;
            out.push(Candidate { i, a: mid, v: mj });
        }
    }

    // Concentration: drain an unsaturated left endpoint of a blocked pair to
    // a sliver, landing the removed mass (topped up from the partner) on a
    // fresh vertex of magnitude cap - 2 slim. Draining leftward only makes
    // stray mass hop rightward consistently; an orientation that flips at
    // ties makes a stray bounce between two slots forever.
    let saturated = |m: Angle| m >= margins.bulk - margins.slim;
    let deep = margins.cap - margins.slim - margins.slim;
    let mut conc: Vec<(bool, Angle, usize)> = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        let (mi, mj) = (state.mag(i), state.mag(j));
        let s = mi + mj;
        if s < margins.cap || saturated(mi) || mi <= margins.slim {
            continue;
        }
        let a = mi - margins.slim;
        let v = deep - a;
        if a.is_positive() && v.is_positive() {
            conc.push((!saturated(mj), s, i));
        }
    }
    // Both-endpoints-unsaturated pairs first, then heaviest.
    conc.sort_by(|x, y| {
        (y.0, y.1.pi_units())
            .partial_cmp(&(x.0, x.1.pi_units()))
            .unwrap()
    });
    for (_, _, i) in conc {
        let a = state.mag(i) - margins.slim;
        out.push(Candidate { i, a, v: deep - a });
    }
    (out, false)
}
