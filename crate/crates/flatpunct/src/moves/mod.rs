//! The modification calculus: triangle cuts, principal moves, the
//! equalization and count-reduction planners, and replayable plans.
//!
//! Every operation is a pure function from boundary data to boundary data.
//! Total boundary curvature is conserved by each emitted step, except the
//! planner-internal merge/split surgery pair, which shifts it by +pi / -pi
//! and always cancels within a completed plan.

mod embed;
mod equalize;
mod grow;
mod phase;
mod reduce;

pub use embed::tri_cut_embeds;
pub use equalize::{equalize, stage_large};
pub use grow::loop_grow;
pub use reduce::reduce_count;

use num_rational::Rational64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::metric::{
    canonical_count, is_minus_two_pi, CanonicalClass, CanonicalMetric, DiskMetric, FlatDiskMetric,
    EPS_ANGLE_PI, TOL_LENGTH,
};

/// Tie-breaking policy for the planners: deterministic callers always take
/// the top-ranked candidate, seeded callers draw uniformly among candidates
/// of equal rank. Either way the emitted plan replays deterministically.
pub(crate) enum Chooser {
    First,
    Seeded(ChaCha8Rng),
}

impl Chooser {
    fn pick(&mut self, ties: usize) -> usize {
        match self {
            Chooser::First => 0,
            Chooser::Seeded(rng) => rng.gen_range(0..ties.max(1)),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MoveError {
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("wedge too large: {0}")]
    WedgeTooLarge(String),
    #[error("all values are equal; no crossing index exists")]
    AllEqual,
    #[error("iteration limit exceeded: {0}")]
    IterationLimit(String),
    #[error("principal moves need at least 3 vertices, got {0}")]
    UnsupportedArity(usize),
    #[error("target length {target} does not exceed current length {current}")]
    TargetNotGreater { target: f64, current: f64 },
    #[error("planner search exhausted: {0}")]
    SearchExhausted(String),
    #[error("replay failed at step {step}: {reason}")]
    ReplayFailure { step: usize, reason: String },
    #[error("operation not applicable: {0}")]
    Unsupported(String),
}

/// Removal of a Euclidean triangle sitting on segment `i`: wedge `a` is taken
/// at vertex `i`, wedge `v` at vertex `i+1`, and the triangle's third vertex
/// becomes a new boundary vertex of curvature -(a+v).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriCut {
    pub i: usize,
    pub a: Angle,
    pub v: Angle,
}

/// The principal modification: removes a quadrangle over segment `j` of a
/// canonical metric, adding (r, 2r cos(pi - K/n), r) to segments
/// (j-1, j, j+1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalMove {
    pub j: usize,
    pub r: f64,
}

/// One replayable step. `Merge` and `Split` are the half-plane surgery of the
/// count-reduction planner; they appear in internal plans only and cancel in
/// pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PlanStep {
    TriCut { i: usize, a: Angle, v: Angle },
    Principal { j: usize, r: f64 },
    Merge { i: usize },
    Split { i: usize, left: Angle, right: Angle, length: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModificationPlan {
    pub steps: Vec<PlanStep>,
}

impl ModificationPlan {
    pub fn empty() -> ModificationPlan {
        ModificationPlan { steps: Vec::new() }
    }

    pub fn push(&mut self, step: PlanStep) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: ModificationPlan) {
        self.steps.extend(other.steps);
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// True when the plan is a genuine modification in the geometric sense:
    /// triangle cuts and principal moves only, no internal surgery.
    pub fn is_pure(&self) -> bool {
        self.steps
            .iter()
            .all(|s| matches!(s, PlanStep::TriCut { .. } | PlanStep::Principal { .. }))
    }
}

/// Two plans reaching the same canonical metric witness an equivalence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub plan_left: ModificationPlan,
    pub plan_right: ModificationPlan,
    pub common: CanonicalMetric,
}

/// Removes the triangle described by `cut` from the boundary. Vertices whose
/// curvature lands on zero stop being singular and are dropped, with their
/// adjacent segments merged.
pub fn apply_tri_cut(metric: &DiskMetric, cut: &TriCut) -> Result<DiskMetric, MoveError> {
    let k = metric.vertex_count();
    if cut.i >= k {
        return Err(MoveError::Unsupported(format!(
            "cut index {} out of range for {} vertices",
            cut.i, k
        )));
    }
    let (a, v) = (cut.a, cut.v);
    if a.pi_units() <= 0.0 || v.pi_units() <= 0.0 {
        return Err(MoveError::DegenerateTriangle(format!(
            "wedge angles must be positive, got a = {} pi, v = {} pi",
            a.pi_units(),
            v.pi_units()
        )));
    }
    let w = Angle::STRAIGHT - a - v;
    if w.pi_units() <= EPS_ANGLE_PI {
        return Err(MoveError::DegenerateTriangle(format!(
            "wedges sum to {} pi, leaving no third angle",
            (a + v).pi_units()
        )));
    }
    let i = cut.i;
    let j = (i + 1) % k;
    if k == 1 {
        // Both wedges sit at the single vertex; its angle shrinks by a + v.
        let theta = metric.theta(0);
        if (a + v).pi_units() >= theta.pi_units() - EPS_ANGLE_PI {
            return Err(MoveError::WedgeTooLarge(format!(
                "wedges {} pi exceed the loop vertex angle {} pi",
                (a + v).pi_units(),
                theta.pi_units()
            )));
        }
    } else {
        if a.pi_units() >= metric.theta(i).pi_units() - EPS_ANGLE_PI {
            return Err(MoveError::WedgeTooLarge(format!(
                "wedge a = {} pi reaches the vertex angle {} pi at vertex {i}",
                a.pi_units(),
                metric.theta(i).pi_units()
            )));
        }
        if v.pi_units() >= metric.theta(j).pi_units() - EPS_ANGLE_PI {
            return Err(MoveError::WedgeTooLarge(format!(
                "wedge v = {} pi reaches the vertex angle {} pi at vertex {j}",
                v.pi_units(),
                metric.theta(j).pi_units()
            )));
        }
    }

    let base = metric.lengths()[i];
    let sin_w = w.sin();
    let chord_to_p = base * v.sin() / sin_w; // vertex i  -> new vertex
    let chord_from_p = base * a.sin() / sin_w; // new vertex -> vertex i+1
    let new_vertex = -(a + v);

    // Rebuild as (vertex, outgoing length) pairs, then drop flattened ends.
    let mut entries: Vec<(Angle, f64, bool)> = Vec::with_capacity(k + 1);
    if k == 1 {
        entries.push((metric.kappas()[0] + a + v, chord_to_p, true));
        entries.push((new_vertex, chord_from_p, false));
    } else {
        for t in 0..k {
            if t == i {
                entries.push((metric.kappas()[t] + a, chord_to_p, true));
                entries.push((new_vertex, chord_from_p, false));
            } else if t == j {
                entries.push((metric.kappas()[t] + v, metric.lengths()[t], true));
            } else {
                entries.push((metric.kappas()[t], metric.lengths()[t], false));
            }
        }
    }
    while let Some(pos) = entries
        .iter()
        .position(|(kappa, _, check)| *check && kappa.is_zero(EPS_ANGLE_PI))
    {
        if entries.len() == 1 {
            return Err(MoveError::DegenerateTriangle(
                "cut would remove the last boundary vertex".into(),
            ));
        }
        let (_, len, _) = entries.remove(pos);
        let prev = (pos + entries.len() - 1) % entries.len();
        entries[prev].1 += len;
    }
    let kappas = entries.iter().map(|e| e.0).collect();
    let lengths = entries.iter().map(|e| e.1).collect();
    Ok(DiskMetric::new_unchecked(kappas, lengths))
}

/// Applies a principal move to a canonical metric with n >= 3 vertices.
/// Curvatures are untouched; the length data moves by the circulant column.
pub fn apply_principal(
    canonical: &CanonicalMetric,
    mv: &PrincipalMove,
) -> Result<CanonicalMetric, MoveError> {
    let n = canonical.n();
    if n < 3 {
        return Err(MoveError::UnsupportedArity(n));
    }
    if mv.r < 0.0 {
        return Err(MoveError::Unsupported(format!(
            "principal move length must be nonnegative, got {}",
            mv.r
        )));
    }
    let j = mv.j % n;
    let c = principal_middle_coefficient(canonical.total_curvature, n);
    let mut lengths = canonical.lengths.clone();
    lengths[(j + n - 1) % n] += mv.r;
    lengths[j] += mv.r * c;
    lengths[(j + 1) % n] += mv.r;
    Ok(CanonicalMetric::new(canonical.total_curvature, lengths))
}

/// 2 cos(pi - K/n), the middle entry of the principal move's update vector.
pub fn principal_middle_coefficient(total_curvature: Angle, n: usize) -> f64 {
    // Exactly 1 in the K = -2pi, n = 3 case: cos(pi + 2pi/3) = 1/2.
    if n == 3 && total_curvature.exact() == Some(Rational64::from_integer(-2)) {
        return 1.0;
    }
    2.0 * (std::f64::consts::PI - total_curvature.radians() / n as f64).cos()
}

/// Composition of same-index principal moves: Theta_{j,r} o Theta_{j,r'} =
/// Theta_{j,r+r'}.
pub fn compose_principal(m1: &PrincipalMove, m2: &PrincipalMove) -> Option<PrincipalMove> {
    (m1.j == m2.j).then(|| PrincipalMove {
        j: m1.j,
        r: m1.r + m2.r,
    })
}

/// First index i (cyclically) where the sequence crosses its own mean.
pub fn crossing_index(values: &[f64]) -> Result<usize, MoveError> {
    if values.is_empty() {
        return Err(MoveError::AllEqual);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let scale = 1.0 + values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let all_equal = values.iter().all(|v| (v - mean).abs() <= 1e-12 * scale);
    if all_equal {
        return Err(MoveError::AllEqual);
    }
    for i in 0..values.len() {
        let a = values[i] >= mean;
        let b = values[(i + 1) % values.len()] >= mean;
        if a != b {
            return Ok(i);
        }
    }
    Err(MoveError::AllEqual)
}

/// Applies one plan step to boundary data.
pub fn apply_step(metric: &DiskMetric, step: &PlanStep) -> Result<DiskMetric, MoveError> {
    match step {
        PlanStep::TriCut { i, a, v } => apply_tri_cut(metric, &TriCut { i: *i, a: *a, v: *v }),
        PlanStep::Principal { j, r } => {
            let canonical = as_canonical(metric)?;
            let out = apply_principal(&canonical, &PrincipalMove { j: *j, r: *r })?;
            Ok(out.to_disk())
        }
        PlanStep::Merge { i } => apply_merge(metric, *i),
        PlanStep::Split {
            i,
            left,
            right,
            length,
        } => apply_split(metric, *i, *left, *right, *length),
    }
}

/// Half-plane surgery: merges vertices i and i+1, deleting the segment
/// between them. Total curvature increases by exactly pi.
fn apply_merge(metric: &DiskMetric, i: usize) -> Result<DiskMetric, MoveError> {
    let k = metric.vertex_count();
    if k < 2 {
        return Err(MoveError::Unsupported(
            "merge surgery needs at least two vertices".into(),
        ));
    }
    let j = (i + 1) % k;
    if !metric.kappas()[i].is_negative() || !metric.kappas()[j].is_negative() {
        return Err(MoveError::Unsupported(format!(
            "merge surgery needs strictly negative curvature at vertices {i} and {j}"
        )));
    }
    let merged = metric.kappas()[i] + metric.kappas()[j] + Angle::STRAIGHT;
    let mut kappas = Vec::with_capacity(k - 1);
    let mut lengths = Vec::with_capacity(k - 1);
    for t in 0..k {
        if t == i {
            kappas.push(merged);
            lengths.push(metric.lengths()[j]);
        } else if t == j {
            continue;
        } else {
            kappas.push(metric.kappas()[t]);
            lengths.push(metric.lengths()[t]);
        }
    }
    Ok(DiskMetric::new_unchecked(kappas, lengths))
}

/// Inverse of `apply_merge`: splits vertex i into two vertices of curvature
/// -left and -right joined by a new segment. Requires the vertex angle to
/// equal left + right. Total curvature decreases by exactly pi.
fn apply_split(
    metric: &DiskMetric,
    i: usize,
    left: Angle,
    right: Angle,
    length: f64,
) -> Result<DiskMetric, MoveError> {
    let k = metric.vertex_count();
    if i >= k {
        return Err(MoveError::Unsupported(format!(
            "split index {i} out of range for {k} vertices"
        )));
    }
    if !left.is_positive() || !right.is_positive() || !(length > 0.0) {
        return Err(MoveError::Unsupported(
            "split needs positive side angles and a positive segment length".into(),
        ));
    }
    let theta = metric.theta(i);
    if !theta.approx_eq(&(left + right), 1e-9) {
        return Err(MoveError::Unsupported(format!(
            "split sides {} pi + {} pi do not match the vertex angle {} pi",
            left.pi_units(),
            right.pi_units(),
            theta.pi_units()
        )));
    }
    let mut kappas = Vec::with_capacity(k + 1);
    let mut lengths = Vec::with_capacity(k + 1);
    for t in 0..k {
        if t == i {
            kappas.push(-left);
            lengths.push(length);
            kappas.push(-right);
            lengths.push(metric.lengths()[t]);
        } else {
            kappas.push(metric.kappas()[t]);
            lengths.push(metric.lengths()[t]);
        }
    }
    Ok(DiskMetric::new_unchecked(kappas, lengths))
}

fn as_canonical(metric: &DiskMetric) -> Result<CanonicalMetric, MoveError> {
    let total = metric.total_curvature();
    let first = metric.kappas()[0];
    for kappa in metric.kappas() {
        if !kappa.approx_eq(&first, EPS_ANGLE_PI) {
            return Err(MoveError::Unsupported(
                "principal moves apply to canonical metrics only (unequal curvatures)".into(),
            ));
        }
    }
    match canonical_count(total) {
        Ok(CanonicalClass::Vertices(n)) if n == metric.vertex_count() => {}
        _ => {
            return Err(MoveError::Unsupported(
                "vertex count does not match the canonical count for this curvature".into(),
            ));
        }
    }
    Ok(CanonicalMetric::new(total, metric.lengths().to_vec()))
}

/// Replays a whole plan, checking every step's preconditions and curvature
/// bookkeeping, and returns the final boundary data.
pub fn apply_plan(metric: &DiskMetric, plan: &ModificationPlan) -> Result<DiskMetric, MoveError> {
    let mut current = metric.clone();
    for (idx, step) in plan.steps.iter().enumerate() {
        let before = current.total_curvature();
        current = apply_step(&current, step).map_err(|e| MoveError::ReplayFailure {
            step: idx,
            reason: e.to_string(),
        })?;
        let after = current.total_curvature();
        let expected_shift = match step {
            PlanStep::Merge { .. } => 1.0,
            PlanStep::Split { .. } => -1.0,
            _ => 0.0,
        };
        let drift = after.pi_units() - before.pi_units() - expected_shift;
        if drift.abs() > 1e-12 {
            return Err(MoveError::ReplayFailure {
                step: idx,
                reason: format!("curvature drifted by {} pi", drift),
            });
        }
        if current.lengths().iter().any(|l| !(*l > 0.0)) {
            return Err(MoveError::ReplayFailure {
                step: idx,
                reason: "step produced a nonpositive segment length".into(),
            });
        }
    }
    Ok(current)
}

/// True iff replaying `plan` from `source` reproduces `expected` within
/// `TOL_LENGTH`, comparing up to cyclic relabeling when `up_to_rotation`.
pub fn verify_plan(
    source: &FlatDiskMetric,
    plan: &ModificationPlan,
    expected: &FlatDiskMetric,
    up_to_rotation: bool,
) -> Result<bool, MoveError> {
    match (source, expected) {
        (FlatDiskMetric::Cylinder(a), FlatDiskMetric::Cylinder(b)) => {
            Ok(plan.is_empty() && (a.width - b.width).abs() <= TOL_LENGTH)
        }
        (FlatDiskMetric::Disk(src), FlatDiskMetric::Disk(exp)) => {
            let end = apply_plan(src, plan)?;
            Ok(end.approx_eq(exp, TOL_LENGTH, up_to_rotation))
        }
        _ => Ok(false),
    }
}

/// Full pipeline to the canonical form: stage oversized vertices, reduce the
/// vertex count to the canonical count, equalize curvatures, and at
/// K = -2 pi pin the phase of the closing vector so the endpoint does not
/// depend on the route taken. Already-canonical input gets an empty plan.
pub fn canonicalize(
    metric: &DiskMetric,
) -> Result<(CanonicalMetric, ModificationPlan), MoveError> {
    canonicalize_with(metric, Chooser::First)
}

/// `canonicalize` with the planners' tie-breaks drawn from a seeded
/// generator. Any seed reaches the same canonical form (that is the point of
/// phase pinning); only the plan differs.
pub fn canonicalize_seeded(
    metric: &DiskMetric,
    seed: u64,
) -> Result<(CanonicalMetric, ModificationPlan), MoveError> {
    canonicalize_with(metric, Chooser::Seeded(ChaCha8Rng::seed_from_u64(seed)))
}

fn canonicalize_with(
    metric: &DiskMetric,
    mut chooser: Chooser,
) -> Result<(CanonicalMetric, ModificationPlan), MoveError> {
    let report = metric.validate();
    if !report.is_valid() {
        return Err(MoveError::Unsupported(format!(
            "invalid metric: {}",
            report.errors.join("; ")
        )));
    }
    if metric
        .kappas()
        .iter()
        .any(|kappa| kappa.pi_units() > EPS_ANGLE_PI)
    {
        return Err(MoveError::Unsupported(
            "canonicalization expects normal form (no positive boundary curvature)".into(),
        ));
    }
    let total = metric.total_curvature();
    if total.pi_units() > -EPS_ANGLE_PI && total.exact().map(|r| !r.is_negative()).unwrap_or(true) {
        return Err(MoveError::Unsupported(
            "canonicalization needs strictly negative total curvature; the K = 0 case is the half-cylinder".into(),
        ));
    }

    let mut plan = ModificationPlan::empty();
    let stripped = metric.strip_flat_vertices();
    let (staged, stage_plan) = stage_large(&stripped)?;
    plan.extend(stage_plan);
    let (reduced, reduce_plan) = reduce::reduce_count_with(&staged, &mut chooser)?;
    plan.extend(reduce_plan);
    let (mut equalized, eq_plan) = equalize::equalize_with(&reduced, &mut chooser)?;
    plan.extend(eq_plan);
    if !plan.is_empty() && is_minus_two_pi(total) {
        let (pinned, phase_plan) = phase::normalize_phase(&equalized)?;
        plan.extend(phase_plan);
        equalized = pinned;
    }

    let canonical = as_canonical(&equalized).map_err(|e| {
        MoveError::SearchExhausted(format!("pipeline did not reach a canonical metric: {e}"))
    })?;
    // Cuts with irrational wedges (phase pinning) leave the recomputed total
    // as a plain float; curvature is conserved, so restore the input's total
    // to keep exact-rational bookkeeping when the input had it.
    Ok((CanonicalMetric::new(total, canonical.lengths), plan))
}
