//! Exact embedding test for cut triangles.
//!
//! A complete flat disk with nonpositive vertex data decomposes into one
//! unbounded sector per boundary segment: draw from each vertex the ray
//! bisecting its interior angle. The two half-angles flanking a segment sum
//! to at least pi (each is (pi + |kappa|)/2), so the rays splay apart and
//! every sector is convex. The surface is the cyclic chain of these sectors
//! glued along the rays.
//!
//! A cut triangle sits inside the surface exactly when its two chords do,
//! and a chord is tested by walking it across the chain, sector by sector:
//! leaving through a ray continues in the neighbor, leaving through a
//! segment means the chord hits the boundary. The walk never references the
//! developed plane, which matters because the development overlaps itself
//! whenever the boundary turns through more than a full circle and crossings
//! seen there say nothing about the surface.

use crate::angle::Angle;
use crate::metric::DiskMetric;

use super::TriCut;

/// One step of a chord walk: where the ray leaves the current sector.
enum Exit {
    /// Ends inside the sector: the chord is clear.
    Interior,
    /// Reaches the sector's boundary segment: the cut is not embedded.
    Boundary,
    /// Crosses the bisector ray at the left (start) vertex after distance s.
    Left(f64),
    /// Crosses the bisector ray at the right (end) vertex after distance s.
    Right(f64),
}

struct Chain {
    lengths: Vec<f64>,
    /// Half the interior angle at each vertex, in radians.
    half: Vec<f64>,
}

impl Chain {
    fn new(metric: &DiskMetric) -> Option<Chain> {
        let half: Vec<f64> = metric
            .kappas()
            .iter()
            .map(|k| (std::f64::consts::PI - k.radians()) / 2.0)
            .collect();
        // Convexity of each sector needs every half-angle below pi,
        // i.e. |kappa| < pi.
        if half.iter().any(|&h| h <= 0.0 || h >= std::f64::consts::PI) {
            return None;
        }
        Some(Chain {
            lengths: metric.lengths().to_vec(),
            half,
        })
    }

    fn k(&self) -> usize {
        self.lengths.len()
    }

    /// Walks a straight chord of length `len` through the chain, starting
    /// in sector `t` at point `p` with unit direction `u` (sector chart:
    /// segment t from (0,0) to (L_t,0), surface above). Returns false if
    /// the chord runs into the boundary.
    fn chord_clear(&self, mut t: usize, mut p: (f64, f64), mut u: (f64, f64), mut len: f64) -> bool {
        let k = self.k();
        for _ in 0..64 * k + 64 {
            match self.exit(t, p, u, len) {
                Exit::Interior => return true,
                Exit::Boundary => return false,
                Exit::Left(s) => {
                    // Shared ray at vertex t: angle half[t] here, pi - half[t]
                    // in the neighbor, whose chart puts the vertex at
                    // (L_{t-1}, 0).
                    let prev = (t + k - 1) % k;
                    let rot = std::f64::consts::PI - 2.0 * self.half[t];
                    let q = (p.0 + s * u.0, p.1 + s * u.1);
                    p = rotate(q, rot);
                    p.0 += self.lengths[prev];
                    u = rotate(u, rot);
                    len -= s;
                    t = prev;
                }
                Exit::Right(s) => {
                    let next = (t + 1) % k;
                    let rot = 2.0 * self.half[next] - std::f64::consts::PI;
                    let q = (p.0 - self.lengths[t] + s * u.0, p.1 + s * u.1);
                    p = rotate(q, rot);
                    u = rotate(u, rot);
                    len -= s;
                    t = next;
                }
            }
            // Nudge off the ray just crossed so the test cannot re-detect it.
            let eps = 1e-12 * (1.0 + len.abs());
            p = (p.0 + eps * u.0, p.1 + eps * u.1);
            len -= eps;
            if len <= 0.0 {
                return true;
            }
        }
        // A chord that keeps circling without resolving is not one the
        // planner should trust.
        false
    }

    fn exit(&self, t: usize, p: (f64, f64), u: (f64, f64), len: f64) -> Exit {
        let length = self.lengths[t];
        let scale = length + p.0.abs() + p.1.abs() + len;
        let eps = 1e-12 * scale;
        let mut best: Option<(f64, bool)> = None; // (distance, is_left)

        // Bisector ray at the left vertex, direction d_a from (0,0).
        let (da, db) = (
            (self.half[t].cos(), self.half[t].sin()),
            (-self.half[(t + 1) % self.k()].cos(), self.half[(t + 1) % self.k()].sin()),
        );
        let cross = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - a.1 * b.0;
        let cu = cross(da, u);
        if cu > 0.0 {
            let s = -cross(da, p) / cu;
            if s > eps && s < len {
                best = Some((s, true));
            }
        }
        // Bisector ray at the right vertex, from (L_t, 0).
        let pb = (p.0 - length, p.1);
        let cu = cross(db, u);
        if cu < 0.0 {
            let s = -cross(db, pb) / cu;
            if s > eps && s < len && best.map_or(true, |(b, _)| s < b) {
                best = Some((s, false));
            }
        }
        // The boundary segment itself (the chart's floor).
        if u.1 < 0.0 {
            let s = -p.1 / u.1;
            if s > eps && s <= len && best.map_or(true, |(b, _)| s < b) {
                return Exit::Boundary;
            }
        }
        match best {
            Some((s, true)) => Exit::Left(s),
            Some((s, false)) => Exit::Right(s),
            None => Exit::Interior,
        }
    }
}

fn rotate(p: (f64, f64), angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (c * p.0 - s * p.1, s * p.0 + c * p.1)
}

/// True when the triangle removed by `cut` lies inside the surface, meeting
/// the boundary only along its base segment. Only such cuts excise an
/// embedded region; a cut whose triangle runs through the boundary is
/// formally consistent but can leave the modification class.
pub fn tri_cut_embeds(metric: &DiskMetric, cut: &TriCut) -> bool {
    let k = metric.vertex_count();
    if k < 3 {
        return true;
    }
    let Some(chain) = Chain::new(metric) else {
        // A vertex at or beyond |kappa| = pi has no convex sector; such
        // metrics are staged before any screened planner runs on them.
        return true;
    };
    let i = cut.i;
    let j = (i + 1) % k;
    let base = metric.lengths()[i];
    let w = Angle::STRAIGHT - cut.a - cut.v;
    let chord_i = base * cut.v.sin() / w.sin();
    let chord_j = base * cut.a.sin() / w.sin();
    let (a, v) = (cut.a.radians(), cut.v.radians());

    // Chord out of vertex i, at angle a above segment i. If the wedge
    // exceeds the half-angle it starts in the neighboring sector, measured
    // onward from the shared ray.
    let clear_i = if a < chain.half[i] {
        let u = (a.cos(), a.sin());
        chain.chord_clear(i, nudge((0.0, 0.0), u, chord_i), u, shrink(chord_i))
    } else {
        let prev = (i + k - 1) % k;
        let dir = std::f64::consts::PI - chain.half[i] + (a - chain.half[i]);
        let u = (dir.cos(), dir.sin());
        let start = (chain.lengths[prev], 0.0);
        chain.chord_clear(prev, nudge(start, u, chord_i), u, shrink(chord_i))
    };
    if !clear_i {
        return false;
    }
    // Chord out of vertex i+1, at angle v measured back over segment i.
    if v < chain.half[j] {
        let dir = std::f64::consts::PI - v;
        let u = (dir.cos(), dir.sin());
        let start = (base, 0.0);
        chain.chord_clear(i, nudge(start, u, chord_j), u, shrink(chord_j))
    } else {
        let dir = chain.half[j] - (v - chain.half[j]);
        let u = (dir.cos(), dir.sin());
        chain.chord_clear(j, nudge((0.0, 0.0), u, chord_j), u, shrink(chord_j))
    }
}

/// Offsets a chord's start off its boundary vertex so the walk does not
/// immediately read the vertex as a boundary hit.
fn nudge(p: (f64, f64), u: (f64, f64), len: f64) -> (f64, f64) {
    let eps = 1e-9 * len;
    (p.0 + eps * u.0, p.1 + eps * u.1)
}

fn shrink(len: f64) -> f64 {
    len * (1.0 - 2e-9)
}
