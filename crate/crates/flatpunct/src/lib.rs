//! Complete flat metrics with conical singularities on the once-punctured
//! disk: validation, canonicalization by triangle cuts, the equivalence
//! decision procedure, and the classifying invariant for total boundary
//! curvature -2 pi.
//!
//! Boundary data is a cyclic list of vertex curvatures (nonpositive, in
//! units of pi) and positive segment lengths. Two metrics are equivalent
//! when both can be cut down, by removing finitely many boundary triangles,
//! to a common canonical form; this crate decides that relation and emits
//! replayable certificates.

pub mod angle;
pub mod circulant;
pub mod classify;
pub mod cli;
pub mod geom;
pub mod metric;
pub mod moves;
pub mod svg;

pub use angle::Angle;
pub use metric::{CanonicalMetric, CylinderMetric, DiskMetric, FlatDiskMetric};
