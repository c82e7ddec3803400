//! Brute-force geometric checker for circle placements.
//!
//! Only the placements themselves are consulted; nothing from the ring
//! construction is trusted here.

use std::ops::RangeInclusive;

use thiserror::Error;

use crate::layout::{self, LayoutOptions, Placement};
use crate::ring_math::PackingSpec;

/// Relative slack (times the container radius) for containment and overlap.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("candidate count range is empty")]
    EmptyRange,
    #[error("ratio {0} is outside the brute-force range (0.2, 1]")]
    RatioOutOfRange(f64),
    #[error("layout could not be generated: {0}")]
    Layout(#[from] layout::LayoutError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Overlap(usize, usize),
    Escape(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Penetration depth (overlap) or distance past the wall (escape).
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn dist(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let dx = ax - bx;
    let dy = ay - by;
    (dx * dx + dy * dy).sqrt()
}

/// Checks every circle against the wall and every pair against each other.
/// Violations come out sorted by `(i, j)`, an escape of `i` before its overlaps.
pub fn verify_layout(placements: &[Placement], outer_radius: f64, tolerance: f64) -> VerificationReport {
    let mut violations = Vec::new();
    for (i, a) in placements.iter().enumerate() {
        let reach = dist(a.center_x, a.center_y, 0.0, 0.0);
        let limit = outer_radius - a.radius;
        if reach > limit + tolerance {
            violations.push(Violation {
                kind: ViolationKind::Escape(i),
                magnitude: reach - limit,
            });
        }
        for (j, b) in placements.iter().enumerate().skip(i + 1) {
            let d = dist(a.center_x, a.center_y, b.center_x, b.center_y);
            let need = a.radius + b.radius;
            if d < need - tolerance {
                violations.push(Violation {
                    kind: ViolationKind::Overlap(i, j),
                    magnitude: need - d,
                });
            }
        }
    }
    VerificationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// Largest count in `candidates` that the ring construction at ratio `x`
/// realizes as a verifier-passing layout (a prefix of its placements).
/// `None` when no candidate is achievable.
pub fn max_verified_count(ratio: f64, candidates: RangeInclusive<usize>) -> Result<Option<usize>, VerifyError> {
    if candidates.is_empty() {
        return Err(VerifyError::EmptyRange);
    }
    if !(ratio > 0.2 && ratio <= 1.0) {
        return Err(VerifyError::RatioOutOfRange(ratio));
    }
    let spec = PackingSpec::from_ratio(ratio).map_err(layout::LayoutError::from)?;
    let result = layout::generate_layout(&spec, &LayoutOptions::default())?;
    let tol = GEOMETRIC_TOLERANCE * spec.outer_radius();
    for n in candidates.rev() {
        if n > result.placements.len() {
            continue;
        }
        if verify_layout(&result.placements[..n], spec.outer_radius(), tol).valid {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
