//! Largest filler ratio that still yields at least a target count.
//!
//! The count `N(x)` is a step function of the ratio. Bisection assumes it is
//! nonincreasing; that assumption is checked on a guard grid inside the
//! bracket first, and a fine grid scan takes over if the check fails.

use thiserror::Error;

use crate::layout::{generate_layout, LayoutOptions};
use crate::ring_math::{self, PackingSpec, RingMathError};
use crate::verify::{verify_layout, GEOMETRIC_TOLERANCE};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Smallest ratio the bracket search will descend to.
pub const MIN_RATIO: f64 = 1e-4;

const GUARD_POINTS: usize = 65;
const SCAN_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPath {
    Bisection,
    /// Guard grid found a non-monotone step; result resolved to the scan spacing.
    GridScan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseResult {
    pub ratio: f64,
    /// Count at the returned ratio.
    pub total: u64,
    pub path: SearchPath,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error("target count must be at least 1")]
    ZeroTarget,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("no ratio down to {MIN_RATIO} reaches {0} circles")]
    Unreachable(u64),
    #[error("layout at ratio {0} fails verification")]
    Unverified(f64),
    #[error(transparent)]
    RingMath(#[from] RingMathError),
}

/// Searches `(0, 1]` for the largest `x` with `count(x) >= target`, to a
/// relative tolerance.
pub fn search<F>(count: F, target: u64, tolerance: f64) -> Result<InverseResult, InverseError>
where
    F: Fn(f64) -> Result<u64, RingMathError>,
{
    if target == 0 {
        return Err(InverseError::ZeroTarget);
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(InverseError::BadTolerance(tolerance));
    }
    let mut evaluations = 0usize;
    let mut eval = |x: f64| {
        evaluations += 1;
        count(x)
    };

    let top = eval(1.0)?;
    if top >= target {
        return Ok(InverseResult {
            ratio: 1.0,
            total: top,
            path: SearchPath::Bisection,
            evaluations,
        });
    }

    // bracket: count(lo) >= target > count(hi)
    let mut hi = 1.0;
    let mut lo = 0.5;
    loop {
        if eval(lo)? >= target {
            break;
        }
        hi = lo;
        lo *= 0.5;
        if lo < MIN_RATIO {
            return Err(InverseError::Unreachable(target));
        }
    }

    let mut monotone = true;
    let mut prev = u64::MAX;
    for i in 0..GUARD_POINTS {
        let x = lo + (hi - lo) * i as f64 / (GUARD_POINTS - 1) as f64;
        let n = eval(x)?;
        if n > prev {
            monotone = false;
            break;
        }
        prev = n;
    }

    if !monotone {
        let step = (hi - lo) / SCAN_POINTS as f64;
        for i in (0..=SCAN_POINTS).rev() {
            let x = lo + step * i as f64;
            let n = eval(x)?;
            if n >= target {
                return Ok(InverseResult {
                    ratio: x,
                    total: n,
                    path: SearchPath::GridScan,
                    evaluations,
                });
            }
        }
        unreachable!("grid includes lo, which reaches the target");
    }

    while hi - lo > tolerance * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let total = eval(lo)?;
    Ok(InverseResult {
        ratio: lo,
        total,
        path: SearchPath::Bisection,
        evaluations,
    })
}

/// [`search`] over the ring construction, with the layout at the returned
/// ratio checked by the verifier.
pub fn inverse_ratio(target: u64, tolerance: f64) -> Result<InverseResult, InverseError> {
    let found = search(|x| ring_math::count_total(x).map(|b| b.total), target, tolerance)?;
    let spec = PackingSpec::from_ratio(found.ratio)?;
    let layout = generate_layout(&spec, &LayoutOptions::default()).map_err(|e| match e {
        crate::layout::LayoutError::RingMath(e) => InverseError::RingMath(e),
        crate::layout::LayoutError::PhaseCount { .. } => unreachable!("default phases"),
    })?;
    if !verify_layout(&layout.placements, 1.0, GEOMETRIC_TOLERANCE).valid {
        return Err(InverseError::Unverified(found.ratio));
    }
    Ok(found)
}
