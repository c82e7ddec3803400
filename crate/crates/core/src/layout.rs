//! Explicit circle centers for a ring breakdown.

use std::f64::consts::PI;

use thiserror::Error;

use crate::ring_math::{self, CountBreakdown, PackingSpec, RingMathError, RingPlan};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error(transparent)]
    RingMath(#[from] RingMathError),
    #[error("explicit phase list has {given} entries but the packing has {rings} rings")]
    PhaseCount { given: usize, rings: usize },
}

/// Where a placement came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// Ring index (from 1) and slot within the ring (from 0).
    Ring { ring: u32, slot: u64 },
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub center_x: f64,
    pub center_y: f64,
    pub radius: f64,
    pub source: Source,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub enum PhasePolicy {
    /// Slot 0 of every ring on the positive x axis.
    #[default]
    AllZero,
    /// Every second ring (2, 4, ...) rotated by half its slot angle.
    AlternateHalfStep,
    /// One angle per ring, radians.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayoutOptions {
    pub phase_policy: PhasePolicy,
}

/// A complete packing: spec, counts, ring geometry and placements.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingResult {
    pub spec: PackingSpec,
    pub breakdown: CountBreakdown,
    pub rings: Vec<RingPlan>,
    pub placements: Vec<Placement>,
    pub density: f64,
}

impl PackingResult {
    pub fn total(&self) -> u64 {
        self.breakdown.total
    }
}

/// `N x^2`: total filler area over container area.
pub fn density_of(total: u64, ratio: f64) -> f64 {
    total as f64 * ratio * ratio
}

pub fn packing_density(result: &PackingResult) -> f64 {
    density_of(result.breakdown.total, result.spec.ratio())
}

fn ring_phases(
    policy: &PhasePolicy,
    counts: &[u64],
) -> Result<Vec<f64>, LayoutError> {
    match policy {
        PhasePolicy::AllZero => Ok(vec![0.0; counts.len()]),
        PhasePolicy::AlternateHalfStep => Ok(counts
            .iter()
            .enumerate()
            .map(|(i, &n)| if i % 2 == 1 { PI / n as f64 } else { 0.0 })
            .collect()),
        PhasePolicy::Explicit(angles) => {
            if angles.len() != counts.len() {
                return Err(LayoutError::PhaseCount {
                    given: angles.len(),
                    rings: counts.len(),
                });
            }
            Ok(angles.clone())
        }
    }
}

/// Places every counted circle: ring `k` slot `j` at polar radius
/// `R - (2k - 1) r` and angle `phase_k + 2 pi j / n_k`, the central circle
/// (if any) at the origin, last.
pub fn generate_layout(
    spec: &PackingSpec,
    options: &LayoutOptions,
) -> Result<PackingResult, LayoutError> {
    let breakdown = ring_math::count_total(spec.ratio())?;
    let phases = ring_phases(&options.phase_policy, &breakdown.ring_counts)?;
    let big_r = spec.outer_radius();
    let r = spec.filler_radius();

    let rings: Vec<RingPlan> = breakdown
        .ring_counts
        .iter()
        .zip(&phases)
        .enumerate()
        .map(|(i, (&count, &phase))| {
            let index = i as u32 + 1;
            RingPlan {
                index,
                center_circle_radius: big_r - (2.0 * f64::from(index) - 1.0) * r,
                count,
                phase,
            }
        })
        .collect();

    let mut placements = Vec::with_capacity(breakdown.total as usize);
    for ring in &rings {
        let step = 2.0 * PI / ring.count as f64;
        for slot in 0..ring.count {
            let angle = ring.phase + step * slot as f64;
            let (sin, cos) = angle.sin_cos();
            placements.push(Placement {
                center_x: ring.center_circle_radius * cos,
                center_y: ring.center_circle_radius * sin,
                radius: r,
                source: Source::Ring {
                    ring: ring.index,
                    slot,
                },
            });
        }
    }
    if breakdown.central_circle {
        placements.push(Placement {
            center_x: 0.0,
            center_y: 0.0,
            radius: r,
            source: Source::Central,
        });
    }

    let density = density_of(breakdown.total, spec.ratio());
    Ok(PackingResult {
        spec: *spec,
        breakdown,
        rings,
        placements,
        density,
    })
}
