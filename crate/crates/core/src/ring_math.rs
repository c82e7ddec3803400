//! Closed-form ring arithmetic.
//!
//! The container (radius `R`) is split into concentric "center circles" of
//! radius `R - (2k - 1) r`, `k = 1, 2, ...`. Ring `k` holds the fillers whose
//! centers sit on that circle; its capacity is the number of equal sectors
//! whose inscribed circle is at least as large as a filler:
//!
//! ```text
//! n_k = floor(pi / asin(x / (1 - (2k - 1) x))),   x = r / R
//! ```
//!
//! Everything here works on the normalized ratio `x`; the dimensional entry
//! points normalize first so both forms share one code path.

use std::f64::consts::PI;

use thiserror::Error;

/// Added before flooring so analytically integral quotients (e.g. `pi / asin(1) = 2`)
/// are not lost to round-down.
pub const FLOOR_SNAP: f64 = 1e-9;

/// Slack on the case-boundary comparisons `1 - (2m - 1) x >= x` and `>= 0`.
///
/// A ring admitted at the edge of this slack sits at most `2 * CASE_TOLERANCE * R`
/// inside tangency, which must stay below the verifier's geometric slack
/// ([`crate::verify::GEOMETRIC_TOLERANCE`]).
pub const CASE_TOLERANCE: f64 = 2.5e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingMathError {
    #[error("ratio must be a positive finite number, got {0}")]
    InvalidRatio(f64),
    #[error("radii must be positive finite lengths (outer {outer}, filler {filler})")]
    InvalidRadius { outer: f64, filler: f64 },
    #[error("a circle cannot be divided into {0} part(s) for the inscribed radius; n must be at least 2")]
    TooFewDivisions(u32),
    #[error(
        "ring {index} is infeasible for x = {ratio}: center-circle radius 1 - (2k - 1) x = {residual} is below x"
    )]
    InfeasibleRing { ratio: f64, index: u32, residual: f64 },
    #[error("ring index must start at 1")]
    ZeroRingIndex,
}

/// A problem instance: container radius, filler radius and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingSpec {
    outer_radius: f64,
    filler_radius: f64,
    ratio: f64,
}

impl PackingSpec {
    pub fn new(outer_radius: f64, filler_radius: f64) -> Result<Self, RingMathError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(outer_radius) || !ok(filler_radius) {
            return Err(RingMathError::InvalidRadius {
                outer: outer_radius,
                filler: filler_radius,
            });
        }
        Ok(Self {
            outer_radius,
            filler_radius,
            ratio: filler_radius / outer_radius,
        })
    }

    /// Unit container with fillers of radius `ratio`.
    pub fn from_ratio(ratio: f64) -> Result<Self, RingMathError> {
        check_ratio(ratio)?;
        Self::new(1.0, ratio)
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn filler_radius(&self) -> f64 {
        self.filler_radius
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }
}

/// One ring of the construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingPlan {
    pub index: u32,
    /// Radius of the circle the filler centers lie on, `R - (2k - 1) r`.
    pub center_circle_radius: f64,
    pub count: u64,
    /// Angular offset of slot 0, radians.
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// The innermost ring `m` closes exactly on the filler radius.
    A,
    /// Ring `m` does not fit but the leftover hole takes one central circle.
    B,
    /// Neither ring `m` nor a central circle fits.
    C,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::A => "a",
            Case::B => "b",
            Case::C => "c",
        }
    }
}

/// Termination case together with the terminal index `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseTag {
    pub case: Case,
    pub terminal_index: u32,
}

impl CaseTag {
    /// Number of rings actually filled: `m` for case a, `m - 1` otherwise.
    pub fn ring_total(&self) -> u32 {
        match self.case {
            Case::A => self.terminal_index,
            Case::B | Case::C => self.terminal_index - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Feasible(CaseTag),
    /// Filler larger than the container: nothing fits.
    Infeasible,
}

/// Per-ring counts and the total for one ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBreakdown {
    /// `None` when the filler does not fit at all.
    pub case: Option<CaseTag>,
    pub ring_counts: Vec<u64>,
    pub central_circle: bool,
    pub total: u64,
}

impl CountBreakdown {
    fn empty() -> Self {
        Self {
            case: None,
            ring_counts: Vec::new(),
            central_circle: false,
            total: 0,
        }
    }
}

fn check_ratio(ratio: f64) -> Result<(), RingMathError> {
    if ratio.is_finite() && ratio > 0.0 {
        Ok(())
    } else {
        Err(RingMathError::InvalidRatio(ratio))
    }
}

/// `1 - (2k - 1) x`: normalized radius of the k-th center circle.
fn residual(ratio: f64, index: u32) -> f64 {
    1.0 - (2.0 * f64::from(index) - 1.0) * ratio
}

/// Radius of the largest circle inscribed in one of `divisions` equal sectors
/// of a circle of radius `outer_radius`: `R / (1 + 1 / sin(pi / n))`.
pub fn sector_inscribed_radius(outer_radius: f64, divisions: u32) -> Result<f64, RingMathError> {
    if divisions < 2 {
        return Err(RingMathError::TooFewDivisions(divisions));
    }
    // half the sector angle
    let half_angle = PI / f64::from(divisions);
    Ok(outer_radius / (1.0 + 1.0 / half_angle.sin()))
}

/// Unsnapped capacity quotient `pi / asin(x / (1 - (2k - 1) x))` of ring `k`.
pub fn ring_quotient(ratio: f64, index: u32) -> Result<f64, RingMathError> {
    check_ratio(ratio)?;
    if index == 0 {
        return Err(RingMathError::ZeroRingIndex);
    }
    let rho = residual(ratio, index);
    if rho < ratio - CASE_TOLERANCE {
        return Err(RingMathError::InfeasibleRing {
            ratio,
            index,
            residual: rho,
        });
    }
    let sine = (ratio / rho).min(1.0);
    Ok(PI / sine.asin())
}

/// Number of fillers ring `k` holds for ratio `x`.
pub fn ring_count(ratio: f64, index: u32) -> Result<u64, RingMathError> {
    let q = ring_quotient(ratio, index)?;
    Ok((q + FLOOR_SNAP).floor() as u64)
}

/// Finds the terminal index `m` and which of the three termination cases applies.
pub fn classify_case(ratio: f64) -> Result<Classification, RingMathError> {
    check_ratio(ratio)?;
    let mut m = 1u32;
    loop {
        let s = residual(ratio, m);
        if s >= ratio - CASE_TOLERANCE {
            if s <= ratio + CASE_TOLERANCE {
                return Ok(Classification::Feasible(CaseTag {
                    case: Case::A,
                    terminal_index: m,
                }));
            }
            m += 1;
            continue;
        }
        let tag = if s >= -CASE_TOLERANCE {
            CaseTag {
                case: Case::B,
                terminal_index: m,
            }
        } else if m == 1 {
            return Ok(Classification::Infeasible);
        } else {
            CaseTag {
                case: Case::C,
                terminal_index: m,
            }
        };
        return Ok(Classification::Feasible(tag));
    }
}

/// Total filler count for ratio `x`, evaluated branch by branch from the case tag.
pub fn count_total(ratio: f64) -> Result<CountBreakdown, RingMathError> {
    let tag = match classify_case(ratio)? {
        Classification::Infeasible => return Ok(CountBreakdown::empty()),
        Classification::Feasible(tag) => tag,
    };
    let ring_counts = (1..=tag.ring_total())
        .map(|k| ring_count(ratio, k))
        .collect::<Result<Vec<_>, _>>()?;
    let central_circle = tag.case == Case::B;
    let total = ring_counts.iter().sum::<u64>() + u64::from(central_circle);
    Ok(CountBreakdown {
        case: Some(tag),
        ring_counts,
        central_circle,
        total,
    })
}

/// Dimensional form: normalizes to `x = r / R` and defers to [`count_total`].
pub fn count_total_dimensional(
    outer_radius: f64,
    filler_radius: f64,
) -> Result<CountBreakdown, RingMathError> {
    let spec = PackingSpec::new(outer_radius, filler_radius)?;
    count_total(spec.ratio())
}

/// Same result as [`count_total`], computed by filling rings while they fit
/// and then testing the leftover hole for one central circle.
pub fn count_total_iterative(ratio: f64) -> Result<CountBreakdown, RingMathError> {
    check_ratio(ratio)?;
    let mut ring_counts = Vec::new();
    let mut rings = 0u32;
    while residual(ratio, rings + 1) >= ratio - CASE_TOLERANCE {
        rings += 1;
        ring_counts.push(ring_count(ratio, rings)?);
    }
    let hole = 1.0 - 2.0 * f64::from(rings) * ratio;
    let central_circle = hole >= ratio - CASE_TOLERANCE;

    let case = if central_circle {
        Some(CaseTag {
            case: Case::B,
            terminal_index: rings + 1,
        })
    } else if rings == 0 {
        None
    } else if residual(ratio, rings) <= ratio + CASE_TOLERANCE {
        Some(CaseTag {
            case: Case::A,
            terminal_index: rings,
        })
    } else {
        Some(CaseTag {
            case: Case::C,
            terminal_index: rings + 1,
        })
    };
    if case.is_none() {
        return Ok(CountBreakdown::empty());
    }
    let total = ring_counts.iter().sum::<u64>() + u64::from(central_circle);
    Ok(CountBreakdown {
        case,
        ring_counts,
        central_circle,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn feasible(x: f64) -> CaseTag {
        match classify_case(x).unwrap() {
            Classification::Feasible(t) => t,
            Classification::Infeasible => panic!("x = {x} unexpectedly infeasible"),
        }
    }

    #[test]
    fn sector_radius_closed_forms() {
        assert!((sector_inscribed_radius(1.0, 2).unwrap() - 0.5).abs() < 1e-15);
        let three = 3f64.sqrt() / (2.0 + 3f64.sqrt());
        assert!((sector_inscribed_radius(1.0, 3).unwrap() - three).abs() < 1e-15);
        let four = 1.0 / (1.0 + 2f64.sqrt());
        assert!((sector_inscribed_radius(1.0, 4).unwrap() - four).abs() < 1e-15);
        assert!((sector_inscribed_radius(1.0, 6).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((sector_inscribed_radius(4.0, 2).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sector_radius_rejects_single_division() {
        assert_eq!(
            sector_inscribed_radius(1.0, 1),
            Err(RingMathError::TooFewDivisions(1))
        );
        assert!(sector_inscribed_radius(1.0, 0).is_err());
    }

    #[test]
    fn sector_radius_decreases_over_figure_grid() {
        let mut prev = f64::INFINITY;
        for n in 2..=180 {
            let r = sector_inscribed_radius(1.0, n).unwrap();
            assert!(r < prev && r > 0.0 && r <= 0.5);
            prev = r;
        }
        assert!(prev < 0.02);
    }

    #[test]
    fn ring_counts_of_second_worked_example() {
        assert_eq!(ring_count(0.125, 1).unwrap(), 21);
        assert_eq!(ring_count(0.125, 2).unwrap(), 15);
        assert_eq!(ring_count(0.125, 3).unwrap(), 9);
        assert_eq!(ring_count(0.125, 4).unwrap(), 2);
        assert_eq!(ring_count(0.5, 1).unwrap(), 2);
    }

    #[test]
    fn infeasible_ring_is_a_domain_error() {
        assert!(matches!(
            ring_count(0.125, 5),
            Err(RingMathError::InfeasibleRing { index: 5, .. })
        ));
        assert!(matches!(
            ring_count(0.6, 1),
            Err(RingMathError::InfeasibleRing { index: 1, .. })
        ));
        assert_eq!(ring_count(0.1, 0), Err(RingMathError::ZeroRingIndex));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            feasible(0.125),
            CaseTag {
                case: Case::A,
                terminal_index: 4
            }
        );
        assert_eq!(
            feasible(1.0 / 3.0),
            CaseTag {
                case: Case::B,
                terminal_index: 2
            }
        );
        assert_eq!(
            feasible(0.45),
            CaseTag {
                case: Case::C,
                terminal_index: 2
            }
        );
        assert_eq!(
            feasible(1.0),
            CaseTag {
                case: Case::B,
                terminal_index: 1
            }
        );
        assert_eq!(classify_case(1.5).unwrap(), Classification::Infeasible);
        assert!(classify_case(0.0).is_err());
        assert!(classify_case(-0.2).is_err());
        assert!(classify_case(f64::NAN).is_err());
    }

    #[test]
    fn totals_of_worked_examples() {
        let one = count_total(1.0 / 3.0).unwrap();
        assert_eq!(one.ring_counts, vec![6]);
        assert!(one.central_circle);
        assert_eq!(one.total, 7);

        let two = count_total(0.125).unwrap();
        assert_eq!(two.ring_counts, vec![21, 15, 9, 2]);
        assert!(!two.central_circle);
        assert_eq!(two.total, 47);

        let unit = count_total(1.0).unwrap();
        assert!(unit.ring_counts.is_empty());
        assert!(unit.central_circle);
        assert_eq!(unit.total, 1);
    }

    #[test]
    fn literal_first_example_input_gives_five() {
        // 0.334 instead of 1/3: asin(0.334 / 0.666) > pi / 6, and 1 - 3(0.334) < 0.
        let b = count_total(0.334).unwrap();
        assert_eq!(
            b.case,
            Some(CaseTag {
                case: Case::C,
                terminal_index: 2
            })
        );
        assert_eq!(b.ring_counts, vec![5]);
        assert_eq!(b.total, 5);
    }

    #[test]
    fn oversized_filler_is_empty() {
        let b = count_total(2.0).unwrap();
        assert_eq!(b.total, 0);
        assert_eq!(b.case, None);
        assert!(count_total(0.0).is_err());
        assert_eq!(count_total(0.6).unwrap().total, 1);
        assert_eq!(count_total(0.7).unwrap().total, 1);
        assert_eq!(count_total(0.5).unwrap().total, 2);
        assert_eq!(count_total(0.45).unwrap().total, 3);
    }

    #[test]
    fn dimensional_form_matches_normalized() {
        assert_eq!(
            count_total_dimensional(4.8, 0.6).unwrap(),
            count_total(0.125).unwrap()
        );
        assert_eq!(count_total_dimensional(5.0, 5.0).unwrap().total, 1);
        assert!(count_total_dimensional(0.0, 1.0).is_err());
        assert!(count_total_dimensional(1.0, -1.0).is_err());
    }

    #[test]
    fn iterative_examples() {
        assert_eq!(count_total_iterative(1.0 / 3.0).unwrap().total, 7);
        assert_eq!(count_total_iterative(0.125).unwrap().total, 47);
        assert_eq!(count_total_iterative(0.7).unwrap().total, 1);
        assert_eq!(count_total_iterative(2.0).unwrap(), count_total(2.0).unwrap());
    }

    #[test]
    fn sector_tangency_admits_n_circles() {
        for n in 2..=60 {
            let x = sector_inscribed_radius(1.0, n).unwrap();
            assert!(ring_count(x, 1).unwrap() >= u64::from(n), "n = {n}");
        }
    }

    #[test]
    fn spec_ratio_is_exact_quotient() {
        let s = PackingSpec::new(4.8, 0.6).unwrap();
        assert_eq!(s.ratio(), 0.6 / 4.8);
        assert_eq!(PackingSpec::from_ratio(0.3).unwrap().ratio(), 0.3);
        assert!(PackingSpec::new(f64::INFINITY, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn branch_forms_agree(x in 0.01f64..1.2) {
            prop_assert_eq!(count_total(x).unwrap(), count_total_iterative(x).unwrap());
        }

        #[test]
        fn ring_counts_bounded_and_nonincreasing(x in 0.005f64..1.0) {
            let b = count_total(x).unwrap();
            prop_assert!(b.ring_counts.iter().all(|&n| n >= 2));
            prop_assert!(b.ring_counts.windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(
                b.total,
                b.ring_counts.iter().sum::<u64>() + u64::from(b.central_circle)
            );
            prop_assert!(!b.central_circle || b.case.map(|t| t.case) == Some(Case::B));
        }

        #[test]
        fn floor_snap_is_stable_under_tiny_perturbation(x in 0.01f64..0.5, k_raw in 0u32..1000) {
            let k = 1 + k_raw % ((0.5 / x).floor() as u32).max(1);
            prop_assume!(ring_quotient(x - 1e-12, k).is_ok() && ring_quotient(x + 1e-12, k).is_ok());
            let q = ring_quotient(x, k).unwrap();
            for xp in [x - 1e-12, x + 1e-12] {
                let qp = ring_quotient(xp, k).unwrap();
                if ring_count(xp, k).unwrap() != ring_count(x, k).unwrap() {
                    // only allowed when the quotient straddles an integer (after snapping)
                    let shifted = q + FLOOR_SNAP;
                    let gap = (shifted - shifted.round()).abs();
                    prop_assert!(gap <= (qp - q).abs() + 1e-15, "x={} k={} q={} qp={}", x, k, q, qp);
                }
            }
        }
    }
}
