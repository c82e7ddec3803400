//! Filling congruent circles into a circle with concentric rings.
//!
//! The container of radius `R` is divided into concentric circles of radius
//! `R - (2k - 1) r`; ring `k` takes as many fillers of radius `r` as fit
//! around its circle, and a single central filler is added when the hole
//! left in the middle allows it.
//!
//! - [`ring_math`]: closed-form counts and the three termination cases
//! - [`layout`]: explicit circle centers and density
//! - [`verify`]: independent overlap/containment checker
//! - [`metrics`]: comparison with best-known packings
//! - [`render`]: JSON layout documents, SVG, the inscribed-radius curve
//! - [`inverse`]: largest ratio reaching a target count
//! - [`cli`]: the `ringfill` command

pub mod cli;
pub mod inverse;
pub mod layout;
pub mod metrics;
pub mod render;
pub mod ring_math;
pub mod verify;

pub use layout::{generate_layout, LayoutOptions, PackingResult, PhasePolicy, Placement, Source};
pub use ring_math::{count_total, Case, CaseTag, CountBreakdown, PackingSpec, RingPlan};
