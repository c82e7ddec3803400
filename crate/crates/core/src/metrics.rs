//! Density accounting against best-known packings.

use std::io::{Read, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::layout::{density_of, PackingResult};
use crate::ring_math::{self, RingMathError};

/// Reference table shipped with the crate.
pub const SEED_REFERENCES: &str = include_str!("../data/references.csv");

const HEADER: [&str; 3] = ["count", "best_ratio", "best_density"];

/// Allowed mismatch between `count * ratio^2` and the stated density, on top
/// of the rounding implied by the number of decimals each value was given with.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-6;

/// How far below zero a gap may fall before it is treated as an error
/// rather than rounding in the reference data.
pub const NEGATIVE_GAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },
    #[error("reference header must be `count,best_ratio,best_density`, found `{0}`")]
    Header(String),
    #[error(
        "analytical density {analytical} for N = {count} exceeds the best known {reference}; \
         the reference data or the count is wrong"
    )]
    NegativeGap {
        count: u64,
        analytical: f64,
        reference: f64,
    },
    #[error(transparent)]
    RingMath(#[from] RingMathError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRecord {
    pub count: u64,
    /// Largest known filler radius for a unit container, if tabulated.
    pub best_ratio: Option<f64>,
    pub best_density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub ratio: f64,
    pub analytical_count: u64,
    pub analytical_density: f64,
    pub reference_density: Option<f64>,
    /// `reference - analytical`, never negative.
    pub gap: Option<f64>,
}

/// A sweep point that could not be evaluated.
#[derive(Debug)]
pub struct SweepFailure {
    pub ratio: f64,
    pub error: MetricsError,
}

fn decimal_half_unit(text: &str) -> f64 {
    if text.contains(['e', 'E']) {
        return 0.0;
    }
    let decimals = text.split_once('.').map_or(0, |(_, frac)| frac.len());
    0.5 * 10f64.powi(-(decimals as i32))
}

/// Parses and validates a reference table. Records come back sorted by count.
pub fn load_references<R: Read>(source: R) -> Result<Vec<ReferenceRecord>, MetricsError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let mut records: Vec<(u64, ReferenceRecord)> = Vec::new();
    let headers = reader.headers()?.clone();
    // nothing but comments
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(MetricsError::Header(headers.iter().collect::<Vec<_>>().join(",")));
    }

    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let parse_err = |message: String| MetricsError::Parse { line, message };
        let invalid = |message: String| MetricsError::Validation { line, message };
        if row.len() != 3 {
            return Err(parse_err(format!("expected 3 fields, found {}", row.len())));
        }
        let count: u64 = row[0]
            .parse()
            .map_err(|_| parse_err(format!("count `{}` is not a non-negative integer", &row[0])))?;
        let best_ratio = if row[1].is_empty() {
            None
        } else {
            Some(
                row[1]
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("best_ratio `{}` is not a number", &row[1])))?,
            )
        };
        let best_density: f64 = row[2]
            .parse()
            .map_err(|_| parse_err(format!("best_density `{}` is not a number", &row[2])))?;

        if count == 0 {
            return Err(invalid("count must be at least 1".into()));
        }
        if !(best_density > 0.0 && best_density <= 1.0) {
            return Err(invalid(format!("best_density {best_density} is outside (0, 1]")));
        }
        if let Some(ratio) = best_ratio {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(invalid(format!("best_ratio {ratio} is outside (0, 1]")));
            }
            let implied = count as f64 * ratio * ratio;
            let slack = CONSISTENCY_TOLERANCE
                + 2.0 * count as f64 * ratio * decimal_half_unit(&row[1])
                + decimal_half_unit(&row[2]);
            if (implied - best_density).abs() > slack {
                return Err(invalid(format!(
                    "count * best_ratio^2 = {implied} disagrees with best_density {best_density}"
                )));
            }
        }
        if let Some((first, _)) = records.iter().find(|(_, r)| r.count == count) {
            return Err(invalid(format!("duplicate count {count} (first seen on line {first})")));
        }
        records.push((
            line,
            ReferenceRecord {
                count,
                best_ratio,
                best_density,
            },
        ));
    }

    let mut out: Vec<_> = records.into_iter().map(|(_, r)| r).collect();
    out.sort_by_key(|r| r.count);
    Ok(out)
}

pub fn seed_references() -> Vec<ReferenceRecord> {
    load_references(SEED_REFERENCES.as_bytes()).expect("bundled reference table is valid")
}

fn lookup(references: &[ReferenceRecord], count: u64) -> Option<&ReferenceRecord> {
    references
        .binary_search_by_key(&count, |r| r.count)
        .ok()
        .map(|i| &references[i])
        .or_else(|| references.iter().find(|r| r.count == count))
}

fn gap_report(ratio: f64, count: u64, density: f64, references: &[ReferenceRecord]) -> Result<GapReport, MetricsError> {
    let reference_density = lookup(references, count).map(|r| r.best_density);
    let gap = match reference_density {
        None => None,
        Some(reference) => {
            let gap = reference - density;
            if gap < -NEGATIVE_GAP_TOLERANCE {
                return Err(MetricsError::NegativeGap {
                    count,
                    analytical: density,
                    reference,
                });
            }
            Some(gap.max(0.0))
        }
    };
    Ok(GapReport {
        ratio,
        analytical_count: count,
        analytical_density: density,
        reference_density,
        gap,
    })
}

/// Compares a packing's density with the best known one for the same count.
/// Fails only when the packing would beat the reference.
pub fn compare(result: &PackingResult, references: &[ReferenceRecord]) -> Result<GapReport, MetricsError> {
    gap_report(result.spec.ratio(), result.breakdown.total, result.density, references)
}

/// One report per ratio, in input order. Points that fail are returned as
/// failures; the sweep itself never aborts.
pub fn sweep(ratios: &[f64], references: &[ReferenceRecord]) -> Vec<Result<GapReport, SweepFailure>> {
    ratios
        .par_iter()
        .map(|&ratio| {
            let report = ring_math::count_total(ratio)
                .map_err(MetricsError::from)
                .and_then(|b| gap_report(ratio, b.total, density_of(b.total, ratio), references));
            report.map_err(|error| SweepFailure { ratio, error })
        })
        .collect()
}

/// Writes `ratio,count,density,reference_density,gap`; absent values and
/// failed points leave empty cells.
pub fn write_gap_csv<W: Write>(out: W, reports: &[Result<GapReport, SweepFailure>]) -> Result<(), MetricsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["ratio", "count", "density", "reference_density", "gap"])?;
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for report in reports {
        match report {
            Ok(r) => w.write_record([
                r.ratio.to_string(),
                r.analytical_count.to_string(),
                r.analytical_density.to_string(),
                opt(r.reference_density),
                opt(r.gap),
            ])?,
            Err(f) => w.write_record([f.ratio.to_string(), String::new(), String::new(), String::new(), String::new()])?,
        }
    }
    w.flush().map_err(|e| MetricsError::Csv(e.into()))?;
    Ok(())
}
