//! JSON layout documents, SVG drawings and the inscribed-radius curve.
//!
//! JSON numbers are written with 17 significant digits so every `f64`
//! survives a round trip bit for bit. Keys always appear in the same order:
//!
//! ```text
//! outer_radius, filler_radius, ratio, case, rings, placements, total, density
//! ```
//!
//! `case` is `"a"`, `"b"`, `"c"`, or `null` when the filler does not fit.
//! Each placement's `source` is `{"kind": "ring", "ring": k, "slot": j}` or
//! `{"kind": "central"}`.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::layout::{density_of, PackingResult, Placement, Source};
use crate::ring_math::{self, Case, CaseTag, CountBreakdown, PackingSpec, RingMathError, RingPlan};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid layout document at `{path}`: {message}")]
    Json { path: String, message: String },
    #[error("inconsistent layout document: {0}")]
    Validation(String),
    #[error("canvas must be at least 64 pixels, got {0}")]
    CanvasTooSmall(u32),
    #[error(transparent)]
    RingMath(#[from] RingMathError),
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn source_json(source: &Source) -> String {
    match source {
        Source::Ring { ring, slot } => format!(r#"{{"kind": "ring", "ring": {ring}, "slot": {slot}}}"#),
        Source::Central => r#"{"kind": "central"}"#.to_string(),
    }
}

/// Serializes a packing to the layout document format.
pub fn to_json(result: &PackingResult) -> String {
    let spec = &result.spec;
    let case = match result.breakdown.case {
        Some(tag) => format!("\"{}\"", tag.case.as_str()),
        None => "null".to_string(),
    };
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"outer_radius\": {},", num(spec.outer_radius()));
    let _ = writeln!(out, "  \"filler_radius\": {},", num(spec.filler_radius()));
    let _ = writeln!(out, "  \"ratio\": {},", num(spec.ratio()));
    let _ = writeln!(out, "  \"case\": {case},");

    let rings: Vec<String> = result
        .rings
        .iter()
        .map(|r| {
            format!(
                r#"    {{"index": {}, "center_circle_radius": {}, "count": {}, "phase": {}}}"#,
                r.index,
                num(r.center_circle_radius),
                r.count,
                num(r.phase)
            )
        })
        .collect();
    write_array(&mut out, "rings", &rings);

    let placements: Vec<String> = result
        .placements
        .iter()
        .map(|p| {
            format!(
                r#"    {{"x": {}, "y": {}, "radius": {}, "source": {}}}"#,
                num(p.center_x),
                num(p.center_y),
                num(p.radius),
                source_json(&p.source)
            )
        })
        .collect();
    write_array(&mut out, "placements", &placements);

    let _ = writeln!(out, "  \"total\": {},", result.breakdown.total);
    let _ = writeln!(out, "  \"density\": {}", num(result.density));
    out.push_str("}\n");
    out
}

fn write_array(out: &mut String, key: &str, items: &[String]) {
    if items.is_empty() {
        let _ = writeln!(out, "  \"{key}\": [],");
        return;
    }
    let _ = writeln!(out, "  \"{key}\": [");
    let _ = writeln!(out, "{}", items.join(",\n"));
    out.push_str("  ],\n");
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    outer_radius: f64,
    filler_radius: f64,
    ratio: f64,
    case: Option<RawCase>,
    rings: Vec<RawRing>,
    placements: Vec<RawPlacement>,
    total: u64,
    density: f64,
}

#[derive(Deserialize, Clone, Copy)]
enum RawCase {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    index: u32,
    center_circle_radius: f64,
    count: u64,
    phase: f64,
}

#[derive(Deserialize)]
struct RawPlacement {
    x: f64,
    y: f64,
    radius: f64,
    #[serde(default)]
    source: Option<RawSource>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawSource {
    Ring { ring: u32, slot: u64 },
    Central,
}

impl RawPlacement {
    fn into_placement(self) -> Placement {
        Placement {
            center_x: self.x,
            center_y: self.y,
            radius: self.radius,
            source: match self.source {
                Some(RawSource::Ring { ring, slot }) => Source::Ring { ring, slot },
                Some(RawSource::Central) | None => Source::Central,
            },
        }
    }
}

fn parse<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T, RenderError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| RenderError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Parses a layout document and re-checks every structural invariant.
pub fn from_json(text: &str) -> Result<PackingResult, RenderError> {
    let raw: RawDocument = parse(text)?;
    let bad = |msg: String| Err(RenderError::Validation(msg));

    let spec = PackingSpec::new(raw.outer_radius, raw.filler_radius)?;
    if raw.ratio.to_bits() != spec.ratio().to_bits() {
        return bad(format!(
            "ratio {} is not filler_radius / outer_radius = {}",
            raw.ratio,
            spec.ratio()
        ));
    }

    let ring_total = raw.rings.len() as u32;
    let case = match raw.case {
        None => None,
        Some(RawCase::A) if ring_total == 0 => return bad("case a needs at least one ring".into()),
        Some(RawCase::C) if ring_total == 0 => return bad("case c needs at least one ring".into()),
        Some(RawCase::A) => Some(CaseTag {
            case: Case::A,
            terminal_index: ring_total,
        }),
        Some(c) => Some(CaseTag {
            case: if matches!(c, RawCase::B) { Case::B } else { Case::C },
            terminal_index: ring_total + 1,
        }),
    };
    let central_circle = matches!(case, Some(CaseTag { case: Case::B, .. }));

    let mut rings = Vec::with_capacity(raw.rings.len());
    let slack = 1e-12 * spec.outer_radius();
    for (i, r) in raw.rings.iter().enumerate() {
        let expected_index = i as u32 + 1;
        if r.index != expected_index {
            return bad(format!("ring at position {i} has index {}, expected {expected_index}", r.index));
        }
        let rho = spec.outer_radius() - (2.0 * f64::from(r.index) - 1.0) * spec.filler_radius();
        if (r.center_circle_radius - rho).abs() > slack {
            return bad(format!(
                "ring {} center_circle_radius {} differs from R - (2k - 1) r = {rho}",
                r.index, r.center_circle_radius
            ));
        }
        if !r.phase.is_finite() {
            return bad(format!("ring {} phase is not finite", r.index));
        }
        rings.push(RingPlan {
            index: r.index,
            center_circle_radius: r.center_circle_radius,
            count: r.count,
            phase: r.phase,
        });
    }

    let ring_counts: Vec<u64> = rings.iter().map(|r| r.count).collect();
    let sum = ring_counts.iter().sum::<u64>() + u64::from(central_circle);
    if raw.total != sum {
        return bad(format!("total {} but rings and central circle add up to {sum}", raw.total));
    }
    let breakdown = CountBreakdown {
        case,
        ring_counts,
        central_circle,
        total: raw.total,
    };
    let expected = ring_math::count_total(spec.ratio())?;
    if breakdown != expected {
        return bad(format!(
            "ring counts {:?} (case {:?}) do not match the construction for ratio {}: {:?} (case {:?})",
            breakdown.ring_counts,
            breakdown.case,
            spec.ratio(),
            expected.ring_counts,
            expected.case
        ));
    }

    if raw.placements.len() as u64 != raw.total {
        return bad(format!(
            "{} placements listed but total is {}",
            raw.placements.len(),
            raw.total
        ));
    }
    let placements: Vec<Placement> = raw.placements.into_iter().map(RawPlacement::into_placement).collect();
    if let Some(i) = placements.iter().position(|p| p.radius != spec.filler_radius()) {
        return bad(format!("placement {i} radius differs from filler_radius"));
    }
    if let Some(i) = placements.iter().position(|p| !p.center_x.is_finite() || !p.center_y.is_finite()) {
        return bad(format!("placement {i} has a non-finite center"));
    }

    let density = density_of(raw.total, spec.ratio());
    if (raw.density - density).abs() > 1e-12 {
        return bad(format!("density {} differs from N x^2 = {density}", raw.density));
    }

    Ok(PackingResult {
        spec,
        breakdown,
        rings,
        placements,
        density: raw.density,
    })
}

/// Reads only `outer_radius` and `placements` from a layout document, so
/// layouts produced elsewhere can be checked. Missing `source` fields read
/// as central.
pub fn placements_from_json(text: &str) -> Result<(f64, Vec<Placement>), RenderError> {
    #[derive(Deserialize)]
    struct Loose {
        outer_radius: f64,
        placements: Vec<RawPlacement>,
    }
    let loose: Loose = parse(text)?;
    if !(loose.outer_radius.is_finite() && loose.outer_radius > 0.0) {
        return Err(RenderError::Validation(format!(
            "outer_radius {} must be positive",
            loose.outer_radius
        )));
    }
    Ok((
        loose.outer_radius,
        loose.placements.into_iter().map(RawPlacement::into_placement).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    canvas_size: u32,
    pub container_stroke: String,
    pub filler_stroke: String,
    pub filler_fill: String,
    /// Dashed center circles of every ring.
    pub show_ring_guides: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            canvas_size: 512,
            container_stroke: "#000000".into(),
            filler_stroke: "#1f4e79".into(),
            filler_fill: "#9dc3e6".into(),
            show_ring_guides: false,
        }
    }
}

impl SvgStyle {
    pub const MIN_CANVAS: u32 = 64;

    pub fn with_canvas_size(mut self, pixels: u32) -> Result<Self, RenderError> {
        if pixels < Self::MIN_CANVAS {
            return Err(RenderError::CanvasTooSmall(pixels));
        }
        self.canvas_size = pixels;
        Ok(self)
    }

    pub fn canvas_size(&self) -> u32 {
        self.canvas_size
    }
}

/// Draws the container, every filler and optionally the ring guides.
/// The container is centered with a 5% margin; y points up.
pub fn to_svg(result: &PackingResult, style: &SvgStyle) -> String {
    let size = f64::from(style.canvas_size);
    let mid = size / 2.0;
    let scale = 0.9 * size / (2.0 * result.spec.outer_radius());
    let px = |x: f64| mid + x * scale;
    let py = |y: f64| mid - y * scale;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        style.canvas_size
    );
    let _ = writeln!(
        out,
        r#"  <circle cx="{mid:.4}" cy="{mid:.4}" r="{:.4}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
        result.spec.outer_radius() * scale,
        style.container_stroke
    );
    if style.show_ring_guides {
        for ring in &result.rings {
            let _ = writeln!(
                out,
                r##"  <circle cx="{mid:.4}" cy="{mid:.4}" r="{:.4}" fill="none" stroke="#808080" stroke-width="0.75" stroke-dasharray="2 3"/>"##,
                ring.center_circle_radius * scale
            );
        }
    }
    for p in &result.placements {
        let _ = writeln!(
            out,
            r#"  <circle cx="{:.4}" cy="{:.4}" r="{:.4}" fill="{}" stroke="{}" stroke-width="1"/>"#,
            px(p.center_x),
            py(p.center_y),
            p.radius * scale,
            style.filler_fill,
            style.filler_stroke
        );
    }
    out.push_str("</svg>\n");
    out
}

/// `n,ratio` rows for `n = 2..=max_divisions`: the largest circle in one of
/// `n` equal sectors of a unit circle.
pub fn curve_csv(max_divisions: u32) -> Result<String, RingMathError> {
    if max_divisions < 2 {
        return Err(RingMathError::TooFewDivisions(max_divisions));
    }
    let mut out = String::from("n,ratio\n");
    for n in 2..=max_divisions {
        let _ = writeln!(out, "{n},{}", ring_math::sector_inscribed_radius(1.0, n)?);
    }
    Ok(out)
}
