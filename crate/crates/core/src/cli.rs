//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when `verify` finds violations, 2 on bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::inverse::{self, SearchPath};
use crate::layout::{generate_layout, LayoutOptions, PackingResult, PhasePolicy};
use crate::metrics::{self, GapReport, ReferenceRecord};
use crate::render::{self, SvgStyle};
use crate::ring_math::{self, CountBreakdown, PackingSpec};
use crate::verify::{self, ViolationKind, GEOMETRIC_TOLERANCE};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Concentric-ring filling of congruent circles in a circle.
#[derive(Debug, Parser)]
#[command(name = "ringfill", version)]
pub struct Cli {
    /// Structured JSON output instead of prose.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Case, per-ring counts, total and density.
    Count(GeometryArgs),
    /// Write the layout document (JSON) with every circle center.
    Layout {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, value_enum, default_value_t = Phase::AllZero)]
        phase: Phase,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Draw the packing as SVG.
    Render {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, value_enum, default_value_t = Phase::AllZero)]
        phase: Phase,
        /// Canvas width and height in pixels (at least 64).
        #[arg(long, default_value_t = 512)]
        canvas: u32,
        /// Draw the dashed center circle of every ring.
        #[arg(long)]
        guides: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a layout document for overlaps and escapes.
    Verify {
        layout: PathBuf,
        /// Absolute slack; defaults to 1e-9 times the container radius.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Largest circle in one of n equal sectors, for n = 2..=max-n (CSV).
    Curve {
        #[arg(long, default_value_t = 180)]
        max_n: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Density gap to the best known packing with the same count.
    Compare {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Reference CSV (`count,best_ratio,best_density`); bundled seed table if omitted.
        #[arg(long)]
        references: Option<PathBuf>,
    },
    /// Gap report over a grid of ratios (CSV).
    Sweep {
        /// Explicit comma-separated ratios.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "steps"])]
        ratios: Option<Vec<f64>>,
        #[arg(long, requires_all = ["to", "steps"])]
        from: Option<f64>,
        #[arg(long, requires_all = ["from", "steps"])]
        to: Option<f64>,
        #[arg(long, requires_all = ["from", "to"])]
        steps: Option<usize>,
        #[arg(long)]
        references: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Largest ratio whose packing holds at least N circles.
    Inverse {
        count: u64,
        /// Relative bisection tolerance.
        #[arg(long, default_value_t = inverse::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

/// Either `--radius-ratio x` or both `--outer R --filler r`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = true)]
pub struct GeometryArgs {
    /// Filler radius over container radius.
    #[arg(long, value_name = "X", conflicts_with_all = ["outer", "filler"])]
    pub radius_ratio: Option<f64>,
    /// Container radius R.
    #[arg(long, value_name = "R", requires = "filler")]
    pub outer: Option<f64>,
    /// Filler radius r.
    #[arg(long, value_name = "R_FILL", requires = "outer")]
    pub filler: Option<f64>,
}

impl GeometryArgs {
    pub fn spec(&self) -> Result<PackingSpec> {
        let spec = match (self.radius_ratio, self.outer, self.filler) {
            (Some(x), None, None) => PackingSpec::from_ratio(x)?,
            (None, Some(big), Some(small)) => PackingSpec::new(big, small)?,
            _ => bail!("give either --radius-ratio or both --outer and --filler"),
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phase {
    AllZero,
    Alternate,
}

impl Phase {
    fn options(self) -> LayoutOptions {
        LayoutOptions {
            phase_policy: match self {
                Phase::AllZero => PhasePolicy::AllZero,
                Phase::Alternate => PhasePolicy::AlternateHalfStep,
            },
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).context("writing output"),
    }
}

fn references(path: Option<&Path>) -> Result<Vec<ReferenceRecord>> {
    match path {
        None => Ok(metrics::seed_references()),
        Some(p) => {
            let file = fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
            metrics::load_references(file).with_context(|| format!("reading {}", p.display()))
        }
    }
}

fn layout_for(geometry: &GeometryArgs, phase: Phase) -> Result<PackingResult> {
    Ok(generate_layout(&geometry.spec()?, &phase.options())?)
}

fn breakdown_line(b: &CountBreakdown, density: f64) -> String {
    let case = b.case.map_or("none", |t| t.case.as_str());
    let rings = if b.ring_counts.is_empty() {
        "none".to_string()
    } else {
        b.ring_counts.iter().map(u64::to_string).collect::<Vec<_>>().join("+")
    };
    let central = if b.central_circle { ", central 1" } else { "" };
    format!("case {case}, rings {rings}{central}, total {}, density {density}", b.total)
}

fn breakdown_json(b: &CountBreakdown, ratio: f64, density: f64) -> serde_json::Value {
    json!({
        "ratio": ratio,
        "case": b.case.map(|t| t.case.as_str()),
        "terminal_index": b.case.map(|t| t.terminal_index),
        "rings": b.ring_counts,
        "central": b.central_circle,
        "total": b.total,
        "density": density,
    })
}

fn gap_json(g: &GapReport) -> serde_json::Value {
    json!({
        "ratio": g.ratio,
        "count": g.analytical_count,
        "density": g.analytical_density,
        "reference_density": g.reference_density,
        "gap": g.gap,
    })
}

/// Runs one invocation, writing to `out` unless an output file is given.
/// Returns the exit code; errors map to [`EXIT_INPUT`].
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Count(geometry) => {
            let spec = geometry.spec()?;
            let b = ring_math::count_total(spec.ratio())?;
            let density = crate::layout::density_of(b.total, spec.ratio());
            let text = if cli.json {
                format!("{}\n", breakdown_json(&b, spec.ratio(), density))
            } else {
                format!("{}\n", breakdown_line(&b, density))
            };
            emit(out, None, &text)?;
        }
        Command::Layout { geometry, phase, out: path } => {
            let res = layout_for(geometry, *phase)?;
            emit(out, path.as_deref(), &render::to_json(&res))?;
        }
        Command::Render {
            geometry,
            phase,
            canvas,
            guides,
            out: path,
        } => {
            let res = layout_for(geometry, *phase)?;
            let mut style = SvgStyle::default().with_canvas_size(*canvas)?;
            style.show_ring_guides = *guides;
            emit(out, path.as_deref(), &render::to_svg(&res, &style))?;
        }
        Command::Verify { layout, tolerance } => {
            let text = fs::read_to_string(layout).with_context(|| format!("reading {}", layout.display()))?;
            let (outer, placements) = render::placements_from_json(&text)?;
            let tol = tolerance.unwrap_or(GEOMETRIC_TOLERANCE * outer);
            if !(tol.is_finite() && tol >= 0.0) {
                bail!("tolerance must be a non-negative number, got {tol}");
            }
            let report = verify::verify_layout(&placements, outer, tol);
            let text = if cli.json {
                let violations: Vec<_> = report
                    .violations
                    .iter()
                    .map(|v| match v.kind {
                        ViolationKind::Overlap(i, j) => {
                            json!({"kind": "overlap", "i": i, "j": j, "magnitude": v.magnitude})
                        }
                        ViolationKind::Escape(i) => json!({"kind": "escape", "i": i, "magnitude": v.magnitude}),
                    })
                    .collect();
                format!(
                    "{}\n",
                    json!({"valid": report.valid, "circles": placements.len(), "violations": violations})
                )
            } else if report.valid {
                format!("valid: {} circles, no overlaps or escapes\n", placements.len())
            } else {
                let mut s = format!("invalid: {} violation(s)\n", report.violations.len());
                for v in &report.violations {
                    match v.kind {
                        ViolationKind::Overlap(i, j) => {
                            s.push_str(&format!("  overlap {i} {j} by {}\n", v.magnitude));
                        }
                        ViolationKind::Escape(i) => s.push_str(&format!("  escape {i} by {}\n", v.magnitude)),
                    }
                }
                s
            };
            emit(out, None, &text)?;
            if !report.valid {
                return Ok(EXIT_VIOLATIONS);
            }
        }
        Command::Curve { max_n, out: path } => {
            emit(out, path.as_deref(), &render::curve_csv(*max_n)?)?;
        }
        Command::Compare { geometry, references: refs } => {
            let refs = references(refs.as_deref())?;
            let res = layout_for(geometry, Phase::AllZero)?;
            let g = metrics::compare(&res, &refs)?;
            let text = if cli.json {
                format!("{}\n", gap_json(&g))
            } else {
                let reference = g
                    .reference_density
                    .map_or("no reference".to_string(), |r| format!("reference {r}"));
                let gap = g.gap.map_or(String::new(), |gap| format!(", gap {gap}"));
                format!(
                    "count {}, density {}, {reference}{gap}\n",
                    g.analytical_count, g.analytical_density
                )
            };
            emit(out, None, &text)?;
        }
        Command::Sweep {
            ratios,
            from,
            to,
            steps,
            references: refs,
            out: path,
        } => {
            let grid = match (ratios, from, to, steps) {
                (Some(r), ..) => r.clone(),
                (None, Some(a), Some(b), Some(n)) => linear_grid(*a, *b, *n)?,
                _ => bail!("give --ratios or --from/--to/--steps"),
            };
            if grid.is_empty() {
                bail!("ratio grid is empty");
            }
            let refs = references(refs.as_deref())?;
            let reports = metrics::sweep(&grid, &refs);
            for failure in reports.iter().filter_map(|r| r.as_ref().err()) {
                eprintln!("ratio {}: {}", failure.ratio, failure.error);
            }
            let text = if cli.json {
                let rows: Vec<_> = reports
                    .iter()
                    .map(|r| match r {
                        Ok(g) => gap_json(g),
                        Err(f) => json!({"ratio": f.ratio, "error": f.error.to_string()}),
                    })
                    .collect();
                format!("{}\n", serde_json::Value::Array(rows))
            } else {
                let mut buf = Vec::new();
                metrics::write_gap_csv(&mut buf, &reports)?;
                String::from_utf8(buf)?
            };
            emit(out, path.as_deref(), &text)?;
        }
        Command::Inverse { count, tolerance } => {
            let r = inverse::inverse_ratio(*count, *tolerance)?;
            let path = match r.path {
                SearchPath::Bisection => "bisection",
                SearchPath::GridScan => "grid-scan",
            };
            let text = if cli.json {
                format!(
                    "{}\n",
                    json!({"target": count, "ratio": r.ratio, "total": r.total, "path": path, "evaluations": r.evaluations})
                )
            } else {
                format!(
                    "ratio {} (total {}, {path}, {} evaluations)\n",
                    r.ratio, r.total, r.evaluations
                )
            };
            emit(out, None, &text)?;
        }
    }
    Ok(EXIT_OK)
}

fn linear_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => bail!("--steps must be at least 1"),
        1 => Ok(vec![from]),
        n => Ok((0..n)
            .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}
