//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ringfill::inverse::{inverse_ratio, DEFAULT_TOLERANCE};
use ringfill::layout::{generate_layout, LayoutOptions, PackingResult};
use ringfill::metrics::{compare, seed_references};
use ringfill::render::{curve_csv, from_json, to_json, to_svg, SvgStyle};
use ringfill::ring_math::{
    count_total, count_total_dimensional, count_total_iterative, sector_inscribed_radius, Case, CaseTag,
    PackingSpec,
};
use ringfill::verify::{verify_layout, GEOMETRIC_TOLERANCE};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn layout(x: f64) -> PackingResult {
    generate_layout(&PackingSpec::from_ratio(x).unwrap(), &LayoutOptions::default()).unwrap()
}

fn verified(res: &PackingResult) -> bool {
    let big = res.spec.outer_radius();
    verify_layout(&res.placements, big, GEOMETRIC_TOLERANCE * big).valid
}

/// Ring-by-ring count without flooring a quotient: the largest `n` with
/// `sin(pi / n) >= x / rho`, found by stepping `n` upward.
fn brute_force_total(x: f64) -> (Vec<u64>, bool) {
    let mut rings = Vec::new();
    let mut k = 1u32;
    loop {
        let rho = 1.0 - (2.0 * f64::from(k) - 1.0) * x;
        if rho < x {
            break;
        }
        let mut n = 2u64;
        while (PI / (n + 1) as f64).sin() >= x / rho {
            n += 1;
        }
        rings.push(n);
        k += 1;
    }
    let hole = 1.0 - 2.0 * rings.len() as f64 * x;
    (rings, hole >= x)
}

fn sector_radii() -> Outcome {
    let expected = [
        (2, 0.5),
        (3, 3f64.sqrt() / (2.0 + 3f64.sqrt())),
        (4, 1.0 / (1.0 + 2f64.sqrt())),
    ];
    for (n, want) in expected {
        let got = sector_inscribed_radius(1.0, n).map_err(|e| e.to_string())?;
        ensure!((got - want).abs() <= 1e-12, "n = {n}: {got} vs {want}");
    }
    ensure!((expected[1].1 - 0.464102).abs() < 1e-6, "n = 3 closed form");
    ensure!((expected[2].1 - 0.414214).abs() < 1e-6, "n = 4 closed form");
    Ok(())
}

fn second_example() -> Outcome {
    for b in [count_total(0.125), count_total_dimensional(4.8, 0.6)] {
        let b = b.map_err(|e| e.to_string())?;
        ensure!(
            b.case
                == Some(CaseTag {
                    case: Case::A,
                    terminal_index: 4
                }),
            "case {:?}",
            b.case
        );
        ensure!(b.ring_counts == [21, 15, 9, 2], "rings {:?}", b.ring_counts);
        ensure!(b.total == 47 && !b.central_circle, "total {}", b.total);
    }
    for spec in [PackingSpec::from_ratio(0.125).unwrap(), PackingSpec::new(4.8, 0.6).unwrap()] {
        let res = generate_layout(&spec, &LayoutOptions::default()).map_err(|e| e.to_string())?;
        ensure!(res.density == 0.734375, "density {}", res.density);
        ensure!(res.placements.len() == 47, "{} placements", res.placements.len());
        ensure!(verified(&res), "verifier rejected R = {}", spec.outer_radius());
        let svg = to_svg(&res, &SvgStyle::default());
        let circles = svg.matches("<circle").count();
        ensure!(circles == 48, "{circles} circle elements");
    }
    Ok(())
}

fn first_example() -> Outcome {
    let b = count_total(1.0 / 3.0).map_err(|e| e.to_string())?;
    ensure!(
        b.case
            == Some(CaseTag {
                case: Case::B,
                terminal_index: 2
            }),
        "case {:?}",
        b.case
    );
    ensure!(b.total == 7 && b.central_circle && b.ring_counts == [6], "{b:?}");
    ensure!(verified(&layout(1.0 / 3.0)), "verifier rejected x = 1/3");

    // as printed: x = 0.334 evaluated strictly
    let literal = count_total(0.334).map_err(|e| e.to_string())?;
    let (oracle_rings, oracle_central) = brute_force_total(0.334);
    let oracle_total = oracle_rings.iter().sum::<u64>() + u64::from(oracle_central);
    ensure!(oracle_total == 5, "brute-force total at 0.334 is {oracle_total}");
    ensure!(literal.total == 5, "total at 0.334 is {}", literal.total);
    ensure!(
        literal.case.map(|t| t.case) == Some(Case::C) && literal.ring_counts == oracle_rings,
        "{literal:?}"
    );
    Ok(())
}

fn gap_reproduction() -> Outcome {
    let g = compare(&layout(0.125), &seed_references()).map_err(|e| e.to_string())?;
    ensure!(g.reference_density == Some(0.787760), "reference {:?}", g.reference_density);
    let gap = g.gap.ok_or("no gap")?;
    ensure!((gap - 0.053385).abs() <= 1e-6, "gap {gap}");
    Ok(())
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    for _ in 0..10_000 {
        let x = rng.gen_range(0.01..=1.2);
        let a = count_total(x).map_err(|e| e.to_string())?;
        let b = count_total_iterative(x).map_err(|e| e.to_string())?;
        ensure!(a == b, "(a) x = {x}: {a:?} vs {b:?}");
    }

    for _ in 0..1_000 {
        let x = rng.gen_range(0.05..=1.2);
        ensure!(verified(&layout(x)), "(b) verifier rejected x = {x}");
    }

    let (hi, lo, steps) = (1.2, 0.01, 10_000);
    let mut prev = 0u64;
    for i in 0..steps {
        let x = hi - (hi - lo) * i as f64 / (steps - 1) as f64;
        let n = count_total(x).map_err(|e| e.to_string())?.total;
        ensure!(n >= prev, "(c) N dropped from {prev} to {n} at x = {x}");
        prev = n;
    }

    for _ in 0..1_000 {
        let x = rng.gen_range(0.03..=1.2);
        let res = layout(x);
        let back = from_json(&to_json(&res)).map_err(|e| format!("(d) x = {x}: {e}"))?;
        ensure!(back == res, "(d) round trip changed x = {x}");
    }
    Ok(())
}

fn inscribed_curve() -> Outcome {
    let csv = curve_csv(180).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    ensure!(lines.next() == Some("n,ratio"), "header");
    let mut prev = f64::INFINITY;
    let mut rows = 0;
    for (line, n) in lines.zip(2u32..) {
        let (n_text, v_text) = line.split_once(',').ok_or("row without comma")?;
        ensure!(n_text.parse::<u32>() == Ok(n), "row {line}");
        let v: f64 = v_text.parse().map_err(|_| format!("row {line}"))?;
        let direct = 1.0 / (1.0 + 1.0 / (PI / f64::from(n)).sin());
        ensure!((v - direct).abs() <= 1e-12, "n = {n}: {v} vs {direct}");
        ensure!(v < prev, "not decreasing at n = {n}");
        if n == 2 {
            ensure!(v == 0.5, "starts at {v}");
        }
        prev = v;
        rows += 1;
    }
    ensure!(rows == 179, "{rows} rows");
    Ok(())
}

fn inverse_search() -> Outcome {
    for (target, want) in [(7u64, 1.0 / 3.0), (2, 0.5)] {
        let r = inverse_ratio(target, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
        ensure!((r.ratio - want).abs() <= 1e-9, "N = {target}: {}", r.ratio);
        let res = layout(r.ratio);
        ensure!(res.breakdown.total >= target, "N = {target}: count {}", res.breakdown.total);
        ensure!(verified(&res), "N = {target}: verifier rejected x = {}", r.ratio);
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 sector-inscribed radius closed forms", sector_radii, None),
        ("2 x = 0.125 / R = 4.8, r = 0.6: 21+15+9+2 = 47", second_example, Some(Duration::from_secs(1))),
        ("3 x = 1/3 gives 7; literal 0.334 gives 5", first_example, None),
        ("4 gap to best known at N = 47", gap_reproduction, None),
        ("5 property suite (a)-(d)", property_suite, Some(Duration::from_secs(30))),
        ("6 inscribed-radius curve to n = 180", inscribed_curve, None),
        ("7 inverse search for N = 7 and N = 2", inverse_search, Some(Duration::from_secs(1))),
    ];

    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, budget) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:?}, budget {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS  criterion {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
