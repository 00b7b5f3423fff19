//! Command-line driver: one subcommand per experiment, JSON or CSV reports
//! on stdout, diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 verification failure (an asserted property did
//! not hold), 2 usage error, 3 budget or ambiguity error.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use latstab::bhw;
use latstab::enumeration;
use latstab::error::Error;
use latstab::geometry::{self, ConvexBody};
use latstab::lp;
use latstab::minima;
use latstab::report::{to_csv, to_json, Report, RunManifest};
use latstab::stability;
use latstab::BoxBody;

#[derive(Parser)]
#[command(
    name = "latstab",
    version,
    about = "Lattice point enumerators, successive minima, and stability experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report encoding on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Membership tolerance around the unit gauge level set.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tau: f64,
    /// Cap on scanned integer candidates per enumeration.
    #[arg(long, global = true, default_value_t = enumeration::DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for every randomized step; reports are reproducible for a
    /// fixed seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BodyKind {
    /// Axis-aligned box.
    Box,
    /// L_p ball (needs --p).
    Lp,
    /// Rotated box (needs --theta in d=2, or --eps-target for any d).
    RotatedBox,
}

#[derive(Args, Debug)]
struct BodyArgs {
    /// Comma-separated semi-axes, e.g. 1.5,0.5.
    #[arg(long)]
    alphas: String,
    #[arg(long, value_enum, default_value_t = BodyKind::Box)]
    body: BodyKind,
    /// Exponent for --body lp; accepts "inf".
    #[arg(long)]
    p: Option<String>,
    /// Planar rotation angle for --body rotated-box (d = 2 only).
    #[arg(long)]
    theta: Option<f64>,
    /// Target ||R - I|| for a seeded rotation (--body rotated-box, any d).
    #[arg(long)]
    eps_target: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count lattice points of a body.
    Count {
        #[command(flatten)]
        body: BodyArgs,
        /// Split the scan into this many first-axis slabs (parallel when > 1).
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// List lattice points of a body in lexicographic order.
    List {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Successive minima with integer witnesses.
    Minima {
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Both sides of the count bound G <= prod floor(2/lambda_i + 1).
    /// Exits 1 if the inequality fails.
    Check {
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Boundary gap of a box: distance to the nearest external lattice
    /// point.
    Gap {
        #[arg(long)]
        alphas: String,
    },
    /// Explicit rotation-stability radius of a box.
    Radius {
        #[arg(long)]
        alphas: String,
    },
    /// Sweep seeded rotations over an amplitude grid.
    SweepRot {
        #[arg(long)]
        alphas: String,
        /// Amplitude grid lo:hi:n (inclusive, linearly spaced).
        #[arg(long)]
        eps_grid: String,
        #[arg(long, default_value_t = 10)]
        samples: u32,
        /// Evaluate grid cells in parallel when > 1; the output is
        /// identical either way.
        #[arg(long, default_value_t = 1)]
        shards: usize,
    },
    /// Sample rotations strictly inside the radius and verify the
    /// guarantee. Exits 1 on any violation.
    AuditRadius {
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value_t = 100)]
        samples: u32,
    },
    /// Sandwich bounds on the minima of a perturbed box. Exits 1 if a
    /// bound fails.
    Lipschitz {
        #[arg(long)]
        alphas: String,
        /// Target ||R - I|| of a seeded rotation factor.
        #[arg(long, default_value_t = 0.0)]
        eps_target: f64,
        /// Uniform scaling factor applied after the rotation.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// L_p deformation thresholds (coarse and exact).
    LpThreshold {
        #[arg(long)]
        alphas: String,
    },
    /// Compare the lattice sets of the L_p ball and its box.
    LpVerify {
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        p: String,
    },
    /// Full pipeline on both the L_p ball and its box.
    LpCompare {
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        p: String,
    },
}

fn parse_alphas(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad semi-axis {tok:?} in --alphas")))
        })
        .collect()
}

fn parse_p(s: &str) -> Result<f64, Error> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("bad exponent {s:?} for --p")))
}

/// Parses lo:hi:n into an inclusive linearly spaced grid.
fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "--eps-grid wants lo:hi:n, got {s:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid start {:?}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid end {:?}", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad grid count {:?}", parts[2])))?;
    if n == 0 {
        return Err(Error::InvalidInput("--eps-grid needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

fn build_body(args: &BodyArgs, seed: u64) -> Result<ConvexBody, Error> {
    let alphas = parse_alphas(&args.alphas)?;
    match args.body {
        BodyKind::Box => ConvexBody::box_body(alphas),
        BodyKind::Lp => {
            let p = args
                .p
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("--body lp needs --p <real|inf>".into()))?;
            ConvexBody::lp_ball(parse_p(p)?, alphas)
        }
        BodyKind::RotatedBox => {
            let cube = ConvexBody::box_body(alphas)?;
            let rotation = match (args.theta, args.eps_target) {
                (Some(theta), None) => {
                    if cube.dim() != 2 {
                        return Err(Error::InvalidInput(
                            "--theta is a planar angle; use --eps-target for d != 2".into(),
                        ));
                    }
                    geometry::rotation_2d(theta)
                }
                (None, Some(eps)) => geometry::sample_rotation(cube.dim(), eps, seed)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "--body rotated-box needs exactly one of --theta / --eps-target".into(),
                    ))
                }
            };
            geometry::transform_body(&rotation, &cube)
        }
    }
}

fn body_parameters(args: &BodyArgs) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("alphas".into(), json!(args.alphas));
    let body_name = match args.body {
        BodyKind::Box => "box",
        BodyKind::Lp => "lp",
        BodyKind::RotatedBox => "rotated-box",
    };
    m.insert("body".into(), json!(body_name));
    if let Some(p) = &args.p {
        m.insert("p".into(), json!(p));
    }
    if let Some(theta) = args.theta {
        m.insert("theta".into(), json!(theta));
    }
    if let Some(eps) = args.eps_target {
        m.insert("eps_target".into(), json!(eps));
    }
    m
}

fn emit<T: Serialize>(format: Format, manifest: RunManifest, result: T) {
    match format {
        Format::Json => println!("{}", to_json(&Report { manifest, result })),
        Format::Csv => print!("{}", to_csv(&manifest, &result)),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. }
        | Error::AmbiguousBoundary { .. }
        | Error::ThresholdMargin { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let tau = cli.tau;
    let budget = cli.budget;
    let seed = cli.seed;
    let format = cli.format;
    match &cli.command {
        Command::Count { body, shards } => {
            let b = build_body(body, seed)?;
            let mut params = body_parameters(body);
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            params.insert("shards".into(), json!(shards));
            let result = enumeration::count_lattice_points_opts(&b, tau, budget, *shards)?;
            if result.ambiguous > 0 {
                eprintln!(
                    "warning: {} boundary-ambiguous point(s) counted as members",
                    result.ambiguous
                );
            }
            emit(format, RunManifest::new("count", params, seed), result);
            Ok(0)
        }
        Command::List { body, shards } => {
            let b = build_body(body, seed)?;
            let mut params = body_parameters(body);
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            params.insert("shards".into(), json!(shards));
            let result = enumeration::list_lattice_points_opts(&b, tau, budget, *shards)?;
            emit(format, RunManifest::new("list", params, seed), result);
            Ok(0)
        }
        Command::Minima { body } => {
            let b = build_body(body, seed)?;
            let mut params = body_parameters(body);
            params.insert("budget".into(), json!(budget));
            let result = minima::successive_minima_with_budget(&b, budget)?;
            emit(format, RunManifest::new("minima", params, seed), result);
            Ok(0)
        }
        Command::Check { body } => {
            let b = build_body(body, seed)?;
            let mut params = body_parameters(body);
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            let result = bhw::check_bhw_with_budget(&b, tau, budget)?;
            if result.ambiguous > 0 {
                eprintln!(
                    "warning: {} boundary-ambiguous point(s) in the count",
                    result.ambiguous
                );
            }
            if !result.floor_near_ties.is_empty() {
                eprintln!(
                    "warning: floored factors {:?} sit within 1e-9 of an integer",
                    result.floor_near_ties
                );
            }
            let holds = result.holds;
            emit(format, RunManifest::new("check", params, seed), result);
            Ok(if holds { 0 } else { 1 })
        }
        Command::Gap { alphas } => {
            let bx = BoxBody::new(parse_alphas(alphas)?)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("budget".into(), json!(budget));
            #[derive(Serialize)]
            struct GapReport {
                delta: f64,
                closed_form: f64,
            }
            let result = GapReport {
                delta: enumeration::boundary_gap_box_with_budget(&bx, budget)?,
                closed_form: enumeration::boundary_gap_closed_form(&bx),
            };
            emit(format, RunManifest::new("gap", params, seed), result);
            Ok(0)
        }
        Command::Radius { alphas } => {
            let bx = BoxBody::new(parse_alphas(alphas)?)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("budget".into(), json!(budget));
            let result = stability::stability_radius_with_budget(&bx, budget)?;
            emit(format, RunManifest::new("radius", params, seed), result);
            Ok(0)
        }
        Command::SweepRot {
            alphas,
            eps_grid,
            samples,
            shards,
        } => {
            let bx = BoxBody::new(parse_alphas(alphas)?)?;
            let grid = parse_grid(eps_grid)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("eps_grid".into(), json!(eps_grid));
            params.insert("samples".into(), json!(samples));
            params.insert("shards".into(), json!(shards));
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            let records =
                stability::rotation_sweep(&bx, &grid, *samples, seed, tau, budget, *shards > 1)?;
            let summary = stability::summarize_drop_audit(&records);
            eprintln!(
                "drop audit: {}/{} rotated records reached the 2^d - 1 drop (min {}, max {})",
                summary.claim_held, summary.rotated_records, summary.min_drop, summary.max_drop
            );
            let flagged = records.iter().filter(|r| r.ambiguous > 0).count();
            if flagged > 0 {
                eprintln!("warning: {flagged} record(s) carry boundary-ambiguous points");
            }
            emit(format, RunManifest::new("sweep-rot", params, seed), records);
            Ok(0)
        }
        Command::AuditRadius { alphas, samples } => {
            let bx = BoxBody::new(parse_alphas(alphas)?)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("samples".into(), json!(samples));
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            let result = stability::audit_radius_guarantee(&bx, *samples, seed, tau, budget)?;
            if result.margin_excluded > 0 {
                eprintln!(
                    "note: {} sample(s) fell inside the radius margin band and were excluded",
                    result.margin_excluded
                );
            }
            let violations = result.violations;
            emit(
                format,
                RunManifest::new("audit-radius", params, seed),
                result,
            );
            Ok(if violations == 0 { 0 } else { 1 })
        }
        Command::Lipschitz {
            alphas,
            eps_target,
            scale,
        } => {
            let b = ConvexBody::box_body(parse_alphas(alphas)?)?;
            let rotation = geometry::sample_rotation(b.dim(), *eps_target, seed)?;
            let t = rotation.scale(*scale);
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("eps_target".into(), json!(eps_target));
            params.insert("scale".into(), json!(scale));
            params.insert("budget".into(), json!(budget));
            let result = minima::check_lipschitz_sandwich_with_budget(&b, &t, budget)?;
            if !result.all_first_order_ok {
                eprintln!(
                    "note: the first-order bounds fail on some index (recorded, not asserted)"
                );
            }
            let ok = result.all_ok;
            emit(format, RunManifest::new("lipschitz", params, seed), result);
            Ok(if ok { 0 } else { 1 })
        }
        Command::LpThreshold { alphas } => {
            let a = parse_alphas(alphas)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            let result = lp::lp_threshold_report(&a)?;
            emit(
                format,
                RunManifest::new("lp-threshold", params, seed),
                result,
            );
            Ok(0)
        }
        Command::LpVerify { alphas, p } => {
            let a = parse_alphas(alphas)?;
            let pv = parse_p(p)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("p".into(), json!(p));
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            let result = lp::verify_lp_hull_stability_with_budget(&a, pv, tau, budget)?;
            if matches!(result.verdict, lp::HullVerdict::SkippedIntegralAlpha) {
                eprintln!(
                    "note: an integral semi-axis puts the worst-case point on no finite-p sphere; \
                     comparison skipped"
                );
            }
            emit(format, RunManifest::new("lp-verify", params, seed), result);
            Ok(0)
        }
        Command::LpCompare { alphas, p } => {
            let a = parse_alphas(alphas)?;
            let pv = parse_p(p)?;
            let mut params = BTreeMap::new();
            params.insert("alphas".into(), json!(alphas));
            params.insert("p".into(), json!(p));
            params.insert("tau".into(), json!(tau));
            params.insert("budget".into(), json!(budget));
            let result = lp::lp_bhw_comparison_with_budget(&a, pv, tau, budget)?;
            emit(format, RunManifest::new("lp-compare", params, seed), result);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
