//! Command line interface for certificates and enlargements.
//!
//! Subcommands read JSON documents (bodies, spaces, certificates,
//! frames, groups) from files or stdin ("-"), print human-readable
//! reports by default and machine-readable JSON under `--json`, and
//! exit 0 on pass/found, 1 on fail/not-found, and 2 on input errors.
//! Commands that emit certificates print them as JSON documents on
//! stdout, so they pipe into the commands that consume certificates.

mod doc;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use doc::{certificate_to_string, coords_jval, render_json, JVal};
use enlarge_core::body::Body;
use enlarge_core::box_recovery::{box_recovery_check, SeparationMode};
use enlarge_core::certificate::{verify_certificate, Certificate, VerificationReport};
use enlarge_core::disc_strip::dichotomy_check;
use enlarge_core::euclidean::{
    monte_carlo_average_support, orbit_zonotope, smallness_check, SmallnessVerdict,
};
use enlarge_core::geometry::{ContainmentCheck, ContainmentMode};
use enlarge_core::group::OrthogonalGroupAction;
use enlarge_core::linalg::{norm2, null_space, Matrix};
use enlarge_core::minvol::min_volume_search;
use enlarge_core::prism::prismify;
use enlarge_core::render::render_svg;
use enlarge_core::search::{default_pool, find_certificate, SearchStatus};
use enlarge_core::space::NormedSpace;
use enlarge_core::tol::TolerancePolicy;

/// Comma-separated coordinates, e.g. "1,0" or "0.5,-0.5,0.25".
#[derive(Clone, Debug)]
struct Coords(Vec<f64>);

impl std::str::FromStr for Coords {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: std::result::Result<Vec<f64>, _> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect();
        match parts {
            Ok(v) if !v.is_empty() => Ok(Coords(v)),
            _ => Err(format!("expected comma-separated numbers, got \"{s}\"")),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "enlarge",
    version,
    about = "Certificates of sufficient enlargements in finite-dimensional normed spaces"
)]
struct Cli {
    /// Dual-feasibility tolerance for certificate checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_feas: f64,
    /// Reconstruction-identity tolerance for certificate checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_eq: f64,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit machine-readable JSON instead of text reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a certificate document (dual norms, identity, containments).
    Verify {
        /// Certificate file, or - for stdin.
        #[arg(default_value = "-")]
        cert: String,
    },
    /// Search for a certificate of a target enlargement.
    Find {
        /// Space document (norm shorthand, ball, or body).
        #[arg(long)]
        space: String,
        /// Target enlargement body document.
        #[arg(long)]
        target: String,
        /// Functional pool size (default picked per space).
        #[arg(long = "pool-budget")]
        pool_budget: Option<usize>,
    },
    /// Build the orbit certificate of a seed vector under a group.
    Orbit {
        /// d3..d8, octahedral, icosahedral, or a matrices.json file.
        #[arg(long)]
        group: String,
        /// Unit seed vector, comma-separated.
        #[arg(long)]
        y: Coords,
    },
    /// Classify a Euclidean zonotope certificate by generator length sum.
    SmallCheck {
        /// Certificate file, or - for stdin.
        #[arg(default_value = "-")]
        cert: String,
    },
    /// Merge the slab pairs of a certificate into a prism certificate.
    Prismify {
        /// Certificate file, or - for stdin.
        #[arg(default_value = "-")]
        cert: String,
        /// Slab functional, comma-separated.
        #[arg(long)]
        h: Coords,
        /// Vector with h(x1) = 1, comma-separated.
        #[arg(long)]
        x1: Coords,
    },
    /// Monte Carlo rotation-averaged support of a body in a direction.
    Average {
        /// Body document.
        #[arg(long)]
        body: String,
        /// Direction, comma-separated.
        #[arg(long)]
        dir: Coords,
        /// Number of random rotations.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Multi-start search for the smallest-volume certificate zonotope.
    Minvol {
        /// Space document.
        #[arg(long)]
        space: String,
        /// Number of random restarts.
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        /// Generators per restart (default: twice the dimension).
        #[arg(long)]
        gens: Option<usize>,
        /// Functional pool size (default picked per space).
        #[arg(long = "pool-budget")]
        pool_budget: Option<usize>,
    },
    /// Check the parallelepiped-recovery bound for a frame and certificate.
    Theorem1 {
        /// Space document.
        #[arg(long)]
        space: String,
        /// Certificate file, or - for stdin.
        #[arg(long)]
        cert: String,
        /// Frame document with "functionals" and optional "points".
        #[arg(long)]
        frame: String,
    },
    /// Worked examples.
    Example {
        #[command(subcommand)]
        which: ExampleCommand,
    },
    /// Render a planar body to an SVG file.
    Render {
        /// Body document, or - for stdin.
        #[arg(default_value = "-")]
        body: String,
        /// Output SVG path.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExampleCommand {
    /// Norming dichotomy on the disc-with-strip space near the slit.
    Theorem2 {
        /// Angle parameter in (0, pi/4); omit to sweep the study values.
        #[arg(long)]
        eps: Option<f64>,
    },
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early, like any filter.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Exit code for an error: 1 when a mathematical hypothesis failed on
/// well-formed input, 2 for input and processing errors.
fn classify(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<enlarge_core::Error>() {
        if matches!(core, enlarge_core::Error::Hypothesis(_)) {
            return 1;
        }
    }
    2
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load_value(path: &str) -> Result<serde_json::Value> {
    let text = read_input(path)?;
    Ok(doc::parse_text(&text).with_context(|| format!("parsing {path}"))?)
}

fn load_body(path: &str) -> Result<Body> {
    let v = load_value(path)?;
    Ok(doc::body_from_value(&v, "").with_context(|| format!("reading body from {path}"))?)
}

fn load_space(path: &str) -> Result<NormedSpace> {
    let v = load_value(path)?;
    Ok(doc::space_from_value(&v, "").with_context(|| format!("reading space from {path}"))?)
}

fn load_certificate(path: &str) -> Result<Certificate> {
    let v = load_value(path)?;
    Ok(doc::certificate_from_value(&v)
        .with_context(|| format!("reading certificate from {path}"))?)
}

fn containment_jval(c: &ContainmentCheck) -> JVal {
    JVal::Obj(vec![
        ("holds", JVal::Bool(c.holds)),
        (
            "mode",
            JVal::Str(
                match c.mode {
                    ContainmentMode::Exact => "exact",
                    ContainmentMode::Sampled => "sampled",
                }
                .into(),
            ),
        ),
        ("margin", JVal::Num(c.margin)),
        (
            "witness",
            match &c.witness {
                Some(w) => coords_jval(w),
                None => JVal::Null,
            },
        ),
    ])
}

fn verification_jval(r: &VerificationReport) -> JVal {
    JVal::Obj(vec![
        ("valid", JVal::Bool(r.valid)),
        ("worst_dual_norm", JVal::Num(r.worst_dual_norm)),
        ("worst_dual_index", JVal::Int(r.worst_dual_index as i64)),
        ("reconstruction_residual", JVal::Num(r.reconstruction_residual)),
        ("zonotope_in_enlargement", containment_jval(&r.zonotope_in_enlargement)),
        ("ball_in_zonotope", containment_jval(&r.ball_in_zonotope)),
    ])
}

fn print_containment(label: &str, c: &ContainmentCheck) {
    let mode = match c.mode {
        ContainmentMode::Exact => "exact",
        ContainmentMode::Sampled => "sampled",
    };
    println!(
        "{label}: {} (margin {:.3e}, {mode})",
        if c.holds { "holds" } else { "FAILS" },
        c.margin
    );
}

fn cmd_verify(path: &str, pol: &TolerancePolicy, json: bool) -> Result<u8> {
    let cert = load_certificate(path)?;
    let report = verify_certificate(&cert, pol)?;
    if json {
        print!("{}", render_json(&verification_jval(&report)));
    } else {
        println!("valid: {}", report.valid);
        println!(
            "worst dual norm: {:.12} (functional {})",
            report.worst_dual_norm, report.worst_dual_index
        );
        println!("reconstruction residual: {:.3e}", report.reconstruction_residual);
        print_containment("zonotope in enlargement", &report.zonotope_in_enlargement);
        print_containment("unit ball in zonotope", &report.ball_in_zonotope);
    }
    Ok(if report.valid { 0 } else { 1 })
}

/// Pool size when none is requested: enough for every dual vertex of the
/// small polytopal balls, a generous circle for round ones.
fn auto_budget(space: &NormedSpace) -> usize {
    let n = space.dim();
    match space.unit_ball().simplified() {
        Body::EuclideanBall { .. } => {
            if n == 2 {
                16
            } else {
                16 * n
            }
        }
        Body::Intersection(..) => 16 * n.max(2),
        _ => 1 << (2 * n).min(12),
    }
}

fn cmd_find(
    space_path: &str,
    target_path: &str,
    pool_budget: Option<usize>,
    pol: &TolerancePolicy,
    json: bool,
) -> Result<u8> {
    let space = load_space(space_path)?;
    let target = load_body(target_path)?;
    let budget = pool_budget.unwrap_or_else(|| auto_budget(&space));
    let pool = default_pool(&space, budget, pol)?;
    let result = find_certificate(&space, &target, &pool, None, pol)?;
    let d = &result.diagnostics;
    let diag = JVal::Obj(vec![
        ("pool_size", JVal::Int(d.pool_size as i64)),
        ("pairs_considered", JVal::Int(d.pairs_considered as i64)),
        ("lp_columns", JVal::Int(d.lp_columns as i64)),
        ("lp_rows", JVal::Int(d.lp_rows as i64)),
        ("sampled_directions", JVal::Int(d.sampled_directions as i64)),
        ("refinements", JVal::Int(d.refinements as i64)),
        ("pool_exhaustive", JVal::Bool(d.pool_exhaustive)),
        ("message", JVal::Str(d.message.clone())),
    ]);
    match result.status {
        SearchStatus::Found => {
            let cert = result.certificate.expect("found result carries a certificate");
            if json {
                print!(
                    "{}",
                    render_json(&JVal::Obj(vec![
                        ("status", JVal::Str("found".into())),
                        ("certificate", doc::certificate_to_jval(&cert)),
                        ("diagnostics", diag),
                    ]))
                );
            } else {
                eprintln!("{}", d.message);
                print!("{}", certificate_to_string(&cert));
            }
            Ok(0)
        }
        SearchStatus::NotFoundWithinBudget => {
            if json {
                print!(
                    "{}",
                    render_json(&JVal::Obj(vec![
                        ("status", JVal::Str("not-found-within-budget".into())),
                        ("certificate", JVal::Null),
                        ("diagnostics", diag),
                    ]))
                );
            } else {
                eprintln!("not found within budget: {}", d.message);
            }
            Ok(1)
        }
    }
}

fn cmd_orbit(group: &str, y: &[f64], pol: &TolerancePolicy, json: bool) -> Result<u8> {
    let action = if group.ends_with(".json") || group == "-" {
        let v = load_value(group)?;
        doc::group_from_value(&v, pol).with_context(|| format!("reading group from {group}"))?
    } else {
        OrthogonalGroupAction::named(group, pol)?
    };
    let cert = orbit_zonotope(&action, y, false, pol)?;
    if json {
        print!(
            "{}",
            render_json(&JVal::Obj(vec![
                ("group_order", JVal::Int(action.order() as i64)),
                ("certificate", doc::certificate_to_jval(&cert)),
            ]))
        );
    } else {
        eprintln!(
            "orbit of {} elements, {} pairs",
            action.order(),
            cert.pairs().len()
        );
        print!("{}", certificate_to_string(&cert));
    }
    Ok(0)
}

fn cmd_small_check(path: &str, pol: &TolerancePolicy, json: bool) -> Result<u8> {
    let cert = load_certificate(path)?;
    let report = smallness_check(&cert, pol)?;
    let verdict = match report.verdict {
        SmallnessVerdict::Small => "small",
        SmallnessVerdict::NotSmall => "not-small",
        SmallnessVerdict::Invalid => "invalid",
    };
    if json {
        print!(
            "{}",
            render_json(&JVal::Obj(vec![
                ("verdict", JVal::Str(verdict.into())),
                ("generator_norm_sum", JVal::Num(report.generator_norm_sum)),
                ("dimension_floor", JVal::Int(cert.space().dim() as i64)),
                ("segment_average_factor", JVal::Num(report.lambda_n)),
                (
                    "reverification",
                    match &report.reverification {
                        Some(r) => verification_jval(r),
                        None => JVal::Null,
                    },
                ),
            ]))
        );
    } else {
        println!("verdict: {verdict}");
        println!("sum of generator lengths: {:.12}", report.generator_norm_sum);
        println!("dimension floor: {}", cert.space().dim());
        println!("segment average factor: {:.12}", report.lambda_n);
        if let Some(r) = &report.reverification {
            println!("re-verification valid: {}", r.valid);
        }
    }
    Ok(if report.verdict == SmallnessVerdict::Invalid {
        1
    } else {
        0
    })
}

/// Completes x1 to a slab basis: x1 first, then an orthonormal basis of
/// the kernel of h.
fn slab_basis(h: &[f64], x1: &[f64]) -> Result<Vec<Vec<f64>>> {
    let row = Matrix::from_rows(std::slice::from_ref(&h.to_vec()))?;
    let kernel = null_space(&row, 1e-12);
    let mut basis = vec![x1.to_vec()];
    basis.extend(kernel);
    Ok(basis)
}

fn cmd_prismify(
    path: &str,
    h: &[f64],
    x1: &[f64],
    pol: &TolerancePolicy,
    json: bool,
) -> Result<u8> {
    let cert = load_certificate(path)?;
    let basis = slab_basis(h, x1)?;
    let (merged, report) = prismify(&cert, h, &basis, pol)?;
    if json {
        print!(
            "{}",
            render_json(&JVal::Obj(vec![
                (
                    "decomposition",
                    JVal::Obj(vec![
                        ("b1", coords_jval(&report.decomposition.b1)),
                        ("b2", coords_jval(&report.decomposition.b2)),
                        (
                            "residual_pairs",
                            JVal::InlineArr(
                                report
                                    .decomposition
                                    .residual
                                    .iter()
                                    .map(|&i| JVal::Int(i as i64))
                                    .collect(),
                            ),
                        ),
                    ]),
                ),
                ("merged_in_original", containment_jval(&report.merged_in_original)),
                ("certificate", doc::certificate_to_jval(&merged)),
            ]))
        );
    } else {
        eprintln!(
            "merged {} pairs into {} (residual pairs kept: {})",
            cert.pairs().len(),
            merged.pairs().len(),
            report.decomposition.residual.len()
        );
        print_containment_stderr("merged zonotope in original", &report.merged_in_original);
        print!("{}", certificate_to_string(&merged));
    }
    Ok(0)
}

fn print_containment_stderr(label: &str, c: &ContainmentCheck) {
    let mode = match c.mode {
        ContainmentMode::Exact => "exact",
        ContainmentMode::Sampled => "sampled",
    };
    eprintln!(
        "{label}: {} (margin {:.3e}, {mode})",
        if c.holds { "holds" } else { "FAILS" },
        c.margin
    );
}

fn cmd_average(
    body_path: &str,
    dir: &[f64],
    trials: usize,
    seed: u64,
    json: bool,
) -> Result<u8> {
    let body = load_body(body_path)?;
    let est = monte_carlo_average_support(&body, dir, trials, seed)?;
    if json {
        print!(
            "{}",
            render_json(&JVal::Obj(vec![
                ("mean", JVal::Num(est.mean)),
                ("std_error", JVal::Num(est.std_error)),
                ("trials", JVal::Int(est.trials as i64)),
            ]))
        );
    } else {
        println!("mean: {:.12}", est.mean);
        println!("standard error: {:.3e}", est.std_error);
        println!("trials: {}", est.trials);
    }
    Ok(0)
}

fn cmd_minvol(
    space_path: &str,
    restarts: usize,
    gens: Option<usize>,
    pool_budget: Option<usize>,
    seed: u64,
    pol: &TolerancePolicy,
    json: bool,
) -> Result<u8> {
    let space = load_space(space_path)?;
    let n = space.dim();
    let budget = pool_budget.unwrap_or_else(|| auto_budget(&space));
    let pool = default_pool(&space, budget, pol)?;
    let n_gens = gens.unwrap_or(2 * n).min(pool.len());
    let report = match min_volume_search(&space, &pool, n_gens, restarts, seed, pol) {
        Ok(r) => r,
        Err(enlarge_core::Error::Numerical(msg)) => {
            eprintln!("not found: {msg}");
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    if json {
        print!(
            "{}",
            render_json(&JVal::Obj(vec![
                ("volume", JVal::Num(report.volume)),
                (
                    "lower_bound",
                    match report.lower_bound {
                        Some(b) => JVal::Num(b),
                        None => JVal::Null,
                    },
                ),
                ("restarts", JVal::Int(report.restarts as i64)),
                ("degenerate_subsets", JVal::Int(report.degenerate_subsets as i64)),
                (
                    "history",
                    JVal::Arr(
                        report
                            .history
                            .iter()
                            .map(|h| {
                                JVal::Obj(vec![
                                    ("restart", JVal::Int(h.restart as i64)),
                                    ("volume", JVal::Num(h.volume)),
                                ])
                            })
                            .collect(),
                    ),
                ),
                ("certificate", doc::certificate_to_jval(&report.certificate)),
            ]))
        );
    } else {
        println!("best volume: {:.12}", report.volume);
        if let Some(b) = report.lower_bound {
            println!("theoretical floor: {b:.12}");
        }
        println!(
            "restarts: {} ({} degenerate subsets skipped)",
            report.restarts, report.degenerate_subsets
        );
        for h in &report.history {
            println!("  restart {:>4}: volume {:.12}", h.restart, h.volume);
        }
        println!(
            "best certificate: {} generators",
            report.certificate.pairs().len()
        );
    }
    Ok(0)
}

/// Points norming each functional, derived from the unit ball when the
/// frame document does not carry them.
fn norming_points(space: &NormedSpace, functionals: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let ball = space.unit_ball().simplified();
    let mut points = Vec::with_capacity(functionals.len());
    for f in functionals {
        let x = match &ball {
            Body::EuclideanBall { radius, .. } => {
                let len = norm2(f);
                if len <= 0.0 {
                    anyhow::bail!("cannot derive a norming point for a zero functional");
                }
                f.iter().map(|v| v * radius / len).collect::<Vec<f64>>()
            }
            _ => {
                let verts = enlarge_core::geometry::vertices(&ball)
                    .context("deriving norming points needs a polytopal or round ball; \
                              provide \"points\" in the frame document")?;
                let mut best = verts[0].clone();
                let mut best_v = f64::NEG_INFINITY;
                for v in &verts {
                    let val = f.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
                    if val > best_v {
                        best_v = val;
                        best = v.clone();
                    }
                }
                best
            }
        };
        points.push(x);
    }
    Ok(points)
}

fn cmd_theorem1(
    space_path: &str,
    cert_path: &str,
    frame_path: &str,
    pol: &TolerancePolicy,
    json: bool,
) -> Result<u8> {
    let space = load_space(space_path)?;
    let cert = load_certificate(cert_path)?;
    let frame_val = load_value(frame_path)?;
    let (functionals, points) = doc::frame_from_value(&frame_val)
        .with_context(|| format!("reading frame from {frame_path}"))?;
    let points = match points {
        Some(p) => p,
        None => norming_points(&space, &functionals)?,
    };
    let report = box_recovery_check(&space, &functionals, &points, &cert, pol)?;
    let mode = match report.separation_mode {
        SeparationMode::ClosedForm => "closed-form",
        SeparationMode::SignPatternLp => "sign-pattern-lp",
        SeparationMode::Sampled => "sampled",
    };
    if json {
        print!(
            "{}",
            render_json(&JVal::Obj(vec![
                ("excess", JVal::Num(report.excess)),
                ("separation", JVal::Num(report.separation)),
                ("separation_mode", JVal::Str(mode.into())),
                ("recovered_scale", JVal::Num(report.recovered_scale)),
                ("holds", JVal::Bool(report.holds)),
                ("conclusive", JVal::Bool(report.conclusive)),
                (
                    "witness",
                    match &report.witness {
                        Some(w) => coords_jval(w),
                        None => JVal::Null,
                    },
                ),
            ]))
        );
    } else {
        println!("zonotope excess over the box (c1): {:.12}", report.excess);
        println!("separation constant (c2): {:.12} ({mode})", report.separation);
        println!("recovered box scale (c3): {:.12}", report.recovered_scale);
        println!("holds: {}", report.holds);
        println!("conclusive: {}", report.conclusive);
        if let Some(w) = &report.witness {
            println!("violating vertex: {w:?}");
        }
    }
    Ok(if report.holds && report.conclusive { 0 } else { 1 })
}

fn cmd_theorem2(eps: Option<f64>, pol: &TolerancePolicy, json: bool) -> Result<u8> {
    let pi = std::f64::consts::PI;
    let values = match eps {
        Some(e) => vec![e],
        None => vec![pi / 16.0, pi / 8.0, pi / 6.0, pi / 5.0],
    };
    let mut all_hold = true;
    let mut items = Vec::new();
    for &e in &values {
        let report = dichotomy_check(e, pol)?;
        all_hold &= report.holds;
        if json {
            items.push(JVal::Obj(vec![
                ("eps", JVal::Num(report.eps)),
                ("bound", JVal::Num(report.bound)),
                ("worst_value", JVal::Num(report.worst_value)),
                ("margin", JVal::Num(report.margin)),
                ("holds", JVal::Bool(report.holds)),
                ("worst_functional", coords_jval(&report.worst_functional)),
            ]));
        } else {
            println!(
                "eps={:.6}  bound={:.6}  worst={:.6}  margin={:+.6}  holds={}",
                report.eps, report.bound, report.worst_value, report.margin, report.holds
            );
            if !report.holds {
                println!(
                    "  worst functional: [{:.6}, {:.6}]",
                    report.worst_functional[0], report.worst_functional[1]
                );
            }
        }
    }
    if json {
        print!("{}", render_json(&JVal::Arr(items)));
    }
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_render(body_path: &str, out: &PathBuf) -> Result<u8> {
    let body = load_body(body_path)?;
    let svg = render_svg(&body)?;
    std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {}", out.display());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let pol = TolerancePolicy {
        eps_feas: cli.eps_feas,
        eps_eq: cli.eps_eq,
        ..TolerancePolicy::default()
    };
    match &cli.command {
        Command::Verify { cert } => cmd_verify(cert, &pol, cli.json),
        Command::Find {
            space,
            target,
            pool_budget,
        } => cmd_find(space, target, *pool_budget, &pol, cli.json),
        Command::Orbit { group, y } => cmd_orbit(group, &y.0, &pol, cli.json),
        Command::SmallCheck { cert } => cmd_small_check(cert, &pol, cli.json),
        Command::Prismify { cert, h, x1 } => cmd_prismify(cert, &h.0, &x1.0, &pol, cli.json),
        Command::Average { body, dir, trials } => {
            cmd_average(body, &dir.0, *trials, cli.seed, cli.json)
        }
        Command::Minvol {
            space,
            restarts,
            gens,
            pool_budget,
        } => cmd_minvol(space, *restarts, *gens, *pool_budget, cli.seed, &pol, cli.json),
        Command::Theorem1 { space, cert, frame } => {
            cmd_theorem1(space, cert, frame, &pol, cli.json)
        }
        Command::Example { which } => match which {
            ExampleCommand::Theorem2 { eps } => cmd_theorem2(*eps, &pol, cli.json),
        },
        Command::Render { body, out } => cmd_render(body, out),
    }
}
