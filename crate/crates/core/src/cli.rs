//! Command-line front end for the `slag` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calibration::{parse_complex, Calibration, ProfileCurve};
use crate::error::{Error, Result};
use crate::monge_ampere::{det_report, ScalarProfile};
use crate::quadric::{
    block_generators, embed, moment_check, verify_special_lagrangian, volume_ratio, Potential,
    SphereTangent,
};
use crate::registry::{load_catalog, ActionCatalog};
use crate::tracer::{trace, verify_curve, TraceOptions};

#[derive(Debug, Parser)]
#[command(
    name = "slag",
    version,
    about = "Special Lagrangian profile curves for Hermann actions"
)]
struct Cli {
    /// Extra registry file merged over the built-in catalog.
    #[arg(long, global = true, env = "SLAG_REGISTRY")]
    registry: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 42)]
    rng_seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Browse the action catalog.
    #[command(
        long_about = "Browse the action catalog: restricted roots in simple-root \
        coordinates with their (m_v, m_h) multiplicity splits."
    )]
    Actions {
        #[command(subcommand)]
        what: Option<ActionsCmd>,
    },
    /// Dump the expanded integrand or its primitive.
    #[command(
        long_about = "Dump F = e^{iθ} Π sin^{m_v}(β·τ) Π cos^{m_h}(β·τ) or its \
        iterated primitive F̂ as a list of exponential terms."
    )]
    Expsum {
        #[command(subcommand)]
        what: ExpsumCmd,
    },
    /// Trace a level curve of Im F̂ for a rank-one action.
    #[command(
        long_about = "Trace a level curve of Im F̂ by integrating τ′ = conj(F(τ)) with \
        RK4 and Newton projection. Every traced curve solves Im(F(τ) τ′) = 0."
    )]
    Trace(TraceArgs),
    /// Verify a stored curve against Im(F(τ) Π τ′_i) = 0.
    #[command(
        long_about = "Evaluate the residual Im(F(τ) Π τ′_i), the level drift of Im F̂ \
        and, optionally, the mixed-partial identity ∂^r F̂(τ(s))/∂s_1⋯∂s_r = F Π τ′_i."
    )]
    Verify(VerifyArgs),
    /// Monge-Ampère determinant report for f′ = (a ln y + b)^{1/r}.
    #[command(
        long_about = "Compare det(2 x_i x_j f″ + f′ δ_ij) with the rank-one update \
        f′^{r−1}(f′ + 2 f″ |x|²), with 2 f″ f′^{r−1} (|x|²+1) and with the constant 2a/r."
    )]
    Ma(MaArgs),
    /// Geometric checks on the complex quadric.
    #[command(
        long_about = "Embed traced curves into Σ z_k² = 1 and check ω|_L = 0, the \
        constancy of arg Ω along L, the moment level μ = 0 on normal umbrellas and the \
        ratio ω^n / Ω∧Ω̄."
    )]
    Quadric(QuadricArgs),
}

#[derive(Debug, Subcommand)]
enum ActionsCmd {
    /// Names with rank and family.
    List,
    /// Roots and metadata of one action.
    Show { name: String },
    /// The whole catalog as registry JSON.
    Dump,
    /// Entries whose stated dimension differs from the root count.
    Check,
}

#[derive(Debug, Subcommand)]
enum ExpsumCmd {
    Dump {
        /// Action name, as listed by `actions list`.
        #[arg(long)]
        action: String,
        /// Calibration phase θ.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        /// Dump F̂ instead of F.
        #[arg(long)]
        primitive: bool,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TraceArgs {
    /// Action name, as listed by `actions list`.
    #[arg(long)]
    action: String,
    /// Calibration phase θ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Starting point as `re,im`.
    #[arg(long, allow_negative_numbers = true, value_parser = complex_arg)]
    seed: C64,
    /// Arc-length step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Maximum number of steps.
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Newton projection threshold on |Im F̂ − level|.
    #[arg(long, default_value_t = 1e-12)]
    correction_tol: f64,
    /// Stop when |F| falls below this.
    #[arg(long, default_value_t = 1e-9)]
    stop_speed: f64,
    /// Integrate conj(F) without normalizing to unit speed.
    #[arg(long)]
    raw_speed: bool,
    /// Integrate the negated field.
    #[arg(long)]
    reverse: bool,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Action name, as listed by `actions list`.
    #[arg(long)]
    action: String,
    /// Defaults to the phase recorded in the curve file.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Curve CSV.
    #[arg(long)]
    curve: PathBuf,
    /// Also run the mixed-partial check with this stencil step.
    #[arg(long)]
    mixed_h: Option<f64>,
}

#[derive(Debug, Args)]
struct MaArgs {
    /// Number of variables r.
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Coefficient a.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Coefficient b.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Value f(1).
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    /// Number of random grid points in [−2, 2]^r.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// JSON output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QuadricArgs {
    /// Sphere dimension n.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Split p of the action SO(p)×SO(n+1−p).
    #[arg(long, default_value_t = 1)]
    p_split: usize,
    /// Phases to trace, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,1.5707963267948966",
        allow_negative_numbers = true
    )]
    thetas: Vec<f64>,
    /// Starting point of every trace as `re,im`.
    #[arg(long, default_value = "0.8,0.1", allow_negative_numbers = true, value_parser = complex_arg)]
    seed: C64,
    /// Arc-length step.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Maximum number of steps per trace.
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Curve samples used for the geometric checks.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Random base points for the moment and volume-ratio checks.
    #[arg(long, default_value_t = 32)]
    points: usize,
    /// Profile coefficient a.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Profile coefficient b.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Profile value f(1).
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    /// JSON output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn complex_arg(text: &str) -> std::result::Result<C64, String> {
    parse_complex(text).map_err(|_| format!("expected `re,im`, got `{text}`"))
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code: 0 on success, 1 on domain or validation errors, 2 on usage errors.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let catalog = || load_catalog(cli.registry.as_deref());
    match &cli.command {
        Command::Actions { what } => actions(
            &catalog()?,
            what.as_ref().unwrap_or(&ActionsCmd::List),
            cli.json,
            out,
        ),
        Command::Expsum { what } => {
            let ExpsumCmd::Dump {
                action,
                theta,
                primitive,
                out: path,
            } = what;
            let cal = Calibration::from_action(catalog()?.lookup(action)?, *theta)?;
            let poly = if *primitive {
                cal.primitive()
            } else {
                cal.integrand()
            };
            let text = serde_json::to_string_pretty(&poly.to_dump())?;
            emit(out, path.as_deref(), &text)
        }
        Command::Trace(args) => run_trace(&catalog()?, args, cli.json, out),
        Command::Verify(args) => run_verify(&catalog()?, args, cli.json, out),
        Command::Ma(args) => run_ma(args, cli.rng_seed, cli.json, out),
        Command::Quadric(args) => run_quadric(args, cli.rng_seed, cli.json, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e)),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| Error::io("<stdout>", e))
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("--{name} must be finite, got {v}")))
    }
}

fn actions(cat: &ActionCatalog, what: &ActionsCmd, json: bool, out: &mut dyn Write) -> Result<()> {
    match what {
        ActionsCmd::List => {
            if json {
                #[derive(Serialize)]
                struct Row<'a> {
                    name: &'a str,
                    rank: usize,
                    family: String,
                }
                let rows: Vec<Row> = cat
                    .iter()
                    .map(|s| Row {
                        name: &s.name,
                        rank: s.rank(),
                        family: s.family.to_string(),
                    })
                    .collect();
                return say(out, serde_json::to_string_pretty(&rows)?);
            }
            let width = cat.names().map(str::len).max().unwrap_or(4);
            say(out, format!("{:<width$}  rank  family", "name"))?;
            for s in cat.iter() {
                say(
                    out,
                    format!("{:<width$}  {:>4}  {}", s.name, s.rank(), s.family),
                )?;
            }
            Ok(())
        }
        ActionsCmd::Show { name } => {
            let s = cat.lookup(name)?;
            say(out, format!("{}\n  {}", s.name, s.display))?;
            say(out, format!("  family {}, rank {}", s.family, s.rank()))?;
            if let Some(p) = s.rank1 {
                say(
                    out,
                    format!(
                        "  4c = {}, d = {}, m_v = {}, m_h = {}",
                        p.four_c, p.d, p.m_v, p.m_h
                    ),
                )?;
            }
            for r in &s.roots {
                say(
                    out,
                    format!("  root {:?}: m_v = {}, m_h = {}", r.lattice, r.m_v, r.m_h),
                )?;
            }
            if let Some(d) = &s.dual {
                say(out, format!("  dual: {d}"))?;
            }
            Ok(())
        }
        ActionsCmd::Dump => say(out, cat.to_json_string()?),
        ActionsCmd::Check => {
            let report = cat.dimension_report();
            if json {
                return say(out, serde_json::to_string_pretty(&report)?);
            }
            if report.is_empty() {
                return say(out, "all stated dimensions match the root multiplicities");
            }
            for m in report {
                say(
                    out,
                    format!(
                        "warning: {}: dim {} but roots give {}",
                        m.name, m.stated, m.from_roots
                    ),
                )?;
            }
            Ok(())
        }
    }
}

fn run_trace(cat: &ActionCatalog, a: &TraceArgs, json: bool, out: &mut dyn Write) -> Result<()> {
    if a.steps < 1 {
        return Err(Error::domain("--steps must be at least 1"));
    }
    let cal = Calibration::from_action(cat.lookup(&a.action)?, finite("theta", a.theta)?)?;
    let seed = a.seed;
    let opts = TraceOptions {
        step: finite("step", a.step)?,
        max_steps: a.steps,
        correction_tol: a.correction_tol,
        stop_speed: a.stop_speed,
        normalize: !a.raw_speed,
        reverse: a.reverse,
    };
    let t = trace(&cal, seed, &opts)?;
    let report = verify_curve(&cal, &t.curve)?;
    if let Some(path) = &a.out {
        t.curve.write_csv(&cal, path)?;
    }
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            samples: usize,
            stop: crate::tracer::StopReason,
            corrections: usize,
            level: f64,
            report: &'a crate::tracer::VerifyReport,
        }
        let o = Out {
            samples: t.curve.axes[0].len(),
            stop: t.stop,
            corrections: t.corrections,
            level: t.curve.meta.level,
            report: &report,
        };
        return say(out, serde_json::to_string_pretty(&o)?);
    }
    say(
        out,
        format!("samples {} ({:?})", t.curve.axes[0].len(), t.stop),
    )?;
    say(out, format!("level Im F̂ = {:.16e}", t.curve.meta.level))?;
    say(
        out,
        format!(
            "max normalized residual {:.3e}",
            report.max_normalized_residual
        ),
    )?;
    say(out, format!("level drift {:.3e}", report.level_drift))
}

fn run_verify(cat: &ActionCatalog, a: &VerifyArgs, json: bool, out: &mut dyn Write) -> Result<()> {
    let curve = ProfileCurve::read_csv(&a.curve)?;
    let theta = a.theta.unwrap_or(curve.meta.theta);
    let cal = Calibration::from_action(cat.lookup(&a.action)?, finite("theta", theta)?)?;
    let report = verify_curve(&cal, &curve)?;
    let mixed = a
        .mixed_h
        .map(|h| cal.mixed_partial_check(&curve, h))
        .transpose()?;
    if json {
        #[derive(Serialize)]
        struct Out {
            report: crate::tracer::VerifyReport,
            mixed_partial: Option<crate::calibration::MixedPartialReport>,
        }
        return say(
            out,
            serde_json::to_string_pretty(&Out {
                report,
                mixed_partial: mixed,
            })?,
        );
    }
    say(out, format!("samples {}", report.samples))?;
    say(
        out,
        format!("max raw residual {:.3e}", report.max_raw_residual),
    )?;
    say(
        out,
        format!(
            "max normalized residual {:.3e}",
            report.max_normalized_residual
        ),
    )?;
    say(out, format!("level drift {:.3e}", report.level_drift))?;
    say(out, format!("singular hits {}", report.singular_hits))?;
    if let Some(m) = mixed {
        say(
            out,
            format!(
                "mixed partial max relative error {:.3e} ({} points)",
                m.max_rel_error, m.checked
            ),
        )?;
    }
    Ok(())
}

/// `count` points uniformly in `[−2, 2]^r`.
pub fn random_grid(r: usize, count: usize, rng_seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..count)
        .map(|_| (0..r).map(|_| rng.random_range(-2.0..=2.0)).collect())
        .collect()
}

fn run_ma(a: &MaArgs, rng_seed: u64, json: bool, out: &mut dyn Write) -> Result<()> {
    let profile = ScalarProfile::new(a.a, a.b, a.c0, a.r)?;
    if a.grid == 0 {
        return Err(Error::domain("--grid must be at least 1"));
    }
    let report = det_report(&profile, &random_grid(a.r as usize, a.grid, rng_seed))?;
    let text = if json {
        serde_json::to_string_pretty(&report)?
    } else {
        format!(
            "A = B (rank-one update)      {} (max rel {:.3e})\n\
             C = D = 2a/r                 {} (max rel {:.3e})\n\
             |A − C|  max {:.6e}  mean {:.6e}\n\
             |A − D|  max {:.6e}  mean {:.6e}",
            report.assert_A_eq_B,
            report.max_rel_A_vs_B,
            report.assert_C_eq_D,
            report.max_rel_C_vs_D,
            report.dev_A_vs_C.max,
            report.dev_A_vs_C.mean,
            report.dev_A_vs_D.max,
            report.dev_A_vs_D.mean
        )
    };
    emit(out, a.out.as_deref(), &text)
}

#[derive(Debug, Serialize)]
struct QuadricCurveReport {
    theta: f64,
    max_omega_defect: f64,
    phase_drift_rad: f64,
    phase: f64,
    moment_max_on_level: f64,
    samples: usize,
}

#[derive(Debug, Serialize)]
struct QuadricReport {
    curves: Vec<QuadricCurveReport>,
    moment_max_on_umbrella: f64,
    moment_min_off_level: f64,
    moment_signs_agree: bool,
    volume_ratio_max: f64,
    volume_ratio_min: f64,
    volume_ratio_mean: f64,
}

/// Random point of the unit sphere `S^n`.
pub fn random_unit(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn run_quadric(a: &QuadricArgs, rng_seed: u64, json: bool, out: &mut dyn Write) -> Result<()> {
    let pot = Potential::new(ScalarProfile::new(a.a, a.b, a.c0, 1)?);
    let action = crate::registry::sphere_action(a.n as u32, a.p_split as u32)?;
    let seed = a.seed;
    let mut curves = Vec::new();
    for &theta in &a.thetas {
        let cal = Calibration::from_action(&action, finite("thetas", theta)?)?;
        let opts = TraceOptions {
            step: a.step,
            max_steps: a.steps,
            ..TraceOptions::default()
        };
        let t = trace(&cal, seed, &opts)?;
        let r = verify_special_lagrangian(&t.curve, a.n, a.p_split, &pot, a.samples)?;
        curves.push(QuadricCurveReport {
            theta: cal.theta(),
            max_omega_defect: r.max_omega_defect,
            phase_drift_rad: r.phase_drift_rad,
            phase: r.phase,
            moment_max_on_level: r.moment_max_on_level,
            samples: r.samples,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let gens = block_generators(a.n, a.p_split)?;
    let dim = a.n + 1;
    let mut on_umbrella = 0.0f64;
    let mut off_level = f64::INFINITY;
    let mut signs = true;
    let mut ratios = Vec::new();
    for _ in 0..a.points {
        let p = random_unit(&mut rng, dim);
        // tangent vector with no component along the orbit directions X·p
        let orbit: Vec<Vec<f64>> = gens.iter().map(|g| g.apply_real(&p)).collect();
        let normal = project_out(
            &random_vec(&mut rng, dim),
            &[
                &[p.as_slice()],
                &orbit.iter().map(Vec::as_slice).collect::<Vec<_>>()[..],
            ]
            .concat(),
        );
        let scale = rng.random_range(0.3..1.2);
        let nz = norm(&normal);
        if nz > 1e-3 {
            let v: Vec<f64> = normal.iter().map(|x| x * scale / nz).collect();
            let z = embed(&SphereTangent::new(p.clone(), v)?);
            for g in &gens {
                let m = moment_check(&z, g, &pot)?;
                on_umbrella = on_umbrella.max(m.numeric.abs());
                signs &= m.signs_agree(1e-6);
            }
        }
        if let Some(dir) = orbit.iter().max_by(|x, y| norm(x).total_cmp(&norm(y))) {
            let nd = norm(dir);
            if nd > 1e-3 {
                let v: Vec<f64> = dir.iter().map(|x| x * scale / nd).collect();
                let z = embed(&SphereTangent::new(p.clone(), v)?);
                let mut best = 0.0f64;
                for g in &gens {
                    let m = moment_check(&z, g, &pot)?;
                    best = best.max(m.numeric.abs());
                    signs &= m.signs_agree(1e-6);
                }
                off_level = off_level.min(best);
            }
        }
        let v = project_out(&random_vec(&mut rng, dim), &[p.as_slice()]);
        let z = embed(&SphereTangent::new(p, v)?);
        ratios.push(volume_ratio(&z, &pot)?);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
    let report = QuadricReport {
        curves,
        moment_max_on_umbrella: on_umbrella,
        moment_min_off_level: off_level,
        moment_signs_agree: signs,
        volume_ratio_max: ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        volume_ratio_min: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        volume_ratio_mean: mean,
    };
    let text = if json {
        serde_json::to_string_pretty(&report)?
    } else {
        let mut s = String::new();
        for c in &report.curves {
            s += &format!(
                "theta {:+.6}: |ω| ≤ {:.3e}, phase {:+.6} drift {:.3e}, |μ| ≤ {:.3e} ({} samples)\n",
                c.theta, c.max_omega_defect, c.phase, c.phase_drift_rad, c.moment_max_on_level, c.samples
            );
        }
        s += &format!(
            "moment on normal umbrellas ≤ {:.3e}, off level ≥ {:.3e}, signs agree: {}\n",
            report.moment_max_on_umbrella, report.moment_min_off_level, report.moment_signs_agree
        );
        s += &format!(
            "volume ratio min {:.6e} max {:.6e} mean {:.6e}",
            report.volume_ratio_min, report.volume_ratio_max, report.volume_ratio_mean
        );
        s
    };
    emit(out, a.out.as_deref(), &text)
}

fn random_vec(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Removes the span of `dirs` from `v` (Gram-Schmidt).
pub fn project_out(v: &[f64], dirs: &[&[f64]]) -> Vec<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for d in dirs {
        let mut w = d.to_vec();
        for b in &basis {
            let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = norm(&w);
        if n > 1e-12 {
            basis.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    let mut out = v.to_vec();
    for b in &basis {
        let c: f64 = out.iter().zip(b).map(|(x, y)| x * y).sum();
        out.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    out
}
