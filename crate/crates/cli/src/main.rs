//! Command-line driver: kernel and fractional evaluation, arc-measure
//! sweeps, conjugate-bound verification, and CSV/JSON report emission.
//!
//! Exit codes: 0 when the requested check passes (or the command is purely
//! evaluative), 2 when a verdict is growing / a numerical run fails to
//! converge, 1 for usage and I/O errors.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use conjbound_core::bounds_lab::{
    fit_hypothesis, growth_order, holder_growth_experiment, verify_conjugate_bound,
    GrowthProfile, Verdict,
};
use conjbound_core::circle_measures::domination_sweep;
use conjbound_core::fractional::{frac_derivative, frac_integral, FracOrder};
use conjbound_core::harmonic_eval::{
    circle_means, example1, example2_sharpness, recover_psi, recovery_radii, HarmonicSpec,
    MeanKind,
};
use conjbound_core::kernels::{s_alpha, s_alpha_point, KernelOrder};
use conjbound_core::{
    build_grid, nu_bound, nu_exact, BoundarySet, DiskPoint, Error as CoreError, NumericConfig,
};

#[derive(Parser)]
#[command(name = "conjbound", version, about = "Boundary-singularity harmonic function lab")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Seed for randomized sweeps; equal seeds give byte-identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (fallback: CONJBOUND_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Absolute tolerance for adaptive integrals.
    #[arg(long, global = true)]
    tol_integral: Option<f64>,
    /// Relative target for numerical derivatives.
    #[arg(long, global = true)]
    tol_derivative: Option<f64>,
    /// Report file; sweep commands also write a CSV sibling.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the kernel family.
    Kernel {
        #[command(subcommand)]
        action: KernelCmd,
    },
    /// Fractional integral or derivative of a built-in radial function.
    Frac {
        #[command(subcommand)]
        action: FracCmd,
    },
    /// Arc measure of a boundary set: exact value and closed-form bound.
    Nu {
        #[arg(long)]
        lambda: f64,
        /// Evaluation point as "r,theta".
        #[arg(long)]
        w: String,
        /// Boundary set JSON; the full circle when omitted.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Evaluate u (and optionally its conjugate) from a spec file.
    Eval {
        #[arg(long)]
        spec: PathBuf,
        /// Evaluation point as "r,theta".
        #[arg(long)]
        z: String,
        #[arg(long)]
        conjugate: bool,
    },
    /// Recover the boundary primitive at an angle by radial limits.
    Recover {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        theta: f64,
        /// Finest dyadic radius level in the ladder 1 - 2^-n, n = 4..=depth.
        #[arg(long, default_value_t = 12)]
        depth: u32,
    },
    /// Circle means M_1 or M_inf of the spec's harmonic function.
    Means {
        #[arg(long)]
        spec: PathBuf,
        /// "1" or "inf".
        #[arg(long)]
        p: String,
        #[arg(long)]
        r: f64,
    },
    /// Fit the growth hypothesis and verify the conjugate majorant.
    Thm1 {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        gamma: f64,
        /// Boundary set JSON (default: the spec measure's support).
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        depth: u32,
        #[arg(long, default_value_t = 64)]
        budget: u32,
    },
    /// Joint smoothness/growth experiment for a measure.
    Thm3 {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        set: PathBuf,
        /// Target exponent for the converse modulus check.
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long, default_value_t = 32)]
        budget: u32,
        /// Cross-check the primitive against radial-limit recovery.
        #[arg(long)]
        recovery_checks: bool,
    },
    /// Estimate the order of growth of the spec's harmonic function.
    Order {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        depth: u32,
        #[arg(long, default_value_t = 32)]
        budget: u32,
    },
    /// Seeded domination sweep for the arc-measure bound.
    Lemma1Sweep {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 200)]
        configs: usize,
    },
    /// Scaled real/imaginary parts of the square-root quotient near z = 1.
    Example1 {
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// Conjugate sharpness products along the diagonal approach.
    Example2 {
        /// Largest exponent k in the sweep t = 10^-1 .. 10^-k.
        #[arg(long, default_value_t = 6)]
        max_exponent: i32,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    Eval {
        #[arg(long)]
        alpha: f64,
        /// Evaluation point as "r,theta".
        #[arg(long)]
        z: String,
    },
}

#[derive(Subcommand)]
enum FracCmd {
    Integral {
        #[arg(long)]
        alpha: f64,
        /// one | monomial:n | kernel:alpha,theta
        #[arg(long)]
        func: String,
        #[arg(long)]
        r: f64,
    },
    Derivative {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        func: String,
        #[arg(long)]
        r: f64,
    },
}

enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::QuadratureBudget(_)
            | CoreError::NonFinite(_)
            | CoreError::RecoveryDidNotStabilize
            | CoreError::TooManySkips { .. } => CliError::Numeric(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

fn parse_point(text: &str) -> CliResult<DiskPoint> {
    let mut parts = text.splitn(2, ',');
    let r: f64 = parts
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("bad point {text:?}, expected \"r,theta\"")))?;
    let theta: f64 = parts
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("bad point {text:?}, expected \"r,theta\"")))?;
    DiskPoint::new(r, theta).map_err(Into::into)
}

/// Built-in radial functions for the frac subcommands.
fn parse_radial(text: &str) -> CliResult<Box<dyn Fn(f64) -> f64 + Sync>> {
    if text == "one" {
        return Ok(Box::new(|_| 1.0));
    }
    if let Some(n) = text.strip_prefix("monomial:") {
        let n: i32 = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad monomial degree in {text:?}")))?;
        return Ok(Box::new(move |x: f64| x.powi(n)));
    }
    if let Some(rest) = text.strip_prefix("kernel:") {
        let mut parts = rest.splitn(2, ',');
        let alpha: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad kernel order in {text:?}")))?;
        let theta: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad kernel angle in {text:?}")))?;
        let order = KernelOrder::new(alpha).map_err(CliError::from)?;
        return Ok(Box::new(move |x: f64| {
            s_alpha_point(DiskPoint::new(x, theta).expect("radius in [0,1)"), order).re
        }));
    }
    Err(CliError::Usage(format!(
        "unknown radial function {text:?}; use one | monomial:n | kernel:alpha,theta"
    )))
}

struct Artifacts {
    stdout: serde_json::Value,
    /// Written to `--out` when given (the spec-shaped report where one exists).
    file_json: Option<serde_json::Value>,
    csv: Option<String>,
    failed: bool,
}

impl Artifacts {
    fn value(v: serde_json::Value) -> Self {
        Artifacts { stdout: v, file_json: None, csv: None, failed: false }
    }
}

fn emit(global: &GlobalArgs, artifacts: Artifacts) -> CliResult<ExitCode> {
    if let Some(path) = &global.out {
        let body = artifacts.file_json.as_ref().unwrap_or(&artifacts.stdout);
        let mut text =
            serde_json::to_string_pretty(body).map_err(|e| CliError::Usage(e.to_string()))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if let Some(csv) = &artifacts.csv {
            let csv_path = path.with_extension("csv");
            fs::write(&csv_path, csv)
                .map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&artifacts.stdout)
            .map_err(|e| CliError::Usage(e.to_string()))?
    );
    Ok(if artifacts.failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run(cli: &Cli, cfg: &NumericConfig) -> CliResult<Artifacts> {
    match &cli.command {
        Command::Kernel { action: KernelCmd::Eval { alpha, z } } => {
            let order = KernelOrder::new(*alpha).map_err(CliError::from)?;
            let point = parse_point(z)?;
            let s = s_alpha(point.to_complex(), order).map_err(CliError::from)?;
            Ok(Artifacts::value(json!({
                "alpha": alpha,
                "z": [point.radius(), point.angle()],
                "s": [s.re, s.im],
                "p": s.re,
                "q": s.im,
            })))
        }

        Command::Frac { action } => {
            let (kind, alpha, func, r) = match action {
                FracCmd::Integral { alpha, func, r } => ("integral", alpha, func, r),
                FracCmd::Derivative { alpha, func, r } => ("derivative", alpha, func, r),
            };
            let h = parse_radial(func)?;
            let value = match kind {
                "integral" => frac_integral(&h, *alpha, *r, cfg)?,
                _ => {
                    let order = FracOrder::new(*alpha).map_err(CliError::from)?;
                    frac_derivative(&h, order, *r, cfg)?
                }
            };
            Ok(Artifacts::value(json!({
                "op": kind, "alpha": alpha, "func": func, "r": r, "value": value,
            })))
        }

        Command::Nu { lambda, w, set } => {
            let point = parse_point(w)?;
            let boundary = match set {
                Some(path) => load_json::<BoundarySet>(path)?,
                None => BoundarySet::full_circle(),
            };
            let exact = nu_exact(point, *lambda, &boundary, cfg)?;
            let bound = nu_bound(point, *lambda, &boundary)?;
            Ok(Artifacts::value(json!({
                "lambda": lambda,
                "w": [point.radius(), point.angle()],
                "exact": exact,
                "bound": bound,
            })))
        }

        Command::Eval { spec, z, conjugate } => {
            let spec: HarmonicSpec = load_json(spec)?;
            let point = parse_point(z)?;
            let u = spec.u(point, cfg)?;
            let mut body = json!({
                "z": [point.radius(), point.angle()],
                "u": u,
            });
            if *conjugate {
                body["conjugate"] = json!(spec.u_conjugate(point, cfg)?);
            }
            Ok(Artifacts::value(body))
        }

        Command::Recover { spec, theta, depth } => {
            let spec: HarmonicSpec = load_json(spec)?;
            let radii = recovery_radii(*depth).map_err(CliError::from)?;
            let raw = recover_psi(&spec, *theta, &radii, cfg)?;
            Ok(Artifacts::value(json!({
                "theta": theta,
                "raw": raw,
                "normalized": raw / TAU,
            })))
        }

        Command::Means { spec, p, r } => {
            let spec: HarmonicSpec = load_json(spec)?;
            let kind = match p.as_str() {
                "1" => MeanKind::One,
                "inf" => MeanKind::Infinity,
                other => {
                    return Err(CliError::Usage(format!("p must be 1 or inf, got {other:?}")));
                }
            };
            let support = spec.support().map_err(CliError::from)?;
            let u = |z: DiskPoint| spec.u(z, cfg).unwrap_or(f64::NAN);
            let value = circle_means(u, Some(&support), *r, kind, cfg)?;
            Ok(Artifacts::value(json!({ "p": p, "r": r, "value": value })))
        }

        Command::Thm1 { spec, q, gamma, set, depth, budget } => {
            let spec: HarmonicSpec = load_json(spec)?;
            let boundary = match set {
                Some(path) => load_json::<BoundarySet>(path)?,
                None => spec.support().map_err(CliError::from)?,
            };
            let profile = GrowthProfile::new(*q, *gamma).map_err(CliError::from)?;
            let grid = build_grid(&boundary, *depth, *budget).map_err(CliError::from)?;
            let u = |z: DiskPoint| spec.u(z, cfg);
            let v = |z: DiskPoint| spec.u_conjugate(z, cfg);
            let hypothesis = fit_hypothesis(&u, profile, &boundary, &grid, cfg)?;
            let verification = verify_conjugate_bound(&v, profile, &boundary, &grid, cfg)?;

            let mut csv = String::from("k,layer_radius,sup_ratio,argmax_r,argmax_theta\n");
            for layer in &verification.report.layers {
                let radius = 1.0 - 0.5f64.powi(layer.k as i32);
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    layer.k, radius, layer.sup, layer.argmax[0], layer.argmax[1]
                );
            }
            let failed = verification.report.verdict != Verdict::Bounded;
            Ok(Artifacts {
                stdout: json!({
                    "hypothesis": to_value(&hypothesis),
                    "conjugate": to_value(&verification),
                }),
                file_json: Some(to_value(&verification.report)),
                csv: Some(csv),
                failed,
            })
        }

        Command::Thm3 { measure, alpha, set, gamma, depth, budget, recovery_checks } => {
            let mu = load_json(measure)?;
            let boundary: BoundarySet = load_json(set)?;
            let grid = build_grid(&boundary, *depth, *budget).map_err(CliError::from)?;
            let report = holder_growth_experiment(
                &mu,
                *alpha,
                *gamma,
                &boundary,
                &grid,
                *recovery_checks,
                cfg,
            )?;
            let mut csv = String::from("delta,converse_ratio\n");
            if let Some(converse) = &report.converse {
                for (delta, ratio) in &converse.rows {
                    let _ = writeln!(csv, "{delta},{ratio}");
                }
            }
            let failed = report.hypothesis.verdict != Verdict::Bounded
                || report.converse.as_ref().is_some_and(|c| !c.bounded);
            Ok(Artifacts { stdout: to_value(&report), file_json: None, csv: Some(csv), failed })
        }

        Command::Order { spec, set, depth, budget } => {
            let spec: HarmonicSpec = load_json(spec)?;
            let boundary = match set {
                Some(path) => load_json::<BoundarySet>(path)?,
                None => spec.support().map_err(CliError::from)?,
            };
            let grid = build_grid(&boundary, *depth, *budget).map_err(CliError::from)?;
            let u = |z: DiskPoint| spec.u(z, cfg);
            let order = growth_order(&u, &boundary, &grid, cfg)?;
            let mut csv = String::from("k,sup,rho_argmax,argmax_r,argmax_theta\n");
            for layer in &order.layers {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    layer.k, layer.sup, layer.rho_argmax, layer.argmax[0], layer.argmax[1]
                );
            }
            Ok(Artifacts {
                stdout: to_value(&order),
                file_json: None,
                csv: Some(csv),
                failed: false,
            })
        }

        Command::Lemma1Sweep { lambda, configs } => {
            let report = domination_sweep(*lambda, *configs, cfg.seed, cfg)?;
            let mut csv = String::from("rho,exact,bound,ratio\n");
            for row in &report.rows {
                let _ = writeln!(csv, "{},{},{},{}", row.rho, row.exact, row.bound, row.ratio);
            }
            let failed = !report.stable;
            Ok(Artifacts {
                stdout: json!({
                    "lambda": report.lambda,
                    "configs": report.rows.len(),
                    "fitted_c": report.fitted_c,
                    "decade_c": report.decade_c,
                    "stable": report.stable,
                }),
                file_json: None,
                csv: Some(csv),
                failed,
            })
        }

        Command::Example1 { samples } => {
            let directions = [0.3, PI / 4.0, 1.2, PI - 0.3];
            let mut csv = String::from("one_minus_z_abs,direction,re_scaled,im_scaled\n");
            let mut min_scaled = f64::INFINITY;
            let mut max_scaled = f64::NEG_INFINITY;
            for i in 1..=*samples {
                let d = 0.1 * i as f64 / (*samples as f64 + 1.0);
                for dir in directions {
                    let one_minus_z = num_complex::Complex64::from_polar(d, dir);
                    let zc = num_complex::Complex64::new(1.0, 0.0) - one_minus_z;
                    if zc.norm() >= 1.0 {
                        continue;
                    }
                    let z = DiskPoint::from_complex(zc).map_err(CliError::from)?;
                    let f = example1(z);
                    let re_scaled = f.re * d.sqrt();
                    let im_scaled = f.im * d.powf(1.5) / one_minus_z.im.abs().max(1e-300);
                    let _ = writeln!(csv, "{d},{dir},{re_scaled},{im_scaled}");
                    min_scaled = min_scaled.min(re_scaled);
                    max_scaled = max_scaled.max(re_scaled);
                }
            }
            let in_band = min_scaled >= 0.9 && max_scaled <= 1.5;
            Ok(Artifacts {
                stdout: json!({
                    "re_scaled_min": min_scaled,
                    "re_scaled_max": max_scaled,
                    "in_band": in_band,
                }),
                file_json: None,
                csv: Some(csv),
                failed: !in_band,
            })
        }

        Command::Example2 { max_exponent } => {
            let mut csv = String::from("t,product\n");
            let mut worst: f64 = 0.0;
            for k in 1..=*max_exponent {
                let t = 10f64.powi(-k);
                let product = example2_sharpness(t)?;
                let _ = writeln!(csv, "{t},{product}");
                worst = worst.max((product - 2f64.sqrt()).abs());
            }
            let pass = worst <= 1e-9;
            Ok(Artifacts {
                stdout: json!({ "max_abs_deviation": worst, "pass": pass }),
                file_json: None,
                csv: Some(csv),
                failed: !pass,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let mut cfg = NumericConfig { seed: cli.global.seed, ..NumericConfig::default() };
    if let Some(tol) = cli.global.tol_integral {
        cfg.integral_abs_tol = tol;
        cfg.integral_rel_tol = tol;
    }
    if let Some(tol) = cli.global.tol_derivative {
        cfg.derivative_rel_tol = tol;
    }

    let threads = cli
        .global
        .threads
        .or_else(|| std::env::var("CONJBOUND_THREADS").ok().and_then(|s| s.parse().ok()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(err) => {
            eprintln!("error: thread pool: {err}");
            return ExitCode::from(1);
        }
    };

    match pool.install(|| run(&cli, &cfg).and_then(|artifacts| emit(&cli.global, artifacts))) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
