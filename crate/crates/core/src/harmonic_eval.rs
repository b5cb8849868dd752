//! Harmonic functions from boundary measures: `u(z) = int P_alpha(z conj(zeta)) d mu(zeta)`,
//! the conjugate through the imaginary kernel part (normalized to vanish at
//! the origin), the analytic completion, closed-form example functions, a
//! Schwarz-integral cross-check, radial-limit recovery of the primitive, and
//! circle means.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_measures::{stieltjes_integral_with_breaks, CircleMeasure};
use crate::config::NumericConfig;
use crate::disk_geometry::{layer_angles, BoundarySet, DiskPoint};
use crate::error::{Error, Result};
use crate::fractional::u_alpha_eval;
use crate::kernels::{s_alpha_from_one_minus, KernelOrder};
use crate::quad;

/// A harmonic function given by a boundary measure and a kernel order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpec {
    pub measure: CircleMeasure,
    pub alpha: KernelOrder,
}

impl HarmonicSpec {
    pub fn new(measure: CircleMeasure, alpha: f64) -> Result<Self> {
        Ok(Self { measure, alpha: KernelOrder::new(alpha)? })
    }

    pub fn order(&self) -> KernelOrder {
        self.alpha
    }

    pub fn support(&self) -> Result<BoundarySet> {
        self.measure.support_set()
    }

    fn kernel_at(&self, z: DiskPoint, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(z.radius(), z.angle() - theta);
        s_alpha_from_one_minus(Complex64::new(1.0, 0.0) - w, self.alpha)
    }

    /// `u(z) = int P_alpha(z e^{-i theta}) d mu(theta)`.
    pub fn u(&self, z: DiskPoint, cfg: &NumericConfig) -> Result<f64> {
        stieltjes_integral_with_breaks(
            |theta| self.kernel_at(z, theta).re,
            &self.measure,
            &[z.angle()],
            cfg,
        )
    }

    /// The conjugate `~u(z) = int Q_alpha(z e^{-i theta}) d mu(theta)`;
    /// `Q_alpha(0) = 0` fixes the free additive constant at the origin.
    pub fn u_conjugate(&self, z: DiskPoint, cfg: &NumericConfig) -> Result<f64> {
        stieltjes_integral_with_breaks(
            |theta| self.kernel_at(z, theta).im,
            &self.measure,
            &[z.angle()],
            cfg,
        )
    }

    pub fn analytic(&self) -> AnalyticCompletion<'_> {
        AnalyticCompletion { spec: self }
    }
}

/// `F = u + i ~u`, analytic on the disk, with `Im F(0) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticCompletion<'a> {
    spec: &'a HarmonicSpec,
}

impl AnalyticCompletion<'_> {
    pub fn eval(&self, z: DiskPoint, cfg: &NumericConfig) -> Result<Complex64> {
        Ok(Complex64::new(self.spec.u(z, cfg)?, self.spec.u_conjugate(z, cfg)?))
    }
}

/// Closed-form test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// The square-root quotient `((1+z)/(1-z))^{1/2}`, principal branch.
    Example1,
    /// The Poisson kernel `P_0`.
    Example2Poisson,
    /// Its conjugate `Q_0`.
    Example2Conjugate,
}

impl Builtin {
    pub fn eval(self, z: DiskPoint) -> Complex64 {
        let order = KernelOrder::new(0.0).expect("order 0 valid");
        match self {
            Builtin::Example1 => example1(z),
            Builtin::Example2Poisson => {
                Complex64::new(crate::kernels::s_alpha_point(z, order).re, 0.0)
            }
            Builtin::Example2Conjugate => {
                Complex64::new(crate::kernels::s_alpha_point(z, order).im, 0.0)
            }
        }
    }
}

/// `((1+z)/(1-z))^{1/2}` with the branch fixed by `f(0) = 1`. The quotient
/// maps the disk to the right half-plane, so the principal square root never
/// meets the cut.
pub fn example1(z: DiskPoint) -> Complex64 {
    let w = z.to_complex();
    let one = Complex64::new(1.0, 0.0);
    ((one + w) / (one - w)).sqrt()
}

/// `|Q_0(z)| * |1 - z|` for `1 - z = t e^{i direction}`; along the diagonal
/// `direction = pi/4` this equals `sqrt(2)` identically, exhibiting the
/// sharpness rate of the conjugate bound.
pub fn example2_product(t: f64, direction: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "approach parameter must lie in (0, 1), got {t}"
        )));
    }
    let one_minus_z = Complex64::from_polar(t, direction);
    if (Complex64::new(1.0, 0.0) - one_minus_z).norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "z = 1 - {t} e^{{i {direction}}} lies outside the disk"
        )));
    }
    let order = KernelOrder::new(0.0).expect("order 0 valid");
    let q = s_alpha_from_one_minus(one_minus_z, order).im;
    Ok(q.abs() * t)
}

pub fn example2_sharpness(t: f64) -> Result<f64> {
    example2_product(t, FRAC_PI_4)
}

/// Schwarz-integral reconstruction of the analytic completion from boundary
/// values of `u` on the circle of radius `big_r`:
/// `F(z) = 1/(2 pi) int (R e^{i t} + z)/(R e^{i t} - z) u(R e^{i t}) dt + i im_f0`.
pub fn conj_via_schwarz(
    u_values: impl Fn(f64) -> f64,
    big_r: f64,
    z: DiskPoint,
    im_f0: f64,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    if !(0.0 < big_r && big_r < 1.0) {
        return Err(Error::Domain(format!("circle radius must lie in (0, 1), got {big_r}")));
    }
    if z.radius() >= big_r {
        return Err(Error::Domain(format!(
            "need |z| < R, got |z| = {} and R = {big_r}",
            z.radius()
        )));
    }
    let zc = z.to_complex();
    let kernel = |t: f64| -> Complex64 {
        let boundary = Complex64::from_polar(big_r, t);
        (boundary + zc) / (boundary - zc) * u_values(t)
    };
    let breaks = [z.angle()];
    let re = quad::integrate_with_breaks(
        |t| kernel(t).re,
        0.0,
        TAU,
        &breaks,
        cfg.integral_rel_tol,
        cfg.integral_abs_tol,
        cfg.max_quad_evals,
    )?;
    let im = quad::integrate_with_breaks(
        |t| kernel(t).im,
        0.0,
        TAU,
        &breaks,
        cfg.integral_rel_tol,
        cfg.integral_abs_tol,
        cfg.max_quad_evals,
    )?;
    Ok(Complex64::new(re.value / TAU, im.value / TAU + im_f0))
}

fn neville_at_zero(ts: &[f64], values: &[f64]) -> f64 {
    let mut tab = values.to_vec();
    let n = tab.len();
    for level in 1..n {
        for i in 0..n - level {
            tab[i] = (ts[i + level] * tab[i] - ts[i] * tab[i + 1]) / (ts[i + level] - ts[i]);
        }
    }
    tab[0]
}

/// Radial-limit recovery of the primitive at `theta` from a closure:
/// extrapolates `int_0^theta u(r_n e^{i phi}) d phi` to `r -> 1` along the
/// supplied increasing radii (polynomial extrapolation in `1 - r`).
/// `breaks` seeds the angular quadrature near integrand peaks.
pub fn recover_psi_fn(
    u: impl Fn(DiskPoint) -> Result<f64>,
    theta: f64,
    radii: &[f64],
    breaks: &[f64],
    cfg: &NumericConfig,
) -> Result<f64> {
    if !(0.0..=TAU).contains(&theta) {
        return Err(Error::Domain(format!("theta must lie in [0, 2pi], got {theta}")));
    }
    if radii.len() < 2 || radii.windows(2).any(|w| w[0] >= w[1]) || radii.iter().any(|&r| !(0.0..1.0).contains(&r)) {
        return Err(Error::Domain(
            "radii must be an increasing sequence inside (0, 1) of length >= 2".into(),
        ));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    let mut ts = Vec::with_capacity(radii.len());
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let out = quad::integrate_with_breaks(
            |phi| u(DiskPoint::new(r, phi).expect("radius checked")).unwrap_or(f64::NAN),
            0.0,
            theta,
            breaks,
            cfg.integral_rel_tol,
            cfg.integral_abs_tol,
            cfg.max_quad_evals,
        )?;
        ts.push(1.0 - r);
        values.push(out.value);
    }
    let n = values.len();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-9);
    let last_change = (values[n - 1] - values[n - 2]).abs();
    if last_change > 0.1 * scale.max(values[n - 1].abs()) {
        return Err(Error::RecoveryDidNotStabilize);
    }
    Ok(neville_at_zero(&ts, &values))
}

/// Recovery driven by a harmonic spec; support angles feed the quadrature.
pub fn recover_psi(
    spec: &HarmonicSpec,
    theta: f64,
    radii: &[f64],
    cfg: &NumericConfig,
) -> Result<f64> {
    let breaks = spec.measure.breakpoints();
    recover_psi_fn(|z| spec.u(z, cfg), theta, radii, &breaks, cfg)
}

/// The standard radii ladder `1 - 2^-n`, `n = 4..=depth`, used by recovery.
pub fn recovery_radii(depth: u32) -> Result<Vec<f64>> {
    if !(5..=40).contains(&depth) {
        return Err(Error::Domain(format!("recovery depth must lie in 5..=40, got {depth}")));
    }
    Ok((4..=depth).map(|n| 1.0 - 0.5f64.powi(n as i32)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    /// `M_1(r, u) = 1/(2 pi) int |u(r e^{i t})| dt`
    One,
    /// `M_inf(r, u) = sup |u|` on the circle of radius `r`
    Infinity,
}

/// Circle means of `u` at radius `r`. The supremum is taken over an angle
/// set refined near `set` (when given) at the dyadic depth matching `1 - r`.
pub fn circle_means(
    u: impl Fn(DiskPoint) -> f64,
    set: Option<&BoundarySet>,
    r: f64,
    kind: MeanKind,
    cfg: &NumericConfig,
) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("radius must lie in [0, 1), got {r}")));
    }
    match kind {
        MeanKind::Infinity => {
            let depth = (-(1.0 - r).log2()).ceil().clamp(1.0, 40.0) as u32;
            let full = BoundarySet::full_circle();
            let angles = layer_angles(set.unwrap_or(&full), depth, 512);
            let mut best = 0.0f64;
            for t in angles {
                let v = u(DiskPoint::new(r, t)?).abs();
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("u at angle {t}")));
                }
                best = best.max(v);
            }
            Ok(best)
        }
        MeanKind::One => {
            let breaks = set.map(|s| s.endpoints()).unwrap_or_default();
            let out = quad::integrate_with_breaks(
                |t| u(DiskPoint::new(r, t).expect("radius checked")).abs(),
                0.0,
                TAU,
                &breaks,
                cfg.integral_rel_tol,
                cfg.integral_abs_tol,
                cfg.max_quad_evals,
            )?;
            Ok(out.value / TAU)
        }
    }
}

/// Per-radius values and supremum of `int_0^{2pi} |u_alpha(r e^{i phi})| d phi`,
/// whose uniform boundedness characterizes representability by the order-
/// `alpha` kernel.
#[derive(Debug, Clone, Serialize)]
pub struct RepresentabilityReport {
    pub per_radius: Vec<(f64, f64)>,
    pub sup: f64,
}

pub fn djrbashian_condition(
    spec: &HarmonicSpec,
    radii: &[f64],
    cfg: &NumericConfig,
) -> Result<RepresentabilityReport> {
    if radii.is_empty() || radii.iter().any(|&r| !(0.0..1.0).contains(&r)) {
        return Err(Error::Domain("radii must be nonempty and inside (0, 1)".into()));
    }
    let alpha = spec.alpha.alpha();
    let breaks = spec.measure.breakpoints();
    let mut per_radius = Vec::with_capacity(radii.len());
    let mut sup = 0.0f64;
    for &r in radii {
        let out = quad::integrate_with_breaks(
            |phi| {
                let z = DiskPoint::new(r, phi).expect("radius checked");
                u_alpha_eval(|p| spec.u(p, cfg).unwrap_or(f64::NAN), alpha, z, cfg)
                    .map(f64::abs)
                    .unwrap_or(f64::NAN)
            },
            0.0,
            TAU,
            &breaks,
            // The integrand itself is a quadrature; a looser outer tolerance
            // keeps the nesting shallow.
            (cfg.integral_rel_tol * 100.0).min(1e-5),
            (cfg.integral_abs_tol * 100.0).min(1e-5),
            cfg.max_quad_evals,
        )?;
        sup = sup.max(out.value);
        per_radius.push((r, out.value));
    }
    Ok(RepresentabilityReport { per_radius, sup })
}

/// Relative Cauchy-Riemann residual of the pair `(u, v)` at `z` from
/// fourth-order central differences with outer step `h`:
/// `(|u_x - v_y| + |u_y + v_x|) / (|u_x| + |u_y| + |v_x| + |v_y|)`.
pub fn cauchy_riemann_residual(
    u: &impl Fn(DiskPoint) -> Result<f64>,
    v: &impl Fn(DiskPoint) -> Result<f64>,
    z: DiskPoint,
    h: f64,
) -> Result<f64> {
    if z.radius() + h >= 1.0 {
        return Err(Error::StencilExceedsDomain);
    }
    let at = |f: &dyn Fn(DiskPoint) -> Result<f64>, w: Complex64| -> Result<f64> {
        f(DiskPoint::from_complex(w)?)
    };
    let deriv = |f: &dyn Fn(DiskPoint) -> Result<f64>, dir: Complex64| -> Result<f64> {
        let zc = z.to_complex();
        let r3 = 0.5 * (at(f, zc + dir * h)? - at(f, zc - dir * h)?);
        let r5 = (4.0 / 3.0) * (at(f, zc + dir * (h / 2.0))? - at(f, zc - dir * (h / 2.0))?)
            - (1.0 / 3.0) * r3;
        Ok(r5 / h)
    };
    let ex = Complex64::new(1.0, 0.0);
    let ey = Complex64::new(0.0, 1.0);
    let ux = deriv(u, ex)?;
    let uy = deriv(u, ey)?;
    let vx = deriv(v, ex)?;
    let vy = deriv(v, ey)?;
    let denom = ux.abs() + uy.abs() + vx.abs() + vy.abs();
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(((ux - vy).abs() + (uy + vx).abs()) / denom)
}

/// Undivided five-point Laplacian `u(z+h) + u(z-h) + u(z+ih) + u(z-ih) - 4 u(z)`;
/// for a harmonic `u` this is `O(h^4)`.
pub fn laplacian_defect(
    u: &impl Fn(DiskPoint) -> Result<f64>,
    z: DiskPoint,
    h: f64,
) -> Result<f64> {
    if z.radius() + h >= 1.0 {
        return Err(Error::StencilExceedsDomain);
    }
    let zc = z.to_complex();
    let at = |w: Complex64| -> Result<f64> { u(DiskPoint::from_complex(w)?) };
    Ok(at(zc + h)? + at(zc - h)? + at(zc + Complex64::new(0.0, h))?
        + at(zc - Complex64::new(0.0, h))?
        - 4.0 * at(zc)?)
}
