//! Riemann-Liouville fractional integral and derivative along the radius.
//!
//! For order `alpha` in `(0, 1]` the integral
//! `D^{-alpha} h(r) = 1/Gamma(alpha) * int_0^r (r-x)^{alpha-1} h(x) dx`
//! is evaluated after the substitution `x = r (1 - s^{1/alpha})`, which
//! absorbs the endpoint weight:
//! `D^{-alpha} h(r) = r^alpha / Gamma(alpha+1) * int_0^1 h(r (1 - s^{1/alpha})) ds`.
//! Orders above one are reduced by the semigroup property to a chain of
//! plain integrals after one fractional step in `(0, 1]`.
//!
//! The derivative of order `alpha` in `(p-1, p]` is the `p`-th numerical
//! derivative of `D^{-(p-alpha)} h`, taken with Richardson-extrapolated
//! central differences.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::NumericConfig;
use crate::disk_geometry::DiskPoint;
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::quad;

/// A positive derivative order `alpha` with its integer ceiling `p`, so that
/// `alpha` lies in `(p-1, p]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOrder {
    alpha: f64,
    p: u32,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Domain(format!("fractional order must be positive, got {alpha}")));
        }
        let p = alpha.ceil() as u32;
        if p > 3 {
            return Err(Error::Domain(format!(
                "derivative orders above 3 are not supported, got {alpha}"
            )));
        }
        Ok(Self { alpha, p })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn integer_part(self) -> u32 {
        self.p
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() || !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("radius must lie in [0, 1), got {r}")));
    }
    Ok(())
}

/// `D^{-alpha} h(r)` for `alpha` in `(0, 1]` via the weight-absorbing
/// substitution.
fn frac_integral_unit(
    h: &(impl Fn(f64) -> f64 + ?Sized),
    alpha: f64,
    r: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    let inv_alpha = 1.0 / alpha;
    let out = quad::integrate(
        |s| h(r * (1.0 - s.powf(inv_alpha))),
        0.0,
        1.0,
        cfg.integral_rel_tol,
        cfg.integral_abs_tol,
        cfg.max_quad_evals,
    )?;
    Ok(r.powf(alpha) / gamma(alpha + 1.0) * out.value)
}

fn split_order(alpha: f64) -> (usize, f64) {
    // alpha = m + beta with beta in (0, 1].
    let m = (alpha.ceil() as usize).saturating_sub(1);
    (m, alpha - m as f64)
}

fn frac_integral_impl(
    h: &(impl Fn(f64) -> f64 + ?Sized),
    alpha: f64,
    r: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    let (m, beta) = split_order(alpha);
    if m == 0 {
        return frac_integral_unit(h, beta, r, cfg);
    }
    // Inner levels run at a tighter tolerance so the outer integrals do not
    // integrate their noise.
    let inner_cfg = NumericConfig {
        integral_abs_tol: cfg.integral_abs_tol / 4f64.powi(m as i32),
        integral_rel_tol: cfg.integral_rel_tol / 4f64.powi(m as i32),
        ..cfg.clone()
    };
    fn level(
        h: &(impl Fn(f64) -> f64 + ?Sized),
        depth: usize,
        beta: f64,
        x: f64,
        cfg: &NumericConfig,
    ) -> Result<f64> {
        if depth == 0 {
            return frac_integral_unit(h, beta, x, cfg);
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        // Inner failures surface through the quadrature's NaN detection.
        let out = quad::integrate(
            |t| level(h, depth - 1, beta, t, cfg).unwrap_or(f64::NAN),
            0.0,
            x,
            cfg.integral_rel_tol,
            cfg.integral_abs_tol,
            cfg.max_quad_evals,
        )?;
        Ok(out.value)
    }
    level(h, m, beta, r, &inner_cfg)
}

/// Riemann-Liouville fractional integral `D^{-alpha} h(r)`, `alpha > 0`,
/// `r` in `[0, 1)`.
pub fn frac_integral(
    h: impl Fn(f64) -> f64,
    alpha: f64,
    r: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Domain(format!("integral order must be positive, got {alpha}")));
    }
    check_radius(r)?;
    frac_integral_impl(&h, alpha, r, cfg)
}

/// Complex-valued variant: real and imaginary parts integrated separately.
pub fn frac_integral_complex(
    h: impl Fn(f64) -> Complex64,
    alpha: f64,
    r: f64,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let re = frac_integral(|x| h(x).re, alpha, r, cfg)?;
    let im = frac_integral(|x| h(x).im, alpha, r, cfg)?;
    Ok(Complex64::new(re, im))
}

fn central_derivative(g: &dyn Fn(f64) -> Result<f64>, p: u32, r: f64, h: f64) -> Result<f64> {
    Ok(match p {
        1 => (g(r + h)? - g(r - h)?) / (2.0 * h),
        2 => (g(r + h)? - 2.0 * g(r)? + g(r - h)?) / (h * h),
        3 => (g(r + 2.0 * h)? - 2.0 * g(r + h)? + 2.0 * g(r - h)? - g(r - 2.0 * h)?)
            / (2.0 * h * h * h),
        _ => unreachable!("orders above 3 rejected at construction"),
    })
}

/// Richardson extrapolation (three levels, halving steps) of the `p`-th
/// central difference of `g` at `r`. The initial step is
/// `cfg.deriv_step_factor * (1 - r)`, so the stencil never leaves the disk;
/// near the origin it shrinks to keep `r - 2h > 0`.
fn richardson_derivative(
    g: &dyn Fn(f64) -> Result<f64>,
    p: u32,
    r: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    let reach = if p == 3 { 2.0 } else { 1.0 };
    let mut h0 = cfg.deriv_step_factor * (1.0 - r);
    if r - reach * h0 <= 0.0 {
        h0 = r / (2.0 * reach);
    }
    if h0 < 1e-12 || r + reach * h0 >= 1.0 {
        return Err(Error::StencilExceedsDomain);
    }
    let d0 = central_derivative(g, p, r, h0)?;
    let d1 = central_derivative(g, p, r, h0 / 2.0)?;
    let d2 = central_derivative(g, p, r, h0 / 4.0)?;
    let r01 = (4.0 * d1 - d0) / 3.0;
    let r12 = (4.0 * d2 - d1) / 3.0;
    Ok((16.0 * r12 - r01) / 15.0)
}

/// Riemann-Liouville fractional derivative
/// `D^alpha h(r) = d^p/dr^p D^{-(p-alpha)} h(r)`.
pub fn frac_derivative(
    h: impl Fn(f64) -> f64,
    order: FracOrder,
    r: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    check_radius(r)?;
    if r == 0.0 {
        return Err(Error::StencilExceedsDomain);
    }
    let beta = order.p as f64 - order.alpha;
    let inner = cfg.tightened();
    let g: Box<dyn Fn(f64) -> Result<f64>> = if beta == 0.0 {
        Box::new(move |x: f64| Ok(h(x)))
    } else {
        Box::new(move |x: f64| frac_integral_unit(&h, beta, x, &inner))
    };
    richardson_derivative(g.as_ref(), order.p, r, cfg)
}

/// Complex-valued fractional derivative.
pub fn frac_derivative_complex(
    h: impl Fn(f64) -> Complex64,
    order: FracOrder,
    r: f64,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    let re = frac_derivative(|x| h(x).re, order, r, cfg)?;
    let im = frac_derivative(|x| h(x).im, order, r, cfg)?;
    Ok(Complex64::new(re, im))
}

/// `u_alpha(z) = r^{-alpha} D^{-alpha} u` along the ray through `z`, the
/// fractional mean whose uniform integrability characterizes kernel
/// representability. Order zero is the identity; orders in `(-1, 0)` fall
/// back to the fractional derivative of size `|alpha|`. Below `r = 1e-6`
/// the limit is taken by evaluating at `r = 1e-6`.
///
/// The radial substitution `x = r y` cancels the `r^{+-alpha}` pair exactly,
/// so the value stays relatively accurate down to the origin:
/// `u_alpha(r e^{i theta}) = 1/Gamma(alpha) int_0^1 (1-y)^{alpha-1} u(r y e^{i theta}) dy`.
pub fn u_alpha_eval(
    u: impl Fn(DiskPoint) -> f64,
    alpha: f64,
    z: DiskPoint,
    cfg: &NumericConfig,
) -> Result<f64> {
    if !alpha.is_finite() || alpha <= -1.0 {
        return Err(Error::Domain(format!("order must exceed -1, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(u(z));
    }
    let theta = z.angle();
    let r = z.radius().max(1e-6);
    let radial = move |x: f64| u(DiskPoint::new(x, theta).expect("radius in [0,1)"));
    if alpha > 0.0 {
        let out = if alpha <= 1.0 {
            // Absorb the endpoint weight as in the unit-order integral.
            let inv_alpha = 1.0 / alpha;
            quad::integrate(
                |s| radial(r * (1.0 - s.powf(inv_alpha))),
                0.0,
                1.0,
                cfg.integral_rel_tol,
                cfg.integral_abs_tol,
                cfg.max_quad_evals,
            )?
            .value
                / gamma(alpha + 1.0)
        } else {
            // The weight (1-y)^{alpha-1} is bounded for alpha >= 1.
            quad::integrate(
                |y| (1.0 - y).powf(alpha - 1.0) * radial(r * y),
                0.0,
                1.0,
                cfg.integral_rel_tol,
                cfg.integral_abs_tol,
                cfg.max_quad_evals,
            )?
            .value
                / gamma(alpha)
        };
        Ok(out)
    } else {
        let order = FracOrder::new(-alpha)?;
        let derivative = frac_derivative(radial, order, r, cfg)?;
        Ok(r.powf(-alpha) * derivative)
    }
}

/// Both sides of the fractional-integral decay bound for the boundary-power
/// kernel: `(D^{-gamma} |1 - x zeta|^{-alpha} at r, |1 - r zeta|^{-(alpha-gamma)})`
/// with `0 <= gamma < alpha` and `|zeta| <= 1`.
pub fn frac_power_sides(
    gamma_ord: f64,
    alpha: f64,
    zeta: Complex64,
    r: f64,
    cfg: &NumericConfig,
) -> Result<(f64, f64)> {
    if !(gamma_ord >= 0.0 && gamma_ord < alpha && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "orders must satisfy 0 <= gamma < alpha, got gamma={gamma_ord}, alpha={alpha}"
        )));
    }
    if zeta.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("|zeta| must be <= 1, got {}", zeta.norm())));
    }
    check_radius(r)?;
    let one = Complex64::new(1.0, 0.0);
    let lhs = if gamma_ord == 0.0 {
        (one - r * zeta).norm().powf(-alpha)
    } else {
        frac_integral(|x| (one - x * zeta).norm().powf(-alpha), gamma_ord, r, cfg)?
    };
    let rhs = (one - r * zeta).norm().powf(-(alpha - gamma_ord));
    Ok((lhs, rhs))
}
