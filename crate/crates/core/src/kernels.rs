//! The Schwarz kernel, its fractional-order family, and their real and
//! imaginary parts.
//!
//! `s_alpha(z) = Gamma(1+alpha) * (2 (1-z)^{-(alpha+1)} - 1)`; the order-zero
//! member is the Schwarz kernel, whose real part is the Poisson kernel. The
//! complex power uses the principal branch, which is safe because `1 - z`
//! stays in the right half-plane for `|z| < 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk_geometry::DiskPoint;
use crate::error::{Error, Result};
use crate::gamma::gamma;

/// Kernel order `alpha > -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct KernelOrder {
    alpha: f64,
}

impl KernelOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(Error::Domain(format!("kernel order must exceed -1, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// `Gamma(1 + alpha)`, the kernel's value at the origin.
    pub fn gamma_factor(self) -> f64 {
        gamma(1.0 + self.alpha)
    }
}

impl TryFrom<f64> for KernelOrder {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<KernelOrder> for f64 {
    fn from(order: KernelOrder) -> f64 {
        order.alpha
    }
}

/// Kernel evaluated from `w = 1 - z` directly. Callers that know `1 - z` to
/// full precision (approach paths to the boundary point 1) avoid the
/// cancellation in forming `1 - z` from `z`.
pub fn s_alpha_from_one_minus(one_minus_z: Complex64, order: KernelOrder) -> Complex64 {
    let exponent = -(order.alpha + 1.0);
    order.gamma_factor() * (2.0 * one_minus_z.powf(exponent) - Complex64::new(1.0, 0.0))
}

/// `S_alpha(z)` for `|z| < 1`.
pub fn s_alpha(z: Complex64, order: KernelOrder) -> Result<Complex64> {
    if z.norm() >= 1.0 || z.norm().is_nan() {
        return Err(Error::Domain(format!(
            "kernel argument must lie in the open disk, |z| = {}",
            z.norm()
        )));
    }
    Ok(s_alpha_from_one_minus(Complex64::new(1.0, 0.0) - z, order))
}

/// Real part of `S_alpha`; at order zero this is the Poisson kernel.
pub fn p_alpha(z: Complex64, order: KernelOrder) -> Result<f64> {
    Ok(s_alpha(z, order)?.re)
}

/// Imaginary part of `S_alpha`, the conjugate kernel; vanishes at the origin.
pub fn q_alpha(z: Complex64, order: KernelOrder) -> Result<f64> {
    Ok(s_alpha(z, order)?.im)
}

pub fn s_alpha_point(z: DiskPoint, order: KernelOrder) -> Complex64 {
    s_alpha_from_one_minus(Complex64::new(1.0, 0.0) - z.to_complex(), order)
}

/// Both sides of the angular derivative bound: the finite-difference
/// `|d/dt P_alpha(r e^{it})|` against `min((1-r)^{-(alpha+2)}, |t|^{-(alpha+2)})`.
/// The bound is stated for `r >= 1/2`; `step` defaults to
/// `1e-5 * max(1-r, |t|)` and must not exceed `1e-4`.
pub fn kernel_deriv_sides(
    r: f64,
    t: f64,
    order: KernelOrder,
    step: Option<f64>,
) -> Result<(f64, f64)> {
    if !(0.5..1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "angular derivative bound holds for r in [1/2, 1), got {r}"
        )));
    }
    if !t.is_finite() || t.abs() > std::f64::consts::PI {
        return Err(Error::Domain(format!("t must lie in [-pi, pi], got {t}")));
    }
    let h = match step {
        Some(h) if h > 0.0 && h <= 1e-4 => h,
        Some(h) => {
            return Err(Error::Domain(format!("step must lie in (0, 1e-4], got {h}")));
        }
        None => 1e-5 * (1.0 - r).max(t.abs()),
    };
    let p = |angle: f64| -> f64 {
        s_alpha_from_one_minus(
            Complex64::new(1.0, 0.0) - Complex64::from_polar(r, angle),
            order,
        )
        .re
    };
    let lhs = ((p(t + h) - p(t - h)) / (2.0 * h)).abs();
    let decay = order.alpha + 2.0;
    let rhs = (1.0 - r).powf(-decay).min(t.abs().powf(-decay));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use std::f64::consts::PI;

    fn order(alpha: f64) -> KernelOrder {
        KernelOrder::new(alpha).unwrap()
    }

    #[test]
    fn value_at_origin_is_gamma_factor() {
        for alpha in [-0.5, 0.0, 0.7, 1.5, 3.0] {
            let s = s_alpha(Complex64::new(0.0, 0.0), order(alpha)).unwrap();
            assert!((s.re - gamma(1.0 + alpha)).abs() < 1e-14 * gamma(1.0 + alpha).abs());
            assert_eq!(s.im, 0.0);
        }
    }

    #[test]
    fn order_zero_is_schwarz_kernel() {
        let z = Complex64::new(0.21, -0.67);
        let s = s_alpha(z, order(0.0)).unwrap();
        let schwarz = 2.0 / (Complex64::new(1.0, 0.0) - z) - 1.0;
        assert!((s - schwarz).norm() < 1e-14 * schwarz.norm());
    }

    #[test]
    fn order_one_at_half() {
        // Gamma(2) * (2 / (1/2)^2 - 1) = 7
        let s = s_alpha(Complex64::new(0.5, 0.0), order(1.0)).unwrap();
        assert!((s.re - 7.0).abs() < 1e-13);
        assert!(s.im.abs() < 1e-14);
    }

    #[test]
    fn poisson_on_real_axis() {
        for r in [0.0, 0.3, 0.9] {
            let z = Complex64::new(r, 0.0);
            let p = p_alpha(z, order(0.0)).unwrap();
            assert!((p - (1.0 + r) / (1.0 - r)).abs() < 1e-13);
            assert_eq!(q_alpha(z, order(0.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn conjugate_kernel_formula() {
        // Q_0(z) = 2 Im z / |1-z|^2
        for (x, y) in [(0.2, 0.5), (-0.4, 0.1), (0.6, -0.7)] {
            let z = Complex64::new(x, y);
            let q = q_alpha(z, order(0.0)).unwrap();
            let want = 2.0 * y / (Complex64::new(1.0, 0.0) - z).norm_sqr();
            assert!((q - want).abs() < 1e-13 * want.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_boundary_argument() {
        assert!(s_alpha(Complex64::new(1.0, 0.0), order(0.5)).is_err());
        assert!(s_alpha(Complex64::new(0.8, 0.8), order(0.5)).is_err());
    }

    #[test]
    fn modulus_identity_and_conjugate_symmetry() {
        for alpha in [0.0, 0.5, 1.5] {
            for (r, t) in [(0.3, 0.7), (0.9, 2.5), (0.99, 0.01)] {
                let z = Complex64::from_polar(r, t);
                let s = s_alpha(z, order(alpha)).unwrap();
                let p = s.re;
                let q = s.im;
                assert!((p * p + q * q - s.norm_sqr()).abs() <= 1e-12 * s.norm_sqr());
                let s_conj = s_alpha(z.conj(), order(alpha)).unwrap();
                assert!((s_conj.re - p).abs() <= 1e-12 * p.abs().max(1.0));
                assert!((s_conj.im + q).abs() <= 1e-12 * q.abs().max(1.0));
            }
        }
    }

    #[test]
    fn mean_value_over_circles() {
        for alpha in [0.0, 0.75, 2.0] {
            for radius in [0.2, 0.8] {
                let re = integrate(
                    |t| s_alpha(Complex64::from_polar(radius, t), order(alpha)).unwrap().re,
                    0.0,
                    2.0 * PI,
                    1e-11,
                    1e-12,
                    1 << 14,
                )
                .unwrap()
                .value
                    / (2.0 * PI);
                let im = integrate(
                    |t| s_alpha(Complex64::from_polar(radius, t), order(alpha)).unwrap().im,
                    0.0,
                    2.0 * PI,
                    1e-11,
                    1e-12,
                    1 << 14,
                )
                .unwrap()
                .value
                    / (2.0 * PI);
                assert!(
                    (re - gamma(1.0 + alpha)).abs() < 1e-8,
                    "alpha={alpha} radius={radius} re={re}"
                );
                assert!(im.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn deriv_sides_examples() {
        let (lhs, rhs) = kernel_deriv_sides(0.5, PI, order(0.0), None).unwrap();
        assert!(lhs.is_finite());
        assert!((rhs - PI.powi(-2)).abs() < 1e-12);

        let (_, rhs0) = kernel_deriv_sides(0.9, 0.0, order(0.0), None).unwrap();
        assert!((rhs0 - 100.0).abs() < 1e-9);

        assert!(kernel_deriv_sides(0.4, 0.1, order(0.0), None).is_err());
        assert!(kernel_deriv_sides(0.6, 0.1, order(0.0), Some(1e-3)).is_err());
    }

    /// Sweep the ratio lhs/rhs over dyadic (r, t); the supremum must be
    /// stable between the two finest refinement levels.
    #[test]
    fn deriv_bound_sweep_is_stable() {
        let sup_at = |level: i32, alpha: f64| -> f64 {
            let mut sup: f64 = 0.0;
            for j in 1..=level {
                let r = 1.0 - 0.5f64.powi(j);
                for i in 0..=level {
                    for sign in [-1.0, 1.0] {
                        let t = sign * 0.5f64.powi(i) * PI;
                        if t.abs() > PI {
                            continue;
                        }
                        let (lhs, rhs) =
                            kernel_deriv_sides(r.max(0.5), t, order(alpha), None).unwrap();
                        sup = sup.max(lhs / rhs);
                    }
                }
            }
            sup
        };
        for alpha in [0.0, 1.0] {
            let coarse = sup_at(15, alpha);
            let fine = sup_at(16, alpha);
            assert!(fine.is_finite());
            assert!(
                (fine - coarse).abs() <= 0.1 * coarse,
                "alpha={alpha}: {coarse} -> {fine}"
            );
        }
    }
}
