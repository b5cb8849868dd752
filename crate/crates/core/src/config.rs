//! Shared numeric tolerances and harness thresholds.

/// Tolerances and budgets threaded through quadrature, differentiation, and
/// the verification harnesses. Every field has a tested default; CLI flags
/// override the integral/derivative tolerances.
#[derive(Debug, Clone)]
pub struct NumericConfig {
    /// Absolute tolerance for adaptive integrals.
    pub integral_abs_tol: f64,
    /// Relative tolerance for adaptive integrals.
    pub integral_rel_tol: f64,
    /// Target relative accuracy of numerical fractional derivatives.
    pub derivative_rel_tol: f64,
    /// Initial finite-difference step as a fraction of `1 - r`.
    pub deriv_step_factor: f64,
    /// Absolute tolerance of quadratures feeding difference stencils; must be
    /// far below `integral_abs_tol` or stencil division amplifies the noise.
    pub deriv_inner_abs_tol: f64,
    /// Integrand evaluation budget per adaptive call.
    pub max_quad_evals: usize,
    /// Verdict: a sequence is `Growing` when the last supremum exceeds the
    /// one `verdict_window` layers back by this factor.
    pub verdict_threshold: f64,
    /// Number of dyadic layers between the two suprema compared for a verdict.
    pub verdict_window: usize,
    /// Finest dyadic level `J` for modulus-of-continuity fits (delta = 2^-j,
    /// j = 3..=J).
    pub holder_max_level: u32,
    /// Seed for randomized sweeps; equal seeds give byte-identical reports.
    pub seed: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            integral_abs_tol: 1e-8,
            integral_rel_tol: 1e-8,
            derivative_rel_tol: 1e-5,
            deriv_step_factor: 0.02,
            deriv_inner_abs_tol: 1e-12,
            max_quad_evals: 1 << 16,
            verdict_threshold: 1.25,
            verdict_window: 4,
            holder_max_level: 12,
            seed: 0,
        }
    }
}

impl NumericConfig {
    /// Copy with tighter integral tolerances, used inside derivative stencils.
    pub(crate) fn tightened(&self) -> Self {
        Self {
            integral_abs_tol: self.deriv_inner_abs_tol,
            integral_rel_tol: self.deriv_inner_abs_tol.max(1e-13),
            ..self.clone()
        }
    }
}
