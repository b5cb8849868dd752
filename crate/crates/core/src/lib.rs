//! Numerical toolkit for harmonic functions on the unit disk whose
//! singularities sit on a closed set of boundary arcs: disk kernels,
//! radial Riemann-Liouville fractional calculus, boundary measures with
//! their primitives, and grid harnesses that fit and verify growth
//! majorants for conjugate pairs.

pub mod bounds_lab;
pub mod circle_measures;
pub mod config;
pub mod disk_geometry;
pub mod fractional;
pub mod gamma;
pub mod harmonic_eval;
pub mod kernels;
pub mod quad;

mod error;

pub use bounds_lab::{
    conjugate_majorant, fit_hypothesis, growth_order, holder_growth_experiment, majorant_transform,
    verify_conjugate_bound, GrowthProfile, Verdict, VerificationReport,
};
pub use circle_measures::{
    domination_sweep, holder_exponent, layer_cake, modulus_of_continuity, nu_bound, nu_exact,
    stieltjes_integral, CircleMeasure, Primitive,
};
pub use config::NumericConfig;
pub use disk_geometry::{build_grid, rho, scaling_gap, BoundarySet, DiskPoint, SamplingGrid};
pub use error::{Error, Result};
pub use fractional::{frac_derivative, frac_integral, frac_power_sides, u_alpha_eval, FracOrder};
pub use harmonic_eval::{
    circle_means, conj_via_schwarz, djrbashian_condition, example1, example2_sharpness,
    recover_psi, Builtin, HarmonicSpec, MeanKind,
};
pub use kernels::KernelOrder;
