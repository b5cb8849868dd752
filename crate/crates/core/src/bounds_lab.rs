//! Verification harnesses: fit the constant in a growth hypothesis
//! `|u(z)| <= C0 (1-|z|)^gamma / rho^q(z)` over a layered grid, verify the
//! matching conjugate majorant, estimate orders of growth, and run the
//! joint smoothness/growth experiment for measures.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_measures::{
    holder_exponent, modulus_of_continuity, CircleMeasure, HolderEstimate,
};
use crate::config::NumericConfig;
use crate::disk_geometry::{rho, BoundarySet, DiskPoint, GridLayer, SamplingGrid};
use crate::error::{Error, Result};
use crate::harmonic_eval::{recover_psi, recovery_radii, HarmonicSpec};
use crate::quad;

/// Hypothesis exponents `q > 0`, `gamma <= q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    q: f64,
    gamma: f64,
}

impl GrowthProfile {
    pub fn new(q: f64, gamma: f64) -> Result<Self> {
        if q <= 0.0 || !q.is_finite() || !gamma.is_finite() || gamma > q {
            return Err(Error::Domain(format!(
                "profile needs q > 0 and gamma <= q, got q={q}, gamma={gamma}"
            )));
        }
        Ok(Self { q, gamma })
    }

    pub fn q(self) -> f64 {
        self.q
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }
}

/// The conjugate-bound majorant without its constant, by parameter case:
/// `log(1/(1-|z|)) / rho^{q-gamma}` for `q > gamma >= 0`,
/// `(1-|z|)^gamma / rho^q` for `q > 0 > gamma`,
/// `log(1/rho)` for `q = gamma > 0`.
pub fn majorant_value(one_minus_r: f64, dist: f64, q: f64, gamma: f64) -> Result<f64> {
    if q > 0.0 && gamma >= 0.0 && q > gamma {
        Ok((1.0 / one_minus_r).ln() / dist.powf(q - gamma))
    } else if q > 0.0 && gamma < 0.0 {
        Ok(one_minus_r.powf(gamma) / dist.powf(q))
    } else if q > 0.0 && q == gamma {
        Ok((1.0 / dist).ln())
    } else {
        Err(Error::ProfileOutsideCases)
    }
}

/// Case-dispatched majorant at a grid point; stated for `|z| >= 1/2`.
pub fn conjugate_majorant(
    z: DiskPoint,
    q: f64,
    gamma: f64,
    set: &BoundarySet,
) -> Result<f64> {
    if z.radius() < 0.5 {
        return Err(Error::Domain(format!(
            "majorant is stated for |z| in [1/2, 1), got {}",
            z.radius()
        )));
    }
    majorant_value(1.0 - z.radius(), rho(z, set)?, q, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub k: u32,
    pub sup: f64,
    /// `[r, theta]` of the point attaining the layer supremum.
    pub argmax: [f64; 2],
}

/// Layered sweep statistics with the fitted constant and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub layers: Vec<LayerRecord>,
    pub constant: f64,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn layer_radius(record: &LayerRecord) -> f64 {
        1.0 - 0.5f64.powi(record.k as i32)
    }
}

/// Verdict over a sequence of per-layer suprema. `Bounded` requires the
/// ratio of the last two suprema below `threshold` AND the last supremum
/// below `threshold` times the one `window` layers earlier: a slow power
/// drift of `2^{eps k}` with small `eps` slips past any adjacent-layer
/// threshold but compounds across the window.
fn sequence_verdict(sups: &[f64], window: usize, threshold: f64) -> Verdict {
    if sups.len() < 2 || sups.iter().any(|s| !s.is_finite()) {
        return Verdict::Inconclusive;
    }
    let k = sups.len() - 1;
    if sups[k] == 0.0 {
        return Verdict::Bounded;
    }
    let w = window.min(k);
    let base = sups[k - w];
    let window_ratio = if base == 0.0 { f64::INFINITY } else { sups[k] / base };
    let last_ratio = if sups[k - 1] == 0.0 { f64::INFINITY } else { sups[k] / sups[k - 1] };
    if window_ratio < threshold && last_ratio < threshold {
        Verdict::Bounded
    } else if window_ratio >= threshold && last_ratio >= 1.0 {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    }
}

struct LayerSweep {
    sup: f64,
    argmax: [f64; 2],
    rho_argmax: f64,
    skipped: usize,
    total: usize,
}

/// Evaluate `f` over one layer; `f` returns `Ok(None)` to exclude a point
/// (outside the quantity's domain) and `Err` for evaluation failures, which
/// are counted against the skip budget. Ties prefer the smallest `rho`.
fn sweep_layer(
    layer: &GridLayer,
    set: &BoundarySet,
    f: &(dyn Fn(DiskPoint, f64) -> Result<Option<f64>> + Sync),
) -> Result<LayerSweep> {
    let mut sup = f64::NEG_INFINITY;
    let mut argmax = [layer.radius, 0.0];
    let mut rho_argmax = f64::INFINITY;
    let mut skipped = 0usize;
    let mut seen = 0usize;
    for &t in &layer.angles {
        let z = DiskPoint::new(layer.radius, t)?;
        let dist = rho(z, set)?;
        match f(z, dist) {
            Ok(Some(v)) => {
                seen += 1;
                if v > sup || (v == sup && dist < rho_argmax) {
                    sup = v;
                    argmax = [layer.radius, t];
                    rho_argmax = dist;
                }
            }
            Ok(None) => {}
            Err(_) => skipped += 1,
        }
    }
    if seen == 0 {
        sup = 0.0;
        rho_argmax = 1.0 - layer.radius;
    }
    Ok(LayerSweep { sup, argmax, rho_argmax, skipped, total: layer.angles.len() })
}

fn sweep_grid(
    grid: &SamplingGrid,
    set: &BoundarySet,
    f: &(dyn Fn(DiskPoint, f64) -> Result<Option<f64>> + Sync),
) -> Result<Vec<(u32, LayerSweep)>> {
    let sweeps: Vec<Result<(u32, LayerSweep)>> = grid
        .layers()
        .par_iter()
        .map(|layer| sweep_layer(layer, set, f).map(|s| (layer.depth, s)))
        .collect();
    let mut out = Vec::with_capacity(sweeps.len());
    let mut skipped = 0usize;
    let mut total = 0usize;
    for item in sweeps {
        let (depth, sweep) = item?;
        skipped += sweep.skipped;
        total += sweep.total;
        out.push((depth, sweep));
    }
    if total > 0 && skipped * 100 > total {
        return Err(Error::TooManySkips { skipped, total });
    }
    Ok(out)
}

fn report_from_sweeps(sweeps: Vec<(u32, LayerSweep)>, cfg: &NumericConfig) -> VerificationReport {
    let layers: Vec<LayerRecord> = sweeps
        .iter()
        .map(|(k, s)| LayerRecord { k: *k, sup: s.sup, argmax: s.argmax })
        .collect();
    let sups: Vec<f64> = layers.iter().map(|l| l.sup).collect();
    let constant = sups.iter().cloned().fold(0.0f64, f64::max);
    let verdict = sequence_verdict(&sups, cfg.verdict_window, cfg.verdict_threshold);
    VerificationReport { layers, constant, verdict }
}

/// Fit the hypothesis constant: per-layer suprema of
/// `|u(z)| rho^q(z) (1-|z|)^{-gamma}`. The global supremum is the fitted
/// `C0`; the verdict reports whether the layer trend is bounded.
pub fn fit_hypothesis(
    u: &(dyn Fn(DiskPoint) -> Result<f64> + Sync),
    profile: GrowthProfile,
    set: &BoundarySet,
    grid: &SamplingGrid,
    cfg: &NumericConfig,
) -> Result<VerificationReport> {
    let q = profile.q();
    let gamma = profile.gamma();
    let sweeps = sweep_grid(grid, set, &|z, dist| {
        let value = u(z)?;
        Ok(Some(value.abs() * dist.powf(q) * (1.0 - z.radius()).powf(-gamma)))
    })?;
    Ok(report_from_sweeps(sweeps, cfg))
}

/// Diagnostic for the logarithmic factor in the first majorant case: the
/// same ratio fitted without the log, with the slope of that ratio against
/// the layer's `log(1/(1-r))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogFactorProbe {
    pub ratios: Vec<f64>,
    pub slope_vs_log: f64,
    pub grows_like_log: bool,
}

/// Conjugate verification: per-layer suprema of `|u~(z)| / majorant(z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugateVerification {
    pub report: VerificationReport,
    pub log_probe: Option<LogFactorProbe>,
}

pub fn verify_conjugate_bound(
    u_conj: &(dyn Fn(DiskPoint) -> Result<f64> + Sync),
    profile: GrowthProfile,
    set: &BoundarySet,
    grid: &SamplingGrid,
    cfg: &NumericConfig,
) -> Result<ConjugateVerification> {
    let q = profile.q();
    let gamma = profile.gamma();
    let sweeps = sweep_grid(grid, set, &|z, dist| {
        let m = majorant_value(1.0 - z.radius(), dist, q, gamma)?;
        if m <= 0.0 {
            // The case-three expression is positive only for rho < 1.
            return Ok(None);
        }
        Ok(Some(u_conj(z)?.abs() / m))
    })?;
    let report = report_from_sweeps(sweeps, cfg);

    // Log-factor probe applies to the first case only.
    let log_probe = if gamma >= 0.0 && q > gamma {
        let sweeps = sweep_grid(grid, set, &|z, dist| {
            Ok(Some(u_conj(z)?.abs() * dist.powf(q - gamma)))
        })?;
        let ratios: Vec<f64> = sweeps.iter().map(|(_, s)| s.sup).collect();
        let xs: Vec<f64> = sweeps
            .iter()
            .map(|(k, _)| (*k as f64) * std::f64::consts::LN_2)
            .collect();
        let n = ratios.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ratios.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ratios).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let first = ratios.first().copied().unwrap_or(0.0);
        let last = ratios.last().copied().unwrap_or(0.0);
        Some(LogFactorProbe {
            slope_vs_log: slope,
            grows_like_log: slope > 0.0 && last > 1.5 * first,
            ratios,
        })
    } else {
        None
    };
    Ok(ConjugateVerification { report, log_probe })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthLayer {
    pub k: u32,
    pub sup: f64,
    pub rho_argmax: f64,
    pub argmax: [f64; 2],
}

/// Estimated order of growth: the infimum power `p` with `|u| rho^p` bounded,
/// read off as the regression slope of `log sup |u|` against `log(1/rho)` at
/// the layer argmax, restricted to layers already in the asymptotic regime
/// (`rho < 0.1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthOrder {
    pub sigma: f64,
    pub is_zero: bool,
    pub layers: Vec<GrowthLayer>,
}

pub fn growth_order(
    u: &(dyn Fn(DiskPoint) -> Result<f64> + Sync),
    set: &BoundarySet,
    grid: &SamplingGrid,
    _cfg: &NumericConfig,
) -> Result<GrowthOrder> {
    if grid.max_depth() < 12 {
        return Err(Error::Domain("growth estimation needs grid depth >= 12".into()));
    }
    let sweeps = sweep_grid(grid, set, &|z, _| Ok(Some(u(z)?.abs())))?;
    let layers: Vec<GrowthLayer> = sweeps
        .iter()
        .map(|(k, s)| GrowthLayer { k: *k, sup: s.sup, rho_argmax: s.rho_argmax, argmax: s.argmax })
        .collect();
    if layers.iter().all(|l| l.sup < 1e-300) {
        return Ok(GrowthOrder { sigma: 0.0, is_zero: true, layers });
    }
    // An overflowed supremum certainly outgrew every tested power.
    if layers.iter().any(|l| !l.sup.is_finite()) {
        return Ok(GrowthOrder { sigma: f64::INFINITY, is_zero: false, layers });
    }
    let points: Vec<(f64, f64)> = layers
        .iter()
        .filter(|l| l.rho_argmax < 0.1 && l.sup > 0.0)
        .map(|l| ((1.0 / l.rho_argmax).ln(), l.sup.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::Domain(
            "too few asymptotic layers (rho < 0.1) for a growth fit".into(),
        ));
    }
    let slope_of = |pts: &[(f64, f64)]| -> f64 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    };
    let slope = slope_of(&points);
    let half = points.len() / 2;
    let early = slope_of(&points[..half.max(2)]);
    let late = slope_of(&points[half.min(points.len() - 2)..]);
    // Super-power growth: the local exponent keeps climbing at depth.
    let sigma = if late > early + 1.0 && late > 1.5 * early.abs().max(0.5) {
        f64::INFINITY
    } else if slope.abs() < 1e-9 {
        0.0
    } else {
        slope.max(0.0)
    };
    Ok(GrowthOrder { sigma, is_zero: false, layers })
}

/// The growth transform `int_{1/2}^x phi(t)/t dt` that majorizes conjugate
/// means of functions with almost-increasing majorant `phi`.
pub fn majorant_transform(
    phi: impl Fn(f64) -> f64,
    x: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    if x < 0.5 || x.is_nan() {
        return Err(Error::Domain(format!("transform argument must be >= 1/2, got {x}")));
    }
    if x == 0.5 {
        return Ok(0.0);
    }
    Ok(quad::integrate(
        |t| phi(t) / t,
        0.5,
        x,
        cfg.integral_rel_tol,
        cfg.integral_abs_tol,
        cfg.max_quad_evals,
    )?
    .value)
}

/// Check `phi(x2)/x2^a <= c * phi(x1)/x1^a` over every sampled pair
/// `x2 > x1 >= 1/2`.
pub fn almost_increasing_check(
    phi: impl Fn(f64) -> f64,
    a: f64,
    c: f64,
    samples: &[f64],
) -> Result<bool> {
    if a <= 0.0 || a.is_nan() || c < 1.0 || c.is_nan() {
        return Err(Error::Domain(format!("need a > 0 and c >= 1, got a={a}, c={c}")));
    }
    let mut xs: Vec<f64> = samples.iter().copied().filter(|&x| x >= 0.5).collect();
    xs.sort_by(f64::total_cmp);
    let scaled: Vec<f64> = xs.iter().map(|&x| phi(x) / x.powf(a)).collect();
    let mut running_min = f64::INFINITY;
    for &v in &scaled {
        if v > c * running_min {
            return Ok(false);
        }
        running_min = running_min.min(v);
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseCheck {
    /// `(delta, omega_E(delta) * delta^{-gamma} / log(1/delta))` over dyadic deltas.
    pub rows: Vec<(f64, f64)>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoverySpot {
    pub theta: f64,
    pub recovered: f64,
    pub expected: f64,
}

/// Joint smoothness/growth experiment for a boundary measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderGrowthReport {
    pub gamma_hat: HolderEstimate,
    /// Exponent used for the growth fit: `alpha + 1 - min(gamma_hat, 1)`.
    pub profile_q: f64,
    pub hypothesis: VerificationReport,
    /// Present when the hypothesis fit is bounded.
    pub converse: Option<ConverseCheck>,
    /// Radial-limit recovery compared against `2 pi mu([0, theta))` at a few
    /// continuity points.
    pub recovery_checks: Vec<RecoverySpot>,
}

/// Direction (i): measure the Hölder exponent of the primitive on `E`, then
/// fit `|u| rho^{alpha + 1 - gamma_hat}`. Direction (ii): when that fit is
/// bounded, check that `omega_E(delta) delta^{-gamma} / log(1/delta)` stays
/// bounded over dyadic `delta`.
pub fn holder_growth_experiment(
    mu: &CircleMeasure,
    alpha: f64,
    gamma_target: f64,
    set: &BoundarySet,
    grid: &SamplingGrid,
    with_recovery_checks: bool,
    cfg: &NumericConfig,
) -> Result<HolderGrowthReport> {
    if !(0.0 < gamma_target && gamma_target < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie strictly inside (0, 1), got {gamma_target}"
        )));
    }
    if alpha < 0.0 || alpha.is_nan() {
        return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
    }
    let support = mu.support_set()?;
    if !support.contained_in(set, 1e-9) {
        return Err(Error::SupportEscapesBoundary);
    }

    let psi = mu.primitive();
    let mut gamma_hat = holder_exponent(&psi, set, cfg.holder_max_level, cfg)?;
    // On a degenerate set the pairwise modulus cannot see an atom sitting on
    // it, yet the measure is as rough as possible there: effective gamma 0.
    if gamma_hat.gamma_hat.is_infinite()
        && mu
            .atoms()
            .iter()
            .any(|&(t, m)| m != 0.0 && set.contains_angle(t))
    {
        gamma_hat.gamma_hat = 0.0;
    }
    let spec = HarmonicSpec::new(mu.clone(), alpha)?;
    let u = |z: DiskPoint| spec.u(z, cfg);

    let q = (alpha + 1.0 - gamma_hat.gamma_hat.min(1.0)).max(0.05);
    let profile = GrowthProfile::new(q, 0.0)?;
    let hypothesis = fit_hypothesis(&u, profile, set, grid, cfg)?;

    let converse = if hypothesis.verdict == Verdict::Bounded {
        let mut rows = Vec::new();
        for j in 3..=cfg.holder_max_level {
            let delta = 0.5f64.powi(j as i32);
            let omega = modulus_of_continuity(&psi, set, delta)?;
            rows.push((delta, omega * delta.powf(-gamma_target) / (1.0 / delta).ln()));
        }
        let ratios: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let bounded =
            sequence_verdict(&ratios, cfg.verdict_window, cfg.verdict_threshold) == Verdict::Bounded;
        Some(ConverseCheck { rows, bounded })
    } else {
        None
    };

    let mut recovery_checks = Vec::new();
    if with_recovery_checks {
        let radii = recovery_radii(10)?;
        let atom_angles: Vec<f64> = mu.atoms().iter().map(|&(t, _)| t).collect();
        for base in [2.3, 4.1, 5.9] {
            let mut theta = base;
            while atom_angles.iter().any(|&a| (a - theta).abs() < 0.05) {
                theta += 0.07;
            }
            let recovered = recover_psi(&spec, theta, &radii, cfg)?;
            recovery_checks.push(RecoverySpot {
                theta,
                recovered,
                expected: TAU * psi.eval(theta),
            });
        }
    }

    Ok(HolderGrowthReport { gamma_hat, profile_q: q, hypothesis, converse, recovery_checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_grid;
    use crate::kernels::{s_alpha_point, KernelOrder};

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    fn point_set() -> BoundarySet {
        BoundarySet::point(0.0)
    }

    fn poisson(z: DiskPoint) -> Result<f64> {
        Ok(s_alpha_point(z, KernelOrder::new(0.0).unwrap()).re)
    }

    fn poisson_conj(z: DiskPoint) -> Result<f64> {
        Ok(s_alpha_point(z, KernelOrder::new(0.0).unwrap()).im)
    }

    #[test]
    fn majorant_case_plugins() {
        // Case 1: log(1/(1-|z|)) / rho^{q-gamma}
        let v = majorant_value((-1.0f64).exp(), 0.5, 2.0, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        // Case 2: (1-|z|)^gamma / rho^q
        let v = majorant_value(0.25, 0.5, 1.0, -1.0).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
        // Case 3: log(1/rho)
        let v = majorant_value(0.3, (-2.0f64).exp(), 1.0, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!(matches!(majorant_value(0.3, 0.5, 0.0, 0.0), Err(Error::ProfileOutsideCases)));
    }

    #[test]
    fn majorant_domain_and_monotonicity() {
        let set = point_set();
        assert!(conjugate_majorant(DiskPoint::new(0.3, 0.0).unwrap(), 2.0, 1.0, &set).is_err());

        // Cases 1 and 3 increase as rho decreases at fixed |z|.
        for (q, g) in [(2.0, 1.0), (1.0, 1.0)] {
            let mut prev = f64::NEG_INFINITY;
            for t in [2.0, 1.0, 0.5, 0.25] {
                let z = DiskPoint::new(0.75, t).unwrap();
                let v = conjugate_majorant(z, q, g, &set).unwrap();
                assert!(v > prev, "q={q} gamma={g} t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn profile_validation() {
        assert!(GrowthProfile::new(0.0, 0.0).is_err());
        assert!(GrowthProfile::new(1.0, 2.0).is_err());
        assert!(GrowthProfile::new(1.0, -3.0).is_ok());
    }

    #[test]
    fn verdict_rules() {
        let c = cfg();
        let w = c.verdict_window;
        let t = c.verdict_threshold;
        // Decaying: bounded.
        let dec: Vec<f64> = (1..=12).map(|k| 10.0 / k as f64).collect();
        assert_eq!(sequence_verdict(&dec, w, t), Verdict::Bounded);
        // Slow power growth 2^{k/4}: invisible to adjacent layers, caught
        // over the window.
        let slow: Vec<f64> = (1..=12).map(|k| 2f64.powf(k as f64 / 4.0)).collect();
        assert_eq!(sequence_verdict(&slow, w, t), Verdict::Growing);
        // All zero: bounded.
        assert_eq!(sequence_verdict(&[0.0, 0.0, 0.0], w, t), Verdict::Bounded);
        // Oscillating spike: inconclusive.
        let osc = [1.0, 1.0, 1.0, 1.0, 8.0, 1.0, 1.0, 4.0, 1.0, 1.0, 16.0, 0.5];
        assert_ne!(sequence_verdict(&osc, w, t), Verdict::Growing);
        assert_eq!(sequence_verdict(&[f64::NAN, 1.0], w, t), Verdict::Inconclusive);
    }

    #[test]
    fn hypothesis_fit_poisson_pair() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 14, 32).unwrap();
        // P_0 with (q, gamma) = (2, 1): the layer constants stabilize near 2.
        let profile = GrowthProfile::new(2.0, 1.0).unwrap();
        let report = fit_hypothesis(&poisson, profile, &set, &grid, &c).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert!(report.constant < 4.1, "C0 = {}", report.constant);
        assert!(report.constant > 1.0);

        // Constant function with (q, gamma) = (1, 0): C0 = sup rho <= 2.
        let one = |_: DiskPoint| Ok(1.0);
        let profile = GrowthProfile::new(1.0, 0.0).unwrap();
        let report = fit_hypothesis(&one, profile, &set, &grid, &c).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert!(report.constant <= 2.0 + 1e-12);

        // Order-alpha kernel atom against any slightly padded exponent.
        for alpha in [0.5, 1.0] {
            let order = KernelOrder::new(alpha).unwrap();
            let u = move |z: DiskPoint| -> crate::Result<f64> {
                Ok(s_alpha_point(z, order).re)
            };
            let profile = GrowthProfile::new(alpha + 1.0 + 0.1, 0.0).unwrap();
            let report = fit_hypothesis(&u, profile, &set, &grid, &c).unwrap();
            assert_eq!(report.verdict, Verdict::Bounded, "alpha={alpha}");
        }
    }

    #[test]
    fn conjugate_verification_positive_and_negative_controls() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 20, 32).unwrap();

        let good = GrowthProfile::new(2.0, 1.0).unwrap();
        let verification = verify_conjugate_bound(&poisson_conj, good, &set, &grid, &c).unwrap();
        assert_eq!(verification.report.verdict, Verdict::Bounded);
        assert!(verification.report.constant.is_finite());

        // q short by 0.25: the ratio drifts like rho^{-1/4} and must be
        // flagged as growing.
        let bad = GrowthProfile::new(1.75, 1.0).unwrap();
        let verification = verify_conjugate_bound(&poisson_conj, bad, &set, &grid, &c).unwrap();
        assert_eq!(verification.report.verdict, Verdict::Growing);

        // Zero conjugate: ratio identically zero.
        let zero = |_: DiskPoint| Ok(0.0);
        let profile = GrowthProfile::new(1.0, 0.0).unwrap();
        let verification = verify_conjugate_bound(&zero, profile, &set, &grid, &c).unwrap();
        assert_eq!(verification.report.verdict, Verdict::Bounded);
        assert_eq!(verification.report.constant, 0.0);
    }

    #[test]
    fn density_measure_pair_verifies() {
        // A pair generated from a bounded density: both the hypothesis fit
        // and the conjugate check come out bounded.
        let c = cfg();
        let mu = CircleMeasure::new(
            vec![],
            vec![crate::circle_measures::DensityPiece {
                a: 0.0,
                b: 1.0,
                kind: crate::circle_measures::PieceKind::Linear { slope: 0.3, offset: 0.4 },
            }],
            None,
        )
        .unwrap();
        let spec = HarmonicSpec::new(mu, 0.0).unwrap();
        let set = spec.support().unwrap();
        let grid = crate::build_grid(&set, 12, 24).unwrap();
        let profile = GrowthProfile::new(1.0, 0.0).unwrap();
        let u = |z: DiskPoint| spec.u(z, &c);
        let v = |z: DiskPoint| spec.u_conjugate(z, &c);
        let fit = fit_hypothesis(&u, profile, &set, &grid, &c).unwrap();
        assert_eq!(fit.verdict, Verdict::Bounded);
        let verification = verify_conjugate_bound(&v, profile, &set, &grid, &c).unwrap();
        assert_eq!(verification.report.verdict, Verdict::Bounded);
    }

    #[test]
    fn full_circle_bounded_function_conjugate_rate() {
        // For E the whole circle and bounded u, the conjugate of the Poisson
        // pair scaled to be bounded obeys the classical log(1/(1-|z|)) rate:
        // with q = gamma there is no positive case-1 exponent, so probe with
        // profile (q, gamma) = (1, 1), whose majorant is log(1/rho).
        let c = cfg();
        let set = BoundarySet::full_circle();
        let grid = build_grid(&set, 16, 64).unwrap();
        // Bounded harmonic function with unbounded conjugate concentration:
        // u(z) = arg-type function Im log(1/(1-z)) is conjugate to
        // v = Re log(1/(1-z)) = log |1/(1-z)|, which grows like log(1/rho).
        let v = |z: DiskPoint| {
            let one_minus = num_complex::Complex64::new(1.0, 0.0) - z.to_complex();
            Ok(-(one_minus.norm().ln()))
        };
        let profile = GrowthProfile::new(1.0, 1.0).unwrap();
        let verification = verify_conjugate_bound(&v, profile, &set, &grid, &c).unwrap();
        assert_eq!(verification.report.verdict, Verdict::Bounded);
    }

    #[test]
    fn too_many_skips_is_reported() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 8, 16).unwrap();
        let broken = |_: DiskPoint| -> Result<f64> { Err(Error::NonFinite("test".into())) };
        let profile = GrowthProfile::new(1.0, 0.0).unwrap();
        assert!(matches!(
            fit_hypothesis(&broken, profile, &set, &grid, &c),
            Err(Error::TooManySkips { .. })
        ));
    }

    #[test]
    fn growth_order_poisson_and_constant() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 16, 32).unwrap();

        let order = growth_order(&poisson, &set, &grid, &c).unwrap();
        assert!((order.sigma - 1.0).abs() < 0.05, "sigma = {}", order.sigma);

        let one = |_: DiskPoint| Ok(1.0);
        let order = growth_order(&one, &set, &grid, &c).unwrap();
        assert_eq!(order.sigma, 0.0);

        let zero = |_: DiskPoint| Ok(0.0);
        let order = growth_order(&zero, &set, &grid, &c).unwrap();
        assert!(order.is_zero);
        assert_eq!(order.sigma, 0.0);

        let shallow = build_grid(&set, 8, 32).unwrap();
        assert!(growth_order(&poisson, &set, &shallow, &c).is_err());
    }

    #[test]
    fn growth_order_fractional_atoms() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 16, 32).unwrap();
        for alpha in [0.5, 1.0] {
            let order = KernelOrder::new(alpha).unwrap();
            let u = move |z: DiskPoint| Ok(s_alpha_point(z, order).re);
            let got = growth_order(&u, &set, &grid, &c).unwrap();
            assert!(
                (got.sigma - (alpha + 1.0)).abs() < 0.05,
                "alpha={alpha}: sigma={}",
                got.sigma
            );
        }
    }

    #[test]
    fn growth_order_scaling_invariance() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 14, 32).unwrap();
        let scaled = |z: DiskPoint| poisson(z).map(|v| 37.5 * v);
        let a = growth_order(&poisson, &set, &grid, &c).unwrap();
        let b = growth_order(&scaled, &set, &grid, &c).unwrap();
        assert!((a.sigma - b.sigma).abs() < 1e-6);
    }

    #[test]
    fn growth_order_super_power_marker() {
        let c = cfg();
        let set = point_set();
        let grid = build_grid(&set, 16, 32).unwrap();
        // Hard overflow: the supremum leaves f64 range.
        let explosive = |z: DiskPoint| {
            let dist = rho(z, &point_set()).unwrap();
            Ok((0.5 / dist).exp())
        };
        let got = growth_order(&explosive, &set, &grid, &c).unwrap();
        assert!(got.sigma.is_infinite(), "sigma = {}", got.sigma);

        // Finite but super-power: the local exponent keeps climbing.
        let stretched = |z: DiskPoint| {
            let dist = rho(z, &point_set()).unwrap();
            Ok((0.05 * dist.powf(-0.5)).exp())
        };
        let got = growth_order(&stretched, &set, &grid, &c).unwrap();
        assert!(got.sigma.is_infinite(), "sigma = {}", got.sigma);
    }

    #[test]
    fn transform_examples() {
        let c = cfg();
        // phi = 1: log(2x).
        for x in [0.5, 1.0, 4.0] {
            let v = majorant_transform(|_| 1.0, x, &c).unwrap();
            assert!((v - (2.0 * x).ln()).abs() < 1e-10, "x={x}");
        }
        // phi = t^a: (x^a - 2^{-a}) / a.
        let a = 0.7;
        let v = majorant_transform(|t| t.powf(a), 3.0, &c).unwrap();
        assert!((v - (3f64.powf(a) - 0.5f64.powf(a)) / a).abs() < 1e-10);
        // phi = t: x - 1/2.
        let v = majorant_transform(|t| t, 2.5, &c).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        assert!(majorant_transform(|_| 1.0, 0.4, &c).is_err());
    }

    #[test]
    fn transform_dominates_log_for_nondecreasing_phi() {
        let c = cfg();
        let phi = |t: f64| 1.0 + t.sqrt();
        let mut prev = 0.0;
        for i in 1..=10 {
            let x = 0.5 + i as f64 * 0.5;
            let v = majorant_transform(phi, x, &c).unwrap();
            assert!(v >= prev);
            assert!(v >= phi(0.5) * (2.0 * x).ln() - 1e-10);
            prev = v;
        }
    }

    #[test]
    fn almost_increasing_examples() {
        let xs: Vec<f64> = (0..50).map(|i| 0.5 * 1.15f64.powi(i)).collect();
        // phi growing slower than x^a: the scaled function decays, so every
        // pair satisfies the bound with c = 1.
        assert!(almost_increasing_check(|x| x.powf(0.5), 1.0, 1.0, &xs).unwrap());
        // phi outgrowing x^a violates the condition...
        assert!(!almost_increasing_check(|x| x * x, 1.0, 1.0, &xs).unwrap());
        // ... unless the constant absorbs the drift over a short range.
        let short: Vec<f64> = vec![0.5, 0.55, 0.6];
        assert!(almost_increasing_check(|x| x * x, 1.0, 2.0, &short).unwrap());
        assert!(almost_increasing_check(|x| x, 0.0, 1.0, &xs).is_err());
    }

    #[test]
    fn experiment_atom_measure() {
        let c = cfg();
        let mu = CircleMeasure::from_atoms(&[(0.0, 1.0)]).unwrap();
        let set = point_set();
        let grid = build_grid(&set, 14, 32).unwrap();
        let report =
            holder_growth_experiment(&mu, 0.0, 0.5, &set, &grid, false, &c).unwrap();
        // A point mass has zero effective smoothness on its support point,
        // so the fitted exponent is alpha + 1 = 1.
        assert!(report.gamma_hat.gamma_hat.abs() < 0.05 || report.gamma_hat.gamma_hat.is_infinite());
        assert_eq!(report.hypothesis.verdict, Verdict::Bounded);
    }

    #[test]
    fn experiment_rejects_bad_inputs() {
        let c = cfg();
        let mu = CircleMeasure::from_atoms(&[(0.0, 1.0)]).unwrap();
        let set = point_set();
        let grid = build_grid(&set, 12, 16).unwrap();
        assert!(holder_growth_experiment(&mu, 0.0, 1.0, &set, &grid, false, &c).is_err());
        assert!(holder_growth_experiment(&mu, -0.5, 0.5, &set, &grid, false, &c).is_err());

        let escaping = CircleMeasure::from_atoms(&[(2.0, 1.0)]).unwrap();
        assert!(matches!(
            holder_growth_experiment(&escaping, 0.0, 0.5, &set, &grid, false, &c),
            Err(Error::SupportEscapesBoundary)
        ));
    }

    #[test]
    fn experiment_cantor_round_trip() {
        let c = cfg();
        let mu = CircleMeasure::cantor((0.0, 1.0), 12, 1.0).unwrap();
        let set = BoundarySet::new(&[(0.0, 1.0)]).unwrap();
        let grid = build_grid(&set, 12, 32).unwrap();
        let report =
            holder_growth_experiment(&mu, 0.0, 0.6, &set, &grid, false, &c).unwrap();
        let want = 2f64.ln() / 3f64.ln();
        assert!(
            (report.gamma_hat.gamma_hat - want).abs() < 0.06,
            "gamma_hat = {}",
            report.gamma_hat.gamma_hat
        );
        assert_eq!(report.hypothesis.verdict, Verdict::Bounded);
        let converse = report.converse.expect("hypothesis bounded");
        assert!(converse.bounded);
    }

    #[test]
    fn report_json_shape() {
        let report = VerificationReport {
            layers: vec![LayerRecord { k: 1, sup: 2.0, argmax: [0.5, 0.1] }],
            constant: 2.0,
            verdict: Verdict::Bounded,
        };
        let text = serde_json::to_string(&report).unwrap();
        assert_eq!(
            text,
            r#"{"layers":[{"k":1,"sup":2.0,"argmax":[0.5,0.1]}],"constant":2.0,"verdict":"bounded"}"#
        );
    }
}
