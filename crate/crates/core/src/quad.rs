//! Globally adaptive Gauss–Kronrod (7–15) quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets the requested tolerance or the evaluation budget runs out.
//! Callers with peaked integrands can seed panel boundaries through
//! [`integrate_with_breaks`]. NaN from the integrand propagates as an error.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub abs_error: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * resabs);
    }
    scaled
}

fn qk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();

    // Gauss abscissae sit at the odd Kronrod indices.
    #[allow(clippy::needless_range_loop)]
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtw = 2 * j;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }

    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (resk - resg) * half;
    Panel {
        a,
        b,
        value: resk * half,
        error: rescale_error(err, resabs * half.abs(), resasc * half.abs()),
        resabs: resabs * half.abs(),
    }
}

pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
) -> Result<QuadOutcome> {
    integrate_with_breaks(f, a, b, &[], rel_tol, abs_tol, max_evals)
}

/// Adaptive integral of `f` over `[a, b]` with user-supplied initial panel
/// boundaries at `breaks` (values outside `(a, b)` are ignored).
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
) -> Result<QuadOutcome> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(QuadOutcome { value: 0.0, abs_error: 0.0, evals: 0 });
    }
    if a > b {
        let out = integrate_with_breaks(f, b, a, breaks, rel_tol, abs_tol, max_evals)?;
        return Ok(QuadOutcome { value: -out.value, ..out });
    }

    let mut edges: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges.insert(0, a);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_resabs = 0.0;
    // Panels too narrow to bisect further; their contribution is kept.
    let mut settled_value = 0.0;
    let mut settled_err = 0.0;

    let push = |heap: &mut BinaryHeap<Panel>, p: Panel| -> Result<()> {
        if !p.value.is_finite() || !p.error.is_finite() {
            return Err(Error::NonFinite(format!(
                "integrand on [{:.6e}, {:.6e}]",
                p.a, p.b
            )));
        }
        heap.push(p);
        Ok(())
    };

    for pair in edges.windows(2) {
        let p = qk15(&f, pair[0], pair[1]);
        evals += 15;
        total += p.value;
        total_err += p.error;
        total_resabs += p.resabs;
        push(&mut heap, p)?;
    }

    let width_floor = f64::EPSILON * (a.abs().max(b.abs()).max(1.0)) * 4.0;

    loop {
        let tol = abs_tol
            .max(rel_tol * total.abs())
            .max(50.0 * f64::EPSILON * total_resabs);
        if settled_err + total_err <= tol {
            break;
        }
        if evals + 30 > max_evals || heap.is_empty() {
            if settled_err + total_err <= tol.max(abs_tol) * 1e3 {
                break;
            }
            return Err(Error::QuadratureBudget(format!(
                "error {:.3e} above tolerance {:.3e} after {} evaluations",
                settled_err + total_err,
                tol,
                evals
            )));
        }

        let worst = heap.pop().expect("heap non-empty");
        total -= worst.value;
        total_err -= worst.error;
        total_resabs -= worst.resabs;

        if worst.b - worst.a < width_floor {
            settled_value += worst.value;
            settled_err += worst.error;
            continue;
        }

        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let p = qk15(&f, lo, hi);
            evals += 15;
            total += p.value;
            total_err += p.error;
            total_resabs += p.resabs;
            push(&mut heap, p)?;
        }
    }

    Ok(QuadOutcome {
        value: total + settled_value,
        abs_error: total_err + settled_err,
        evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let out = integrate(|x| x * x, 0.0, 1.0, 1e-12, 1e-14, 1000).unwrap();
        assert!((out.value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn narrow_peak_converges() {
        // Lorentzian of half-width 1e-4 centered off the panel midpoint.
        let c = 0.3137;
        let w = 1e-4;
        let f = |x: f64| w / ((x - c).powi(2) + w * w);
        let out = integrate(f, 0.0, 1.0, 1e-10, 1e-12, 1 << 16).unwrap();
        let exact = ((1.0 - c) / w).atan() + (c / w).atan();
        assert!(
            (out.value - exact).abs() < 1e-9 * exact,
            "got {} want {}",
            out.value,
            exact
        );
    }

    #[test]
    fn oscillatory_with_breaks() {
        let f = |x: f64| x.sin().abs();
        let breaks: Vec<f64> = (1..4).map(|k| k as f64 * PI).collect();
        let out =
            integrate_with_breaks(f, 0.0, 4.0 * PI, &breaks, 1e-12, 1e-13, 1 << 14).unwrap();
        assert!((out.value - 8.0).abs() < 1e-11);
    }

    #[test]
    fn nan_is_reported() {
        let err = integrate(|x| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1e-8, 1e-8, 1000);
        assert!(matches!(err, Err(Error::NonFinite(_))));
    }

    #[test]
    fn reversed_bounds_negate() {
        let out = integrate(|x| x, 1.0, 0.0, 1e-12, 1e-14, 1000).unwrap();
        assert!((out.value + 0.5).abs() < 1e-15);
    }
}
