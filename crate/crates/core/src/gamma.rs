//! Gamma and log-gamma on the positive axis via the Lanczos approximation
//! (g = 10.900511, eleven coefficients), good to ~1e-14 relative error.

use std::f64::consts::{E, PI};

/// `2 * sqrt(e / pi)`
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// `ln(2 * sqrt(e / pi))`
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Auxiliary shift in the Lanczos series.
const LANCZOS_R: f64 = 10.900511;

/// Polynomial coefficients of the Lanczos series.
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

fn lanczos_series(denom: impl Fn(usize) -> f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (k, dk)| s + dk / denom(k))
}

/// Gamma function for real `x`; accurate on `(0, 10]` to better than 1e-13
/// relative, which covers every order used by the kernel family.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = lanczos_series(|k| k as f64 - x);
        PI / ((PI * x).sin() * s * TWO_SQRT_E_OVER_PI * ((0.5 - x + LANCZOS_R) / E).powf(0.5 - x))
    } else {
        let s = lanczos_series(|k| x + k as f64 - 1.0);
        s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / E).powf(x - 0.5)
    }
}

/// Natural logarithm of gamma for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection; sin(pi x) > 0 on (0, 1/2).
        LN_PI - (PI * x).sin().ln() - ln_gamma(1.0 - x)
    } else {
        let s = lanczos_series(|k| x + k as f64 - 1.0);
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / E).ln()
    }
}
