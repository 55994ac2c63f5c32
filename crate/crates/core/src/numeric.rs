//! Small floating-point helpers shared by the closed-form evaluators.

use std::f64::consts::LN_2;

/// `ln(sinh(x))` for `x > 0`, without overflow for large `x`.
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x > 18.0 {
        // sinh x = e^x (1 - e^{-2x}) / 2
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// `1 - exp(-x)` with full relative accuracy for small `x`.
pub fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
