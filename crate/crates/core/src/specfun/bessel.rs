//! Spherical Bessel functions `j_n`, `y_n` of integer order and real positive
//! argument.
//!
//! `j_n` is evaluated by one of three routes:
//!
//! * `z <= 1`: the power series, one order at a time;
//! * `z > N` (`N` the highest order requested): upward recurrence seeded by the
//!   closed forms of `j_0`, `j_1`;
//! * otherwise: the continued fraction for `j_{N+1} / j_N`, downward recurrence,
//!   and normalization against `j_0 = sin z / z` (or `j_1` near a zero of `j_0`).
//!
//! `y_n` is always computed by upward recurrence, which is stable for the
//! dominant solution.

use serde::{Deserialize, Serialize};

use super::Jet;
use crate::error::{Error, Result};

/// Highest supported order.
pub const MAX_ORDER: u32 = 128;

/// `y_n` is rejected below this argument.
pub const MIN_Y_ARGUMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: f64,
    /// Rough bound on the absolute rounding error of `value`.
    pub abs_err: f64,
}

fn check_order(n: u32) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::Capability {
            order: n,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

fn check_argument(z: f64) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain("z", format!("must be finite and > 0, got {z}")));
    }
    Ok(())
}

fn j0_closed(z: f64) -> f64 {
    z.sin() / z
}

fn j1_closed(z: f64) -> f64 {
    let (s, c) = z.sin_cos();
    (s / z - c) / z
}

/// Power series `j_m(z) = z^m / (2m+1)!! * sum_k (-z^2/2)^k / (k! prod_{i=1..k} (2m+2i+1))`.
fn series_upto(nmax: u32, z: f64) -> Vec<f64> {
    let half_z2 = 0.5 * z * z;
    let mut out = Vec::with_capacity(nmax as usize + 1);
    let mut prefactor = 1.0;
    for m in 0..=nmax {
        if m > 0 {
            prefactor *= z / (2.0 * m as f64 + 1.0);
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -half_z2 / (kf * (2.0 * m as f64 + 2.0 * kf + 1.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        out.push(prefactor * sum);
    }
    out
}

fn upward(nmax: u32, z: f64, f0: f64, f1: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    out.push(f0);
    if nmax == 0 {
        return out;
    }
    out.push(f1);
    for m in 1..nmax {
        let next = (2.0 * m as f64 + 1.0) / z * out[m as usize] - out[m as usize - 1];
        out.push(next);
    }
    out
}

/// `j_{n+1}(z) / j_n(z)` by the modified Lentz method.
fn ratio_cf(n: u32, z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for i in 1..100_000u32 {
        let a = if i == 1 { 1.0 } else { -1.0 };
        let b = (2.0 * (n + i) as f64 + 1.0) / z;
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

fn miller(nmax: u32, z: f64) -> Vec<f64> {
    let top = nmax as usize;
    let mut out = vec![0.0; top + 2];
    out[top] = 1.0;
    out[top + 1] = ratio_cf(nmax, z);
    for m in (1..=top).rev() {
        out[m - 1] = (2.0 * m as f64 + 1.0) / z * out[m] - out[m + 1];
        if out[m - 1].abs() > 1e250 {
            for v in &mut out[m - 1..] {
                *v *= 1e-250;
            }
        }
    }
    out.truncate(top + 1);
    let anchor = if out.len() > 1 && out[0].abs() < out[1].abs() {
        j1_closed(z) / out[1]
    } else {
        j0_closed(z) / out[0]
    };
    for v in &mut out {
        *v *= anchor;
    }
    out
}

/// `j_0(z), ..., j_nmax(z)`.
pub fn sph_bessel_j_upto(nmax: u32, z: f64) -> Result<Vec<f64>> {
    check_order(nmax)?;
    check_argument(z)?;
    let values = if z <= 1.0 {
        series_upto(nmax, z)
    } else if z > nmax as f64 {
        upward(nmax, z, j0_closed(z), j1_closed(z))
    } else {
        miller(nmax, z)
    };
    Ok(values)
}

/// `y_0(z), ..., y_nmax(z)`.
pub fn sph_bessel_y_upto(nmax: u32, z: f64) -> Result<Vec<f64>> {
    check_order(nmax)?;
    check_argument(z)?;
    if z < MIN_Y_ARGUMENT {
        return Err(Error::domain(
            "z",
            format!("y_n is singular at the origin; z={z} is below {MIN_Y_ARGUMENT}"),
        ));
    }
    let (s, c) = z.sin_cos();
    let y0 = -c / z;
    let y1 = -(c / z + s) / z;
    let values = upward(nmax, z, y0, y1);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(
            "z",
            format!("y_{nmax}({z}) overflows double precision"),
        ));
    }
    Ok(values)
}

fn error_estimate(n: u32, z: f64, value: f64) -> f64 {
    let envelope = if z > n as f64 { 1.0 / z } else { 0.0 };
    4.0 * f64::EPSILON * (n as f64 + 2.0) * (value.abs() + envelope)
}

/// Spherical Bessel function of the first kind.
pub fn sph_bessel_j(n: u32, z: f64) -> Result<BesselValue> {
    let value = sph_bessel_j_upto(n, z)?[n as usize];
    Ok(BesselValue {
        value,
        abs_err: error_estimate(n, z, value),
    })
}

/// Spherical Bessel function of the second kind.
pub fn sph_bessel_y(n: u32, z: f64) -> Result<BesselValue> {
    let value = sph_bessel_y_upto(n, z)?[n as usize];
    Ok(BesselValue {
        value,
        abs_err: error_estimate(n, z, value),
    })
}

/// Value, first and second derivative in `z` of order `n`, given the
/// sequence `f_0..=f_n` (at least two entries when `n == 0`).
fn jet_from_sequence(seq: &[f64], n: u32, z: f64) -> Jet {
    let nu = n as usize;
    let f = seq[nu];
    // f_n' = f_{n-1} - (n+1)/z f_n, and f_0' = -f_1.
    let d1 = if n == 0 {
        -seq[1]
    } else {
        seq[nu - 1] - (n as f64 + 1.0) / z * f
    };
    let nn1 = n as f64 * (n as f64 + 1.0);
    let d2 = -2.0 / z * d1 - (1.0 - nn1 / (z * z)) * f;
    Jet::new(f, d1, d2)
}

/// A real solution `M_n = A j_n + B y_n` of the spherical Bessel equation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselKind {
    /// `j_n`, regular at the origin.
    #[default]
    First,
    /// `y_n`.
    Second,
    Combination { a: f64, b: f64 },
}

impl BesselKind {
    pub fn combination(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::param("coefficients", "must be finite"));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::param("coefficients", "(A, B) = (0, 0) is the trivial solution"));
        }
        Ok(BesselKind::Combination { a, b })
    }

    pub fn coefficients(&self) -> (f64, f64) {
        match *self {
            BesselKind::First => (1.0, 0.0),
            BesselKind::Second => (0.0, 1.0),
            BesselKind::Combination { a, b } => (a, b),
        }
    }

    /// `M_n(z)` with its first two `z`-derivatives.
    pub fn eval(&self, n: u32, z: f64) -> Result<Jet> {
        let (a, b) = self.coefficients();
        let top = n.max(1);
        let mut out = Jet::default();
        if a != 0.0 {
            let j = jet_from_sequence(&sph_bessel_j_upto(top, z)?, n, z);
            out = Jet::new(a * j.value, a * j.d1, a * j.d2);
        }
        if b != 0.0 {
            let y = jet_from_sequence(&sph_bessel_y_upto(top, z)?, n, z);
            out = Jet::new(out.value + b * y.value, out.d1 + b * y.d1, out.d2 + b * y.d2);
        }
        Ok(out)
    }
}
