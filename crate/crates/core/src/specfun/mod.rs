//! Spherical Bessel functions and the substitution chain that maps them onto
//! exact solutions of the damped/amplified oscillator pair.

mod bessel;
mod transform;

pub use bessel::{
    sph_bessel_j, sph_bessel_j_upto, sph_bessel_y, sph_bessel_y_upto, BesselKind, BesselValue,
    MAX_ORDER, MIN_Y_ARGUMENT,
};
pub use transform::{analytic_pair, conjugate_r, conjugate_r_routes, AnalyticPair, TransformParams};

use serde::{Deserialize, Serialize};

/// A value together with its first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64) -> Self {
        Jet { value, d1, d2 }
    }

    pub fn scale(self, s: f64) -> Self {
        Jet::new(self.value * s, self.d1 * s, self.d2 * s)
    }
}
