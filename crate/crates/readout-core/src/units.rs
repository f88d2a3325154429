//! Unit helpers. Internally everything is rad/µs and µs.

use std::f64::consts::PI;

/// Linear frequency f/2π in MHz to angular frequency in rad/µs.
#[inline]
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f
}

/// Angular frequency in rad/µs back to f/2π in MHz.
#[inline]
pub fn to_mhz(w: f64) -> f64 {
    w / (2.0 * PI)
}

/// Rate in 1/µs to kHz (no division by 2π).
#[inline]
pub fn to_khz(rate: f64) -> f64 {
    rate * 1e3
}
