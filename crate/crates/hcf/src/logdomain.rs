//! Log-domain helpers for quantities whose magnitudes underflow doubles.
//!
//! Cylinder diameters of deep seed-set words scale like 3^(-n^2); all
//! diameter arithmetic therefore happens as sums of natural logarithms,
//! with directed rounding applied where a one-sided bound is required.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Relative nudge used for outward-directed rounding. Our log sums carry
/// at most a few hundred terms each accurate to ~1e-15 relative, so a
/// 1e-11 relative margin dominates the accumulated error.
const DIRECTED_EPS: f64 = 1e-11;

/// Round a value downward so it stays a valid lower bound.
pub fn round_down(x: f64) -> f64 {
    x - x.abs() * DIRECTED_EPS - f64::MIN_POSITIVE
}

/// Round a value upward so it stays a valid upper bound.
pub fn round_up(x: f64) -> f64 {
    x + x.abs() * DIRECTED_EPS + f64::MIN_POSITIVE
}

/// Natural log of a positive big integer, exact to f64 precision for any
/// magnitude (the value itself may vastly exceed f64 range).
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 63 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    ln_biguint(x.magnitude())
}

/// Natural log of a positive rational.
pub fn ln_ratio(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Convert a rational to f64 through its logarithm, avoiding the
/// overflow-to-infinity path of naive numerator/denominator division.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let ln = ln_ratio(&x.abs());
    let v = ln.exp();
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// ln(sqrt(ns) + 1) for a positive integer ns, i.e. ln(|c| + 1) given the
/// squared modulus of a digit c.
pub fn ln_abs_plus_one(norm_sq: &BigInt) -> f64 {
    let half = ln_bigint(norm_sq) / 2.0;
    half + (-half).exp().ln_1p()
}

/// ln(sqrt(ns) - 1); requires ns > 1.
pub fn ln_abs_minus_one(norm_sq: &BigInt) -> f64 {
    let half = ln_bigint(norm_sq) / 2.0;
    half + (-(-half).exp()).ln_1p()
}
