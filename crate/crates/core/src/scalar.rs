//! Scalar abstraction shared by exact and floating evaluation paths.
//!
//! Tensor coefficients are always exact rationals. Evaluation is generic over
//! [`Scalar`], so the same code path runs in `f64`, `f32` or [`Rational`].

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A ring element type the tensor routines can evaluate in.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> {
    /// Converts a tensor coefficient. `approx` is the cached `f64` image of `exact`.
    fn from_coefficient(exact: &Rational, approx: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn from_coefficient(_exact: &Rational, approx: f64) -> Self {
        approx
    }
}

impl Scalar for f32 {
    #[inline]
    fn from_coefficient(_exact: &Rational, approx: f64) -> Self {
        approx as f32
    }
}

impl Scalar for Rational {
    #[inline]
    fn from_coefficient(exact: &Rational, _approx: f64) -> Self {
        exact.clone()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = BigInt::parse_bytes(p.as_bytes(), 10).ok_or_else(bad)?;
    let q = BigInt::parse_bytes(q.as_bytes(), 10).ok_or_else(bad)?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Canonical `"p/q"` form: reduced, positive denominator, denominator always written.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// 17 significant digits, round-trips every `f64`.
pub fn format_decimal(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Best rational approximation of `x` whose denominator does not exceed
/// `max_den`, via continued-fraction convergents of the exact binary value.
pub fn rationalize(x: f64, max_den: &BigInt) -> Option<Rational> {
    let exact = Rational::from_float(x)?;
    if exact.denom() <= max_den {
        return Some(exact);
    }
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut num = exact.numer().clone();
    let mut den = exact.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        if &q_next > max_den {
            // semiconvergent with the largest admissible partial quotient
            let t = (max_den - &q_prev) / &q;
            let semi = Rational::new(&t * &p + &p_prev, &t * &q + &q_prev);
            let conv = Rational::new(p.clone(), q.clone());
            let better = if (&semi - &exact).abs() < (&conv - &exact).abs() {
                semi
            } else {
                conv
            };
            return Some(better);
        }
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        num = std::mem::replace(&mut den, r);
    }
    Some(Rational::new(p, q))
}

/// Default denominator bound for witness rationalization, 2^64.
pub fn default_denominator_bound() -> BigInt {
    BigInt::one() << 64
}
