//! Exact rational scalars and the decimal conventions used at the borders
//! of the crate.
//!
//! Exact numbers never travel through binary floating point: decimal
//! strings parse directly into [`Rat`] and print back out via integer
//! arithmetic, so a value round-trips byte-identically.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational number; the scalar everything exact is built from.
pub type Rat = num_rational::BigRational;

/// `0` as a [`Rat`].
#[must_use]
pub fn zero() -> Rat {
    Rat::zero()
}

/// `1` as a [`Rat`].
#[must_use]
pub fn one() -> Rat {
    Rat::one()
}

/// Exact rational from an integer.
#[must_use]
pub fn from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact rational `p / q` from machine integers. Panics if `q == 0`.
#[must_use]
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Exact value of an `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Config(format!("non-finite float {x}")))
}

/// Parses a decimal string into an exact rational.
///
/// Accepts optional sign, an optional fractional part, an optional decimal
/// exponent (`1.5e-3`) and plain fractions (`-7/3`). The result is exact:
/// `"0.1"` becomes `1/10`, not the nearest double.
pub fn parse_decimal(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Config("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad fraction numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad fraction denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Config(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Config(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Config(format!("no digits in {s:?}")));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Config(format!("invalid decimal {s:?}")));
    }
    let joined = format!("{int_part}{frac_part}");
    let mantissa_int: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined
            .parse()
            .map_err(|_| Error::Config(format!("invalid decimal {s:?}")))?
    };
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Rat::from_integer(mantissa_int * ten.pow(shift as u32))
    } else {
        Rat::new(mantissa_int, ten.pow((-shift) as u32))
    };
    Ok(if sign < 0 { -value } else { value })
}

/// Formats a rational as a fixed-point decimal with `digits` places after
/// the point, rounding half away from zero. Deterministic and exact.
#[must_use]
pub fn to_decimal(x: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    // round(x * 10^digits) with ties away from zero
    let scaled = x * Rat::from_integer(scale);
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    let (q, r) = num.abs().div_rem(&den);
    let rounded_abs = if BigInt::from(2) * r >= den { q + 1u8 } else { q };
    let neg = num.sign() == Sign::Minus && !rounded_abs.is_zero();
    let digits_str = rounded_abs.to_string();
    let d = digits as usize;
    let padded = if digits_str.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - digits_str.len()), digits_str)
    } else {
        digits_str
    };
    let split = padded.len() - d;
    let (int_part, frac_part) = padded.split_at(split);
    let body = if d == 0 {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac_part}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Nearest `f64` below/at and above/at a rational of moderate size; the pair
/// brackets the value. Used when handing certified data to float consumers.
#[must_use]
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `⌊x⌋` as a [`BigInt`].
#[must_use]
pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// `⌊x⌋` as an `i64`; errors if it does not fit.
pub fn floor_i64(x: &Rat) -> Result<i64> {
    floor_int(x)
        .to_i64()
        .ok_or_else(|| Error::Invariant("floor does not fit in i64".into()))
}

/// Dyadic rounding of `x` towards −∞ at `bits` fractional bits.
#[must_use]
pub fn dyadic_floor(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(scaled.floor().to_integer(), scale)
}

/// Dyadic rounding of `x` towards +∞ at `bits` fractional bits.
#[must_use]
pub fn dyadic_ceil(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(scaled.ceil().to_integer(), scale)
}

/// `2^(-bits)` as a rational.
#[must_use]
pub fn pow2_inv(bits: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << bits)
}
