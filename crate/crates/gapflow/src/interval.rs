//! Certified interval arithmetic over exact rationals.
//!
//! An [`RInt`] is a closed interval with rational endpoints that provably
//! contains the value it stands for. Ring operations propagate enclosures
//! exactly; [`compress`](RInt::compress) rounds endpoints outward to dyadics
//! to keep coefficient sizes bounded. The transcendental enclosures (`ln`,
//! `π`) are computed with directed fixed-point arithmetic and explicit tail
//! bounds, so their results are enclosures in the mathematical sense, not
//! floating-point estimates.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RInt {
    lo: Rat,
    hi: Rat,
}

impl RInt {
    /// Interval from ordered endpoints. Panics if `lo > hi` (internal misuse).
    #[must_use]
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RInt { lo, hi }
    }

    /// Degenerate interval `[x, x]`.
    #[must_use]
    pub fn point(x: Rat) -> Self {
        RInt { lo: x.clone(), hi: x }
    }

    /// Zero point interval.
    #[must_use]
    pub fn zero() -> Self {
        RInt::point(Rat::zero())
    }

    #[must_use]
    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    #[must_use]
    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    #[must_use]
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    #[must_use]
    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / rat::from_i64(2)
    }

    /// Midpoint as `f64`; caller chooses the width before extracting.
    #[must_use]
    pub fn mid_f64(&self) -> f64 {
        rat::to_f64(&self.mid())
    }

    #[must_use]
    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    #[must_use]
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Entire interval strictly positive.
    #[must_use]
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Entire interval strictly negative.
    #[must_use]
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified sign: `Some(-1 | 0 | 1)` when the interval decides it,
    /// `None` when the enclosure still straddles zero without being `[0,0]`.
    #[must_use]
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        RInt { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    #[must_use]
    pub fn add(&self, o: &Self) -> Self {
        RInt { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    #[must_use]
    pub fn sub(&self, o: &Self) -> Self {
        RInt { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    #[must_use]
    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        RInt { lo, hi }
    }

    #[must_use]
    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_negative() {
            RInt { lo: &self.hi * k, hi: &self.lo * k }
        } else {
            RInt { lo: &self.lo * k, hi: &self.hi * k }
        }
    }

    /// Interval division; errors if the divisor encloses zero.
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::PrecisionExceeded(
                "interval division by an enclosure of zero".into(),
            ));
        }
        let inv = RInt {
            lo: Rat::one() / o.hi.clone(),
            hi: Rat::one() / o.lo.clone(),
        };
        Ok(self.mul(&inv))
    }

    #[must_use]
    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            let m = std::cmp::max(self.hi.abs(), self.lo.abs());
            RInt { lo: Rat::zero(), hi: m }
        } else if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Enclosure of `x²`; tighter than `mul(self, self)` around zero.
    #[must_use]
    pub fn sqr(&self) -> Self {
        let a = self.abs();
        RInt { lo: &a.lo * &a.lo, hi: &a.hi * &a.hi }
    }

    /// Smallest interval containing both.
    #[must_use]
    pub fn hull(&self, o: &Self) -> Self {
        RInt {
            lo: std::cmp::min(self.lo.clone(), o.lo.clone()),
            hi: std::cmp::max(self.hi.clone(), o.hi.clone()),
        }
    }

    /// Outward dyadic rounding: endpoints move to multiples of `2^-bits`.
    /// Keeps enclosures valid while bounding coefficient growth.
    #[must_use]
    pub fn compress(&self, bits: u32) -> Self {
        RInt {
            lo: rat::dyadic_floor(&self.lo, bits),
            hi: rat::dyadic_ceil(&self.hi, bits),
        }
    }

    /// Widens by `2^-bits` on both sides.
    #[must_use]
    pub fn widen(&self, bits: u32) -> Self {
        let eps = rat::pow2_inv(bits);
        RInt { lo: &self.lo - &eps, hi: &self.hi + &eps }
    }

    /// Certified `√·` enclosure (requires a nonnegative interval).
    pub fn sqrt(&self, bits: u32) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Invariant("sqrt of an interval below zero".into()));
        }
        Ok(RInt { lo: sqrt_down(&self.lo, bits), hi: sqrt_up(&self.hi, bits) })
    }

    /// True when both endpoints agree to the requested dyadic width.
    #[must_use]
    pub fn width_within(&self, bits: u32) -> bool {
        self.width() <= rat::pow2_inv(bits)
    }

    /// Certified comparison: `Some(true)` if every point of `self` is `<=`
    /// every point of `o`, `Some(false)` if every point is `>`, else `None`.
    #[must_use]
    pub fn certified_le(&self, o: &Self) -> Option<bool> {
        if self.hi <= o.lo {
            Some(true)
        } else if self.lo > o.hi {
            Some(false)
        } else {
            None
        }
    }
}

/// Lower bound of `√x` at `bits` dyadic precision (`x ≥ 0`).
#[must_use]
pub fn sqrt_down(x: &Rat, bits: u32) -> Rat {
    debug_assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let n = (x * Rat::from_integer(scale)).floor().to_integer();
    if n.is_negative() {
        return Rat::zero();
    }
    Rat::new(n.sqrt(), BigInt::one() << bits)
}

/// Upper bound of `√x` at `bits` dyadic precision (`x ≥ 0`).
#[must_use]
pub fn sqrt_up(x: &Rat, bits: u32) -> Rat {
    debug_assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let n = (x * Rat::from_integer(scale)).ceil().to_integer();
    let s = n.sqrt();
    let s = if &s * &s >= n { s } else { s + 1u8 };
    Rat::new(s, BigInt::one() << bits)
}

// ---------------------------------------------------------------------------
// Certified logarithm and π.
//
// Everything below works in fixed point: an integer `v` at scale `B` stands
// for `v / 2^B`. Directed rounding (floor for lower bounds, ceiling for
// upper bounds) plus explicit series tails make the results true enclosures.
// ---------------------------------------------------------------------------

const GUARD_BITS: u32 = 32;

/// Enclosure of `atanh(y)` for fixed-point `y ∈ [0, ~1/3]` at scale `B`.
/// Returns scaled integer bounds `(lo, hi)`.
fn atanh_fix(y_lo: &BigInt, y_hi: &BigInt, scale_bits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << scale_bits;
    debug_assert!(y_hi * 5u8 < &scale * 2u8, "atanh series needs y well below 1/2");

    // Lower bound: floor everything; truncation only loses mass.
    let ysq_lo = (y_lo * y_lo) >> scale_bits;
    let mut pow = y_lo.clone();
    let mut sum_lo = BigInt::zero();
    let mut k: u64 = 0;
    while pow.is_positive() {
        sum_lo += &pow / BigInt::from(2 * k + 1);
        pow = (&pow * &ysq_lo) >> scale_bits;
        k += 1;
    }

    // Upper bound: ceiling everything and close with a geometric tail
    // `Σ_{j≥K} y^{2j+1}/(2j+1) ≤ y^{2K+1}/(1−y²) ≤ 2·y^{2K+1}` for y ≤ 1/3.
    let ceil_shift = |v: &BigInt| -> BigInt {
        let mask = (BigInt::one() << scale_bits) - 1u8;
        (v + mask) >> scale_bits
    };
    let ysq_hi = ceil_shift(&(y_hi * y_hi));
    let mut pow = y_hi.clone();
    let mut sum_hi = BigInt::zero();
    let mut k: u64 = 0;
    while pow > BigInt::from(4u8) {
        let d = BigInt::from(2 * k + 1);
        sum_hi += (&pow + &d - 1u8) / d;
        pow = ceil_shift(&(&pow * &ysq_hi));
        k += 1;
    }
    sum_hi += pow * 2u8;
    (sum_lo, sum_hi)
}

/// Certified enclosure of `ln x` for a positive rational, at roughly
/// `bits` of precision.
pub fn ln_rat(x: &Rat, bits: u32) -> Result<RInt> {
    if !x.is_positive() {
        return Err(Error::Invariant(format!("ln of nonpositive value {x}")));
    }
    let b = bits + GUARD_BITS;
    let scale = BigInt::one() << b;

    // Normalize x = m · 2^e with m ∈ [1, 2).
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = if e >= 0 {
        x / Rat::from_integer(BigInt::one() << e as u64)
    } else {
        x * Rat::from_integer(BigInt::one() << (-e) as u64)
    };
    let two = rat::from_i64(2);
    while m >= two {
        m = m / &two;
        e += 1;
    }
    while m < Rat::one() {
        m = m * &two;
        e -= 1;
    }

    // y = (m−1)/(m+1) ∈ [0, 1/3); ln m = 2 atanh(y).
    let num = &m - Rat::one();
    let den = &m + Rat::one();
    let y = num / den;
    let y_scaled = &y * Rat::from_integer(scale.clone());
    let y_lo = y_scaled.floor().to_integer();
    let y_hi = y_scaled.ceil().to_integer();
    let (at_lo, at_hi) = atanh_fix(&y_lo, &y_hi, b);
    let ln_m = RInt::new(
        Rat::new(at_lo * 2u8, scale.clone()),
        Rat::new(at_hi * 2u8, scale),
    );

    let total = ln_m.add(&ln2(b).scale(&rat::from_i64(e)));
    Ok(total.compress(bits))
}

/// Certified `ln` over an interval (monotone extension).
pub fn ln_interval(x: &RInt, bits: u32) -> Result<RInt> {
    if !x.is_positive() {
        return Err(Error::PrecisionExceeded(
            "ln over an interval touching zero; refine the argument first".into(),
        ));
    }
    let lo = ln_rat(x.lo(), bits)?;
    let hi = ln_rat(x.hi(), bits)?;
    Ok(RInt::new(lo.lo().clone(), hi.hi().clone()))
}

static LN2_CACHE: Mutex<Option<(u32, RInt)>> = Mutex::new(None);
static PI_CACHE: Mutex<Option<(u32, RInt)>> = Mutex::new(None);

/// Certified enclosure of `ln 2` at `bits` of precision (cached).
#[must_use]
pub fn ln2(bits: u32) -> RInt {
    {
        let cache = LN2_CACHE.lock().unwrap();
        if let Some((b, v)) = cache.as_ref() {
            if *b >= bits {
                return v.clone();
            }
        }
    }
    let b = bits + GUARD_BITS;
    let scale = BigInt::one() << b;
    // ln 2 = 2 atanh(1/3)
    let y_lo = &scale / 3u8;
    let y_hi = &y_lo + 1u8;
    let (at_lo, at_hi) = atanh_fix(&y_lo, &y_hi, b);
    let v = RInt::new(Rat::new(at_lo * 2u8, scale.clone()), Rat::new(at_hi * 2u8, scale));
    let mut cache = LN2_CACHE.lock().unwrap();
    *cache = Some((bits, v.clone()));
    v
}

/// Enclosure of `atan(1/n)` in fixed point at scale `B` (alternating series
/// with a first-omitted-term tail).
fn atan_inv_fix(n: u64, scale_bits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << scale_bits;
    let nsq = BigInt::from(n) * BigInt::from(n);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    // denom_pow = n^{2k+1}
    let mut denom_pow = BigInt::from(n);
    let mut k: u64 = 0;
    loop {
        let factor = &denom_pow * BigInt::from(2 * k + 1);
        let term_lo = &scale / &factor;
        let term_hi = (&scale + &factor - 1u8) / &factor;
        if term_hi <= BigInt::from(2u8) {
            // Tail has the sign of this (omitted) term.
            if k % 2 == 0 {
                hi += term_hi;
            } else {
                lo -= term_hi;
            }
            break;
        }
        if k % 2 == 0 {
            lo += term_lo;
            hi += term_hi;
        } else {
            lo -= term_hi;
            hi -= term_lo;
        }
        denom_pow *= &nsq;
        k += 1;
    }
    (lo, hi)
}

/// Certified enclosure of `π` at `bits` of precision (cached).
/// Machin: `π = 16 atan(1/5) − 4 atan(1/239)`.
#[must_use]
pub fn pi(bits: u32) -> RInt {
    {
        let cache = PI_CACHE.lock().unwrap();
        if let Some((b, v)) = cache.as_ref() {
            if *b >= bits {
                return v.clone();
            }
        }
    }
    let b = bits + GUARD_BITS;
    let scale = BigInt::one() << b;
    let (a5_lo, a5_hi) = atan_inv_fix(5, b);
    let (a239_lo, a239_hi) = atan_inv_fix(239, b);
    let lo = &a5_lo * 16u8 - &a239_hi * 4u8;
    let hi = &a5_hi * 16u8 - &a239_lo * 4u8;
    let v = RInt::new(Rat::new(lo, scale.clone()), Rat::new(hi, scale));
    let mut cache = PI_CACHE.lock().unwrap();
    *cache = Some((bits, v.clone()));
    v
}

/// Certified floor of an irrational (or exactly representable) value.
///
/// `widen` produces enclosures at increasing precision; the loop refines
/// until both endpoints share a floor. Returns the floor together with the
/// distance from the value to the nearest integer (for near-integer
/// diagnostics). Exact integers are fine — their enclosure is a point — but
/// a value irrationally close to an integer escalates precision and
/// eventually errors rather than guessing.
pub fn certified_floor<F>(mut widen: F) -> Result<(BigInt, f64)>
where
    F: FnMut(u32) -> Result<RInt>,
{
    let mut bits = 64u32;
    while bits <= 1 << 14 {
        let iv = widen(bits)?;
        let f_lo = rat::floor_int(iv.lo());
        let f_hi = rat::floor_int(iv.hi());
        if f_lo == f_hi {
            let mid = iv.mid();
            let frac = &mid - Rat::from_integer(rat::floor_int(&mid));
            let dist = rat::to_f64(&frac).min(1.0 - rat::to_f64(&frac));
            return Ok((f_lo, dist));
        }
        bits = bits.saturating_mul(2);
    }
    Err(Error::PrecisionExceeded(
        "floor undecided at 16384 bits: value is too close to an integer".into(),
    ))
}

// ---------------------------------------------------------------------------
// Complex boxes.
// ---------------------------------------------------------------------------

/// Axis-aligned complex enclosure `re + i·im` with certified components.
#[derive(Clone, Debug)]
pub struct CBox {
    pub re: RInt,
    pub im: RInt,
}

impl CBox {
    #[must_use]
    pub fn new(re: RInt, im: RInt) -> Self {
        CBox { re, im }
    }

    #[must_use]
    pub fn point(re: Rat, im: Rat) -> Self {
        CBox { re: RInt::point(re), im: RInt::point(im) }
    }

    #[must_use]
    pub fn real(re: RInt) -> Self {
        CBox { re, im: RInt::zero() }
    }

    #[must_use]
    pub fn add(&self, o: &Self) -> Self {
        CBox { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    #[must_use]
    pub fn sub(&self, o: &Self) -> Self {
        CBox { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    #[must_use]
    pub fn mul(&self, o: &Self) -> Self {
        CBox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    /// Enclosure of `|z|²`.
    #[must_use]
    pub fn norm_sq(&self) -> RInt {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let d = o.norm_sq();
        if d.contains_zero() {
            return Err(Error::PrecisionExceeded(
                "complex interval division by an enclosure of zero".into(),
            ));
        }
        let conj = CBox { re: o.re.clone(), im: o.im.neg() };
        let num = self.mul(&conj);
        Ok(CBox { re: num.re.div(&d)?, im: num.im.div(&d)? })
    }

    #[must_use]
    pub fn compress(&self, bits: u32) -> Self {
        CBox { re: self.re.compress(bits), im: self.im.compress(bits) }
    }

    #[must_use]
    pub fn mid(&self) -> (Rat, Rat) {
        (self.re.mid(), self.im.mid())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{parse_decimal, ratio};

    fn assert_encloses(iv: &RInt, decimal: &str, max_width_bits: u32) {
        // The reference is a truncated decimal, so compare against a band
        // one ulp of the literal wide rather than demanding containment.
        let v = parse_decimal(decimal).unwrap();
        let frac_digits = decimal.split('.').nth(1).map_or(0, str::len) as i64;
        let ulp = Rat::new(BigInt::one(), BigInt::from(10).pow(frac_digits as u32));
        assert!(
            (iv.mid() - &v).abs() <= ulp + iv.width(),
            "enclosure [{}, {}] not within one ulp of {decimal}",
            iv.lo(),
            iv.hi()
        );
        assert!(
            iv.width_within(max_width_bits),
            "enclosure too wide: {} > 2^-{max_width_bits}",
            iv.width()
        );
    }

    #[test]
    fn interval_ring_ops_enclose() {
        let a = RInt::new(ratio(1, 3), ratio(1, 2));
        let b = RInt::new(ratio(-2, 1), ratio(-1, 1));
        let p = a.mul(&b);
        assert!(p.contains(&ratio(-1, 2))); // (1/2)·(−1)
        assert!(p.contains(&ratio(-2, 3))); // (1/3)·(−2)
        assert!(p.lo() <= &ratio(-1, 1) && p.hi() >= &ratio(-1, 3));
        let q = a.sub(&b);
        assert!(q.is_positive());
        assert_eq!(a.abs(), a);
        assert_eq!(b.abs(), b.neg());
    }

    #[test]
    fn sqr_is_tight_around_zero() {
        let a = RInt::new(ratio(-1, 2), ratio(1, 3));
        let s = a.sqr();
        assert_eq!(s.lo(), &ratio(0, 1));
        assert_eq!(s.hi(), &ratio(1, 4));
    }

    #[test]
    fn ln2_matches_reference_digits() {
        // ln 2 = 0.69314718055994530941723212145817656807550013436026...
        let v = ln2(200);
        assert_encloses(&v, "0.693147180559945309417232121458176568075500134360255", 190);
    }

    #[test]
    fn pi_matches_reference_digits() {
        // π = 3.14159265358979323846264338327950288419716939937510...
        let v = pi(200);
        assert_encloses(&v, "3.141592653589793238462643383279502884197169399375105", 190);
    }

    #[test]
    fn ln_of_rationals_matches_reference_digits() {
        // ln 10 = 2.30258509299404568401799145468436420760110148862877...
        let v = ln_rat(&rat::from_i64(10), 200).unwrap();
        assert_encloses(&v, "2.302585092994045684017991454684364207601101488628772", 190);
        // ln(1/3) = −1.09861228866810969139524523692252570464749055782275...
        let v = ln_rat(&ratio(1, 3), 160).unwrap();
        assert_encloses(&v, "-1.098612288668109691395245236922525704647490557822749", 150);
        // ln(3/2) = 0.405465108108164381978013115464349136571990423462313...
        let v = ln_rat(&ratio(3, 2), 160).unwrap();
        assert_encloses(&v, "0.405465108108164381978013115464349136571990423462313", 150);
        // ln 1 = 0 exactly enclosed
        let v = ln_rat(&rat::one(), 100).unwrap();
        assert!(v.contains(&rat::zero()));
        assert!(v.width_within(90));
    }

    #[test]
    fn ln_additivity_certified() {
        // Enclosures of ln 6 and ln 2 + ln 3 must intersect: they bound the
        // same real number.
        let l6 = ln_rat(&rat::from_i64(6), 150).unwrap();
        let l2 = ln_rat(&rat::from_i64(2), 150).unwrap();
        let l3 = ln_rat(&rat::from_i64(3), 150).unwrap();
        let sum = l2.add(&l3);
        assert!(sum.lo() <= l6.hi() && l6.lo() <= sum.hi());
        assert!(sum.sub(&l6).contains_zero());
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(ln_rat(&rat::zero(), 64).is_err());
        assert!(ln_rat(&ratio(-3, 2), 64).is_err());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = rat::from_i64(2);
        let lo = sqrt_down(&two, 100);
        let hi = sqrt_up(&two, 100);
        assert!(&lo * &lo <= two && two <= &hi * &hi);
        assert!(&hi - &lo <= rat::pow2_inv(98));
    }

    #[test]
    fn complex_box_mul_div_roundtrip() {
        let z = CBox::point(ratio(3, 1), ratio(4, 1));
        let w = CBox::point(ratio(1, 2), ratio(-1, 3));
        let q = z.mul(&w).div(&w).unwrap();
        assert!(q.re.contains(&ratio(3, 1)));
        assert!(q.im.contains(&ratio(4, 1)));
        assert!(z.norm_sq().contains(&ratio(25, 1)));
    }

    #[test]
    fn certified_le_is_strict_about_overlap() {
        let a = RInt::new(ratio(0, 1), ratio(1, 1));
        let b = RInt::new(ratio(2, 1), ratio(3, 1));
        assert_eq!(a.certified_le(&b), Some(true));
        assert_eq!(b.certified_le(&a), Some(false));
        let c = RInt::new(ratio(1, 2), ratio(5, 2));
        assert_eq!(a.certified_le(&c), None);
    }
}
