//! Polynomials over the rationals with certified root isolation.
//!
//! Real roots are isolated by Sturm sequences and refined by sign-preserving
//! bisection, so a root is always a rational interval `[lo, hi]` with
//! `f(lo)·f(hi) < 0`. Complex roots are located by an Aberth–Ehrlich sweep in
//! doubles and then *certified* in exact arithmetic: a disk of radius
//! `deg·|f(z)/f'(z)|` around any point contains a root, and pairwise disjoint
//! disks covering the right count pin down exactly one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{CBox, RInt};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Dense univariate polynomial over `Rat`, coefficients in ascending degree,
/// no trailing zero coefficients (the zero polynomial is an empty vector).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    #[must_use]
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    #[must_use]
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat::from_i64(c)).collect())
    }

    #[must_use]
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    #[must_use]
    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    #[must_use]
    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    #[must_use]
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    #[must_use]
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    #[must_use]
    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    #[must_use]
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    #[must_use]
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat::to_f64(c);
        }
        acc
    }

    #[must_use]
    pub fn eval_interval(&self, x: &RInt) -> RInt {
        let mut acc = RInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RInt::point(c.clone()));
        }
        acc
    }

    #[must_use]
    pub fn eval_cbox(&self, z: &CBox) -> CBox {
        let mut acc = CBox::point(Rat::zero(), Rat::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&CBox::point(c.clone(), Rat::zero()));
        }
        acc
    }

    /// Exact evaluation at a rational complex point.
    #[must_use]
    pub fn eval_complex_rat(&self, re: &Rat, im: &Rat) -> (Rat, Rat) {
        let mut acc_re = Rat::zero();
        let mut acc_im = Rat::zero();
        for c in self.coeffs.iter().rev() {
            let new_re = &acc_re * re - &acc_im * im + c;
            let new_im = &acc_re * im + &acc_im * re;
            acc_re = new_re;
            acc_im = new_im;
        }
        (acc_re, acc_im)
    }

    #[must_use]
    pub fn eval_complex_f64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(rat::to_f64(c), 0.0);
        }
        acc
    }

    #[must_use]
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat::from_i64(i as i64))
                .collect(),
        )
    }

    #[must_use]
    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    #[must_use]
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    #[must_use]
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    #[must_use]
    pub fn scale(&self, k: &Rat) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Euclidean division: `self = q·o + r` with `deg r < deg o`.
    /// Panics if `o` is zero (internal misuse).
    #[must_use]
    pub fn divmod(&self, o: &Self) -> (Self, Self) {
        assert!(!o.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dn = o.coeffs.len();
        if rem.len() < dn {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = Rat::one() / o.leading();
        let mut quot = vec![Rat::zero(); rem.len() - dn + 1];
        for i in (0..quot.len()).rev() {
            let factor = &rem[i + dn - 1] * &lead_inv;
            if factor.is_zero() {
                continue;
            }
            for (j, c) in o.coeffs.iter().enumerate() {
                let v = c * &factor;
                rem[i + j] = &rem[i + j] - v;
            }
            quot[i] = factor;
        }
        rem.truncate(dn - 1);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    #[must_use]
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = Rat::one() / a.leading();
            a.scale(&inv)
        }
    }

    /// A squarefree polynomial has trivial gcd with its derivative.
    #[must_use]
    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Cauchy bound: all complex roots have modulus `< bound`.
    #[must_use]
    pub fn cauchy_bound(&self) -> Rat {
        let lead = self.leading().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let v = c.abs() / &lead;
            if v > m {
                m = v;
            }
        }
        m + Rat::one()
    }

    /// Rational roots of an integer-scaled copy via the rational root
    /// theorem. Returns `None` when the divisor search would be too large
    /// to enumerate (callers fall back to lazy detection).
    #[must_use]
    pub fn rational_roots(&self) -> Option<Vec<Rat>> {
        if self.is_zero() {
            return Some(vec![]);
        }
        // Clear denominators.
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let a0 = ints.iter().find(|c| !c.is_zero())?.clone();
        let an = ints.last()?.clone();
        let p_divs = small_divisors(&a0.abs())?;
        let q_divs = small_divisors(&an.abs())?;
        let mut roots = vec![];
        for p in &p_divs {
            for q in &q_divs {
                for sign in [1i64, -1] {
                    let cand = Rat::new(p * BigInt::from(sign), q.clone());
                    if self.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        // x = 0 divides when the constant term vanishes.
        if self.coeffs[0].is_zero() && !roots.contains(&Rat::zero()) {
            roots.push(Rat::zero());
        }
        roots.sort();
        Some(roots)
    }
}

/// All positive divisors, or `None` if `n` is too large to enumerate.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut divs = vec![];
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            divs.push(BigInt::from(d));
            if d != n / d {
                divs.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    divs.sort();
    Some(divs)
}

// ---------------------------------------------------------------------------
// Sturm sequences and real root isolation.
// ---------------------------------------------------------------------------

/// Sturm chain of a squarefree polynomial, each member normalised to
/// leading coefficient ±1 (positive scalars preserve the sign pattern).
#[must_use]
pub fn sturm_chain(f: &Poly) -> Vec<Poly> {
    let mut chain = vec![];
    let norm = |p: Poly| -> Poly {
        if p.is_zero() {
            p
        } else {
            let s = Rat::one() / p.leading().abs();
            p.scale(&s)
        }
    };
    let mut a = norm(f.clone());
    let mut b = norm(f.derivative());
    chain.push(a.clone());
    while !b.is_zero() {
        chain.push(b.clone());
        let (_, r) = a.divmod(&b);
        a = b;
        b = norm(r.neg());
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &Rat) -> usize {
    let mut last: Option<bool> = None;
    let mut v = 0;
    for p in chain {
        let val = p.eval(x);
        if val.is_zero() {
            continue;
        }
        let pos = val.is_positive();
        if let Some(l) = last {
            if l != pos {
                v += 1;
            }
        }
        last = Some(pos);
    }
    v
}

/// Number of distinct real roots in the open interval `(a, b)`; endpoints
/// must not be roots.
#[must_use]
pub fn count_roots_between(chain: &[Poly], a: &Rat, b: &Rat) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// A point of `(lo, hi)` that is not a root of `f`; tries the midpoint first
/// and then an equispaced grid finer than the root count, so it always finds
/// one.
fn nonroot_cut(f: &Poly, lo: &Rat, hi: &Rat) -> Rat {
    let mid = (lo + hi) / rat::from_i64(2);
    if !f.eval(&mid).is_zero() {
        return mid;
    }
    let n = f.degree() as i64 + 2;
    for k in 1..n {
        let c = lo + (hi - lo) * rat::ratio(k, n);
        if !f.eval(&c).is_zero() {
            return c;
        }
    }
    unreachable!("a polynomial cannot vanish on {} points", f.degree() + 2);
}

/// Isolating intervals for every real root of a squarefree polynomial,
/// in ascending order. Each interval `[lo, hi]` satisfies
/// `f(lo)·f(hi) < 0`, so it can be refined by plain bisection.
#[must_use]
pub fn isolate_real_roots(f: &Poly) -> Vec<(Rat, Rat)> {
    debug_assert!(f.is_squarefree());
    if f.degree() == 0 {
        return vec![];
    }
    let chain = sturm_chain(f);
    let bound = f.cauchy_bound();
    let lo = -&bound - Rat::one();
    let hi = &bound + Rat::one();
    let mut out = vec![];
    let mut stack = vec![(lo.clone(), hi.clone(), count_roots_between(&chain, &lo, &hi))];
    while let Some((a, b, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let c = nonroot_cut(f, &a, &b);
                let left = count_roots_between(&chain, &a, &c);
                stack.push((a, c.clone(), left));
                stack.push((c, b, count - left));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Shrinks an isolating interval by bisection until its width is at most
/// `2^-bits`, preserving the sign change at the endpoints.
#[must_use]
pub fn refine_real_root(f: &Poly, lo: &Rat, hi: &Rat, bits: u32) -> (Rat, Rat) {
    let target = rat::pow2_inv(bits);
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let sign_lo = f.eval(&lo).is_positive();
    debug_assert!(f.eval(&hi).is_positive() != sign_lo, "no sign change");
    while &hi - &lo > target {
        let c = nonroot_cut(f, &lo, &hi);
        if f.eval(&c).is_positive() == sign_lo {
            lo = c;
        } else {
            hi = c;
        }
    }
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Complex roots: Aberth sweep + exact certification.
// ---------------------------------------------------------------------------

/// A certified complex root disk: the open disk around `center` of squared
/// radius `radius_sq` contains at least one root of the polynomial it was
/// certified against; disjointness across a full set of disks upgrades that
/// to *exactly* one.
#[derive(Clone, Debug)]
pub struct CertifiedDisk {
    pub center: (Rat, Rat),
    pub radius_sq: Rat,
}

impl CertifiedDisk {
    /// Certified axis-aligned enclosure of the root inside the disk.
    #[must_use]
    pub fn enclosure(&self, bits: u32) -> CBox {
        let r = crate::interval::sqrt_up(&self.radius_sq, bits + 8);
        CBox::new(
            RInt::new(&self.center.0 - &r, &self.center.0 + &r),
            RInt::new(&self.center.1 - &r, &self.center.1 + &r),
        )
    }

    #[must_use]
    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(rat::to_f64(&self.center.0), rat::to_f64(&self.center.1))
    }

    /// Sufficient (sqrt-free) disjointness test: centers farther apart than
    /// `√(2(r₁² + r₂²)) ≥ r₁ + r₂`.
    #[must_use]
    pub fn certainly_disjoint(&self, o: &CertifiedDisk) -> bool {
        let dre = &self.center.0 - &o.center.0;
        let dim = &self.center.1 - &o.center.1;
        let dist_sq = &dre * &dre + &dim * &dim;
        dist_sq > (&self.radius_sq + &o.radius_sq) * rat::from_i64(2)
    }

    /// The whole disk lies strictly above the real axis.
    #[must_use]
    pub fn avoids_real_axis(&self) -> bool {
        self.center.1.is_positive() && &self.center.1 * &self.center.1 > self.radius_sq
    }
}

/// Certifies a disk around a rational complex point: any point `z` with
/// `f'(z) ≠ 0` has a root of `f` within distance `deg·|f(z)/f'(z)|`.
pub fn certify_disk(f: &Poly, re: &Rat, im: &Rat) -> Result<CertifiedDisk> {
    let (p_re, p_im) = f.eval_complex_rat(re, im);
    let df = f.derivative();
    let (d_re, d_im) = df.eval_complex_rat(re, im);
    let denom = &d_re * &d_re + &d_im * &d_im;
    if denom.is_zero() {
        return Err(Error::PrecisionExceeded(
            "derivative vanishes at complex root candidate".into(),
        ));
    }
    let num = &p_re * &p_re + &p_im * &p_im;
    let n = rat::from_i64(f.degree() as i64);
    Ok(CertifiedDisk {
        center: (re.clone(), im.clone()),
        radius_sq: &n * &n * num / denom,
    })
}

/// Approximate log2 of a positive rational (for precision bookkeeping).
fn log2_approx(x: &Rat) -> i64 {
    if x.is_zero() {
        return i64::MIN / 2;
    }
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Newton-refines a certified disk until `radius ≤ 2^-bits`. Quadratic
/// convergence for the simple roots of a squarefree polynomial.
pub fn refine_disk(f: &Poly, disk: &CertifiedDisk, bits: u32) -> Result<CertifiedDisk> {
    let df = f.derivative();
    let mut cur = disk.clone();
    let target_sq = rat::pow2_inv(2 * bits);
    for _ in 0..64 {
        if cur.radius_sq <= target_sq {
            return Ok(cur);
        }
        let (re, im) = (&cur.center.0, &cur.center.1);
        let (p_re, p_im) = f.eval_complex_rat(re, im);
        let (d_re, d_im) = df.eval_complex_rat(re, im);
        let denom = &d_re * &d_re + &d_im * &d_im;
        if denom.is_zero() {
            return Err(Error::PrecisionExceeded("Newton step hit a critical point".into()));
        }
        // z ← z − f(z)/f'(z), then dyadic rounding to curb coefficient growth.
        let step_re = (&p_re * &d_re + &p_im * &d_im) / &denom;
        let step_im = (&p_im * &d_re - &p_re * &d_im) / &denom;
        let acc_bits = (-log2_approx(&cur.radius_sq) / 2).max(8) as u32;
        let round_bits = (2 * acc_bits + 48).min(4 * bits + 48);
        let new_re = rat::dyadic_floor(&(re - step_re), round_bits);
        let new_im = rat::dyadic_floor(&(im - step_im), round_bits);
        let next = certify_disk(f, &new_re, &new_im)?;
        if next.radius_sq >= cur.radius_sq {
            return Err(Error::PrecisionExceeded(
                "complex Newton refinement stalled".into(),
            ));
        }
        cur = next;
    }
    Err(Error::PrecisionExceeded(
        "complex root refinement exceeded its iteration budget".into(),
    ))
}

/// Aberth–Ehrlich simultaneous root finder in doubles; good enough to seed
/// exact certification for the small degrees used here.
#[must_use]
fn aberth_f64(f: &Poly, seed_angle: f64) -> Vec<Complex64> {
    let n = f.degree();
    let df = f.derivative();
    let radius = 0.5 + 0.5 * rat::to_f64(&f.cauchy_bound());
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + seed_angle;
            Complex64::from_polar(radius * (0.5 + 0.3 * ((k % 3) as f64)), th)
        })
        .collect();
    for _ in 0..400 {
        let mut max_delta = 0.0f64;
        for i in 0..n {
            let p = f.eval_complex_f64(z[i]);
            let dp = df.eval_complex_f64(z[i]);
            if dp.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let mut s = Complex64::ZERO;
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (z[i] - zj).finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let delta = if denom.norm() > 1e-12 { w / denom } else { w };
            z[i] -= delta;
            max_delta = max_delta.max(delta.norm() / (1.0 + z[i].norm()));
        }
        if max_delta < 1e-14 {
            break;
        }
    }
    z
}

/// Isolates the nonreal roots of a squarefree polynomial as certified,
/// pairwise-disjoint disks in the upper half plane, in deterministic order
/// (ascending real part). `real_count` is the exact number of real roots
/// (from Sturm); it pins down how many disks must be found.
pub fn isolate_complex_roots(f: &Poly, real_count: usize, bits: u32) -> Result<Vec<CertifiedDisk>> {
    let n = f.degree();
    if (n - real_count) % 2 != 0 {
        return Err(Error::Invariant(
            "nonreal root count of a rational polynomial must be even".into(),
        ));
    }
    let expected = (n - real_count) / 2;
    if expected == 0 {
        return Ok(vec![]);
    }
    'attempt: for attempt in 0..6 {
        let approx = aberth_f64(f, 0.55 + 0.71 * attempt as f64);
        // The 2·expected approximations farthest from the real axis are the
        // nonreal candidates; keep the upper-half representatives.
        let mut sorted = approx;
        sorted.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
        let mut upper: Vec<Complex64> = sorted[..2 * expected]
            .iter()
            .copied()
            .filter(|z| z.im > 0.0)
            .collect();
        if upper.len() != expected {
            continue;
        }
        upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut disks = vec![];
        for z in upper {
            let re = rat::dyadic_floor(&rat::from_f64(z.re)?, 52);
            let im = rat::dyadic_floor(&rat::from_f64(z.im)?, 52);
            let disk = match certify_disk(f, &re, &im).and_then(|d| refine_disk(f, &d, bits)) {
                Ok(d) => d,
                Err(_) => continue 'attempt,
            };
            if !disk.avoids_real_axis() {
                continue 'attempt;
            }
            disks.push(disk);
        }
        // Mutual disjointness, including against conjugate partners.
        let mut all = disks.clone();
        all.extend(disks.iter().map(|d| CertifiedDisk {
            center: (d.center.0.clone(), -d.center.1.clone()),
            radius_sq: d.radius_sq.clone(),
        }));
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if !all[i].certainly_disjoint(&all[j]) {
                    continue 'attempt;
                }
            }
        }
        return Ok(disks);
    }
    Err(Error::PrecisionExceeded(
        "complex root isolation did not converge to disjoint certified disks".into(),
    ))
}

// ---------------------------------------------------------------------------
// Irreducibility witness modulo a small prime.
// ---------------------------------------------------------------------------

mod fp {
    //! Tiny dense polynomial arithmetic over 𝔽_p for word-sized primes.

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mulmod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len();
        let lead_inv = inv_mod(m[dm - 1], p);
        while r.len() >= dm {
            let k = r.len() - dm;
            let factor = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
            for (j, &c) in m.iter().enumerate() {
                let sub = (factor as u128 * c as u128 % p as u128) as u64;
                r[k + j] = (r[k + j] + p - sub) % p;
            }
            trim(&mut r);
            if r.len() > k + dm {
                unreachable!();
            }
        }
        r
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// g^e mod m over 𝔽_p[x].
    pub fn powmod(g: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(g, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mulmod(&acc, &base, p), m, p);
            }
            base = rem(&mulmod(&base, &base, p), m, p);
            e >>= 1;
        }
        acc
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        // Fermat: p prime.
        let mut e = p - 2;
        let mut base = a % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * base as u128 % p as u128) as u64;
            }
            base = (base as u128 * base as u128 % p as u128) as u64;
            e >>= 1;
        }
        acc
    }
}

/// Searches for a prime `p ≤ max_prime` such that the reduction of `f`
/// modulo `p` stays at full degree and is irreducible over 𝔽_p. Such a
/// witness proves irreducibility over ℚ for a primitive integer polynomial.
/// Absence of a witness proves nothing.
#[must_use]
pub fn irreducibility_witness(f: &Poly, max_prime: u64) -> Option<u64> {
    let n = f.degree();
    if n == 0 {
        return None;
    }
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let primes = small_primes(max_prime);
    'primes: for &p in &primes {
        let fp: Vec<u64> = ints
            .iter()
            .map(|c| {
                let m = c % BigInt::from(p);
                let m = if m.is_negative() { m + BigInt::from(p) } else { m };
                m.to_u64().unwrap()
            })
            .collect();
        if fp[n] == 0 {
            continue; // degree dropped
        }
        // f irreducible over 𝔽_p  ⇔  x^{p^n} ≡ x (mod f) and
        // gcd(x^{p^{n/ℓ}} − x, f) = 1 for every prime ℓ | n.
        let x = vec![0u64, 1];
        let mut frob = vec![x.clone()]; // frob[k] = x^{p^k} mod f
        for _ in 0..n {
            let next = compose_frobenius(frob.last().unwrap(), p, &fp);
            frob.push(next);
        }
        if frob[n] != fp::rem(&x, &fp, p) {
            continue 'primes;
        }
        for l in prime_divisors(n as u64) {
            let k = n / l as usize;
            let mut diff = sub_mod(&frob[k], &x, p);
            fp::trim(&mut diff);
            if diff.is_empty() {
                continue 'primes; // x^{p^k} = x: proper subfield of roots
            }
            let g = fp::gcd(fp.clone(), diff, p);
            if g.len() > 1 {
                continue 'primes;
            }
        }
        return Some(p);
    }
    None
}

/// `g ↦ g^p mod f` over 𝔽_p.
fn compose_frobenius(g: &[u64], p: u64, f: &[u64]) -> Vec<u64> {
    fp::powmod(g, p, f, p)
}

fn sub_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    out
}

fn small_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; (limit + 1) as usize];
    let mut out = vec![];
    for p in 2..=limit as usize {
        if sieve[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= limit as usize {
                sieve[q] = false;
                q += p;
            }
        }
    }
    out
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{parse_decimal, ratio};

    fn cubic() -> Poly {
        // x³ − 7x² + 14x − 7: three real roots in (0, 4)
        Poly::from_int_coeffs(&[-7, 14, -7, 1])
    }

    #[test]
    fn divmod_roundtrip() {
        let f = cubic();
        let g = Poly::from_int_coeffs(&[1, 1]);
        let (q, r) = f.divmod(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree() || r.is_zero());
    }

    #[test]
    fn gcd_detects_square_factors() {
        let f = Poly::from_int_coeffs(&[-2, 0, 1]); // x² − 2
        let sq = f.mul(&f);
        assert!(f.is_squarefree());
        assert!(!sq.is_squarefree());
        assert_eq!(sq.gcd(&sq.derivative()).degree(), 2);
    }

    #[test]
    fn isolates_the_three_cubic_roots() {
        let f = cubic();
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
        // Coarse locations, then Vieta as the exact oracle: the refined
        // enclosures must be consistent with Σα = 7, Σαβ = 14, αβγ = 7.
        let approx = ["0.753", "2.445", "3.802"];
        let mut sum = RInt::zero();
        let mut prod = RInt::point(rat::one());
        let mut refined = vec![];
        for ((lo, hi), dec) in roots.iter().zip(approx) {
            let (lo, hi) = refine_real_root(&f, lo, hi, 80);
            let v = parse_decimal(dec).unwrap();
            assert!((RInt::new(lo.clone(), hi.clone()).mid() - v).abs() < ratio(1, 1000));
            let iv = RInt::new(lo, hi);
            sum = sum.add(&iv);
            prod = prod.mul(&iv);
            refined.push(iv);
        }
        assert!(sum.contains(&rat::from_i64(7)));
        assert!(prod.contains(&rat::from_i64(7)));
        let pairwise = refined[0]
            .mul(&refined[1])
            .add(&refined[0].mul(&refined[2]))
            .add(&refined[1].mul(&refined[2]));
        assert!(pairwise.contains(&rat::from_i64(14)));
    }

    #[test]
    fn isolates_quadratic_and_counts() {
        let f = Poly::from_int_coeffs(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        let chain = sturm_chain(&f);
        assert_eq!(count_roots_between(&chain, &ratio(-3, 1), &ratio(0, 1)), 1);
        assert_eq!(count_roots_between(&chain, &ratio(0, 1), &ratio(3, 1)), 1);
        assert_eq!(count_roots_between(&chain, &ratio(3, 1), &ratio(4, 1)), 0);
    }

    #[test]
    fn no_real_roots_for_x2_plus_1() {
        let f = Poly::from_int_coeffs(&[1, 0, 1]);
        assert!(isolate_real_roots(&f).is_empty());
    }

    #[test]
    fn refinement_squeezes_sqrt2() {
        let f = Poly::from_int_coeffs(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f);
        let (lo, hi) = roots.last().unwrap();
        let (lo, hi) = refine_real_root(&f, lo, hi, 100);
        assert!(&lo * &lo <= rat::from_i64(2));
        assert!(&hi * &hi >= rat::from_i64(2));
        assert!(&hi - &lo <= rat::pow2_inv(100));
    }

    #[test]
    fn complex_roots_of_cube_root_two() {
        // x³ − 2: one real root, conjugate pair at 2^{1/3}·e^{±2πi/3}
        let f = Poly::from_int_coeffs(&[-2, 0, 0, 1]);
        let disks = isolate_complex_roots(&f, 1, 80).unwrap();
        assert_eq!(disks.len(), 1);
        let d = &disks[0];
        let z = d.center_f64();
        // Exact oracle: the enclosure of the certified disk must contain a
        // zero of f (interval evaluation straddles 0 in both components).
        let fz = f.eval_cbox(&d.enclosure(80));
        assert!(fz.re.contains_zero() && fz.im.contains_zero());
        assert!(z.re < -0.62 && z.re > -0.64, "re ≈ −2^(1/3)/2, got {}", z.re);
        assert!(z.im > 1.08 && z.im < 1.10, "im ≈ 2^(1/3)·√3/2, got {}", z.im);
        assert!(d.radius_sq <= rat::pow2_inv(160));
        assert!(d.avoids_real_axis());
    }

    #[test]
    fn complex_roots_of_x4_plus_1() {
        let f = Poly::from_int_coeffs(&[1, 0, 0, 0, 1]);
        let disks = isolate_complex_roots(&f, 0, 64).unwrap();
        assert_eq!(disks.len(), 2);
        // e^{iπ/4} and e^{3iπ/4}, sorted by real part
        let z0 = disks[0].center_f64();
        let z1 = disks[1].center_f64();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((z0.re + s).abs() < 1e-10 && (z0.im - s).abs() < 1e-10);
        assert!((z1.re - s).abs() < 1e-10 && (z1.im - s).abs() < 1e-10);
    }

    #[test]
    fn rational_root_search() {
        // (x − 1)(x + 2)(2x − 3) = 2x³ + x² − 7x + ... let the poly speak
        let f = Poly::from_int_coeffs(&[1, -1])
            .mul(&Poly::from_int_coeffs(&[2, 1]))
            .mul(&Poly::from_int_coeffs(&[-3, 2]));
        let roots = f.rational_roots().unwrap();
        assert_eq!(roots, vec![ratio(-2, 1), ratio(1, 1), ratio(3, 2)]);
        assert_eq!(cubic().rational_roots().unwrap(), vec![]);
    }

    #[test]
    fn irreducibility_witness_found_for_cubic() {
        assert!(irreducibility_witness(&cubic(), 100).is_some());
        assert!(irreducibility_witness(&Poly::from_int_coeffs(&[-2, 0, 0, 1]), 100).is_some());
    }

    #[test]
    fn no_witness_for_composites_or_swinnerton_dyer() {
        // (x² − 2)(x² − 3) factors over every 𝔽_p, so no witness exists.
        let f = Poly::from_int_coeffs(&[-2, 0, 1]).mul(&Poly::from_int_coeffs(&[-3, 0, 1]));
        assert!(irreducibility_witness(&f, 200).is_none());
        // x⁴ + 1 is irreducible over ℚ but reducible mod every prime.
        let g = Poly::from_int_coeffs(&[1, 0, 0, 0, 1]);
        assert!(irreducibility_witness(&g, 200).is_none());
    }

    #[test]
    fn interval_evaluation_encloses() {
        let f = cubic();
        let x = RInt::new(ratio(3, 4), ratio(4, 5));
        let y = f.eval_interval(&x);
        assert!(y.contains(&f.eval(&ratio(3, 4))));
        assert!(y.contains(&f.eval(&ratio(7, 9))));
        assert!(y.contains(&f.eval(&ratio(4, 5))));
    }
}
