//! Number fields presented by a primitive element, with exact arithmetic in
//! a user-chosen basis and certified embeddings.
//!
//! A field `Φ = ℚ(ω₁, …, ω_d)` of degree `n = d + 1` is described by the
//! minimal polynomial `f` of a primitive element `ρ` together with rational
//! polynomials expressing each `ω_j` in `ρ`. Elements carry exact rational
//! coordinates in the basis `(1, ω₁, …, ω_d)`; multiplication goes through a
//! structure tensor computed once by polynomial reduction modulo `f`.
//!
//! Embeddings are the roots of `f`: real roots live in shrinking rational
//! intervals with a sign change at the endpoints, complex roots in certified
//! disks. Every numeric answer (Minkowski vectors, logarithmic embeddings,
//! signs) is derived from those enclosures at an explicit precision, with
//! refinement on demand; enclosures only ever shrink, and refinement hands
//! out fresh intervals instead of mutating shared state.

use std::fmt;
use std::sync::Mutex;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::interval::{CBox, RInt};
use crate::matrix::Mat;
use crate::poly::{self, CertifiedDisk, Poly};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Default certified precision (bits) for embedding enclosures.
pub const DEFAULT_ROOT_BITS: u32 = 80;

/// Element of a number field: exact rational coordinates in the basis
/// `(1, ω₁, …, ω_d)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    coords: Vec<Rat>,
}

impl FieldElement {
    #[must_use]
    pub fn from_coords(coords: Vec<Rat>) -> Self {
        FieldElement { coords }
    }

    #[must_use]
    pub fn from_int_coords(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| rat::from_i64(c)).collect() }
    }

    #[must_use]
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integer coordinates, when every coordinate is an integer that fits.
    #[must_use]
    pub fn int_coords(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { c.numer().to_i64() } else { None })
            .collect()
    }

    /// Coordinates joined for CSV cells: `"a0;a1;...;ad"` with exact
    /// rational entries.
    #[must_use]
    pub fn coord_string(&self) -> String {
        self.coords
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Refinable state of the root enclosures of the minimal polynomial.
#[derive(Clone, Debug)]
struct RootState {
    bits: u32,
    /// Real roots: σ₁ first, remaining in ascending order.
    real: Vec<(Rat, Rat)>,
    /// Upper-half-plane complex roots, ascending real part.
    complex: Vec<CertifiedDisk>,
}

/// A number field with exact arithmetic and certified embeddings.
#[derive(Debug)]
pub struct NumberField {
    minpoly: Poly,
    /// Field degree `n = d + 1`.
    n: usize,
    /// ω definitions as polynomials in the primitive element.
    omega_defs: Vec<Poly>,
    /// Columns: basis elements in the power basis of ρ.
    to_power: Mat<Rat>,
    /// `mult_tensor[i][j]` = coordinates of `basis_i · basis_j`.
    mult_tensor: Vec<Vec<Vec<Rat>>>,
    r1: usize,
    r2: usize,
    roots: Mutex<RootState>,
    /// σ₁ images of the basis elements as plain doubles (53-bit certified).
    basis_sigma1_f64: Vec<f64>,
}

impl NumberField {
    /// Builds the field `ℚ(ω₁, …, ω_d)` from the minimal polynomial of a
    /// primitive element, the ω definitions, and optional decimal hints
    /// that designate the distinguished real embedding σ₁ (default: the
    /// smallest real root).
    pub fn new(
        minpoly: Poly,
        omega_defs: Vec<Poly>,
        sigma1_hints: Option<(&[Rat], Rat)>,
    ) -> Result<Self> {
        let n = minpoly.degree();
        if n < 2 {
            return Err(Error::Config(format!(
                "field degree must be at least 2, got {n}"
            )));
        }
        if minpoly.leading().is_zero() {
            return Err(Error::Config("zero leading coefficient".into()));
        }
        if !minpoly.is_squarefree() {
            return Err(Error::RepeatedRoots);
        }
        if let Some(roots) = minpoly.rational_roots() {
            if let Some(r) = roots.first() {
                return Err(Error::ReducibleMinpoly(format!("rational root {r}")));
            }
        }
        // A witness prime proves irreducibility; absence proves nothing and
        // is tolerated — genuine zero divisors are caught exactly in `inv`.
        let _witness = poly::irreducibility_witness(&minpoly, 200);

        if omega_defs.len() != n - 1 {
            return Err(Error::Config(format!(
                "expected {} omega definitions for degree {n}, got {}",
                n - 1,
                omega_defs.len()
            )));
        }
        let reduced_defs: Vec<Poly> = omega_defs
            .iter()
            .map(|p| p.divmod(&minpoly).1)
            .collect();

        // Change of basis: column j holds basis_j in powers of ρ.
        let mut to_power = Mat::zeros(n, n);
        *to_power.at_mut(0, 0) = rat::one();
        for (j, def) in reduced_defs.iter().enumerate() {
            for (i, c) in def.coeffs().iter().enumerate() {
                *to_power.at_mut(i, j + 1) = c.clone();
            }
        }
        let from_power = to_power
            .inverse()
            .map_err(|_| Error::NotABasis)?;

        // Structure tensor by reduction mod f.
        let basis_polys: Vec<Poly> = (0..n)
            .map(|j| Poly::new(to_power.col(j)))
            .collect();
        let mut mult_tensor = vec![vec![vec![]; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let prod = basis_polys[i].mul(&basis_polys[j]).divmod(&minpoly).1;
                let mut pow_coords = vec![Rat::zero(); n];
                for (k, c) in prod.coeffs().iter().enumerate() {
                    pow_coords[k] = c.clone();
                }
                let coords = from_power.mul_vec(&pow_coords);
                mult_tensor[i][j] = coords.clone();
                mult_tensor[j][i] = coords;
            }
        }

        // Root isolation.
        let raw_real = poly::isolate_real_roots(&minpoly);
        let r1 = raw_real.len();
        let r2 = (n - r1) / 2;
        if r1 == 0 {
            return Err(Error::AmbiguousRoot(
                "the distinguished embedding σ₁ must be real, but the minimal polynomial \
                 has no real roots"
                    .into(),
            ));
        }
        let refined: Vec<(Rat, Rat)> = raw_real
            .iter()
            .map(|(lo, hi)| poly::refine_real_root(&minpoly, lo, hi, DEFAULT_ROOT_BITS))
            .collect();

        // Designate σ₁.
        let sigma1_idx = match sigma1_hints {
            None => 0, // ascending order: smallest real root
            Some((hints, tol)) => {
                if hints.len() != n - 1 {
                    return Err(Error::Config(format!(
                        "expected {} embedding hints, got {}",
                        n - 1,
                        hints.len()
                    )));
                }
                let mut matches = vec![];
                for (idx, (lo, hi)) in refined.iter().enumerate() {
                    let root_iv = RInt::new(lo.clone(), hi.clone());
                    let ok = reduced_defs.iter().zip(hints).all(|(def, hint)| {
                        let val = def.eval_interval(&root_iv);
                        (val.mid() - hint).abs() <= tol
                    });
                    if ok {
                        matches.push(idx);
                    }
                }
                match matches.len() {
                    0 => {
                        return Err(Error::AmbiguousRoot(
                            "no real embedding matches the provided hints".into(),
                        ))
                    }
                    1 => matches[0],
                    _ => {
                        return Err(Error::AmbiguousRoot(format!(
                            "{} real embeddings match the hints within tolerance",
                            matches.len()
                        )))
                    }
                }
            }
        };
        let mut real = refined;
        let sigma1 = real.remove(sigma1_idx);
        real.insert(0, sigma1);

        let complex = poly::isolate_complex_roots(&minpoly, r1, DEFAULT_ROOT_BITS)?;

        let mut field = NumberField {
            minpoly,
            n,
            omega_defs: reduced_defs,
            to_power,
            mult_tensor,
            r1,
            r2,
            roots: Mutex::new(RootState { bits: DEFAULT_ROOT_BITS, real, complex }),
            basis_sigma1_f64: vec![],
        };
        let mut f64s = Vec::with_capacity(n);
        for j in 0..n {
            let iv = field.basis_sigma1_interval(j, 60)?;
            f64s.push(iv.mid_f64());
        }
        field.basis_sigma1_f64 = f64s;
        Ok(field)
    }

    /// Field degree `n = d + 1`.
    #[must_use]
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Number of ω generators (`d`).
    #[must_use]
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    #[must_use]
    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    /// Unit rank `r = r₁ + r₂ − 1`.
    #[must_use]
    pub fn unit_rank(&self) -> usize {
        self.r1 + self.r2 - 1
    }

    #[must_use]
    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    /// The ω definitions as polynomials in the primitive element, reduced
    /// mod the minimal polynomial.
    #[must_use]
    pub fn omega_definitions(&self) -> &[Poly] {
        &self.omega_defs
    }

    #[must_use]
    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![Rat::zero(); self.n] }
    }

    #[must_use]
    pub fn one(&self) -> FieldElement {
        let mut coords = vec![Rat::zero(); self.n];
        coords[0] = rat::one();
        FieldElement { coords }
    }

    /// The basis element `ω_j` (`j ≥ 1`); `j = 0` gives 1.
    #[must_use]
    pub fn basis_element(&self, j: usize) -> FieldElement {
        let mut coords = vec![Rat::zero(); self.n];
        coords[j] = rat::one();
        FieldElement { coords }
    }

    /// σ₁ images of the basis elements as doubles (for fast scan paths;
    /// each is the midpoint of a certified enclosure of width ≤ 2⁻⁶⁰).
    #[must_use]
    pub fn basis_sigma1_f64(&self) -> &[f64] {
        &self.basis_sigma1_f64
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &FieldElement, k: &Rat) -> FieldElement {
        FieldElement { coords: a.coords.iter().map(|x| x * k).collect() }
    }

    /// Exact product via the structure tensor.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let mut out = vec![Rat::zero(); self.n];
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let w = ai * bj;
                for (k, t) in self.mult_tensor[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &w * t;
                    }
                }
            }
        }
        FieldElement { coords: out }
    }

    /// Matrix of multiplication by `a` on the ω-basis (columns are
    /// `a · basis_j`).
    pub fn mult_matrix(&self, a: &FieldElement) -> Mat<Rat> {
        self.check(a);
        let mut m = Mat::zeros(self.n, self.n);
        for j in 0..self.n {
            let col = self.mul(a, &self.basis_element(j));
            for (i, c) in col.coords.iter().enumerate() {
                *m.at_mut(i, j) = c.clone();
            }
        }
        m
    }

    /// Exact inverse. Solving against the multiplication matrix both
    /// computes the inverse and proves `a` is not a zero divisor; failure
    /// on a nonzero element is a proof that the minimal polynomial was
    /// reducible after all.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let m = self.mult_matrix(a);
        let mut rhs = Mat::zeros(self.n, 1);
        *rhs.at_mut(0, 0) = rat::one();
        match m.solve(&rhs) {
            Ok(x) => Ok(FieldElement { coords: x.col(0) }),
            Err(_) => Err(Error::ReducibleMinpoly(format!(
                "{a} is a zero divisor, so the defining polynomial is not irreducible"
            ))),
        }
    }

    /// Exact integer power (negative exponents go through `inv`).
    pub fn pow(&self, a: &FieldElement, k: i64) -> Result<FieldElement> {
        let mut base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Field norm: determinant of the multiplication matrix.
    pub fn norm(&self, a: &FieldElement) -> Result<Rat> {
        self.mult_matrix(a).det()
    }

    /// Element in the power basis of ρ (as a polynomial in ρ).
    #[must_use]
    pub fn to_power_poly(&self, a: &FieldElement) -> Poly {
        Poly::new(self.to_power.mul_vec(&a.coords))
    }

    fn check(&self, a: &FieldElement) {
        assert_eq!(a.coords.len(), self.n, "element/field dimension mismatch");
    }

    // --- embeddings -------------------------------------------------------

    /// Number of archimedean embeddings handed out (`r₁ + r₂`; conjugates
    /// of the complex ones are implicit).
    #[must_use]
    pub fn num_places(&self) -> usize {
        self.r1 + self.r2
    }

    fn refine_roots(&self, bits: u32) -> Result<RootState> {
        let mut guard = self.roots.lock().unwrap();
        if bits > guard.bits {
            let real = guard
                .real
                .iter()
                .map(|(lo, hi)| poly::refine_real_root(&self.minpoly, lo, hi, bits))
                .collect();
            let complex = guard
                .complex
                .iter()
                .map(|d| poly::refine_disk(&self.minpoly, d, bits))
                .collect::<Result<Vec<_>>>()?;
            *guard = RootState { bits, real, complex };
        }
        Ok(guard.clone())
    }

    /// Certified enclosure of the primitive element under place `i`
    /// (0-based; real places first, then upper-half complex places).
    fn root_enclosure(&self, i: usize, bits: u32) -> Result<CBox> {
        let state = self.refine_roots(bits)?;
        if i < self.r1 {
            let (lo, hi) = state.real[i].clone();
            Ok(CBox::real(RInt::new(lo, hi)))
        } else {
            Ok(state.complex[i - self.r1].enclosure(bits))
        }
    }

    /// Certified embedding `σ_i(a)` as a complex box of width ≤ `2^-bits`
    /// in each component (the imaginary part is exactly zero for real
    /// places). Refines the root enclosures as needed.
    pub fn embed(&self, a: &FieldElement, place: usize, bits: u32) -> Result<CBox> {
        self.check(a);
        assert!(place < self.num_places(), "place index out of range");
        let p = self.to_power_poly(a);
        let mut b = bits + 8;
        for _ in 0..12 {
            let root = self.root_enclosure(place, b)?;
            let val = p.eval_cbox(&root);
            if val.re.width_within(bits) && val.im.width_within(bits) {
                return Ok(val);
            }
            b = b.saturating_mul(2);
        }
        Err(Error::PrecisionExceeded(format!(
            "embedding enclosure did not reach 2^-{bits}"
        )))
    }

    /// Certified σ₁ value of an element.
    pub fn sigma1(&self, a: &FieldElement, bits: u32) -> Result<RInt> {
        Ok(self.embed(a, 0, bits)?.re)
    }

    fn basis_sigma1_interval(&self, j: usize, bits: u32) -> Result<RInt> {
        self.sigma1(&self.basis_element(j), bits)
    }

    /// Exact sign of σ₁(a): refines until the enclosure decides. For a
    /// nonzero element σ₁(a) ≠ 0, so this terminates.
    pub fn sign_of(&self, a: &FieldElement) -> Result<i32> {
        if a.is_zero() {
            return Ok(0);
        }
        let mut bits = 60;
        while bits <= 1 << 14 {
            let iv = self.sigma1(a, bits)?;
            if let Some(s) = iv.sign() {
                if s != 0 {
                    return Ok(s);
                }
            }
            bits *= 2;
        }
        Err(Error::PrecisionExceeded(
            "sign of σ₁ undecided at 16384 bits".into(),
        ))
    }

    /// Total order on elements by σ₁ value (exact).
    pub fn cmp_sigma1(&self, a: &FieldElement, b: &FieldElement) -> Result<std::cmp::Ordering> {
        let d = self.sub(a, b);
        Ok(match self.sign_of(&d)? {
            s if s < 0 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        })
    }

    /// Minkowski embedding: `(σ₁(a), …, σ_{r₁}(a), Re σ_{r₁+1}(a),
    /// Im σ_{r₁+1}(a), …)` ∈ ℝⁿ, certified componentwise.
    pub fn minkowski(&self, a: &FieldElement, bits: u32) -> Result<Vec<RInt>> {
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.r1 {
            out.push(self.embed(a, i, bits)?.re);
        }
        for i in self.r1..self.r1 + self.r2 {
            let z = self.embed(a, i, bits)?;
            out.push(z.re);
            out.push(z.im);
        }
        Ok(out)
    }

    /// Minkowski embedding as doubles (midpoints of 60-bit enclosures).
    pub fn minkowski_f64(&self, a: &FieldElement) -> Result<Vec<f64>> {
        Ok(self.minkowski(a, 60)?.iter().map(RInt::mid_f64).collect())
    }

    /// Logarithmic embedding `(log|σ_i(a)|)_{i=1..r₁+r₂}`, certified.
    /// Complex places use `½·ln|σ|²` to stay square-root free.
    pub fn log_embedding(&self, a: &FieldElement, bits: u32) -> Result<Vec<RInt>> {
        if a.is_zero() {
            return Err(Error::Invariant("log embedding of zero".into()));
        }
        let mut out = Vec::with_capacity(self.num_places());
        for i in 0..self.num_places() {
            let mut b = bits;
            let iv = loop {
                let z = self.embed(a, i, b)?;
                let sq = z.norm_sq();
                if sq.is_positive() {
                    break crate::interval::ln_interval(&sq, bits + 4)?
                        .scale(&rat::ratio(1, 2));
                }
                b = b.saturating_mul(2);
                if b > 1 << 14 {
                    return Err(Error::PrecisionExceeded(
                        "could not separate |σ(a)| from zero".into(),
                    ));
                }
            };
            out.push(iv.compress(bits));
        }
        Ok(out)
    }

    /// All `n` embeddings of `a` as complex doubles, conjugates included:
    /// real places, then upper-half places, then their conjugates.
    pub fn embed_all_f64(&self, a: &FieldElement) -> Result<Vec<num_complex::Complex64>> {
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.r1 {
            let z = self.embed(a, i, 60)?;
            out.push(num_complex::Complex64::new(z.re.mid_f64(), 0.0));
        }
        for i in self.r1..self.r1 + self.r2 {
            let z = self.embed(a, i, 60)?;
            out.push(num_complex::Complex64::new(z.re.mid_f64(), z.im.mid_f64()));
        }
        for i in self.r1..self.r1 + self.r2 {
            let z = self.embed(a, i, 60)?;
            out.push(num_complex::Complex64::new(z.re.mid_f64(), -z.im.mid_f64()));
        }
        Ok(out)
    }

    /// Weights of the archimedean places (1 for real, 2 for complex);
    /// `Σ w_i log|σ_i(u)| = 0` characterises units.
    #[must_use]
    pub fn place_weights(&self) -> Vec<u32> {
        let mut w = vec![1; self.r1];
        w.extend(std::iter::repeat_n(2, self.r2));
        w
    }
}

/// The worked cubic: f = x³ − 7x² + 14x − 7, ω₁ = ρ, ω₂ = ρ².
#[cfg(test)]
pub(crate) fn cubic_field() -> NumberField {
    let f = Poly::from_int_coeffs(&[-7, 14, -7, 1]);
    let defs = vec![Poly::x(), Poly::x().mul(&Poly::x())];
    NumberField::new(f, defs, None).unwrap()
}

/// Degree-2 field ℚ(φ) with ω₁ = φ − 1 = (√5−1)/2 ≈ 0.618.
#[cfg(test)]
pub(crate) fn golden_field() -> NumberField {
    let f = Poly::from_int_coeffs(&[-1, -1, 1]); // x² − x − 1
    let omega = Poly::from_int_coeffs(&[-1, 1]); // ρ − 1
    let hint = [crate::rat::from_f64(0.6180339887).unwrap()];
    NumberField::new(f, vec![omega], Some((&hint, crate::rat::ratio(1, 100))))
        .expect("golden-mean field")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn el(coords: &[i64]) -> FieldElement {
        FieldElement::from_int_coords(coords)
    }

    #[test]
    fn cubic_field_shape() {
        let k = cubic_field();
        assert_eq!(k.degree(), 3);
        assert_eq!(k.signature(), (3, 0));
        assert_eq!(k.unit_rank(), 2);
    }

    #[test]
    fn product_of_generators() {
        // ω₁ · ω₂ = ω₁³ = 7 − 14ω₁ + 7ω₂
        let k = cubic_field();
        let p = k.mul(&el(&[0, 1, 0]), &el(&[0, 0, 1]));
        assert_eq!(p, el(&[7, -14, 7]));
    }

    #[test]
    fn inverse_of_omega() {
        // ω₁(ω₁² − 7ω₁ + 14) = 7, so ω₁⁻¹ = 2 − ω₁ + ω₂/7
        let k = cubic_field();
        let inv = k.inv(&el(&[0, 1, 0])).unwrap();
        assert_eq!(
            inv,
            FieldElement::from_coords(vec![ratio(2, 1), ratio(-1, 1), ratio(1, 7)])
        );
        assert_eq!(k.mul(&inv, &el(&[0, 1, 0])), k.one());
    }

    #[test]
    fn multiplication_matrices_of_the_two_units() {
        let k = cubic_field();
        let e1 = el(&[2, -4, 1]);
        let m1 = k.mult_matrix(&e1);
        let expect1 = Mat::from_rows(vec![
            vec![ratio(2, 1), ratio(7, 1), ratio(21, 1)],
            vec![ratio(-4, 1), ratio(-12, 1), ratio(-35, 1)],
            vec![ratio(1, 1), ratio(3, 1), ratio(9, 1)],
        ]);
        assert_eq!(m1, expect1);

        let e2 = el(&[-5, 5, -1]);
        let m2 = k.mult_matrix(&e2);
        let expect2 = Mat::from_rows(vec![
            vec![ratio(-5, 1), ratio(-7, 1), ratio(-14, 1)],
            vec![ratio(5, 1), ratio(9, 1), ratio(21, 1)],
            vec![ratio(-1, 1), ratio(-2, 1), ratio(-5, 1)],
        ]);
        assert_eq!(m2, expect2);
    }

    #[test]
    fn norms_and_units() {
        let k = cubic_field();
        assert_eq!(k.norm(&el(&[0, 1, 0])).unwrap(), ratio(7, 1));
        let n1 = k.norm(&el(&[2, -4, 1])).unwrap();
        let n2 = k.norm(&el(&[-5, 5, -1])).unwrap();
        assert!(n1.abs() == rat::one());
        assert!(n2.abs() == rat::one());
    }

    #[test]
    fn embeddings_match_printed_approximations() {
        let k = cubic_field();
        let omega = el(&[0, 1, 0]);
        let mink = k.minkowski_f64(&omega).unwrap();
        assert!((mink[0] - 0.75302).abs() < 1e-4);
        assert!((mink[1] - 2.44504).abs() < 1e-4);
        assert!((mink[2] - 3.80194).abs() < 1e-4);
    }

    #[test]
    fn signs_follow_sigma1() {
        let k = cubic_field();
        assert_eq!(k.sign_of(&el(&[2, -4, 1])).unwrap(), -1); // ε₁ ≈ −0.445
        assert_eq!(k.sign_of(&el(&[-5, 5, -1])).unwrap(), -1); // ε₂ ≈ −1.802
        assert_eq!(k.sign_of(&el(&[0, 1, 0])).unwrap(), 1);
        assert_eq!(k.sign_of(&k.zero()).unwrap(), 0);
    }

    #[test]
    fn log_embedding_of_units_sums_to_zero() {
        let k = cubic_field();
        for coords in [[2i64, -4, 1], [-5, 5, -1]] {
            let logs = k.log_embedding(&el(&coords), 120).unwrap();
            let mut total = RInt::zero();
            for l in &logs {
                total = total.add(l);
            }
            assert!(total.contains(&rat::zero()), "unit log sum must vanish");
            assert!(total.width_within(100));
        }
    }

    #[test]
    fn cube_root_two_field() {
        let f = Poly::from_int_coeffs(&[-2, 0, 0, 1]);
        let k = NumberField::new(f, vec![Poly::x(), Poly::x().mul(&Poly::x())], None).unwrap();
        assert_eq!(k.signature(), (1, 1));
        assert_eq!(k.unit_rank(), 1);
        let omega = el(&[0, 1, 0]);
        let mink = k.minkowski_f64(&omega).unwrap();
        assert!((mink[0] - 1.2599210498948732).abs() < 1e-10);
        assert!((mink[1] + 0.6299605249474366).abs() < 1e-10);
        assert!((mink[2] - 1.0911236359717214).abs() < 1e-8);

        // ∛2 − 1 is a unit; its weighted log embedding vanishes.
        let u = el(&[-1, 1, 0]);
        assert_eq!(k.norm(&u).unwrap(), rat::one());
        let inv = k.inv(&u).unwrap();
        assert_eq!(inv, el(&[1, 1, 1]));
        let logs = k.log_embedding(&u, 120).unwrap();
        let mut total = RInt::zero();
        for (l, w) in logs.iter().zip(k.place_weights()) {
            total = total.add(&l.scale(&rat::from_i64(i64::from(w))));
        }
        assert!(total.contains(&rat::zero()));
        assert!(total.width_within(100));
    }

    #[test]
    fn hint_designation_picks_the_middle_root() {
        let f = Poly::from_int_coeffs(&[-7, 14, -7, 1]);
        let defs = vec![Poly::x(), Poly::x().mul(&Poly::x())];
        let hints = [crate::rat::parse_decimal("2.44504").unwrap(),
                     crate::rat::parse_decimal("5.97823").unwrap()];
        let k = NumberField::new(f, defs, Some((&hints, ratio(1, 1000)))).unwrap();
        let omega = el(&[0, 1, 0]);
        let mink = k.minkowski_f64(&omega).unwrap();
        assert!((mink[0] - 2.44504).abs() < 1e-4, "σ₁ should be the designated root");
    }

    #[test]
    fn hint_ambiguity_and_mismatch_are_errors() {
        let f = Poly::from_int_coeffs(&[-7, 14, -7, 1]);
        let defs = vec![Poly::x(), Poly::x().mul(&Poly::x())];
        let hints = [ratio(2, 1), ratio(5, 1)];
        // Tolerance so large every root matches.
        let err = NumberField::new(f.clone(), defs.clone(), Some((&hints, ratio(100, 1))))
            .unwrap_err();
        assert!(matches!(err, Error::AmbiguousRoot(_)));
        // Tolerance so small nothing matches.
        let err = NumberField::new(f, defs, Some((&hints, ratio(1, 100_000)))).unwrap_err();
        assert!(matches!(err, Error::AmbiguousRoot(_)));
    }

    #[test]
    fn construction_rejects_bad_polynomials() {
        // x² − 1 has rational roots.
        let err = NumberField::new(Poly::from_int_coeffs(&[-1, 0, 1]), vec![Poly::x()], None)
            .unwrap_err();
        assert!(matches!(err, Error::ReducibleMinpoly(_)));
        // (x² − 2)² has repeated roots.
        let sq = Poly::from_int_coeffs(&[-2, 0, 1]);
        let err = NumberField::new(
            sq.mul(&sq),
            vec![Poly::x(), Poly::x().mul(&Poly::x()), Poly::new(vec![rat::zero(); 4])],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::RepeatedRoots));
    }

    #[test]
    fn zero_divisors_expose_reducibility_lazily() {
        // (x² − 2)(x² − 3): squarefree, no rational roots, reducible mod
        // every prime — construction cannot tell, but inversion can.
        let f = Poly::from_int_coeffs(&[-2, 0, 1]).mul(&Poly::from_int_coeffs(&[-3, 0, 1]));
        let defs = vec![
            Poly::x(),
            Poly::x().mul(&Poly::x()),
            Poly::x().mul(&Poly::x()).mul(&Poly::x()),
        ];
        let k = NumberField::new(f, defs, None).unwrap();
        // ω₂ − 2 maps to ρ² − 2, a zero divisor.
        let zd = FieldElement::from_int_coords(&[-2, 0, 1, 0]);
        let err = k.inv(&zd).unwrap_err();
        assert!(matches!(err, Error::ReducibleMinpoly(_)));
    }

    #[test]
    fn dependent_omega_defs_rejected() {
        let f = Poly::from_int_coeffs(&[-7, 14, -7, 1]);
        // ω₂ = ω₁ + 1 is affinely dependent on (1, ω₁).
        let defs = vec![Poly::x(), Poly::new(vec![rat::one(), rat::one()])];
        let err = NumberField::new(f, defs, None).unwrap_err();
        assert!(matches!(err, Error::NotABasis));
    }

    #[test]
    fn power_roundtrip_and_inverse_powers() {
        let k = cubic_field();
        let e1 = el(&[2, -4, 1]);
        let p3 = k.pow(&e1, 3).unwrap();
        let expect = k.mul(&k.mul(&e1, &e1), &e1);
        assert_eq!(p3, expect);
        let pm3 = k.pow(&e1, -3).unwrap();
        assert_eq!(k.mul(&p3, &pm3), k.one());
        assert_eq!(k.pow(&e1, 0).unwrap(), k.one());
    }

    #[test]
    fn certified_embedding_width_honours_request() {
        let k = cubic_field();
        let a = el(&[3, -2, 5]);
        let z = k.embed(&a, 0, 200).unwrap();
        assert!(z.re.width_within(200));
        // Product morphism: σ(ab) ∈ σ(a)·σ(b) enclosure-wise.
        let b = el(&[-1, 7, 2]);
        let ab = k.mul(&a, &b);
        let za = k.embed(&a, 1, 100).unwrap();
        let zb = k.embed(&b, 1, 100).unwrap();
        let zab = k.embed(&ab, 1, 100).unwrap();
        let prod = za.mul(&zb);
        assert!(prod.re.lo() <= zab.re.hi() && zab.re.lo() <= prod.re.hi());
    }
}
