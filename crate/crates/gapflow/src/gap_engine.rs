//! Lattice enumeration and fractional-part spectra.
//!
//! Given a bounded convex region `R ⊂ ℝ^d` and a scale `t ≥ 1`, this module
//! enumerates `M(t) = R(t) ∩ ℤ^d` (where `R(t)` is the homothetic dilation),
//! evaluates the fractional parts `{m·ω}` for the field's designated
//! generators `ω`, and produces the sorted spectrum together with its exact
//! spacings and the list of distinct spacing classes. Floats are used only
//! as fast sort keys; every decision within float noise falls back to exact
//! sign evaluation in the field, so the output order and the spacing
//! coordinate vectors are exact.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

use crate::interval::{certified_floor, RInt};
use crate::numberfield::{FieldElement, NumberField};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Float margin below which comparisons are escalated to exact arithmetic.
/// Accumulated double rounding error at desk scales (`t ≤ ~10⁴`, `d ≤ 4`)
/// stays below `1e-11`, so a `1e-9` band is decided safely by floats alone.
const FLOAT_MARGIN: f64 = 1e-9;

/// A closed or open linear constraint `coeffs·v < rhs` (strict) or `≤ rhs`.
#[derive(Clone, Debug)]
pub struct HalfSpace {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub strict: bool,
}

/// Bounded convex region in ℝ^d, in one of three concrete shapes.
///
/// * `Box` — axis-aligned product of half-open intervals `[lo, hi)`.
/// * `Simplex` — `{v : vᵢ ≥ 0, v·ω < 1}` weighted by the designated
///   generators; this is the physical energy region.
/// * `Halfspaces` — arbitrary exact linear inequalities; boundedness is
///   verified by Fourier–Motzkin elimination at enumeration time.
///
/// Dilation by `t` maps `v ↦ t·v`, i.e. scales box bounds and inequality
/// right-hand sides by `t`.
#[derive(Clone, Debug)]
pub enum ConvexRegion {
    Box { bounds: Vec<(Rat, Rat)> },
    Simplex { dim: usize },
    Halfspaces { dim: usize, ineqs: Vec<HalfSpace> },
}

impl ConvexRegion {
    /// Unit box `[0,1)^d`.
    #[must_use]
    pub fn unit_box(dim: usize) -> Self {
        ConvexRegion::Box {
            bounds: vec![(rat::zero(), rat::one()); dim],
        }
    }

    /// Box with explicit per-axis bounds; each must satisfy `lo < hi`.
    pub fn from_bounds(bounds: Vec<(Rat, Rat)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Config("region must have dimension ≥ 1".into()));
        }
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            if lo >= hi {
                return Err(Error::Config(format!(
                    "box axis {i} has empty interior: [{lo}, {hi})"
                )));
            }
        }
        Ok(ConvexRegion::Box { bounds })
    }

    /// The ω-weighted simplex `{v : vᵢ ≥ 0, v·ω < 1}`.
    #[must_use]
    pub fn simplex(dim: usize) -> Self {
        ConvexRegion::Simplex { dim }
    }

    /// Region cut out by explicit linear inequalities.
    pub fn from_halfspaces(dim: usize, ineqs: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("region must have dimension ≥ 1".into()));
        }
        for (i, h) in ineqs.iter().enumerate() {
            if h.coeffs.len() != dim {
                return Err(Error::Config(format!(
                    "halfspace {i} has {} coefficients, expected {dim}",
                    h.coeffs.len()
                )));
            }
        }
        Ok(ConvexRegion::Halfspaces { dim, ineqs })
    }

    /// Ambient dimension `d`.
    #[must_use]
    pub fn dim(&self) -> usize {
        match self {
            ConvexRegion::Box { bounds } => bounds.len(),
            ConvexRegion::Simplex { dim } | ConvexRegion::Halfspaces { dim, .. } => *dim,
        }
    }
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin bounding boxes for half-space regions.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct LinIneq {
    coeffs: Vec<Rat>,
    rhs: Rat,
    strict: bool,
}

enum AxisRange {
    Empty,
    Bounded { lo: Rat, lo_strict: bool, hi: Rat, hi_strict: bool },
}

/// Eliminate variable `j` from the system, keeping satisfiability along the
/// remaining variables (classic Fourier–Motzkin step).
fn fm_eliminate(system: &[LinIneq], j: usize) -> Vec<LinIneq> {
    let mut kept = Vec::new();
    let mut upper = Vec::new(); // coeff_j > 0
    let mut lower = Vec::new(); // coeff_j < 0
    for q in system {
        let c = &q.coeffs[j];
        if c.is_zero() {
            kept.push(q.clone());
        } else if c.is_positive() {
            upper.push(q.clone());
        } else {
            lower.push(q.clone());
        }
    }
    for u in &upper {
        for l in &lower {
            // Multiply u by -coeff_j(l) > 0 and l by coeff_j(u) > 0, then add;
            // the j-coordinate cancels exactly.
            let a = -&l.coeffs[j];
            let b = u.coeffs[j].clone();
            let coeffs: Vec<Rat> = u
                .coeffs
                .iter()
                .zip(&l.coeffs)
                .map(|(cu, cl)| &(cu * &a) + &(cl * &b))
                .collect();
            let rhs = &(&u.rhs * &a) + &(&l.rhs * &b);
            let strict = u.strict || l.strict;
            // Drop tautologies to keep the system small.
            let all_zero = coeffs.iter().all(Rat::is_zero);
            if all_zero && (rhs.is_positive() || (rhs.is_zero() && !strict)) {
                continue;
            }
            kept.push(LinIneq { coeffs, rhs, strict });
        }
    }
    kept
}

/// Exact bound for a single axis, obtained by eliminating all other axes.
fn fm_axis_range(system: &[LinIneq], dim: usize, axis: usize) -> Result<AxisRange> {
    let mut sys: Vec<LinIneq> = system.to_vec();
    for j in 0..dim {
        if j != axis {
            sys = fm_eliminate(&sys, j);
        }
    }
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for q in &sys {
        let c = &q.coeffs[axis];
        if c.is_zero() {
            // Constant constraint 0 ≤/< rhs: if violated, the region is empty.
            if q.rhs.is_negative() || (q.rhs.is_zero() && q.strict) {
                return Ok(AxisRange::Empty);
            }
            continue;
        }
        let bound = &q.rhs / c;
        if c.is_positive() {
            // v_axis ≤/< bound
            match &mut hi {
                Some((val, strict)) => {
                    if bound < *val || (bound == *val && q.strict) {
                        *val = bound;
                        *strict = q.strict;
                    }
                }
                None => hi = Some((bound, q.strict)),
            }
        } else {
            // v_axis ≥/> bound
            match &mut lo {
                Some((val, strict)) => {
                    if bound > *val || (bound == *val && q.strict) {
                        *val = bound;
                        *strict = q.strict;
                    }
                }
                None => lo = Some((bound, q.strict)),
            }
        }
    }
    match (lo, hi) {
        (Some((lo, ls)), Some((hi, hs))) => {
            if lo > hi || (lo == hi && (ls || hs)) {
                Ok(AxisRange::Empty)
            } else {
                Ok(AxisRange::Bounded { lo, lo_strict: ls, hi, hi_strict: hs })
            }
        }
        _ => Err(Error::UnboundedRegion { axis }),
    }
}

/// Integer range `[min, max]` (inclusive) of an exact axis range; `None`
/// when no integer fits.
fn integer_range(range: &AxisRange) -> Option<(i64, i64)> {
    match range {
        AxisRange::Empty => None,
        AxisRange::Bounded { lo, lo_strict, hi, hi_strict } => {
            let min = if *lo_strict {
                rat::floor_int(lo) + 1
            } else {
                -rat::floor_int(&-lo) // ceil(lo)
            };
            let max = if *hi_strict {
                -rat::floor_int(&-hi) - 1 // ceil(hi) − 1
            } else {
                rat::floor_int(hi)
            };
            let min = min.to_i64()?;
            let max = max.to_i64()?;
            if min > max {
                None
            } else {
                Some((min, max))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Membership testing.
// ---------------------------------------------------------------------------

enum TesterKind {
    /// Half-open box bounds scaled by `t`.
    BoxScaled(Vec<(Rat, Rat)>),
    /// Simplex `m ≥ 0, m·ω < t` with a float fast path.
    Simplex { w: Vec<f64>, t_f64: f64, margin: f64, t: Rat },
    /// Integer-cleared linear inequalities (fits in i128).
    IntLinear(Vec<(Vec<i128>, i128, bool)>),
    /// Exact rational inequalities (fallback for huge coefficients).
    RatLinear(Vec<LinIneq>),
}

/// Exact membership test for `m ∈ R(t) ∩ ℤ^d`, reusable across many points.
pub struct MembershipTester<'a> {
    field: &'a NumberField,
    omega_indices: &'a [usize],
    kind: TesterKind,
}

impl<'a> MembershipTester<'a> {
    /// Build a tester for the dilated region `R(t)`.
    pub fn new(
        field: &'a NumberField,
        omega_indices: &'a [usize],
        region: &ConvexRegion,
        t: &Rat,
    ) -> Result<Self> {
        validate_indices(field, omega_indices, region)?;
        let kind = match region {
            ConvexRegion::Box { bounds } => TesterKind::BoxScaled(
                bounds
                    .iter()
                    .map(|(lo, hi)| (lo * t, hi * t))
                    .collect(),
            ),
            ConvexRegion::Simplex { .. } => {
                let w: Vec<f64> = omega_indices
                    .iter()
                    .map(|&j| field.basis_sigma1_f64()[j])
                    .collect();
                let t_f64 = rat::to_f64(t);
                TesterKind::Simplex {
                    w,
                    t_f64,
                    margin: FLOAT_MARGIN * (1.0 + t_f64.abs()),
                    t: t.clone(),
                }
            }
            ConvexRegion::Halfspaces { ineqs, .. } => build_linear_tester(ineqs, t),
        };
        Ok(MembershipTester { field, omega_indices, kind })
    }

    /// Whether the integer vector lies in `R(t)`.
    pub fn contains(&self, m: &[i64]) -> Result<bool> {
        match &self.kind {
            TesterKind::BoxScaled(bounds) => Ok(m
                .iter()
                .zip(bounds)
                .all(|(&mi, (lo, hi))| {
                    let v = rat::from_i64(mi);
                    v >= *lo && v < *hi
                })),
            TesterKind::Simplex { w, t_f64, margin, t } => {
                if m.iter().any(|&mi| mi < 0) {
                    return Ok(false);
                }
                let dot: f64 = m.iter().zip(w).map(|(&mi, wi)| mi as f64 * wi).sum();
                let slack = t_f64 - dot;
                if slack > *margin {
                    return Ok(true);
                }
                if slack < -*margin {
                    return Ok(false);
                }
                // Boundary band: decide by exact sign of t − m·ω.
                let mut coords = vec![Rat::zero(); self.field.degree()];
                coords[0] = t.clone();
                for (k, &j) in self.omega_indices.iter().enumerate() {
                    coords[j] = -rat::from_i64(m[k]);
                }
                Ok(self.field.sign_of(&FieldElement::from_coords(coords))? > 0)
            }
            TesterKind::IntLinear(ineqs) => Ok(ineqs.iter().all(|(c, b, strict)| {
                let dot: i128 = c.iter().zip(m).map(|(&ci, &mi)| ci * mi as i128).sum();
                if *strict {
                    dot < *b
                } else {
                    dot <= *b
                }
            })),
            TesterKind::RatLinear(ineqs) => Ok(ineqs.iter().all(|q| {
                let dot: Rat = q
                    .coeffs
                    .iter()
                    .zip(m)
                    .map(|(c, &mi)| c * &rat::from_i64(mi))
                    .sum();
                if q.strict {
                    dot < q.rhs
                } else {
                    dot <= q.rhs
                }
            })),
        }
    }
}

/// Clear denominators of the scaled inequalities; fall back to rationals if
/// coefficients do not fit comfortably in machine integers.
fn build_linear_tester(ineqs: &[HalfSpace], t: &Rat) -> TesterKind {
    let mut out = Vec::with_capacity(ineqs.len());
    // Keep a safety budget: |coeff|·|m| summed must stay far below i128::MAX.
    let cap = i128::MAX / (1 << 40);
    for h in ineqs {
        let rhs = &h.rhs * t;
        let mut lcm = rhs.denom().clone();
        for c in &h.coeffs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let lcm_rat = Rat::from_integer(lcm);
        let mut ic = Vec::with_capacity(h.coeffs.len());
        let mut ok = true;
        for c in &h.coeffs {
            match (c * &lcm_rat).to_integer().to_i128() {
                Some(v) if v.abs() < cap => ic.push(v),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        let ib = (&rhs * &lcm_rat).to_integer().to_i128();
        match (ok, ib) {
            (true, Some(b)) if b.abs() < cap => out.push((ic, b, h.strict)),
            _ => {
                // At least one inequality is too large for integers; use the
                // exact rational path for the whole system.
                return TesterKind::RatLinear(
                    ineqs
                        .iter()
                        .map(|h| LinIneq {
                            coeffs: h.coeffs.clone(),
                            rhs: &h.rhs * t,
                            strict: h.strict,
                        })
                        .collect(),
                );
            }
        }
    }
    TesterKind::IntLinear(out)
}

fn validate_indices(
    field: &NumberField,
    omega_indices: &[usize],
    region: &ConvexRegion,
) -> Result<()> {
    if region.dim() == 0 {
        return Err(Error::Config("region must have dimension ≥ 1".into()));
    }
    if omega_indices.len() != region.dim() {
        return Err(Error::Config(format!(
            "region dimension {} does not match {} designated generators",
            region.dim(),
            omega_indices.len()
        )));
    }
    let mut seen = vec![false; field.degree()];
    for &j in omega_indices {
        if j == 0 || j >= field.degree() {
            return Err(Error::Config(format!(
                "generator index {j} out of range 1..{}",
                field.degree()
            )));
        }
        if seen[j] {
            return Err(Error::Config(format!("generator index {j} repeated")));
        }
        seen[j] = true;
    }
    Ok(())
}

/// The standard choice of generators: all of ω₁,…,ω_d in order.
#[must_use]
pub fn default_omega_indices(field: &NumberField) -> Vec<usize> {
    (1..field.degree()).collect()
}

// ---------------------------------------------------------------------------
// Lattice enumeration.
// ---------------------------------------------------------------------------

/// The integer points of `R(t)`, stored flat (`dim` coordinates per point).
#[derive(Debug)]
pub struct LatticePoints {
    dim: usize,
    flat: Vec<i64>,
}

impl LatticePoints {
    #[must_use]
    pub fn count(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.flat.len() / self.dim
        }
    }

    #[must_use]
    pub fn point(&self, i: usize) -> &[i64] {
        &self.flat[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> {
        self.flat.chunks_exact(self.dim)
    }
}

/// Float bounding box of the unit-scale region `R`, inflated outward so
/// rounding can never exclude a region point.  Used by volume samplers.
pub(crate) fn unit_bbox_f64(
    field: &NumberField,
    omega_indices: &[usize],
    region: &ConvexRegion,
) -> Result<Vec<(f64, f64)>> {
    let widen = |lo: f64, hi: f64| {
        let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        (lo - pad, hi + pad)
    };
    match region {
        ConvexRegion::Box { bounds } => Ok(bounds
            .iter()
            .map(|(lo, hi)| widen(rat::to_f64(lo), rat::to_f64(hi)))
            .collect()),
        ConvexRegion::Simplex { .. } => {
            let mut out = Vec::with_capacity(omega_indices.len());
            for (k, &j) in omega_indices.iter().enumerate() {
                let w = field.basis_sigma1_f64()[j];
                if w <= 0.0 {
                    return Err(Error::UnboundedRegion { axis: k });
                }
                out.push(widen(0.0, 1.0 / w));
            }
            Ok(out)
        }
        ConvexRegion::Halfspaces { dim, ineqs } => {
            let system: Vec<LinIneq> = ineqs
                .iter()
                .map(|h| LinIneq {
                    coeffs: h.coeffs.clone(),
                    rhs: h.rhs.clone(),
                    strict: h.strict,
                })
                .collect();
            let mut out = Vec::with_capacity(*dim);
            for axis in 0..*dim {
                match fm_axis_range(&system, *dim, axis)? {
                    AxisRange::Empty => out.push((0.0, 0.0)),
                    AxisRange::Bounded { lo, hi, .. } => {
                        out.push(widen(rat::to_f64(&lo), rat::to_f64(&hi)));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Per-axis inclusive integer ranges that certainly contain `R(t) ∩ ℤ^d`.
fn bounding_ranges(
    field: &NumberField,
    omega_indices: &[usize],
    region: &ConvexRegion,
    t: &Rat,
) -> Result<Option<Vec<(i64, i64)>>> {
    match region {
        ConvexRegion::Box { bounds } => {
            let mut ranges = Vec::with_capacity(bounds.len());
            for (lo, hi) in bounds {
                let lo_t = lo * t;
                let hi_t = hi * t;
                // Half-open [lo·t, hi·t): min = ceil(lo·t), max = ceil(hi·t) − 1.
                let min = -rat::floor_int(&-&lo_t);
                let max = -rat::floor_int(&-&hi_t) - 1i32;
                let (Some(min), Some(max)) = (min.to_i64(), max.to_i64()) else {
                    return Err(Error::Config("box bounds exceed i64 range".into()));
                };
                if min > max {
                    return Ok(None);
                }
                ranges.push((min, max));
            }
            Ok(Some(ranges))
        }
        ConvexRegion::Simplex { dim } => {
            let mut ranges = Vec::with_capacity(*dim);
            for (k, &j) in omega_indices.iter().enumerate() {
                let gen = field.basis_element(j);
                if field.sign_of(&gen)? <= 0 {
                    return Err(Error::UnboundedRegion { axis: k });
                }
                // m_k < t/ω_k, and t/ω_k is irrational, so the certified
                // floor is the exact maximum.
                let (max, _) = certified_floor(|bits| {
                    let iv = field.sigma1(&gen, bits)?;
                    RInt::point(t.clone()).div(&iv)
                })?;
                let Some(max) = max.to_i64() else {
                    return Err(Error::Config("simplex range exceeds i64".into()));
                };
                ranges.push((0, max));
            }
            Ok(Some(ranges))
        }
        ConvexRegion::Halfspaces { dim, ineqs } => {
            let system: Vec<LinIneq> = ineqs
                .iter()
                .map(|h| LinIneq {
                    coeffs: h.coeffs.clone(),
                    rhs: &h.rhs * t,
                    strict: h.strict,
                })
                .collect();
            let mut ranges = Vec::with_capacity(*dim);
            for axis in 0..*dim {
                let range = fm_axis_range(&system, *dim, axis)?;
                match integer_range(&range) {
                    Some(r) => ranges.push(r),
                    None => return Ok(None),
                }
            }
            Ok(Some(ranges))
        }
    }
}

/// Enumerate `M(t) = R(t) ∩ ℤ^d` exactly.
pub fn enumerate_lattice(
    field: &NumberField,
    omega_indices: &[usize],
    region: &ConvexRegion,
    t: &Rat,
) -> Result<LatticePoints> {
    validate_indices(field, omega_indices, region)?;
    let dim = region.dim();
    let Some(ranges) = bounding_ranges(field, omega_indices, region, t)? else {
        return Ok(LatticePoints { dim, flat: Vec::new() });
    };
    let tester = MembershipTester::new(field, omega_indices, region, t)?;
    // For boxes the ranges are exact, so skip the per-point test.
    let skip_test = matches!(region, ConvexRegion::Box { .. });

    let mut flat = Vec::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'scan: loop {
        if skip_test || tester.contains(&cur)? {
            flat.extend_from_slice(&cur);
        }
        let mut k = dim;
        loop {
            if k == 0 {
                break 'scan;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= ranges[k].1 {
                break;
            }
            cur[k] = ranges[k].0;
        }
    }
    Ok(LatticePoints { dim, flat })
}

// ---------------------------------------------------------------------------
// Spectrum.
// ---------------------------------------------------------------------------

/// One distinct spacing value with its multiplicity.
///
/// `coords` are exact integer coordinates of the spacing in the basis
/// `(1, ω₁, …, ω_d)`; `value` is its σ₁ image as a float.
#[derive(Clone, Debug)]
pub struct SpacingClass {
    pub coords: Vec<i64>,
    pub count: usize,
    pub value: f64,
}

impl SpacingClass {
    #[must_use]
    pub fn element(&self) -> FieldElement {
        FieldElement::from_int_coords(&self.coords)
    }
}

/// Sorted fractional-part spectrum at scale `t`.
///
/// Point `i` is the lattice vector `m⁽ⁱ⁾` with fractional part
/// `y_i = m⁽ⁱ⁾·ω − m₀⁽ⁱ⁾ ∈ [0, 1)`; points are sorted ascending by exact
/// comparisons. All coordinate data are integers, so spacings
/// `δ_i = y_{i+1} − y_i` are exact field elements available on demand.
pub struct GapSpectrum {
    t: Rat,
    field_dim: usize,
    omega_indices: Vec<usize>,
    count: usize,
    m0s: Vec<i64>,
    ms: Vec<i64>,
    values: Vec<f64>,
    distinct: Vec<SpacingClass>,
}

impl GapSpectrum {
    #[must_use]
    pub fn t(&self) -> &Rat {
        &self.t
    }

    /// Number of lattice points `|M(t)|`.
    #[must_use]
    pub fn count(&self) -> usize {
        self.count
    }

    /// Region dimension `d`.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.omega_indices.len()
    }

    /// Generator indices used to form `m·ω`.
    #[must_use]
    pub fn omega_indices(&self) -> &[usize] {
        &self.omega_indices
    }

    /// Float values of the sorted fractional parts.
    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Lattice vector of sorted point `i`.
    #[must_use]
    pub fn lattice_vector(&self, i: usize) -> &[i64] {
        let d = self.omega_indices.len();
        &self.ms[i * d..(i + 1) * d]
    }

    /// Integer part `m₀⁽ⁱ⁾ = ⌊m⁽ⁱ⁾·ω⌋`.
    #[must_use]
    pub fn integer_part(&self, i: usize) -> i64 {
        self.m0s[i]
    }

    /// Exact coordinates of `y_i` in the basis `(1, ω₁, …, ω_d)`.
    #[must_use]
    pub fn fractional_coords(&self, i: usize) -> Vec<i64> {
        let mut coords = vec![0i64; self.field_dim];
        coords[0] = -self.m0s[i];
        for (k, &j) in self.omega_indices.iter().enumerate() {
            coords[j] = self.lattice_vector(i)[k];
        }
        coords
    }

    /// `y_i` as an exact field element.
    #[must_use]
    pub fn fractional_element(&self, i: usize) -> FieldElement {
        FieldElement::from_int_coords(&self.fractional_coords(i))
    }

    /// Number of spacings (`|M(t)| − 1`).
    #[must_use]
    pub fn spacing_count(&self) -> usize {
        self.count.saturating_sub(1)
    }

    /// Exact coordinates of `δ_i = y_{i+1} − y_i`.
    #[must_use]
    pub fn spacing_coords(&self, i: usize) -> Vec<i64> {
        let a = self.fractional_coords(i);
        let b = self.fractional_coords(i + 1);
        b.iter().zip(&a).map(|(x, y)| x - y).collect()
    }

    /// `δ_i` as an exact field element.
    #[must_use]
    pub fn spacing_element(&self, i: usize) -> FieldElement {
        FieldElement::from_int_coords(&self.spacing_coords(i))
    }

    /// Float value of `δ_i`.
    #[must_use]
    pub fn spacing_value(&self, i: usize) -> f64 {
        self.values[i + 1] - self.values[i]
    }

    /// Distinct spacing classes `Δ₁ < … < Δ_{D(t)}`, sorted ascending.
    #[must_use]
    pub fn distinct(&self) -> &[SpacingClass] {
        &self.distinct
    }

    /// `D(t)`, the number of distinct spacings.
    #[must_use]
    pub fn d_t(&self) -> usize {
        self.distinct.len()
    }

    /// Distinct spacings with the precondition `|M(t)| ≥ 2` enforced.
    pub fn distinct_spacings(&self) -> Result<&[SpacingClass]> {
        if self.count < 2 {
            return Err(Error::Invariant(
                "spectrum has fewer than 2 points; no spacings exist".into(),
            ));
        }
        Ok(&self.distinct)
    }

    /// Largest distinct spacing, if any.
    #[must_use]
    pub fn max_spacing(&self) -> Option<&SpacingClass> {
        self.distinct.last()
    }
}

/// Build the sorted spectrum `Y(t)` for `ω` given by `omega_indices`.
pub fn spectrum(
    field: &NumberField,
    omega_indices: &[usize],
    region: &ConvexRegion,
    t: &Rat,
) -> Result<GapSpectrum> {
    if *t < rat::one() {
        return Err(Error::Config(format!("scale t must be ≥ 1, got {t}")));
    }
    let points = enumerate_lattice(field, omega_indices, region, t)?;
    let d = region.dim();
    let n = field.degree();
    let count = points.count();
    let w: Vec<f64> = omega_indices
        .iter()
        .map(|&j| field.basis_sigma1_f64()[j])
        .collect();

    // Integer part and float value per point. Points whose fractional part
    // is within the float margin of 0 or 1 get a certified floor.
    let mut m0s = vec![0i64; count];
    let mut vals = vec![0f64; count];
    for (i, m) in points.iter().enumerate() {
        let s: f64 = m.iter().zip(&w).map(|(&mi, wi)| mi as f64 * wi).sum();
        if m.iter().all(|&mi| mi == 0) {
            m0s[i] = 0;
            vals[i] = 0.0;
            continue;
        }
        let fl = s.floor();
        let frac = s - fl;
        let m0 = if frac < FLOAT_MARGIN || frac > 1.0 - FLOAT_MARGIN {
            let mut coords = vec![0i64; n];
            for (k, &j) in omega_indices.iter().enumerate() {
                coords[j] = m[k];
            }
            let elem = FieldElement::from_int_coords(&coords);
            let (f, _) = certified_floor(|bits| field.sigma1(&elem, bits))?;
            f.to_i64().ok_or_else(|| {
                Error::Config("integer part exceeds i64 range".into())
            })?
        } else {
            fl as i64
        };
        m0s[i] = m0;
        vals[i] = (s - m0 as f64).clamp(0.0, 1.0 - f64::EPSILON);
    }

    // Sort by fractional part; within the float margin fall back to the
    // exact sign of y_a − y_b, so the order is the true order.
    let mut order: Vec<u32> = (0..count as u32).collect();
    let mut sort_err: Option<Error> = None;
    order.sort_unstable_by(|&a, &b| {
        let (a, b) = (a as usize, b as usize);
        let va = vals[a];
        let vb = vals[b];
        if (va - vb).abs() > FLOAT_MARGIN {
            return va.partial_cmp(&vb).expect("spectrum values are finite");
        }
        let mut coords = vec![0i64; n];
        coords[0] = m0s[b] - m0s[a];
        for (k, &j) in omega_indices.iter().enumerate() {
            coords[j] = points.point(a)[k] - points.point(b)[k];
        }
        let diff = FieldElement::from_int_coords(&coords);
        match field.sign_of(&diff) {
            Ok(s) => s.cmp(&0),
            Err(e) => {
                if sort_err.is_none() {
                    sort_err = Some(e);
                }
                std::cmp::Ordering::Equal
            }
        }
    });
    if let Some(e) = sort_err {
        return Err(e);
    }

    let mut m0_sorted = Vec::with_capacity(count);
    let mut ms_sorted = Vec::with_capacity(count * d);
    let mut values = Vec::with_capacity(count);
    for &i in &order {
        let i = i as usize;
        m0_sorted.push(m0s[i]);
        ms_sorted.extend_from_slice(points.point(i));
        values.push(vals[i]);
    }

    let mut spec = GapSpectrum {
        t: t.clone(),
        field_dim: n,
        omega_indices: omega_indices.to_vec(),
        count,
        m0s: m0_sorted,
        ms: ms_sorted,
        values,
        distinct: Vec::new(),
    };

    // Injectivity: distinct lattice vectors have distinct fractional parts,
    // so adjacent equal coordinates indicate an enumeration bug.
    for i in 1..count {
        if spec.m0s[i] == spec.m0s[i - 1]
            && spec.lattice_vector(i) == spec.lattice_vector(i - 1)
        {
            return Err(Error::Invariant(format!(
                "duplicate lattice point {:?} in spectrum",
                spec.lattice_vector(i)
            )));
        }
    }

    // Distinct spacing classes keyed by exact coordinates.
    let mut classes: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for i in 0..spec.spacing_count() {
        *classes.entry(spec.spacing_coords(i)).or_insert(0) += 1;
    }
    let basis = field.basis_sigma1_f64();
    let mut distinct: Vec<SpacingClass> = classes
        .into_iter()
        .map(|(coords, cnt)| {
            let value: f64 = coords
                .iter()
                .zip(basis)
                .map(|(&c, b)| c as f64 * b)
                .sum();
            SpacingClass { coords, count: cnt, value }
        })
        .collect();
    let mut sort_err: Option<Error> = None;
    distinct.sort_by(|x, y| {
        if (x.value - y.value).abs() > FLOAT_MARGIN {
            return x.value.partial_cmp(&y.value).expect("finite");
        }
        let coords: Vec<i64> = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
        match field.sign_of(&FieldElement::from_int_coords(&coords)) {
            Ok(s) => s.cmp(&0),
            Err(e) => {
                if sort_err.is_none() {
                    sort_err = Some(e);
                }
                std::cmp::Ordering::Equal
            }
        }
    });
    if let Some(e) = sort_err {
        return Err(e);
    }
    spec.distinct = distinct;
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Scalar three-gap checks (d = 1 sanity suite).
// ---------------------------------------------------------------------------

/// Distinct-spacing counts `D(t)` for the scalar sequence `{k·ω}`, `0 ≤ k < t`.
#[derive(Debug)]
pub struct ThreeGapReport {
    pub omega: Rat,
    /// `(t, D(t))` rows for `t = 1..=t_max`.
    pub rows: Vec<(i64, usize)>,
    pub max_distinct: usize,
    /// Scales where `D(t) > 3` (always empty; retained as evidence).
    pub violations: Vec<i64>,
}

/// Exact `D(t)` scan for a scalar ω over all integer scales up to `t_max`.
///
/// ω is taken as an exact rational (a float argument should be converted
/// exactly, not rounded); distinct positions are deduplicated before gaps
/// are formed, which makes rational ω well-defined degenerate cases.
pub fn three_gap_check(omega: &Rat, t_max: i64) -> Result<ThreeGapReport> {
    if t_max < 1 {
        return Err(Error::Config("t_max must be ≥ 1".into()));
    }
    // Normalize to ω mod 1 = p/q with 0 ≤ p < q; fractional parts are
    // unchanged. Numerators of {k·ω} then live on the grid /q.
    let q_big = omega.denom().clone();
    let p_big = ((omega.numer() % &q_big) + &q_big) % &q_big;
    let (Some(p), Some(q)) = (p_big.to_u128(), q_big.to_u128()) else {
        return Err(Error::Config(
            "ω denominator too large for the scalar three-gap scan".into(),
        ));
    };
    if q == 0 {
        return Err(Error::Config("ω must be finite".into()));
    }

    // fracs[k] = numerator of {k·ω} over q, built incrementally.
    let n = t_max as usize;
    let mut fracs: Vec<u128> = Vec::with_capacity(n);
    let mut cur: u128 = 0;
    for _ in 0..n {
        fracs.push(cur);
        cur += p;
        if cur >= q {
            cur -= q;
        }
    }

    let mut rows = Vec::with_capacity(n);
    let mut max_distinct = 0usize;
    let mut violations = Vec::new();
    let mut buf: Vec<u128> = Vec::with_capacity(n);
    for t in 1..=t_max {
        buf.clear();
        buf.extend_from_slice(&fracs[..t as usize]);
        buf.sort_unstable();
        buf.dedup();
        let mut gaps: Vec<u128> = buf.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.sort_unstable();
        gaps.dedup();
        let d = gaps.len();
        rows.push((t, d));
        max_distinct = max_distinct.max(d);
        if d > 3 {
            violations.push(t);
        }
    }
    Ok(ThreeGapReport { omega: omega.clone(), rows, max_distinct, violations })
}

/// Aggregate result of the randomized scalar three-gap suite.
#[derive(Debug)]
pub struct ThreeGapSuite {
    pub samples: usize,
    pub t_max: i64,
    pub seed: u64,
    pub max_distinct: usize,
    /// `(ω, max_t D(t))` per sample, in draw order.
    pub per_sample: Vec<(f64, usize)>,
    /// `(ω, t, D(t))` triples violating the bound (expected empty).
    pub violations: Vec<(f64, i64, usize)>,
}

/// Run `samples` pseudo-random ω ∈ (0,1) through the scalar scan.
pub fn three_gap_random_suite(samples: usize, t_max: i64, seed: u64) -> Result<ThreeGapSuite> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_distinct = 0;
    let mut per_sample = Vec::with_capacity(samples);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let mut x: f64 = rng.random();
        while x <= 0.0 {
            x = rng.random();
        }
        let omega = rat::from_f64(x)?;
        let report = three_gap_check(&omega, t_max)?;
        max_distinct = max_distinct.max(report.max_distinct);
        per_sample.push((x, report.max_distinct));
        for &t in &report.violations {
            let d = report.rows[(t - 1) as usize].1;
            violations.push((x, t, d));
        }
    }
    Ok(ThreeGapSuite { samples, t_max, seed, max_distinct, per_sample, violations })
}

// ---------------------------------------------------------------------------
// Energy window.
// ---------------------------------------------------------------------------

/// One admissible level `ε = m₀ + m·ω ∈ [E, E+1)` with its quantum data.
#[derive(Clone, Debug)]
pub struct WindowLevel {
    pub m0: i64,
    pub m: Vec<i64>,
    /// ε as a float.
    pub value: f64,
}

/// All levels in the window `[E, E+1)`: for every `m ≥ 0` with `m·ω < E+1`
/// there is exactly one `m₀ ≥ 0` placing `ε` in the window. Output sorted
/// ascending by exact comparisons.
pub fn energy_window(
    field: &NumberField,
    omega_indices: &[usize],
    e: &Rat,
) -> Result<Vec<WindowLevel>> {
    if e.is_negative() {
        return Err(Error::Config(format!("window base E must be ≥ 0, got {e}")));
    }
    let t = e + rat::one();
    let region = ConvexRegion::simplex(omega_indices.len());
    let points = enumerate_lattice(field, omega_indices, &region, &t)?;
    let n = field.degree();
    let w: Vec<f64> = omega_indices
        .iter()
        .map(|&j| field.basis_sigma1_f64()[j])
        .collect();

    let mut levels = Vec::with_capacity(points.count());
    for m in points.iter() {
        let s: f64 = m.iter().zip(&w).map(|(&mi, wi)| mi as f64 * wi).sum();
        let m0_big = if m.iter().all(|&mi| mi == 0) {
            // ε = m₀ must land in [E, E+1): m₀ = ⌈E⌉ exactly.
            -rat::floor_int(&-e)
        } else {
            // m₀ = ⌈E − m·ω⌉, certified (the argument is irrational).
            let mut coords = vec![Rat::zero(); n];
            coords[0] = e.clone();
            for (k, &j) in omega_indices.iter().enumerate() {
                coords[j] = -rat::from_i64(m[k]);
            }
            let elem = FieldElement::from_coords(coords);
            let (neg_floor, _) =
                certified_floor(|bits| Ok(field.sigma1(&elem, bits)?.neg()))?;
            -neg_floor
        };
        let m0 = m0_big
            .to_i64()
            .ok_or_else(|| Error::Config("window index exceeds i64 range".into()))?;
        debug_assert!(m0 >= 0, "window index must be non-negative");
        levels.push(WindowLevel { m0, m: m.to_vec(), value: m0 as f64 + s });
    }

    let mut sort_err: Option<Error> = None;
    levels.sort_by(|a, b| {
        if (a.value - b.value).abs() > FLOAT_MARGIN {
            return a.value.partial_cmp(&b.value).expect("finite");
        }
        let mut coords = vec![0i64; n];
        coords[0] = a.m0 - b.m0;
        for (k, &j) in omega_indices.iter().enumerate() {
            coords[j] = a.m[k] - b.m[k];
        }
        match field.sign_of(&FieldElement::from_int_coords(&coords)) {
            Ok(s) => s.cmp(&0),
            Err(err) => {
                if sort_err.is_none() {
                    sort_err = Some(err);
                }
                std::cmp::Ordering::Equal
            }
        }
    });
    if let Some(err) = sort_err {
        return Err(err);
    }
    Ok(levels)
}

// ---------------------------------------------------------------------------
// Spacing bound.
// ---------------------------------------------------------------------------

/// Result of checking `max Δᵢ(t) · t^d ≤ K′`.
#[derive(Debug)]
pub struct BoundCheck {
    pub t: Rat,
    /// Certified upper bound for `max Δᵢ(t)·t^d`.
    pub max_scaled: f64,
    /// K′ as a float (lower endpoint of its enclosure).
    pub bound: f64,
    pub ok: bool,
}

/// Check the transference spacing bound `Δᵢ ≤ K′/t^d` on a computed spectrum.
pub fn spacing_bound_check(
    field: &NumberField,
    spec: &GapSpectrum,
    kprime: &RInt,
) -> Result<BoundCheck> {
    let d = spec.dim() as i64;
    let t_pow = {
        let mut acc = rat::one();
        for _ in 0..d {
            acc = &acc * spec.t();
        }
        acc
    };
    let mut max_iv: Option<RInt> = None;
    for class in spec.distinct() {
        let iv = field
            .sigma1(&class.element(), 128)?
            .scale(&t_pow);
        max_iv = Some(match max_iv {
            None => iv,
            // Distinct spacings are sorted, so the last would suffice; take
            // the max defensively over certified upper endpoints.
            Some(cur) => {
                if iv.hi() > cur.hi() {
                    iv
                } else {
                    cur
                }
            }
        });
    }
    let (max_scaled, ok) = match max_iv {
        None => (0.0, true),
        Some(iv) => {
            let ok = iv.hi() <= kprime.lo();
            let fail = iv.lo() > kprime.hi();
            if !ok && !fail {
                // Enclosures overlap; refine once at higher precision.
                let top = spec.distinct().last().expect("nonempty");
                let iv = field.sigma1(&top.element(), 512)?.scale(&t_pow);
                (rat::to_f64(iv.hi()), iv.hi() <= kprime.lo())
            } else {
                (rat::to_f64(iv.hi()), ok)
            }
        }
    };
    Ok(BoundCheck {
        t: spec.t().clone(),
        max_scaled,
        bound: rat::to_f64(kprime.lo()),
        ok,
    })
}

/// The worked-example constant `K` for a totally real cubic field with
/// generators (ω₁, ω₂): `K = ∏_{i=2,3} (1/2 + σ₁(ω₁)+σ₁(ω₂) + σᵢ(ω₁)+σᵢ(ω₂))`,
/// as a certified enclosure.
pub fn cubic_k_interval(field: &NumberField, bits: u32) -> Result<RInt> {
    if field.degree() != 3 || field.signature() != (3, 0) {
        return Err(Error::Config(
            "the K recipe applies to totally real cubic fields only; supply K′ explicitly"
                .into(),
        ));
    }
    let w1 = field.minkowski(&field.basis_element(1), bits)?;
    let w2 = field.minkowski(&field.basis_element(2), bits)?;
    let half = RInt::point(rat::ratio(1, 2));
    let base = half.add(&w1[0]).add(&w2[0]);
    let mut k = RInt::point(rat::one());
    for i in 1..3 {
        let factor = base.add(&w1[i]).add(&w2[i]);
        k = k.mul(&factor);
    }
    Ok(k.compress(bits))
}

/// `K′ = (⌊K⌋+1)³ / (4K)` from a certified enclosure of `K`.
pub fn kprime_from_k(k: &RInt) -> Result<RInt> {
    if !k.is_positive() {
        return Err(Error::Config("K must be positive".into()));
    }
    let k_cl = k.clone();
    let (floor_k, _) = certified_floor(move |_| Ok(k_cl.clone()))?;
    let num = Rat::from_integer((floor_k + 1i32).pow(3));
    RInt::point(num).div(&k.scale(&rat::from_i64(4)))
}
