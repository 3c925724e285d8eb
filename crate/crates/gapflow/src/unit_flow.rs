//! Unit rescaling along the orbit `t ↦ u₁(t)`.
//!
//! A rank-`r` system of fundamental units `ε₁, …, ε_r` determines rates
//! `β ∈ ℝ^r` through the log-embedding system `A·β = b` with
//! `A_{ij} = log|σ_i(ε_j)|` and target `b = (−d, 1, …, 1)`: the product
//! `u₁(t) = ∏_j ε_j^{⌊β_j log t⌋}` then contracts σ₁ like `t^{−d}` while
//! every other embedding grows like `t`.  Rescaling the spacings of a gap
//! spectrum by `u(t) = u₁(t)⁻¹` maps them into a bounded region of the
//! Minkowski space, so over any schedule of `t` only finitely many exact
//! rescaled values — the *labels* — ever occur.
//!
//! The module provides:
//!
//! * [`UnitSystem`] — validated generators, certified rates `β`, and the
//!   exact unit walk [`UnitSystem::unit_at`];
//! * [`rescaled_spacings`] and [`label_set`] — exact rescaling and the
//!   finite label alphabet (empirical, or enumerated from a certified
//!   Minkowski box);
//! * [`proportions`], [`ratio_stats`], [`word_stats`] — exact occurrence
//!   statistics of labels, consecutive ratios, and label words;
//! * [`run_sweep`] — the combined driver over a `t` schedule.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num_traits::{Signed, ToPrimitive};

use crate::gap_engine::{spectrum, ConvexRegion, GapSpectrum};
use crate::interval::{certified_floor, ln_rat, RInt};
use crate::matrix::Mat;
use crate::numberfield::{FieldElement, NumberField};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Default certified precision (bits) for the rate solve.
pub const DEFAULT_RATE_BITS: u32 = 200;

/// Exponent floors `⌊β_j log t⌋` closer than this to an integer are
/// flagged as marginal (the walk is still exact, but t sits next to a
/// step of the staircase).
pub const MARGINAL_FLOOR_DISTANCE: f64 = 1e-9;

/// A validated system of `r` multiplicatively independent units together
/// with the certified rates `β`.
#[derive(Debug)]
pub struct UnitSystem {
    generators: Vec<FieldElement>,
    beta_f64: Vec<f64>,
    /// Monotone cache: highest-precision rate enclosures computed so far.
    beta_cache: Mutex<(u32, Vec<RInt>)>,
}

impl UnitSystem {
    /// Validates the generators and solves for the rates at
    /// [`DEFAULT_RATE_BITS`] bits.
    ///
    /// Each generator must have norm `±1` ([`Error::NotAUnit`] otherwise)
    /// and the log-embedding images must span the unit hyperplane; if every
    /// `r × r` minor of the log matrix is singular the generators are
    /// multiplicatively dependent ([`Error::DependentUnits`]).
    pub fn new(field: &NumberField, generators: Vec<FieldElement>) -> Result<Self> {
        let r = field.unit_rank();
        if generators.len() != r {
            return Err(Error::Config(format!(
                "expected {} unit generators for a field of signature {:?}, got {}",
                r,
                field.signature(),
                generators.len()
            )));
        }
        if r == 0 {
            return Err(Error::Config(
                "the unit rank is zero: no rescaling flow exists for this field".into(),
            ));
        }
        for (index, g) in generators.iter().enumerate() {
            let norm = field.norm(g)?;
            if norm.numer().magnitude() != norm.denom().magnitude() {
                return Err(Error::NotAUnit { index, norm: norm.to_string() });
            }
        }

        let mut beta = None;
        for bits in [DEFAULT_RATE_BITS, 2 * DEFAULT_RATE_BITS, 4 * DEFAULT_RATE_BITS] {
            match solve_beta(field, &generators, bits) {
                Ok(b) => {
                    beta = Some((bits, b));
                    break;
                }
                Err(Error::SingularSystem(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        let Some((bits, beta)) = beta else {
            return Err(Error::DependentUnits { expected: r });
        };
        let beta_f64 = beta.iter().map(RInt::mid_f64).collect();
        Ok(UnitSystem { generators, beta_f64, beta_cache: Mutex::new((bits, beta)) })
    }

    #[must_use]
    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Rate midpoints as doubles.
    #[must_use]
    pub fn beta_f64(&self) -> &[f64] {
        &self.beta_f64
    }

    /// Certified rate enclosures of width `≈ 2^{−bits}`; re-solves and
    /// caches when more precision is requested than previously computed.
    pub fn beta(&self, field: &NumberField, bits: u32) -> Result<Vec<RInt>> {
        {
            let cache = self.beta_cache.lock().unwrap();
            if cache.0 >= bits {
                return Ok(cache.1.clone());
            }
        }
        let solved = solve_beta(field, &self.generators, bits)?;
        let mut cache = self.beta_cache.lock().unwrap();
        if bits > cache.0 {
            *cache = (bits, solved.clone());
        }
        Ok(solved)
    }

    /// Certified log-embedding matrix: entry `(i, j)` encloses
    /// `log|σ_i(ε_j)|` (rows run over all archimedean places).
    pub fn log_matrix(&self, field: &NumberField, bits: u32) -> Result<Mat<RInt>> {
        let cols: Vec<Vec<RInt>> = self
            .generators
            .iter()
            .map(|g| field.log_embedding(g, bits))
            .collect::<Result<_>>()?;
        let places = field.num_places();
        let rows = (0..places)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Ok(Mat::from_rows(rows))
    }

    /// The exact unit `u₁(t) = ∏_j ε_j^{⌊β_j log t⌋}` together with the
    /// exponent vector.  Requires `t ≥ 1`; `t = 1` yields the identity.
    ///
    /// Every floor is certified by interval refinement.  When some
    /// `β_j log t` sits within [`MARGINAL_FLOOR_DISTANCE`] of an integer
    /// the result is flagged [`UnitAt::marginal`].
    pub fn unit_at(&self, field: &NumberField, t: &Rat) -> Result<UnitAt> {
        if *t < rat::one() {
            return Err(Error::Config(format!("unit walk needs t ≥ 1, got t = {t}")));
        }
        let r = self.rank();
        let mut exponents = Vec::with_capacity(r);
        let mut min_distance = f64::INFINITY;
        if *t == rat::one() {
            exponents = vec![0i64; r];
        } else {
            for j in 0..r {
                let (floor, distance) = certified_floor(|bits| {
                    let beta = self.beta(field, bits)?;
                    let lnt = ln_rat(t, bits)?;
                    Ok(beta[j].mul(&lnt))
                })?;
                let floor = floor.to_i64().ok_or_else(|| {
                    Error::Invariant(format!("unit exponent overflows i64 at t = {t}"))
                })?;
                exponents.push(floor);
                min_distance = min_distance.min(distance);
            }
        }
        let mut element = field.one();
        for (j, &e) in exponents.iter().enumerate() {
            if e != 0 {
                element = field.mul(&element, &field.pow(&self.generators[j], e)?);
            }
        }
        Ok(UnitAt {
            element,
            exponents,
            floor_distance: min_distance,
        })
    }
}

/// Result of the unit walk at a single `t`.
#[derive(Clone, Debug)]
pub struct UnitAt {
    /// `u₁(t)` with exact coordinates.
    pub element: FieldElement,
    /// The exponents `⌊β_j log t⌋`.
    pub exponents: Vec<i64>,
    /// Distance from the nearest integer to the closest `β_j log t`
    /// (infinite at `t = 1` where no floor is taken).
    pub floor_distance: f64,
}

impl UnitAt {
    /// True when some exponent floor was decided by less than
    /// [`MARGINAL_FLOOR_DISTANCE`].
    #[must_use]
    pub fn marginal(&self) -> bool {
        self.floor_distance < MARGINAL_FLOOR_DISTANCE
    }
}

/// Convenience wrapper: validates `generators` and returns the rate
/// midpoints as doubles.
pub fn solve_rates(field: &NumberField, generators: &[FieldElement]) -> Result<Vec<f64>> {
    Ok(UnitSystem::new(field, generators.to_vec())?.beta_f64().to_vec())
}

/// Solves `A·β = b` from the certified log matrix at the given precision.
///
/// The full system has `r₁ + r₂` rows of rank `r`; the weighted row sum
/// vanishes (`Σ w_i log|σ_i(ε_j)| = log|N(ε_j)| = 0`), so one row is
/// dropped.  Minors are tried last-row-first; a solution must reproduce
/// the dropped row, which certifies consistency.  Returns
/// [`Error::SingularSystem`] when no minor is invertible at this
/// precision (the caller escalates, then declares the generators
/// dependent).
fn solve_beta(field: &NumberField, generators: &[FieldElement], bits: u32) -> Result<Vec<RInt>> {
    let r = field.unit_rank();
    let places = field.num_places();
    let d = field.degree() - 1;
    let weights = field.place_weights();

    let mut cols = Vec::with_capacity(r);
    for g in generators {
        let col = field.log_embedding(g, bits)?;
        // Unit invariant: the weighted log coordinates sum to zero.
        let mut s = RInt::zero();
        for (i, iv) in col.iter().enumerate() {
            s = s.add(&iv.scale(&rat::from_i64(i64::from(weights[i]))));
        }
        if !s.contains_zero() {
            return Err(Error::Invariant(format!(
                "log embedding of {g} misses the unit hyperplane"
            )));
        }
        if rat::to_f64(&s.width()) > 1e-10 {
            return Err(Error::PrecisionExceeded(format!(
                "unit hyperplane residual of {g} is wider than 1e-10 at {bits} bits"
            )));
        }
        cols.push(col);
    }

    let b_full: Vec<RInt> = (0..places)
        .map(|i| {
            let v = if i == 0 { -(d as i64) } else { 1 };
            RInt::point(rat::from_i64(v))
        })
        .collect();

    for drop in (0..places).rev() {
        let kept: Vec<usize> = (0..places).filter(|&i| i != drop).collect();
        let a = Mat::from_rows(
            kept.iter()
                .map(|&i| cols.iter().map(|c| c[i].clone()).collect())
                .collect(),
        );
        let rhs = Mat::from_rows(kept.iter().map(|&i| vec![b_full[i].clone()]).collect());
        let Ok(sol) = a.solve(&rhs) else { continue };
        let beta: Vec<RInt> = (0..r).map(|j| sol.at(j, 0).clone()).collect();
        let mut residual = b_full[drop].neg();
        for (j, b) in beta.iter().enumerate() {
            residual = residual.add(&cols[j][drop].mul(b));
        }
        if residual.contains_zero() {
            return Ok(beta);
        }
    }
    Err(Error::SingularSystem(format!(
        "every rank-{r} minor of the unit log matrix is singular at {bits} bits"
    )))
}

/// The canonical rescaling unit `u(t) = ±u₁(t)⁻¹`, signed so that
/// `σ₁(u(t)) > 0`.
///
/// `−1` is a unit, so the sign of the walk product is a free convention;
/// fixing it positive keeps every label positive.  (`u₁(t)` itself is
/// reported in the raw product convention, which is what the predictor
/// `g₃` expands.)
pub fn rescaling_unit(field: &NumberField, u1: &FieldElement) -> Result<FieldElement> {
    let u = field.inv(u1)?;
    if field.sign_of(&u)? < 0 {
        Ok(field.neg(&u))
    } else {
        Ok(u)
    }
}

/// Rescales every spacing of the spectrum by the canonical unit
/// `u(t) = ±u₁(t)⁻¹` with `σ₁(u(t)) > 0`, exactly.
pub fn rescaled_spacings(
    field: &NumberField,
    spec: &GapSpectrum,
    u1: &FieldElement,
) -> Result<Vec<FieldElement>> {
    let u = rescaling_unit(field, u1)?;
    Ok((0..spec.spacing_count())
        .map(|i| field.mul(&spec.spacing_element(i), &u))
        .collect())
}

/// How to construct the label alphabet.
#[derive(Clone, Debug)]
pub enum LabelMode {
    /// Collect the exact rescaled spacings that actually occur over the
    /// schedule.
    Empirical,
    /// Enumerate all candidates in the certified Minkowski box determined
    /// by the spacing bound `K′`; refuses (with a volume estimate) when
    /// the predicted point count exceeds `cap`.
    TheoreticalBox { kprime: RInt, cap: usize },
}

/// The finite label alphabet `𝒮`: exact field elements, sorted by σ₁.
///
/// Empirical labels are positive (spacings are positive and the
/// canonical rescaling unit has `σ₁ > 0`); a theoretical box is
/// sign-symmetric and keeps both signs of each candidate.
#[derive(Clone, Debug)]
pub struct LabelSet {
    elements: Vec<FieldElement>,
    index: HashMap<FieldElement, usize>,
    empirical: bool,
}

impl LabelSet {
    fn from_elements(
        field: &NumberField,
        set: BTreeSet<FieldElement>,
        empirical: bool,
    ) -> Result<Self> {
        let elements = sort_by_sigma1(field, set.into_iter().collect())?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(LabelSet { elements, index, empirical })
    }

    /// Builds a label set from explicit elements (deduplicated, sorted by
    /// σ₁).  Every element must be positive under σ₁, matching the
    /// canonical rescaling convention.
    pub fn from_labels(
        field: &NumberField,
        elements: Vec<FieldElement>,
        empirical: bool,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Config("label set must be nonempty".into()));
        }
        let mut set = BTreeSet::new();
        for e in elements {
            if field.sign_of(&e)? <= 0 {
                return Err(Error::Config(format!(
                    "label {e} is not positive under σ₁"
                )));
            }
            set.insert(e);
        }
        LabelSet::from_elements(field, set, empirical)
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Labels in ascending σ₁ order.
    #[must_use]
    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    #[must_use]
    pub fn element(&self, j: usize) -> &FieldElement {
        &self.elements[j]
    }

    /// Index of an exact label, if present.
    #[must_use]
    pub fn find(&self, elem: &FieldElement) -> Option<usize> {
        self.index.get(elem).copied()
    }

    #[must_use]
    pub fn is_empirical(&self) -> bool {
        self.empirical
    }
}

/// Sorts field elements by their σ₁ value with certified comparisons.
fn sort_by_sigma1(field: &NumberField, mut v: Vec<FieldElement>) -> Result<Vec<FieldElement>> {
    let mut failure = None;
    v.sort_by(|a, b| match field.cmp_sigma1(a, b) {
        Ok(ord) => ord,
        Err(e) => {
            if failure.is_none() {
                failure = Some(e);
            }
            std::cmp::Ordering::Equal
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Builds the label alphabet for the given region and schedule.
pub fn label_set(
    field: &NumberField,
    units: &UnitSystem,
    omega_indices: &[usize],
    region: &ConvexRegion,
    schedule: &[Rat],
    mode: &LabelMode,
) -> Result<LabelSet> {
    match mode {
        LabelMode::Empirical => {
            let mut set = BTreeSet::new();
            for t in schedule {
                let spec = spectrum(field, omega_indices, region, t)?;
                if spec.count() < 2 {
                    continue;
                }
                let u1 = units.unit_at(field, t)?;
                let u = rescaling_unit(field, &u1.element)?;
                for class in spec.distinct() {
                    set.insert(field.mul(&class.element(), &u));
                }
            }
            LabelSet::from_elements(field, set, true)
        }
        LabelMode::TheoreticalBox { kprime, cap } => box_label_set(field, units, kprime, *cap),
    }
}

/// `max(1, |x|)` on enclosures.
fn max1(iv: &RInt) -> RInt {
    let a = iv.abs();
    let one = rat::one();
    RInt::new(a.lo().clone().max(one.clone()), a.hi().clone().max(one))
}

/// Certified half-widths `K₁, …, K_n` of the Minkowski box that contains
/// every rescaled spacing (totally real fields).
///
/// `K₁ = K′·∏_j max(1, |σ₁(ε_j)|)` pairs the spacing bound
/// `Δ ≤ K′/t^d` with the growth `|σ₁(u(t))| ≤ t^d·∏ max(1, |σ₁(ε_j)|)`;
/// for `i ≥ 2`, `K_i = (1/2 + Σ_j |σ₁(ω_j)| + Σ_j |σ_i(ω_j)|)·
/// ∏_j max(1, |σ_i(ε_j)|)` pairs the coordinate bound on a spacing with
/// the decay `|σ_i(u(t))| ≤ t⁻¹·∏ max(1, |σ_i(ε_j)|)`.
pub fn minkowski_box(
    field: &NumberField,
    units: &UnitSystem,
    kprime: &RInt,
) -> Result<Vec<RInt>> {
    let (r1, r2) = field.signature();
    if r2 != 0 {
        return Err(Error::Config(
            "the theoretical label box is implemented for totally real fields only".into(),
        ));
    }
    let bits = 128;
    let sigma_units: Vec<Vec<RInt>> = units
        .generators()
        .iter()
        .map(|g| field.minkowski(g, bits))
        .collect::<Result<_>>()?;
    let sigma_basis: Vec<Vec<RInt>> = (1..field.degree())
        .map(|j| field.minkowski(&field.basis_element(j), bits))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(r1);
    for i in 0..r1 {
        let mut growth = RInt::point(rat::one());
        for su in &sigma_units {
            growth = growth.mul(&max1(&su[i]));
        }
        let k = if i == 0 {
            kprime.mul(&growth)
        } else {
            let mut bound = RInt::point(rat::ratio(1, 2));
            for sb in &sigma_basis {
                bound = bound.add(&sb[0].abs()).add(&sb[i].abs());
            }
            bound.mul(&growth)
        };
        out.push(k.compress(bits));
    }
    Ok(out)
}

/// Certified covolume of the coordinate lattice under the Minkowski
/// embedding: `|det(σ_i(b_j))|` over the real places (totally real
/// fields).
pub fn covolume(field: &NumberField, bits: u32) -> Result<RInt> {
    let (r1, r2) = field.signature();
    if r2 != 0 {
        return Err(Error::Config(
            "covolume is implemented for totally real fields only".into(),
        ));
    }
    let cols: Vec<Vec<RInt>> = (0..field.degree())
        .map(|j| field.minkowski(&field.basis_element(j), bits))
        .collect::<Result<_>>()?;
    let rows = (0..r1)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    Mat::from_rows(rows).det().map(|d| d.abs())
}

/// Enumerates the exact lattice candidates inside the Minkowski box.
fn box_label_set(
    field: &NumberField,
    units: &UnitSystem,
    kprime: &RInt,
    cap: usize,
) -> Result<LabelSet> {
    let ks = minkowski_box(field, units, kprime)?;
    let covol = covolume(field, 128)?;
    let volume_estimate: f64 = ks.iter().map(RInt::mid_f64).product();
    let covolume = covol.mid_f64();
    let predicted = volume_estimate / covolume;
    if !predicted.is_finite() || predicted > cap as f64 {
        return Err(Error::BoxCapExceeded { cap, volume_estimate, covolume, predicted });
    }

    let n = field.degree();
    // Approximate inverse of the embedding matrix gives safe coordinate
    // ranges; membership of each candidate is then decided per place.
    let v = Mat::from_rows(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        field
                            .minkowski(&field.basis_element(j), 80)
                            .map(|m| rat::from_f64(m[i].mid_f64()).unwrap_or_else(|_| rat::zero()))
                    })
                    .collect::<Result<Vec<Rat>>>()
            })
            .collect::<Result<Vec<_>>>()?,
    );
    let vinv = v.inverse()?;
    let k_hi: Vec<f64> = ks.iter().map(|k| rat::to_f64(k.hi())).collect();
    let ranges: Vec<i64> = (0..n)
        .map(|k| {
            let mut b = 0.0;
            for i in 0..n {
                b += rat::to_f64(vinv.at(k, i)).abs() * k_hi[i];
            }
            (b * 1.000_001).ceil() as i64 + 1
        })
        .collect();

    let sigma_f64: Vec<Vec<f64>> = (0..n)
        .map(|j| field.minkowski_f64(&field.basis_element(j)))
        .collect::<Result<_>>()?;
    let band: Vec<f64> = k_hi.iter().map(|k| 1e-6 * (1.0 + k.abs())).collect();

    let mut set = BTreeSet::new();
    let mut coords = vec![-ranges[0]; 1];
    coords.clear();
    coords.extend(ranges.iter().map(|r| -r));
    loop {
        if coords.iter().any(|&c| c != 0) {
            let mut keep = true;
            let mut certify = false;
            for i in 0..n {
                let s: f64 = (0..n).map(|j| coords[j] as f64 * sigma_f64[j][i]).sum();
                if s.abs() > k_hi[i] + band[i] {
                    keep = false;
                    break;
                }
                if s.abs() > k_hi[i] - band[i] {
                    certify = true;
                }
            }
            if keep && certify {
                let elem = FieldElement::from_int_coords(&coords.iter().map(|&c| c).collect::<Vec<_>>());
                let sigma = field.minkowski(&elem, 128)?;
                keep = (0..n).all(|i| sigma[i].abs().lo() <= ks[i].hi());
            }
            if keep {
                let elem = FieldElement::from_int_coords(&coords.iter().map(|&c| c).collect::<Vec<_>>());
                set.insert(elem);
                if set.len() > cap {
                    return Err(Error::BoxCapExceeded {
                        cap,
                        volume_estimate,
                        covolume,
                        predicted,
                    });
                }
            }
        }
        // odometer step
        let mut k = n;
        loop {
            if k == 0 {
                return LabelSet::from_elements(field, set, false);
            }
            k -= 1;
            coords[k] += 1;
            if coords[k] <= ranges[k] {
                break;
            }
            coords[k] = -ranges[k];
        }
    }
}

/// Class index (into `spec.distinct()`) of every spacing, in order.
pub(crate) fn spacing_class_ids(spec: &GapSpectrum) -> Vec<u32> {
    let map: HashMap<&[i64], u32> = spec
        .distinct()
        .iter()
        .enumerate()
        .map(|(k, c)| (c.coords.as_slice(), k as u32))
        .collect();
    (0..spec.spacing_count())
        .map(|i| map[spec.spacing_coords(i).as_slice()])
        .collect()
}

/// Label index of every distinct spacing class after rescaling by
/// `u(t) = u₁(t)⁻¹`; errors with the offending element when a rescaled
/// class is not in the label set.
pub(crate) fn class_label_ids(
    field: &NumberField,
    spec: &GapSpectrum,
    labels: &LabelSet,
    u1: &FieldElement,
) -> Result<Vec<usize>> {
    let u = rescaling_unit(field, u1)?;
    spec.distinct()
        .iter()
        .map(|class| {
            let elem = field.mul(&class.element(), &u);
            labels.find(&elem).ok_or_else(|| {
                Error::LabelSetIncomplete(format!(
                    "rescaled spacing {elem} at t = {} is missing from the {}-element label set",
                    spec.t(),
                    labels.len()
                ))
            })
        })
        .collect()
}

/// Exact occurrence statistics of the labels in one spectrum.
#[derive(Clone, Debug)]
pub struct Proportions {
    /// Occurrences per label (aligned with the label set; zeros kept).
    pub counts: Vec<usize>,
    /// `counts / (|M(t)| − 1)`, exact; sums to one.
    pub frequencies: Vec<Rat>,
    /// The denominator `|M(t)| − 1`.
    pub sample_size: usize,
}

/// Computes the exact label proportions `p_j(t) = |M_j(t)| / (|M(t)| − 1)`.
pub fn proportions(
    field: &NumberField,
    spec: &GapSpectrum,
    labels: &LabelSet,
    u1: &FieldElement,
) -> Result<Proportions> {
    if spec.count() < 2 {
        return Err(Error::Config(
            "label proportions need at least two lattice points".into(),
        ));
    }
    let class_to_label = class_label_ids(field, spec, labels, u1)?;
    let ids = spacing_class_ids(spec);
    let mut counts = vec![0usize; labels.len()];
    for &c in &ids {
        counts[class_to_label[c as usize]] += 1;
    }
    let sample_size = spec.spacing_count();
    let frequencies: Vec<Rat> = counts
        .iter()
        .map(|&c| rat::ratio(c as i64, sample_size as i64))
        .collect();
    let total: Rat = frequencies.iter().cloned().sum();
    if total != rat::one() {
        return Err(Error::Invariant(format!(
            "label proportions sum to {total}, expected 1"
        )));
    }
    Ok(Proportions { counts, frequencies, sample_size })
}

/// Exact statistics of consecutive spacing ratios `ρ_i = δ_i / δ_{i−1}`.
#[derive(Clone, Debug)]
pub struct RatioStats {
    /// Distinct exact ratios in ascending σ₁ order.
    pub elements: Vec<FieldElement>,
    pub counts: Vec<usize>,
    /// `counts / (|M(t)| − 2)`, exact; sums to one.
    pub frequencies: Vec<Rat>,
    /// The denominator `|M(t)| − 2`.
    pub sample_size: usize,
}

/// Collects the exact consecutive-ratio statistics of a spectrum.
///
/// Ratios are invariant under any global rescaling of the spacings, so
/// the same statistics result from raw or rescaled spacings.
pub fn ratio_stats(field: &NumberField, spec: &GapSpectrum) -> Result<RatioStats> {
    let n = spec.spacing_count();
    if n < 2 {
        return Err(Error::Config(
            "ratio statistics need at least three lattice points".into(),
        ));
    }
    let ids = spacing_class_ids(spec);
    let classes = spec.distinct();
    let mut pair_counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for i in 1..n {
        *pair_counts.entry((ids[i - 1], ids[i])).or_default() += 1;
    }
    let mut by_elem: BTreeMap<FieldElement, usize> = BTreeMap::new();
    for (&(a, b), &c) in &pair_counts {
        let ratio = field.mul(
            &classes[b as usize].element(),
            &field.inv(&classes[a as usize].element())?,
        );
        *by_elem.entry(ratio).or_default() += c;
    }
    let sample_size = n - 1;
    let elements = sort_by_sigma1(field, by_elem.keys().cloned().collect())?;
    let counts: Vec<usize> = elements.iter().map(|e| by_elem[e]).collect();
    let frequencies = counts
        .iter()
        .map(|&c| rat::ratio(c as i64, sample_size as i64))
        .collect();
    Ok(RatioStats { elements, counts, frequencies, sample_size })
}

/// One distinct word of labels with its exact frequency.
#[derive(Clone, Debug)]
pub struct WordRow {
    /// Label indices `(j_0, …, j_l)` of the word.
    pub labels: Vec<usize>,
    pub count: usize,
    pub frequency: Rat,
}

/// Exact sliding-window word statistics.
#[derive(Clone, Debug)]
pub struct WordStats {
    /// Word length `l + 1`.
    pub word_len: usize,
    /// Number of windows `|M(t)| − l − 1`; the frequency denominator.
    pub window_count: usize,
    /// Distinct words in lexicographic label order.
    pub rows: Vec<WordRow>,
}

/// Counts the words `(δ̄_i, …, δ̄_{i+l})` of `l + 1` consecutive rescaled
/// spacings over all `|M(t)| − l − 1` windows.
pub fn word_stats(
    field: &NumberField,
    spec: &GapSpectrum,
    labels: &LabelSet,
    u1: &FieldElement,
    l: usize,
) -> Result<WordStats> {
    let n = spec.spacing_count();
    if n < l + 1 {
        return Err(Error::Config(format!(
            "words of length {} need at least {} spacings, spectrum has {n}",
            l + 1,
            l + 1
        )));
    }
    let class_to_label = class_label_ids(field, spec, labels, u1)?;
    let ids: Vec<u32> = spacing_class_ids(spec)
        .into_iter()
        .map(|c| class_to_label[c as usize] as u32)
        .collect();
    let window_count = n - l;
    let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for s in 0..window_count {
        *counts.entry(ids[s..=s + l].to_vec()).or_default() += 1;
    }
    let rows = counts
        .into_iter()
        .map(|(w, c)| WordRow {
            labels: w.into_iter().map(|x| x as usize).collect(),
            count: c,
            frequency: rat::ratio(c as i64, window_count as i64),
        })
        .collect();
    Ok(WordStats { word_len: l + 1, window_count, rows })
}

/// Per-`t` record of a sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub t: Rat,
    /// `|M(t)|`.
    pub point_count: usize,
    /// Number of distinct spacings `D(t)`.
    pub distinct_count: usize,
    /// Labels first seen at this `t`.
    pub new_labels: usize,
    /// Whether some exponent floor was marginal at this `t`.
    pub marginal: bool,
    /// Exact label proportions (aligned with the final label set).
    pub proportions: Vec<Rat>,
}

/// A full sweep: the accumulated label set plus per-`t` statistics.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub labels: LabelSet,
    pub rows: Vec<SweepRow>,
    /// The last `t` that introduced a new label, when any row did.
    pub stable_after: Option<Rat>,
}

/// Runs the rescaling flow over a schedule: collects the empirical label
/// set, then reports exact per-`t` proportions against it.
///
/// Schedule entries with fewer than two lattice points are skipped.
pub fn run_sweep(
    field: &NumberField,
    units: &UnitSystem,
    omega_indices: &[usize],
    region: &ConvexRegion,
    schedule: &[Rat],
) -> Result<SweepResult> {
    struct Pass1 {
        t: Rat,
        point_count: usize,
        new_labels: usize,
        marginal: bool,
        class_elems: Vec<FieldElement>,
        class_counts: Vec<usize>,
    }

    let mut seen: BTreeSet<FieldElement> = BTreeSet::new();
    let mut pass1 = Vec::new();
    for t in schedule {
        let spec = spectrum(field, omega_indices, region, t)?;
        if spec.count() < 2 {
            continue;
        }
        let u1 = units.unit_at(field, t)?;
        let u = rescaling_unit(field, &u1.element)?;
        let mut class_elems = Vec::with_capacity(spec.distinct().len());
        let mut class_counts = Vec::with_capacity(spec.distinct().len());
        let mut new_labels = 0;
        for class in spec.distinct() {
            let elem = field.mul(&class.element(), &u);
            if seen.insert(elem.clone()) {
                new_labels += 1;
            }
            class_elems.push(elem);
            class_counts.push(class.count);
        }
        pass1.push(Pass1 {
            t: t.clone(),
            point_count: spec.count(),
            new_labels,
            marginal: u1.marginal(),
            class_elems,
            class_counts,
        });
    }

    let labels = LabelSet::from_elements(field, seen, true)?;
    let mut rows = Vec::with_capacity(pass1.len());
    let mut stable_after = None;
    for p in pass1 {
        let mut counts = vec![0usize; labels.len()];
        for (elem, c) in p.class_elems.iter().zip(&p.class_counts) {
            let j = labels.find(elem).ok_or_else(|| {
                Error::Invariant("sweep label vanished between passes".into())
            })?;
            counts[j] += c;
        }
        let sample: usize = p.class_counts.iter().sum();
        let proportions = counts
            .iter()
            .map(|&c| rat::ratio(c as i64, sample as i64))
            .collect();
        if p.new_labels > 0 {
            stable_after = Some(p.t.clone());
        }
        rows.push(SweepRow {
            t: p.t,
            point_count: p.point_count,
            distinct_count: p.class_counts.len(),
            new_labels: p.new_labels,
            marginal: p.marginal,
            proportions,
        });
    }
    Ok(SweepResult { labels, rows, stable_after })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap_engine::{cubic_k_interval, kprime_from_k};
    use crate::numberfield::{cubic_field, golden_field};

    fn cubic_units(field: &NumberField) -> UnitSystem {
        let e1 = FieldElement::from_int_coords(&[2, -4, 1]);
        let e2 = FieldElement::from_int_coords(&[-5, 5, -1]);
        UnitSystem::new(field, vec![e1, e2]).unwrap()
    }

    fn golden_units(field: &NumberField) -> UnitSystem {
        // ε = ω + 1 has σ₁ ≈ 1.618 and norm −1.
        let e = FieldElement::from_int_coords(&[1, 1]);
        UnitSystem::new(field, vec![e]).unwrap()
    }

    #[test]
    fn rates_match_hand_solved_values() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let beta = us.beta_f64();
        assert!((beta[0] - 1.96080).abs() < 1e-5, "β₁ = {}", beta[0]);
        assert!((beta[1] + 0.70061).abs() < 1e-5, "β₂ = {}", beta[1]);

        // The certified enclosures agree and are tight.
        let iv = us.beta(&field, 200).unwrap();
        for (b, i) in beta.iter().zip(&iv) {
            assert!(i.contains(&rat::from_f64(*b).unwrap().clone()) || (i.mid_f64() - b).abs() < 1e-12);
            assert!(rat::to_f64(&i.width()) < 1e-30);
        }

        // Third-row identity: β₁·log|σ₃(ε₁)| + β₂·log|σ₃(ε₂)| = 1.
        let lm = us.log_matrix(&field, 200).unwrap();
        let check = lm.at(2, 0).mul(&iv[0]).add(&lm.at(2, 1).mul(&iv[1]));
        assert!(check.contains(&rat::one()));
    }

    #[test]
    fn golden_rate_is_minus_reciprocal_log() {
        let field = golden_field();
        let us = golden_units(&field);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let expected = -1.0 / phi.ln();
        assert!((us.beta_f64()[0] - expected).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_units_and_dependent_generators() {
        let field = cubic_field();
        // ω₁ has norm 7.
        let omega = field.basis_element(1);
        let e1 = FieldElement::from_int_coords(&[2, -4, 1]);
        match UnitSystem::new(&field, vec![omega, e1.clone()]) {
            Err(Error::NotAUnit { index: 0, norm }) => assert_eq!(norm, "7"),
            other => panic!("expected NotAUnit, got {other:?}"),
        }
        // ε₁ and ε₁² are multiplicatively dependent.
        let e1sq = field.mul(&e1, &e1);
        match UnitSystem::new(&field, vec![e1, e1sq]) {
            Err(Error::DependentUnits { expected: 2 }) => {}
            other => panic!("expected DependentUnits, got {other:?}"),
        }
        // Wrong generator count is a configuration error.
        let e = FieldElement::from_int_coords(&[2, -4, 1]);
        assert!(matches!(
            UnitSystem::new(&field, vec![e]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unit_walk_reproduces_tabulated_orbit() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let table: &[(i64, [i64; 3])] = &[
            (1, [1, 0, 0]),
            (3, [-5, 8, -2]),
            (10, [-3, 4, 0]),
            (31, [-41, 68, -18]),
            (100, [186, -308, 81]),
            (316, [-20, 74, -63]),
            (1000, [424, -609, 61]),
        ];
        for (t, coords) in table {
            let at = us.unit_at(&field, &rat::from_i64(*t)).unwrap();
            assert_eq!(
                at.element.int_coords().unwrap(),
                coords.to_vec(),
                "u₁({t})"
            );
            assert!(!at.marginal(), "marginal floor at t = {t}");
        }
        let at3 = us.unit_at(&field, &rat::from_i64(3)).unwrap();
        assert_eq!(at3.exponents, vec![2, -1]);
        let at1 = us.unit_at(&field, &rat::from_i64(1)).unwrap();
        assert_eq!(at1.exponents, vec![0, 0]);
        assert!(us.unit_at(&field, &rat::ratio(1, 2)).is_err());
    }

    #[test]
    fn sigma1_contraction_and_growth_are_uniformly_bounded() {
        let field = cubic_field();
        let us = cubic_units(&field);
        // |log|σ_i(u₁(t))| − b_i·log t| ≤ Σ_j |log|σ_i(ε_j)|| with
        // b = (−d, 1, 1): the fractional parts of β_j log t are in [0, 1).
        let lm = us.log_matrix(&field, 80).unwrap();
        for t in [3i64, 10, 100, 1000] {
            let at = us.unit_at(&field, &rat::from_i64(t)).unwrap();
            let logs = field.log_embedding(&at.element, 80).unwrap();
            let lnt = (t as f64).ln();
            for i in 0..3 {
                let target = if i == 0 { -2.0 * lnt } else { lnt };
                let slack: f64 = (0..2)
                    .map(|j| rat::to_f64(&lm.at(i, j).mid()).abs())
                    .sum();
                let dev = (logs[i].mid_f64() - target).abs();
                assert!(dev <= slack + 1e-9, "place {i}, t = {t}: {dev} > {slack}");
            }
        }
    }

    #[test]
    fn rescaling_by_identity_is_identity() {
        let field = cubic_field();
        let region = ConvexRegion::unit_box(2);
        let spec = spectrum(&field, &[1, 2], &region, &rat::from_i64(2)).unwrap();
        let raw: Vec<FieldElement> = (0..spec.spacing_count())
            .map(|i| spec.spacing_element(i))
            .collect();
        let rescaled = rescaled_spacings(&field, &spec, &field.one()).unwrap();
        assert_eq!(raw, rescaled);
    }

    #[test]
    fn rescaling_sign_is_canonical() {
        // σ₁(u₁(3)) < 0, so the canonical unit flips the sign there.
        let field = cubic_field();
        let us = cubic_units(&field);
        let u1 = us.unit_at(&field, &rat::from_i64(3)).unwrap();
        assert_eq!(field.sign_of(&u1.element).unwrap(), -1);
        let u = rescaling_unit(&field, &u1.element).unwrap();
        assert_eq!(field.sign_of(&u).unwrap(), 1);
        assert_eq!(
            field.mul(&u, &u1.element),
            field.neg(&field.one()),
            "u(3)·u₁(3) = −1"
        );
        let region = ConvexRegion::unit_box(2);
        let spec = spectrum(&field, &[1, 2], &region, &rat::from_i64(3)).unwrap();
        for e in rescaled_spacings(&field, &spec, &u1.element).unwrap() {
            assert!(field.sign_of(&e).unwrap() > 0);
        }
    }

    #[test]
    fn empirical_labels_stay_finite_and_cover_the_sweep() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let region = ConvexRegion::unit_box(2);
        let schedule: Vec<Rat> = (2..=50).map(rat::from_i64).collect();
        let labels =
            label_set(&field, &us, &[1, 2], &region, &schedule, &LabelMode::Empirical).unwrap();
        assert!(!labels.is_empty());
        // Far fewer labels than spacing classes summed over the schedule:
        // the same exact rescaled values recur at many t.
        let class_total: usize = schedule
            .iter()
            .map(|t| spectrum(&field, &[1, 2], &region, t).unwrap().d_t())
            .sum();
        assert!(labels.len() <= 64, "labels = {}", labels.len());
        assert!(labels.len() * 4 < class_total, "{} labels from {class_total} classes", labels.len());
        // Positive (canonical sign) and sorted strictly by σ₁.
        for e in labels.elements() {
            assert!(field.sign_of(e).unwrap() > 0, "label {e} is not positive");
        }
        for w in labels.elements().windows(2) {
            assert_eq!(
                field.cmp_sigma1(&w[0], &w[1]).unwrap(),
                std::cmp::Ordering::Less
            );
        }

        // Proportions at a schedule point: exact, sum to one, and agree
        // with a direct recount of the rescaled spacings.
        let t = rat::from_i64(50);
        let spec = spectrum(&field, &[1, 2], &region, &t).unwrap();
        let u1 = us.unit_at(&field, &t).unwrap();
        let props = proportions(&field, &spec, &labels, &u1.element).unwrap();
        assert_eq!(props.sample_size, spec.count() - 1);
        let total: Rat = props.frequencies.iter().cloned().sum();
        assert_eq!(total, rat::one());
        let rescaled = rescaled_spacings(&field, &spec, &u1.element).unwrap();
        let mut recount = vec![0usize; labels.len()];
        for e in &rescaled {
            recount[labels.find(e).expect("label present")] += 1;
        }
        assert_eq!(recount, props.counts);

        // A label set missing some label is reported as incomplete.
        let small = label_set(
            &field,
            &us,
            &[1, 2],
            &region,
            &[rat::from_i64(2)],
            &LabelMode::Empirical,
        )
        .unwrap();
        if small.len() < labels.len() {
            assert!(matches!(
                proportions(&field, &spec, &small, &u1.element),
                Err(Error::LabelSetIncomplete(_))
            ));
        }
    }

    #[test]
    fn rescaled_spacings_fit_in_the_minkowski_box() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let k = cubic_k_interval(&field, 160).unwrap();
        let kprime = kprime_from_k(&k).unwrap();
        let ks = minkowski_box(&field, &us, &kprime).unwrap();
        // Half-widths match the hand-computed constants.
        assert!((ks[0].mid_f64() - 19148.8).abs() < 0.5, "K₁ = {}", ks[0].mid_f64());
        assert!((ks[1].mid_f64() - 23.017).abs() < 0.01, "K₂ = {}", ks[1].mid_f64());
        assert!((ks[2].mid_f64() - 25.035).abs() < 0.01, "K₃ = {}", ks[2].mid_f64());

        let region = ConvexRegion::unit_box(2);
        for t in [20i64, 50] {
            let t = rat::from_i64(t);
            let spec = spectrum(&field, &[1, 2], &region, &t).unwrap();
            let u1 = us.unit_at(&field, &t).unwrap();
            let u = rescaling_unit(&field, &u1.element).unwrap();
            for class in spec.distinct() {
                let sigma = field
                    .minkowski(&field.mul(&class.element(), &u), 96)
                    .unwrap();
                for (i, s) in sigma.iter().enumerate() {
                    assert!(
                        s.abs().lo() <= ks[i].hi(),
                        "place {i} escapes the box at t = {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn theoretical_box_overflows_the_cap_with_volume_report() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let k = cubic_k_interval(&field, 160).unwrap();
        let kprime = kprime_from_k(&k).unwrap();
        let region = ConvexRegion::unit_box(2);
        let mode = LabelMode::TheoreticalBox { kprime, cap: 100_000 };
        match label_set(&field, &us, &[1, 2], &region, &[], &mode) {
            Err(Error::BoxCapExceeded { cap, volume_estimate, covolume, predicted }) => {
                assert_eq!(cap, 100_000);
                assert!((1.08e7..1.12e7).contains(&volume_estimate), "volume {volume_estimate}");
                assert!((covolume - 7.0).abs() < 1e-6, "covolume {covolume}");
                assert!((predicted - volume_estimate / 7.0).abs() < 1.0);
            }
            other => panic!("expected BoxCapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn small_theoretical_box_contains_the_empirical_labels() {
        let field = golden_field();
        let us = golden_units(&field);
        let region = ConvexRegion::unit_box(1);
        let schedule: Vec<Rat> = (2..=40).map(rat::from_i64).collect();

        // Precondition for K′ = 5: the scaled spacing bound holds on the
        // tested range.
        for t in 2..=40i64 {
            let spec = spectrum(&field, &[1], &region, &rat::from_i64(t)).unwrap();
            let max = spec.max_spacing().unwrap().value * t as f64;
            assert!(max < 5.0, "Δ·t = {max} at t = {t}");
        }

        let empirical =
            label_set(&field, &us, &[1], &region, &schedule, &LabelMode::Empirical).unwrap();
        let boxed = label_set(
            &field,
            &us,
            &[1],
            &region,
            &[],
            &LabelMode::TheoreticalBox { kprime: RInt::point(rat::from_i64(5)), cap: 10_000 },
        )
        .unwrap();
        assert!(!boxed.is_empirical());
        assert!(boxed.len() < 200);
        for e in empirical.elements() {
            assert!(boxed.find(e).is_some(), "empirical label {e} outside the box");
        }
        // The box is sign-symmetric, so it carries both signs.
        assert!(boxed
            .elements()
            .iter()
            .any(|e| field.sign_of(e).unwrap() < 0));
    }

    #[test]
    fn ratio_statistics_are_rescale_invariant() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let region = ConvexRegion::unit_box(2);
        let t = rat::from_i64(20);
        let spec = spectrum(&field, &[1, 2], &region, &t).unwrap();
        let stats = ratio_stats(&field, &spec).unwrap();
        assert_eq!(stats.sample_size, spec.count() - 2);
        let total: Rat = stats.frequencies.iter().cloned().sum();
        assert_eq!(total, rat::one());

        // Float oracle: cluster consecutive ratio values.
        let mut float_ratios: Vec<f64> = (1..spec.spacing_count())
            .map(|i| spec.spacing_value(i) / spec.spacing_value(i - 1))
            .collect();
        float_ratios.sort_by(f64::total_cmp);
        let mut clusters = 1;
        for w in float_ratios.windows(2) {
            if (w[1] - w[0]).abs() > 1e-6 * (1.0 + w[0].abs()) {
                clusters += 1;
            }
        }
        assert_eq!(stats.elements.len(), clusters);

        // Invariance: the ratios of the rescaled spacings are identical,
        // because the unit cancels.
        let u1 = us.unit_at(&field, &t).unwrap();
        let rescaled = rescaled_spacings(&field, &spec, &u1.element).unwrap();
        for i in 1..rescaled.len() {
            let rho = field.mul(&rescaled[i], &field.inv(&rescaled[i - 1]).unwrap());
            let raw = field.mul(
                &spec.spacing_element(i),
                &field.inv(&spec.spacing_element(i - 1)).unwrap(),
            );
            assert_eq!(rho, raw);
        }
    }

    #[test]
    fn word_statistics_match_a_direct_recount() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let region = ConvexRegion::unit_box(2);
        let schedule: Vec<Rat> = (2..=30).map(rat::from_i64).collect();
        let labels =
            label_set(&field, &us, &[1, 2], &region, &schedule, &LabelMode::Empirical).unwrap();
        let t = rat::from_i64(30);
        let spec = spectrum(&field, &[1, 2], &region, &t).unwrap();
        let u1 = us.unit_at(&field, &t).unwrap();

        // Words of length one coincide with the proportions (identical
        // windows, identical denominator).
        let w0 = word_stats(&field, &spec, &labels, &u1.element, 0).unwrap();
        let props = proportions(&field, &spec, &labels, &u1.element).unwrap();
        assert_eq!(w0.window_count, props.sample_size);
        for row in &w0.rows {
            assert_eq!(row.frequency, props.frequencies[row.labels[0]]);
        }

        // Length-two words against a direct sliding-window recount on the
        // exact rescaled spacings.
        let l = 1;
        let ws = word_stats(&field, &spec, &labels, &u1.element, l).unwrap();
        let rescaled = rescaled_spacings(&field, &spec, &u1.element).unwrap();
        let mut recount: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for win in rescaled.windows(l + 1) {
            let word: Vec<usize> = win.iter().map(|e| labels.find(e).unwrap()).collect();
            *recount.entry(word).or_default() += 1;
        }
        assert_eq!(ws.window_count, spec.count() - 1 - l);
        assert_eq!(ws.rows.len(), recount.len());
        for row in &ws.rows {
            assert_eq!(row.count, recount[&row.labels]);
        }
        let total: Rat = ws.rows.iter().map(|r| r.frequency.clone()).sum();
        assert_eq!(total, rat::one());

        // A word longer than the spacing sequence is rejected.
        let tiny = spectrum(&field, &[1, 2], &region, &rat::from_i64(2)).unwrap();
        assert!(word_stats(&field, &tiny, &labels, &u1.element, 50).is_err());
    }

    #[test]
    fn sweep_reports_stability_and_exact_rows() {
        let field = cubic_field();
        let us = cubic_units(&field);
        let region = ConvexRegion::unit_box(2);
        let schedule: Vec<Rat> = (2..=40).map(rat::from_i64).collect();
        let sweep = run_sweep(&field, &us, &[1, 2], &region, &schedule).unwrap();
        assert_eq!(sweep.rows.len(), schedule.len());
        let total_new: usize = sweep.rows.iter().map(|r| r.new_labels).sum();
        assert_eq!(total_new, sweep.labels.len());
        for row in &sweep.rows {
            assert_eq!(row.proportions.len(), sweep.labels.len());
            let total: Rat = row.proportions.iter().cloned().sum();
            assert_eq!(total, rat::one());
            assert!(row.distinct_count <= 10);
        }
        // Stability: past the reported threshold no row introduces labels.
        let stable = sweep.stable_after.clone().unwrap();
        for row in &sweep.rows {
            if row.t > stable {
                assert_eq!(row.new_labels, 0);
            }
        }
    }
}
