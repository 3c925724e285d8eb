//! Python bindings for the gapflow library.
//!
//! The module mirrors the Rust API: a [`Field`] owns the number field, a
//! [`Units`] owns the rescaling generators, and free functions build
//! spectra, label statistics, and the quasiperiodic flow. All exact
//! numbers cross the boundary as strings (or Python ints); floats are
//! deliberately rejected wherever exactness matters.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gapflow::config::{format_exact, parse_exact, RunConfig};
use gapflow::gap_engine::{self, ConvexRegion, GapSpectrum};
use gapflow::numberfield::{FieldElement, NumberField};
use gapflow::partition::{
    predicted_proportions, shift_vectors, RegionContext, VolumeMethod, DEFAULT_GRID_RESOLUTION,
};
use gapflow::poly::Poly;
use gapflow::quasi::QuasiFlow;
use gapflow::rat::{self, Rat};
use gapflow::unit_flow::{self, LabelMode, UnitSystem};

/// Converts a library error into the matching Python exception: input and
/// configuration problems become `ValueError`, broken invariants become
/// `RuntimeError`.
fn py_err(e: gapflow::Error) -> PyErr {
    if e.exit_code() == 3 {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// An exact number from Python: an int, or a string like `"-7/3"` or
/// `"1.25"`. Floats are rejected so no value silently loses exactness.
#[derive(FromPyObject)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn to_rat(&self) -> PyResult<Rat> {
        match self {
            Num::Int(n) => Ok(rat::from_i64(*n)),
            Num::Text(s) => parse_exact(s).map_err(py_err),
        }
    }
}

fn parse_coords(coords: &[Num]) -> PyResult<Vec<Rat>> {
    coords.iter().map(Num::to_rat).collect()
}

// ---------------------------------------------------------------------------
// Field and elements.
// ---------------------------------------------------------------------------

/// A real algebraic number field `ℚ(ω₁, …, ω_d)` with its distinguished
/// embedding σ₁.
#[pyclass(module = "gapflow_py")]
struct Field {
    inner: Arc<NumberField>,
}

/// An exact element, stored as rational coordinates in the field basis
/// `(1, ω₁, …, ω_d)`. All arithmetic goes through the owning [`Field`].
#[pyclass(module = "gapflow_py", skip_from_py_object)]
#[derive(Clone)]
struct Element {
    inner: FieldElement,
}

#[pymethods]
impl Field {
    /// Builds the field from the integer coefficients of the minimal
    /// polynomial (constant first), the ω definitions as exact coordinate
    /// vectors in the power basis of the primitive element, and optional
    /// `(values, radius)` decimal hints selecting σ₁.
    #[new]
    #[pyo3(signature = (minpoly, omega, omega_approx = None))]
    fn new(
        minpoly: Vec<i64>,
        omega: Vec<Vec<Num>>,
        omega_approx: Option<(Vec<Num>, Num)>,
    ) -> PyResult<Self> {
        if minpoly.len() < 2 {
            return Err(PyValueError::new_err(
                "minimal polynomial needs degree >= 1",
            ));
        }
        let minpoly = Poly::from_int_coeffs(&minpoly);
        let defs: Vec<Poly> = omega
            .iter()
            .map(|coeffs| Ok(Poly::new(parse_coords(coeffs)?)))
            .collect::<PyResult<_>>()?;
        let inner = match &omega_approx {
            None => NumberField::new(minpoly, defs, None),
            Some((values, radius)) => {
                let hints = parse_coords(values)?;
                NumberField::new(minpoly, defs, Some((&hints, radius.to_rat()?)))
            }
        };
        Ok(Self {
            inner: Arc::new(inner.map_err(py_err)?),
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `(r₁, r₂)`: number of real places and of complex-conjugate pairs.
    #[getter]
    fn signature(&self) -> (usize, usize) {
        self.inner.signature()
    }

    #[getter]
    fn unit_rank(&self) -> usize {
        self.inner.unit_rank()
    }

    /// Builds an element from exact coordinates in `(1, ω₁, …, ω_d)`.
    fn element(&self, coords: Vec<Num>) -> PyResult<Element> {
        let parsed = parse_coords(&coords)?;
        if parsed.len() != self.inner.degree() {
            return Err(PyValueError::new_err(format!(
                "expected {} coordinates, got {}",
                self.inner.degree(),
                parsed.len()
            )));
        }
        Ok(Element {
            inner: FieldElement::from_coords(parsed),
        })
    }

    fn zero(&self) -> Element {
        Element { inner: self.inner.zero() }
    }

    fn one(&self) -> Element {
        Element { inner: self.inner.one() }
    }

    /// The basis generator `ω_j` (`j = 0` is the unit).
    fn basis_element(&self, j: usize) -> PyResult<Element> {
        if j >= self.inner.degree() {
            return Err(PyValueError::new_err(format!(
                "basis index {j} out of range 0..{}",
                self.inner.degree()
            )));
        }
        Ok(Element { inner: self.inner.basis_element(j) })
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element { inner: self.inner.add(&a.inner, &b.inner) }
    }

    fn sub(&self, a: &Element, b: &Element) -> Element {
        Element { inner: self.inner.sub(&a.inner, &b.inner) }
    }

    fn neg(&self, a: &Element) -> Element {
        Element { inner: self.inner.neg(&a.inner) }
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element { inner: self.inner.mul(&a.inner, &b.inner) }
    }

    fn inv(&self, a: &Element) -> PyResult<Element> {
        Ok(Element { inner: self.inner.inv(&a.inner).map_err(py_err)? })
    }

    fn pow(&self, a: &Element, k: i64) -> PyResult<Element> {
        Ok(Element { inner: self.inner.pow(&a.inner, k).map_err(py_err)? })
    }

    fn scale(&self, a: &Element, k: Num) -> PyResult<Element> {
        Ok(Element { inner: self.inner.scale(&a.inner, &k.to_rat()?) })
    }

    /// The exact field norm as a string.
    fn norm(&self, a: &Element) -> PyResult<String> {
        Ok(format_exact(&self.inner.norm(&a.inner).map_err(py_err)?))
    }

    /// σ₁ of the element as a float (midpoint of a certified enclosure).
    #[pyo3(signature = (a, bits = 128))]
    fn sigma1(&self, a: &Element, bits: u32) -> PyResult<f64> {
        Ok(self.inner.sigma1(&a.inner, bits).map_err(py_err)?.mid_f64())
    }

    /// All embeddings of the element (real places first, then complex
    /// places and their conjugates).
    fn embeddings(&self, a: &Element) -> PyResult<Vec<Complex64>> {
        self.inner.embed_all_f64(&a.inner).map_err(py_err)
    }

    /// `σ₁(basis_j)` for every basis generator.
    fn basis_sigma1(&self) -> Vec<f64> {
        self.inner.basis_sigma1_f64().to_vec()
    }

    fn __repr__(&self) -> String {
        let (r1, r2) = self.inner.signature();
        format!(
            "Field(degree={}, signature=({r1}, {r2}))",
            self.inner.degree()
        )
    }
}

#[pymethods]
impl Element {
    /// Exact coordinates as strings.
    fn coords(&self) -> Vec<String> {
        self.inner.coords().iter().map(format_exact).collect()
    }

    /// Integer coordinates, or `None` when some coordinate is fractional.
    fn int_coords(&self) -> Option<Vec<i64>> {
        self.inner.int_coords()
    }

    #[getter]
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner.coord_string())
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

// ---------------------------------------------------------------------------
// Units and the rescaling walk.
// ---------------------------------------------------------------------------

/// Multiplicatively independent units `ε₁, …, ε_r` together with the
/// solved rates β of the rescaling walk.
#[pyclass(module = "gapflow_py")]
struct Units {
    inner: UnitSystem,
}

#[pymethods]
impl Units {
    /// Validates the generators (units, independent, correct count) and
    /// solves the rate system for β.
    #[new]
    fn new(field: &Field, generators: Vec<Vec<Num>>) -> PyResult<Self> {
        let gens: Vec<FieldElement> = generators
            .iter()
            .map(|coords| {
                let parsed = parse_coords(coords)?;
                if parsed.len() != field.inner.degree() {
                    return Err(PyValueError::new_err(format!(
                        "unit generator has {} coordinates, field degree is {}",
                        parsed.len(),
                        field.inner.degree()
                    )));
                }
                Ok(FieldElement::from_coords(parsed))
            })
            .collect::<PyResult<_>>()?;
        Ok(Self {
            inner: UnitSystem::new(&field.inner, gens).map_err(py_err)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// The rates β as floats.
    fn beta(&self) -> Vec<f64> {
        self.inner.beta_f64().to_vec()
    }

    /// Certified rate enclosures as `(midpoint, width)` pairs.
    #[pyo3(signature = (field, bits = 200))]
    fn beta_certified(&self, field: &Field, bits: u32) -> PyResult<Vec<(f64, f64)>> {
        let enclosures = self.inner.beta(&field.inner, bits).map_err(py_err)?;
        Ok(enclosures
            .iter()
            .map(|iv| (iv.mid_f64(), rat::to_f64(&iv.width())))
            .collect())
    }

    fn generators(&self) -> Vec<Element> {
        self.inner
            .generators()
            .iter()
            .map(|g| Element { inner: g.clone() })
            .collect()
    }

    /// The raw walk product `u₁(t) = ∏ ε_j^⌊β_j log t⌋` as
    /// `(element, exponents, marginal)`; `marginal` flags a floor decided
    /// by less than the safety margin.
    fn unit_at(&self, field: &Field, t: Num) -> PyResult<(Element, Vec<i64>, bool)> {
        let t = t.to_rat()?;
        let at = self.inner.unit_at(&field.inner, &t).map_err(py_err)?;
        let marginal = at.marginal();
        Ok((Element { inner: at.element }, at.exponents, marginal))
    }

    /// The canonical rescaling unit `u(t)` (σ₁ positive, `±u₁(t)⁻¹`).
    fn rescaling(&self, field: &Field, t: Num) -> PyResult<Element> {
        let t = t.to_rat()?;
        let at = self.inner.unit_at(&field.inner, &t).map_err(py_err)?;
        let u = unit_flow::rescaling_unit(&field.inner, &at.element).map_err(py_err)?;
        Ok(Element { inner: u })
    }
}

// ---------------------------------------------------------------------------
// Regions and spectra.
// ---------------------------------------------------------------------------

/// A bounded convex region `Ω ⊂ ℝ^d` with exact membership tests.
#[pyclass(module = "gapflow_py", skip_from_py_object)]
#[derive(Clone)]
struct Region {
    inner: ConvexRegion,
}

#[pymethods]
impl Region {
    /// The unit box `[0, 1)^d`.
    #[staticmethod]
    fn unit_box(dim: usize) -> PyResult<Self> {
        if dim == 0 {
            return Err(PyValueError::new_err("region dimension must be >= 1"));
        }
        Ok(Self { inner: ConvexRegion::unit_box(dim) })
    }

    /// An axis-aligned box from exact `(lo, hi)` bounds per axis.
    #[staticmethod]
    #[pyo3(name = "box")]
    fn box_(bounds: Vec<(Num, Num)>) -> PyResult<Self> {
        let parsed: Vec<(Rat, Rat)> = bounds
            .iter()
            .map(|(lo, hi)| Ok((lo.to_rat()?, hi.to_rat()?)))
            .collect::<PyResult<_>>()?;
        Ok(Self {
            inner: ConvexRegion::from_bounds(parsed).map_err(py_err)?,
        })
    }

    /// The standard simplex `{x ≥ 0, Σ x_i < 1}`.
    #[staticmethod]
    fn simplex(dim: usize) -> PyResult<Self> {
        if dim == 0 {
            return Err(PyValueError::new_err("region dimension must be >= 1"));
        }
        Ok(Self { inner: ConvexRegion::simplex(dim) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }
}

/// The sorted fractional-part spectrum `Y(t)` with its exact spacings.
#[pyclass(module = "gapflow_py")]
struct Spectrum {
    inner: GapSpectrum,
}

#[pymethods]
impl Spectrum {
    /// Number of lattice points `|M(t)|`.
    #[getter]
    fn count(&self) -> usize {
        self.inner.count()
    }

    /// Number of distinct spacing values `D(t)`.
    #[getter]
    fn d_t(&self) -> usize {
        self.inner.d_t()
    }

    /// Number of consecutive spacings (`|M(t)| − 1`).
    #[getter]
    fn spacing_count(&self) -> usize {
        self.inner.spacing_count()
    }

    /// The scale as an exact string.
    #[getter]
    fn t(&self) -> String {
        format_exact(self.inner.t())
    }

    /// Sorted fractional parts as floats.
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    /// Distinct spacings as `(coords, count, value)`: exact integer
    /// coordinates in `(1, ω₁, …, ω_d)`, multiplicity, σ₁ image.
    fn distinct(&self) -> Vec<(Vec<i64>, usize, f64)> {
        self.inner
            .distinct()
            .iter()
            .map(|c| (c.coords.clone(), c.count, c.value))
            .collect()
    }

    /// The largest spacing as `(coords, count, value)`.
    fn max_spacing(&self) -> Option<(Vec<i64>, usize, f64)> {
        self.inner
            .max_spacing()
            .map(|c| (c.coords.clone(), c.count, c.value))
    }

    /// The spacing between points `i` and `i+1` as an exact element.
    fn spacing_element(&self, i: usize) -> PyResult<Element> {
        if i + 1 >= self.inner.count() {
            return Err(PyValueError::new_err(format!(
                "spacing index {i} out of range 0..{}",
                self.inner.spacing_count()
            )));
        }
        Ok(Element { inner: self.inner.spacing_element(i) })
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum(t={}, count={}, d_t={})",
            format_exact(self.inner.t()),
            self.inner.count(),
            self.inner.d_t()
        )
    }
}

fn resolve_omega_indices(field: &Field, omega_indices: Option<Vec<usize>>) -> PyResult<Vec<usize>> {
    let indices = match omega_indices {
        Some(v) => v,
        None => gap_engine::default_omega_indices(&field.inner),
    };
    for &j in &indices {
        if j == 0 || j >= field.inner.degree() {
            return Err(PyValueError::new_err(format!(
                "generator index {j} out of range 1..{}",
                field.inner.degree()
            )));
        }
    }
    Ok(indices)
}

/// Builds the spectrum of fractional parts `{m·ω}` over `t·Ω ∩ ℤ^d`.
#[pyfunction]
#[pyo3(signature = (field, region, t, omega_indices = None))]
fn spectrum(
    field: &Field,
    region: &Region,
    t: Num,
    omega_indices: Option<Vec<usize>>,
) -> PyResult<Spectrum> {
    let indices = resolve_omega_indices(field, omega_indices)?;
    let t = t.to_rat()?;
    let inner =
        gap_engine::spectrum(&field.inner, &indices, &region.inner, &t).map_err(py_err)?;
    Ok(Spectrum { inner })
}

// ---------------------------------------------------------------------------
// Labels and proportions.
// ---------------------------------------------------------------------------

/// Collects the empirical label alphabet `𝒮` (rescaled spacings) over a
/// schedule of scales.
#[pyfunction]
#[pyo3(signature = (field, units, region, schedule, omega_indices = None))]
fn labels(
    field: &Field,
    units: &Units,
    region: &Region,
    schedule: Vec<Num>,
    omega_indices: Option<Vec<usize>>,
) -> PyResult<Vec<Element>> {
    let indices = resolve_omega_indices(field, omega_indices)?;
    let grid: Vec<Rat> = schedule
        .iter()
        .map(Num::to_rat)
        .collect::<PyResult<_>>()?;
    let set = unit_flow::label_set(
        &field.inner,
        &units.inner,
        &indices,
        &region.inner,
        &grid,
        &LabelMode::Empirical,
    )
    .map_err(py_err)?;
    Ok(set
        .elements()
        .iter()
        .map(|e| Element { inner: e.clone() })
        .collect())
}

/// Full label-statistics report at a single scale `t`: the alphabet is
/// collected over `schedule`, counted at `t`, and compared against the
/// volume prediction from the region partition.
///
/// Returns a dict with keys `labels`, `counts`, `observed` (exact
/// strings), `predicted`, `predicted_error`, `region_volume`,
/// `region_volume_error`, `method`.
#[pyfunction]
#[pyo3(signature = (field, units, region, schedule, t, omega_indices = None, grid_resolution = None))]
#[allow(clippy::too_many_arguments)]
fn proportions_report<'py>(
    py: Python<'py>,
    field: &Field,
    units: &Units,
    region: &Region,
    schedule: Vec<Num>,
    t: Num,
    omega_indices: Option<Vec<usize>>,
    grid_resolution: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let indices = resolve_omega_indices(field, omega_indices)?;
    let grid: Vec<Rat> = schedule
        .iter()
        .map(Num::to_rat)
        .collect::<PyResult<_>>()?;
    let t = t.to_rat()?;
    let label_set = unit_flow::label_set(
        &field.inner,
        &units.inner,
        &indices,
        &region.inner,
        &grid,
        &LabelMode::Empirical,
    )
    .map_err(py_err)?;
    let spec =
        gap_engine::spectrum(&field.inner, &indices, &region.inner, &t).map_err(py_err)?;
    let u1 = units.inner.unit_at(&field.inner, &t).map_err(py_err)?;
    let observed =
        unit_flow::proportions(&field.inner, &spec, &label_set, &u1.element).map_err(py_err)?;

    let shifts =
        shift_vectors(&field.inner, &label_set, &u1.element, &t).map_err(py_err)?;
    let v_norm = shifts.normalized(&indices).map_err(py_err)?;
    let ctx = RegionContext::new(&field.inner, &indices, &region.inner).map_err(py_err)?;
    let method = match (grid_resolution, &region.inner) {
        (Some(r), _) => VolumeMethod::Grid { resolution: r },
        (None, ConvexRegion::Box { .. }) => VolumeMethod::ExactBox,
        (None, _) => VolumeMethod::Grid { resolution: DEFAULT_GRID_RESOLUTION },
    };
    let predicted = predicted_proportions(&ctx, &v_norm, method).map_err(py_err)?;

    let out = PyDict::new(py);
    let elems: Vec<Element> = label_set
        .elements()
        .iter()
        .map(|e| Element { inner: e.clone() })
        .collect();
    out.set_item("labels", elems)?;
    out.set_item("counts", observed.counts.clone())?;
    out.set_item(
        "observed",
        observed.frequencies.iter().map(format_exact).collect::<Vec<_>>(),
    )?;
    out.set_item("sample_size", observed.sample_size)?;
    out.set_item("predicted", predicted.values.clone())?;
    out.set_item("predicted_error", predicted.errors.clone())?;
    out.set_item("region_volume", predicted.region_volume)?;
    out.set_item("region_volume_error", predicted.region_error)?;
    out.set_item("method", predicted.method)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// The quasiperiodic flow.
// ---------------------------------------------------------------------------

/// The explicit predictor: commuting logarithms, the flow matrix, its
/// rotation/decay split, and the closed-form `g₃`.
#[pyclass(module = "gapflow_py")]
struct Flow {
    inner: QuasiFlow,
}

#[pymethods]
impl Flow {
    #[new]
    fn new(field: &Field, units: &Units) -> PyResult<Self> {
        Ok(Self {
            inner: QuasiFlow::new(&field.inner, &units.inner).map_err(py_err)?,
        })
    }

    /// Eigenvalues of the flow matrix `Σ_j β_j L_j − I` as complex numbers.
    fn eigenvalues(&self) -> Vec<Complex64> {
        self.inner.eigenvalues().to_vec()
    }

    /// Number of rotation (purely imaginary) eigenvalue slots.
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    /// Rotation frequencies θ (one per rotation slot, divided by 2π).
    fn theta(&self) -> Vec<f64> {
        self.inner.theta().to_vec()
    }

    /// The common real part γ of the decaying eigenvalues.
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    /// The decay amplitude α = e^{0.9γ} in the error bound.
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    fn rotation_slots(&self) -> Vec<usize> {
        self.inner.rotation_slots().to_vec()
    }

    /// `(max exp residual, max commutator)` of the commuting-logarithm
    /// construction, both relative norms.
    fn log_residuals(&self) -> (f64, f64) {
        let logs = self.inner.logs();
        let max_exp = logs.exp_residuals.iter().cloned().fold(0.0f64, f64::max);
        (max_exp, logs.max_commutator)
    }

    /// Evaluates the predictor at scale `t`. Returns a dict with keys
    /// `t`, `n` (exact coordinates of `u₁(t)`), `t_g3`, `errors`,
    /// `max_error`, `max_imag`.
    fn predict<'py>(
        &self,
        py: Python<'py>,
        field: &Field,
        units: &Units,
        t: Num,
    ) -> PyResult<Bound<'py, PyDict>> {
        let t = t.to_rat()?;
        let row = self
            .inner
            .predict(&field.inner, &units.inner, &t)
            .map_err(py_err)?;
        let out = PyDict::new(py);
        out.set_item("t", format_exact(&row.t))?;
        out.set_item("n", row.exact_int_coords())?;
        out.set_item(
            "coords",
            row.exact.coords().iter().map(format_exact).collect::<Vec<_>>(),
        )?;
        out.set_item("t_g3", row.t_g3.clone())?;
        out.set_item("errors", row.errors.clone())?;
        out.set_item("max_error", row.max_error)?;
        out.set_item("max_imag", row.max_imag)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Flow(k={}, gamma={:.5}, alpha={:.5})",
            self.inner.k(),
            self.inner.gamma(),
            self.inner.alpha()
        )
    }
}

// ---------------------------------------------------------------------------
// Scalar three-gap checks.
// ---------------------------------------------------------------------------

/// Exact scalar three-gap check for one ω: returns
/// `(max_t D(t), violating_t_list)` over `1 ≤ t ≤ t_max`.
#[pyfunction]
fn three_gap_check(omega: Num, t_max: i64) -> PyResult<(usize, Vec<i64>)> {
    let omega = omega.to_rat()?;
    let report = gap_engine::three_gap_check(&omega, t_max).map_err(py_err)?;
    let violating = report.violations.clone();
    Ok((report.max_distinct, violating))
}

/// Randomized scalar suite: `samples` rational ω, exact gap counts up to
/// `t_max`. Returns `(max_t D(t), number_of_violations)`.
#[pyfunction]
fn three_gap_suite(samples: usize, t_max: i64, seed: u64) -> PyResult<(usize, usize)> {
    let suite = gap_engine::three_gap_random_suite(samples, t_max, seed).map_err(py_err)?;
    Ok((suite.max_distinct, suite.violations.len()))
}

// ---------------------------------------------------------------------------
// Configuration files.
// ---------------------------------------------------------------------------

/// A parsed run configuration (same JSON schema as the CLI).
#[pyclass(module = "gapflow_py")]
struct Config {
    inner: RunConfig,
}

#[pymethods]
impl Config {
    /// Parses the JSON text of a configuration file.
    #[new]
    fn new(json: &str) -> PyResult<Self> {
        Ok(Self { inner: RunConfig::from_json(json).map_err(py_err)? })
    }

    fn field(&self) -> PyResult<Field> {
        Ok(Field { inner: Arc::new(self.inner.build_field().map_err(py_err)?) })
    }

    fn units(&self) -> PyResult<Units> {
        let field = self.inner.build_field().map_err(py_err)?;
        Ok(Units { inner: self.inner.build_units(&field).map_err(py_err)? })
    }

    fn region(&self) -> PyResult<Region> {
        Ok(Region { inner: self.inner.build_region().map_err(py_err)? })
    }

    /// The exact schedule values as strings.
    fn schedule(&self) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .schedule_values()
            .map_err(py_err)?
            .iter()
            .map(format_exact)
            .collect())
    }

    fn omega_indices(&self) -> PyResult<Vec<usize>> {
        let field = self.inner.build_field().map_err(py_err)?;
        self.inner.omega_indices(&field).map_err(py_err)
    }

    #[getter]
    fn precision_bits(&self) -> u32 {
        self.inner.precision_bits
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

// ---------------------------------------------------------------------------
// Module definition.
// ---------------------------------------------------------------------------

#[pymodule]
fn gapflow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Element>()?;
    m.add_class::<Units>()?;
    m.add_class::<Region>()?;
    m.add_class::<Spectrum>()?;
    m.add_class::<Flow>()?;
    m.add_class::<Config>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(labels, m)?)?;
    m.add_function(wrap_pyfunction!(proportions_report, m)?)?;
    m.add_function(wrap_pyfunction!(three_gap_check, m)?)?;
    m.add_function(wrap_pyfunction!(three_gap_suite, m)?)?;
    Ok(())
}
