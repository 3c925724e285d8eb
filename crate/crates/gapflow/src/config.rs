//! Run configuration: a JSON-compatible schema in which every exact
//! number travels as an integer or a decimal/fraction string, never as a
//! binary float.
//!
//! A configuration names the field (minimal polynomial, ω definitions,
//! optional σ₁ hints), the unit generators, the region, the `t`
//! schedule, and the numeric knobs (precision bits, volume method).  The
//! construction helpers turn those descriptions into validated library
//! objects; serialization round-trips losslessly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::gap_engine::{ConvexRegion, HalfSpace};
use crate::numberfield::{FieldElement, NumberField};
use crate::partition::{VolumeMethod, DEFAULT_GRID_RESOLUTION, DEFAULT_VOLUME_SAMPLES};
use crate::poly::Poly;
use crate::rat::{self, Rat};
use crate::unit_flow::UnitSystem;
use crate::{Error, Result};

/// Parses an exact number written as an integer, a decimal, or a
/// fraction `p/q`.
pub fn parse_exact(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad fraction numerator {p:?}")))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad fraction denominator {q:?}")))?;
        if den == BigInt::from(0) {
            return Err(Error::Config(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    } else {
        rat::parse_decimal(s)
    }
}

/// Formats a rational in the exact style [`parse_exact`] reads back:
/// plain integer when integral, `p/q` otherwise.
#[must_use]
pub fn format_exact(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Field description: `ρ` is a root of `minpoly` and each ω is a
/// polynomial in `ρ` with exact string coefficients (constant term
/// first).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Integer coefficients of the minimal polynomial, constant first.
    pub minpoly: Vec<i64>,
    /// One polynomial per ω, as exact coefficient strings.
    pub omega: Vec<Vec<String>>,
    /// Optional decimal approximations of σ₁(ω₁), …, σ₁(ω_d) picking the
    /// distinguished real embedding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_approx: Option<OmegaApprox>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaApprox {
    /// Decimal strings, one per ω.
    pub values: Vec<String>,
    /// Decimal matching radius.
    pub radius: String,
}

/// Region description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RegionConfig {
    /// `[0,1)^d`-style axis box with exact string bounds.
    Box { bounds: Vec<(String, String)> },
    /// The ω-weighted simplex `{v ≥ 0 : v·ω < 1}`.
    Simplex { dim: usize },
    /// Explicit linear inequalities `coeffs·v ≤ rhs` (or `<` when strict).
    Halfspaces { dim: usize, ineqs: Vec<HalfSpaceConfig> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceConfig {
    pub coeffs: Vec<String>,
    pub rhs: String,
    #[serde(default)]
    pub strict: bool,
}

/// `t` schedule description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ScheduleConfig {
    /// Explicit values (exact strings).
    List { values: Vec<String> },
    /// `from, from+step, …, ≤ to` (integers).
    Linear { from: i64, to: i64, #[serde(default = "one_i64")] step: i64 },
    /// `⌊base^{i/den}⌋` for `i = from..=to`.
    Log {
        #[serde(default = "ten_i64")]
        base: i64,
        from: i64,
        to: i64,
        den: i64,
    },
}

fn one_i64() -> i64 {
    1
}
fn ten_i64() -> i64 {
    10
}

impl ScheduleConfig {
    /// Materializes the schedule as exact, strictly increasing values ≥ 1.
    pub fn values(&self) -> Result<Vec<Rat>> {
        let values = match self {
            ScheduleConfig::List { values } => values
                .iter()
                .map(|s| parse_exact(s))
                .collect::<Result<Vec<_>>>()?,
            ScheduleConfig::Linear { from, to, step } => {
                if *step <= 0 {
                    return Err(Error::Config(format!("schedule step must be > 0, got {step}")));
                }
                (*from..=*to)
                    .step_by(*step as usize)
                    .map(rat::from_i64)
                    .collect()
            }
            ScheduleConfig::Log { base, from, to, den } => {
                if *base < 2 || *den < 1 {
                    return Err(Error::Config(format!(
                        "log schedule needs base ≥ 2 and den ≥ 1, got base {base}, den {den}"
                    )));
                }
                let mut out = Vec::new();
                for i in *from..=*to {
                    if i < 0 {
                        return Err(Error::Config("log schedule exponent must be ≥ 0".into()));
                    }
                    // ⌊base^{i/den}⌋ = ⌊(baseⁱ)^{1/den}⌋ exactly.
                    let power = BigInt::from(*base).pow(i as u32);
                    let root = power.nth_root(*den as u32);
                    let Some(v) = root.to_i64() else {
                        return Err(Error::Config(format!("schedule value {root} exceeds i64")));
                    };
                    out.push(rat::from_i64(v));
                }
                out
            }
        };
        if values.is_empty() {
            return Err(Error::Config("schedule is empty".into()));
        }
        for w in values.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(format!(
                    "schedule must be strictly increasing; {} follows {}",
                    w[1], w[0]
                )));
            }
        }
        if values[0] < rat::one() {
            return Err(Error::Config(format!(
                "schedule values must be ≥ 1, got {}",
                values[0]
            )));
        }
        Ok(values)
    }
}

/// Volume method description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum VolumeConfig {
    ExactBox,
    MonteCarlo {
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Grid {
        #[serde(default = "default_resolution")]
        resolution: usize,
    },
}

fn default_samples() -> usize {
    DEFAULT_VOLUME_SAMPLES
}
fn default_resolution() -> usize {
    DEFAULT_GRID_RESOLUTION
}

impl Default for VolumeConfig {
    fn default() -> Self {
        VolumeConfig::Grid { resolution: DEFAULT_GRID_RESOLUTION }
    }
}

fn default_bits() -> u32 {
    crate::unit_flow::DEFAULT_RATE_BITS
}

/// A full run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: FieldConfig,
    /// Unit generators as exact coordinate vectors in the field basis.
    pub units: Vec<Vec<String>>,
    /// Basis indices spanning the lattice (default: all of `1..=d`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_indices: Option<Vec<usize>>,
    pub region: RegionConfig,
    pub schedule: ScheduleConfig,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
    #[serde(default)]
    pub volume: VolumeConfig,
    /// Optional transference constant `K′` for the theoretical label box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kprime: Option<String>,
}

impl RunConfig {
    /// Parses a configuration from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("configuration does not match the schema: {e}")))
    }

    /// Serializes back to (pretty) JSON; parsing the output reproduces
    /// the configuration exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Builds the validated number field.
    pub fn build_field(&self) -> Result<NumberField> {
        if self.field.minpoly.len() < 2 {
            return Err(Error::Config("minimal polynomial needs degree ≥ 1".into()));
        }
        let minpoly = Poly::from_int_coeffs(&self.field.minpoly);
        let mut defs = Vec::with_capacity(self.field.omega.len());
        for coeffs in &self.field.omega {
            let parsed: Vec<Rat> = coeffs
                .iter()
                .map(|s| parse_exact(s))
                .collect::<Result<_>>()?;
            defs.push(Poly::new(parsed));
        }
        match &self.field.omega_approx {
            None => NumberField::new(minpoly, defs, None),
            Some(approx) => {
                let hints: Vec<Rat> = approx
                    .values
                    .iter()
                    .map(|s| parse_exact(s))
                    .collect::<Result<_>>()?;
                let radius = parse_exact(&approx.radius)?;
                NumberField::new(minpoly, defs, Some((&hints, radius)))
            }
        }
    }

    /// Builds the unit system over a field constructed from the same
    /// configuration.
    pub fn build_units(&self, field: &NumberField) -> Result<UnitSystem> {
        let mut gens = Vec::with_capacity(self.units.len());
        for coords in &self.units {
            if coords.len() != field.degree() {
                return Err(Error::Config(format!(
                    "unit generator has {} coordinates, field degree is {}",
                    coords.len(),
                    field.degree()
                )));
            }
            let parsed: Vec<Rat> = coords
                .iter()
                .map(|s| parse_exact(s))
                .collect::<Result<_>>()?;
            gens.push(FieldElement::from_coords(parsed));
        }
        UnitSystem::new(field, gens)
    }

    pub fn build_region(&self) -> Result<ConvexRegion> {
        match &self.region {
            RegionConfig::Box { bounds } => {
                let parsed: Vec<(Rat, Rat)> = bounds
                    .iter()
                    .map(|(lo, hi)| Ok((parse_exact(lo)?, parse_exact(hi)?)))
                    .collect::<Result<_>>()?;
                ConvexRegion::from_bounds(parsed)
            }
            RegionConfig::Simplex { dim } => {
                if *dim == 0 {
                    return Err(Error::Config("simplex dimension must be ≥ 1".into()));
                }
                Ok(ConvexRegion::simplex(*dim))
            }
            RegionConfig::Halfspaces { dim, ineqs } => {
                let parsed: Vec<HalfSpace> = ineqs
                    .iter()
                    .map(|h| {
                        Ok(HalfSpace {
                            coeffs: h
                                .coeffs
                                .iter()
                                .map(|s| parse_exact(s))
                                .collect::<Result<_>>()?,
                            rhs: parse_exact(&h.rhs)?,
                            strict: h.strict,
                        })
                    })
                    .collect::<Result<_>>()?;
                ConvexRegion::from_halfspaces(*dim, parsed)
            }
        }
    }

    /// Lattice axes; defaults to all basis generators `1..=d`.
    pub fn omega_indices(&self, field: &NumberField) -> Result<Vec<usize>> {
        let indices = match &self.omega_indices {
            Some(v) => v.clone(),
            None => (1..field.degree()).collect(),
        };
        for &j in &indices {
            if j == 0 || j >= field.degree() {
                return Err(Error::Config(format!(
                    "generator index {j} out of range 1..{}",
                    field.degree()
                )));
            }
        }
        Ok(indices)
    }

    /// Materializes the `t` schedule as exact ascending values.
    pub fn schedule_values(&self) -> Result<Vec<Rat>> {
        self.schedule.values()
    }

    /// Volume method with defaults resolved.
    #[must_use]
    pub fn volume_method(&self) -> VolumeMethod {
        match &self.volume {
            VolumeConfig::ExactBox => VolumeMethod::ExactBox,
            VolumeConfig::MonteCarlo { samples } => VolumeMethod::MonteCarlo { samples: *samples },
            VolumeConfig::Grid { resolution } => VolumeMethod::Grid { resolution: *resolution },
        }
    }

    /// Optional exact `K′` for the theoretical label box.
    pub fn kprime(&self) -> Result<Option<Rat>> {
        self.kprime.as_deref().map(parse_exact).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example_json() -> String {
        r#"{
            "field": {
                "minpoly": [-7, 14, -7, 1],
                "omega": [["0", "1"], ["0", "0", "1"]]
            },
            "units": [["2", "-4", "1"], ["-5", "5", "-1"]],
            "region": { "type": "simplex", "dim": 2 },
            "schedule": { "type": "log", "from": 1, "to": 6, "den": 2 }
        }"#
        .to_string()
    }

    #[test]
    fn parses_and_builds_the_worked_example() {
        let cfg = RunConfig::from_json(&worked_example_json()).unwrap();
        let field = cfg.build_field().unwrap();
        assert_eq!(field.degree(), 3);
        assert_eq!(field.signature(), (3, 0));
        let units = cfg.build_units(&field).unwrap();
        assert_eq!(units.rank(), 2);
        let region = cfg.build_region().unwrap();
        assert_eq!(region.dim(), 2);
        assert_eq!(cfg.omega_indices(&field).unwrap(), vec![1, 2]);
        assert_eq!(cfg.precision_bits, crate::unit_flow::DEFAULT_RATE_BITS);
        assert!(matches!(cfg.volume_method(), VolumeMethod::Grid { .. }));
        assert!(cfg.kprime().unwrap().is_none());
    }

    #[test]
    fn log_schedule_matches_floor_powers() {
        let cfg = RunConfig::from_json(&worked_example_json()).unwrap();
        let ts: Vec<i64> = cfg
            .schedule_values()
            .unwrap()
            .iter()
            .map(|t| t.to_integer().to_i64().unwrap())
            .collect();
        assert_eq!(ts, vec![3, 10, 31, 100, 316, 1000]);

        // Quarter-decade grid.
        let cfg2 = RunConfig::from_json(
            &worked_example_json()
                .replace("\"den\": 2", "\"den\": 4")
                .replace("\"from\": 1, \"to\": 6", "\"from\": 4, \"to\": 12"),
        )
        .unwrap();
        let ts2: Vec<i64> = cfg2
            .schedule_values()
            .unwrap()
            .iter()
            .map(|t| t.to_integer().to_i64().unwrap())
            .collect();
        assert_eq!(ts2, vec![10, 17, 31, 56, 100, 177, 316, 562, 1000]);
    }

    #[test]
    fn exact_parsing_rejects_floats_and_roundtrips() {
        assert_eq!(parse_exact("3/7").unwrap(), rat::ratio(3, 7));
        assert_eq!(parse_exact("-1.25").unwrap(), rat::ratio(-5, 4));
        assert_eq!(parse_exact(" 42 ").unwrap(), rat::from_i64(42));
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("abc").is_err());

        for s in ["3/7", "-5", "1/3"] {
            let x = parse_exact(s).unwrap();
            assert_eq!(parse_exact(&format_exact(&x)).unwrap(), x);
        }
    }

    #[test]
    fn json_round_trip_is_identity() {
        let mut cfg = RunConfig::from_json(&worked_example_json()).unwrap();
        cfg.kprime = Some("700".into());
        cfg.volume = VolumeConfig::MonteCarlo { samples: 1 << 16 };
        cfg.omega_indices = Some(vec![1, 2]);
        let text = cfg.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn linear_and_list_schedules_validate() {
        let mut cfg = RunConfig::from_json(&worked_example_json()).unwrap();
        cfg.schedule = ScheduleConfig::Linear { from: 1, to: 7, step: 2 };
        let ts = cfg.schedule_values().unwrap();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts[3], rat::from_i64(7));

        cfg.schedule = ScheduleConfig::List { values: vec!["5".into(), "3".into()] };
        assert!(cfg.schedule_values().is_err());
        cfg.schedule = ScheduleConfig::List { values: vec![] };
        assert!(cfg.schedule_values().is_err());
        cfg.schedule = ScheduleConfig::List { values: vec!["1/2".into()] };
        assert!(cfg.schedule_values().is_err());
        cfg.schedule = ScheduleConfig::Linear { from: 1, to: 5, step: 0 };
        assert!(cfg.schedule_values().is_err());
    }

    #[test]
    fn golden_mean_config_with_hints_builds() {
        let text = r#"{
            "field": {
                "minpoly": [-1, -1, 1],
                "omega": [["-1", "1"]],
                "omega_approx": { "values": ["0.618"], "radius": "0.01" }
            },
            "units": [["1", "1"]],
            "region": { "type": "simplex", "dim": 1 },
            "schedule": { "type": "linear", "from": 1, "to": 20 },
            "precision_bits": 128,
            "volume": { "method": "exact-box" }
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        let field = cfg.build_field().unwrap();
        assert_eq!(field.signature(), (2, 0));
        let units = cfg.build_units(&field).unwrap();
        // β = −1/log φ for the golden mean.
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((units.beta_f64()[0] + 1.0 / phi.ln()).abs() < 1e-9);
        assert!(matches!(cfg.volume_method(), VolumeMethod::ExactBox));
    }
}
