//! Exact and certified machinery for the gap statistics of fractional parts
//! of linear forms `{m · ω}` where `ω = (ω₁, …, ω_d)` spans an algebraic
//! number field of degree `d + 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`rat`] — exact rational scalars, decimal parsing/printing helpers.
//! * [`interval`] — certified rational interval arithmetic with proven
//!   enclosures for `ln` and `π` at arbitrary bit precision.
//! * [`poly`] — integer/rational polynomials, Sturm-sequence real root
//!   isolation and certified complex root disks.
//! * [`matrix`] — small dense matrices over exact, interval and complex
//!   scalars (one elimination core shared by all three).
//! * [`numberfield`] — number fields presented by a primitive element,
//!   exact field arithmetic, certified embeddings, Minkowski and
//!   logarithmic embeddings.
//! * [`gap_engine`] — lattice enumeration in dilated convex regions, exact
//!   gap spectra, the three-gap check and spacing bounds.
//! * [`unit_flow`] — unit subgroups, the rate vector β, the rescaling unit
//!   `u₁(t)`, exact label sets for rescaled spacings, proportions, ratio
//!   and word statistics.
//! * [`quasi`] — commuting matrix logarithms of the unit action, the
//!   decaying/rotational flow decomposition and the explicit predictor `g₃`.
//! * [`partition`] — shift-vector partitions of the lattice and of the
//!   region, region volume estimates and word regions.
//! * [`config`] / [`export`] — run configuration (exact numbers travel as
//!   strings) and deterministic CSV/JSON emission.
//!
//! Exact data stays exact end to end: lattice points, fractional parts and
//! spacings are integer coordinate vectors in the field basis, label sets
//! are exact field elements, and every floating-point value is derived from
//! a certified interval whose width is under explicit control.

pub mod config;
pub mod error;
pub mod export;
pub mod gap_engine;
pub mod interval;
pub mod matrix;
pub mod numberfield;
pub mod partition;
pub mod poly;
pub mod quasi;
pub mod rat;
pub mod unit_flow;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
