//! Randomized and deterministic tests for complex multiplication of
//! elliptic curves over number fields, with the supporting exact arithmetic.

pub mod algebra;
pub mod classpoly;
pub mod cmtest;
pub mod curvespec;
pub mod ellcurve;
pub mod error;
pub mod gl2galois;
pub mod numberfield;
mod serde_util;

pub use classpoly::{DirectVerdict, HilbertPoly, QuadForm};
pub use cmtest::{CmVerdict, SamplerConfig, SamplerMode, TrialRecord, VerdictKind};
pub use curvespec::CurveSpec;
pub use ellcurve::{CurveNF, FrobeniusData, ReducedCurve};
pub use error::{Error, Result};
pub use gl2galois::{CharPolyObs, GL2Elem, Subgroup};
pub use numberfield::{NfElement, NumberField, PrimeIdeal};
