//! Exact arithmetic: integers, polynomials over Z, Q and F_p, finite fields.

pub mod arith;
pub mod field;
pub mod fppoly;
pub mod fq;
pub mod linalg;
pub mod poly;
pub mod zfactor;

pub use field::{FieldOps, PrimeField};
pub use fppoly::FpPoly;
pub use fq::{Fq, FqElem};
pub use poly::{Poly, QPoly, ZPoly};
