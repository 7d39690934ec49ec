//! Exact intersection calculus, Riemann-Roch numerics, Sarkisov link
//! enumeration and a verified catalog of Fano threefolds.
//!
//! Every value is an arbitrary-precision integer or rational; nothing in
//! the crate touches floating point.

pub mod blowup;
pub mod catalog;
pub mod error;
pub mod exactcore;
pub mod riemannroch;
pub mod sarkisov;
pub mod scrolls;
pub mod wps;

pub use error::{FanoError, Result};
pub use exactcore::{eval_form, BasisTag, DivisorClass, Rational, TrilinearForm};
