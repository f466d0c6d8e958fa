//! Exact-arithmetic verification library for divisor-class calculations
//! on Prym moduli spaces, intersection theory on the Fano surface of a
//! cubic threefold, F2 theta-characteristic parity machinery, explicit
//! line geometry on cubic threefolds and finite-field models of
//! low-genus Prym fibers.

pub mod error;
pub mod exact;
pub mod cubic;
pub mod fano;
pub mod picard;
pub mod quartic;
pub mod report;
pub mod suites;
pub mod theta;

pub use error::{Error, Result};
