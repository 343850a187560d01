//! Exact-integer tests that rule out prime-order automorphisms and
//! transitive automorphism groups for generalized quadrangles of a given
//! order `(s, t)`, plus explicit small models to check the laws against.

pub mod autlaws;
pub mod case412;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod obstruction;
pub mod params;
pub mod scan;
pub mod witness;

pub use error::{Error, Hypothesis, Result};
pub use exactmath::Nat;
pub use params::GqOrder;
