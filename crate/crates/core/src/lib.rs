//! Exact invariants, hyperflexes and special strata of plane quartic curves.

pub mod covariants;
pub mod error;
pub mod fields;
pub mod invariants;
pub mod par;
pub mod parse;
pub mod poly;
mod quartic;
pub mod strata;
pub mod weierstrass;

pub use error::{Error, Result};
pub use fields::{Field, FieldElement};
pub use poly::{LinearMap3, MultiPoly, UniPoly};
pub use quartic::TernaryQuartic;
