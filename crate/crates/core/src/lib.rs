//! Exact simplicial and Čech–Deligne computations for bundle gerbes and
//! bundle 2-gerbes over finite simplicial complexes.
//!
//! All arithmetic is exact: integers are `BigInt`, everything else is a
//! `BigRational`. Cohomology is decided by Smith normal form.
//!
//! Sign conventions, fixed once for the whole crate:
//! * `(dc)(v0..vp+1) = Σ_j (-1)^j c(v0..v̂j..vp+1)`, so `(dc)(v0v1) = c(v1) - c(v0)`;
//! * Čech `δ` uses the same alternating sum over omitted indices;
//! * the total differential is `D = δ + (-1)^p d` on a `(p, q)` piece.
//!
//! Circle-valued quantities are modelled additively in `Q/Z` (a value `x`
//! stands for `exp(2πi x)`), so curvature pairings are plain integers.

pub mod cech;
pub mod cli;
pub mod cochain;
pub mod error;
pub mod exact;
pub mod gerbe;
pub mod io;
pub mod linalg;
pub mod simplicial;
pub mod standard;
pub mod two_gerbe;
pub mod words;

pub use error::{Error, Result};
pub use exact::Rational;
