//! Monadic second-order logic over two-dimensional subshifts.
//!
//! The crate compiles sentences to forbidden-pattern systems and back,
//! reduces universal quantifier blocks, builds counting formulas and
//! doubly-marked tiling gadgets, and checks every construction against
//! brute-force evaluation on periodic (torus) and bounded (window) domains.
//!
//! Module map:
//! - [`grid`]: configurations, patterns, occurrences, projections, Hanf signatures.
//! - [`logic`]: formula syntax, parser, printer, prenex form and fragment tags.
//! - [`semantics`]: the trusted brute-force evaluator and model enumeration.
//! - [`transforms`]: CNF, disequality elimination, universal reduction, counting formulas.
//! - [`compile`]: sentences to SFTs and sofic representations, member enumeration.
//! - [`marked`]: doubly-marked counting gadgets and their window oracle.
//! - [`harness`]: seeded generators and exhaustive equivalence sweeps.

pub mod compile;
pub mod error;
pub mod grid;
pub mod harness;
pub mod logic;
pub mod marked;
pub mod semantics;
pub mod transforms;

pub use error::{Error, Result};
pub use grid::{Alphabet, ColorId, Offset, Pattern, Projection, TorusConfig, WindowConfig};
pub use logic::{Formula, Sentence, Term};

/// Default enumeration budget (number of configurations).
pub const DEFAULT_BUDGET: u64 = 10_000_000;
