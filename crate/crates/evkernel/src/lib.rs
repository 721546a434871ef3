//! Refinement of interval-valued evidential knowledge with conditional rules.
//!
//! `evkernel` works with bodies of evidence over a finite frame of mutually
//! exclusive atoms: mass functions, belief functions, and looser pointwise
//! lower bounds (probability envelopes). Conditional knowledge enters as
//! rules "if `y` then `x`, with probability at least `c`", interpreted as a
//! lower bound on the conditional probability `p(x | y)`. The crate offers:
//!
//! - **Lattice & evidence basics** ([`lattice`], [`evidence`]): frames,
//!   bitmask subsets, partition enumeration, mass/belief transforms,
//!   plausibility, specificity, Dempster combination.
//! - **Rule bases** ([`rules`]): monotone conditional support functions from
//!   rule lists, with per-condition mass decompositions.
//! - **Interval engines** ([`interval`]): consistency checks and sound
//!   fixpoint refinement of lower bounds through three conditional readings
//!   (interval-Bayes, optimistic conditioning, and the general lower
//!   conditional), plus a cheap coherence closure.
//! - **Partition & mass engines** ([`belief`]): partition-supremum bounds
//!   and mass redistribution through transfer coefficients.
//! - **Exact oracle** ([`oracle`]): a small bundled linear-programming
//!   solver over the credal polytope, with an exact-rational mode, used to
//!   validate every engine and to compute tightest coherent bounds.
//! - **Problem files** ([`problem`]): a JSON problem/report format and the
//!   `evkernel` command-line binary (`run`, `validate`, `formats`).
//!
//! Runnable walkthroughs live in the crate's `examples/` directory, one per
//! capability; start with `cargo run --example modus_ponens`.

pub mod belief;
pub mod error;
pub mod evidence;
pub mod interval;
pub mod lattice;
pub mod oracle;
pub mod problem;
pub mod rules;

pub use error::{Error, Result};

/// Absolute tolerance used at API boundaries (validation, consistency
/// verdicts, oracle agreement).
pub const API_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance used for internal fixpoint and clamping decisions.
pub const INTERNAL_TOLERANCE: f64 = 1e-12;
