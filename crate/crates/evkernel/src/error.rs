//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. Variants are
//! grouped roughly by the layer that raises them: frame/lattice construction,
//! evidence arithmetic, rule bases, refinement engines, the linear-programming
//! oracle, and problem-file handling.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors raised by this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    // --- frames and lattices -------------------------------------------------
    /// A frame needs at least one atom.
    #[error("frame must contain at least one atom")]
    EmptyFrame,

    /// Atom names within a frame must be unique.
    #[error("duplicate atom {0:?} in frame")]
    DuplicateAtom(String),

    /// Frames are capped so subsets fit in a bitmask and dense tables stay small.
    #[error("frame has {got} atoms, but {cap} is the maximum supported{context}")]
    FrameTooLarge {
        got: usize,
        cap: usize,
        /// Extra note when a tighter, operation-specific cap applies.
        context: String,
    },

    /// Two values built over different frames were mixed in one operation.
    #[error("operands belong to different frames")]
    FrameMismatch,

    /// An atom name was not found in the frame.
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),

    /// Partition enumeration needs a non-empty carrier set.
    #[error("cannot enumerate partitions of the empty set")]
    EmptyCarrier,

    // --- evidence -------------------------------------------------------------
    /// A mass function violated its invariants (weight on the empty set,
    /// negative weight, or total not 1).
    #[error("invalid mass assignment: {0}")]
    InvalidMass(String),

    /// Lower bounds whose subset-difference transform turns negative do not
    /// come from any mass function.
    #[error("bounds are not a belief function: difference weight {weight:.6} on set index {set}")]
    NotABeliefFunction { set: usize, weight: f64 },

    /// A weight outside [0, 1] (or a support value outside [0, 1]).
    #[error("weight {0} outside [0, 1]")]
    InvalidWeight(f64),

    /// Combination of flatly contradicting evidence (conflict mass ~ 1).
    #[error("total conflict between the two mass functions (conflict = {0:.9})")]
    TotalConflict(f64),

    // --- rules ----------------------------------------------------------------
    /// Conditional lower bounds need a non-empty condition.
    #[error("rule condition must not be empty")]
    EmptyAntecedent,

    /// A conditional lower bound outside [0, 1].
    #[error("conditional lower bound {0} outside [0, 1]")]
    InvalidBound(f64),

    /// Rules for one condition that no monotone conditional support function
    /// can satisfy.
    #[error("inconsistent rules for one condition: {0}")]
    InconsistentRule(String),

    // --- interval engines -------------------------------------------------------
    /// Interval with lower > upper.
    #[error("empty probability interval [{lower:.9}, {upper:.9}]")]
    EmptyInterval { lower: f64, upper: f64 },

    /// Conditioning on y is vacuous when the complement of y is certain.
    #[error("condition is ruled out: its complement already has support 1")]
    CertainComplement,

    /// Refinement drove some bound past coherence (b(x) + b(not x) > 1).
    #[error("bounds became inconsistent during refinement: {0}")]
    Inconsistent(String),

    /// A fixpoint loop exceeded its sweep budget without stabilising.
    #[error("refinement did not converge within {0} sweeps")]
    NonConvergence(usize),

    // --- mass conditionalization ------------------------------------------------
    /// Outflow coefficients of one focal element sum past 1, which would make
    /// the redistributed mass negative.
    #[error("mass redistribution would turn negative: {0}")]
    NegativeMass(String),

    // --- oracle -------------------------------------------------------------------
    /// The constraint system admits no probability vector at all.
    #[error("no probability distribution satisfies the given bounds and rules")]
    EmptyPolytope,

    /// Conditioning event has probability 0 at every feasible point.
    #[error("condition has probability 0 at every feasible point")]
    AntecedentImpossible,

    /// Defensive: the bundled solver reached a state that is mathematically
    /// unreachable for the programs this crate constructs.
    #[error("internal solver failure: {0}")]
    SolverFailure(String),

    // --- problem files -----------------------------------------------------------
    /// Malformed JSON (position is 1-based, 0 when unknown).
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON that fails semantic validation.
    #[error("invalid problem: {0}")]
    ValidationError(String),
}
