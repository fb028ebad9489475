//! Error types shared across the crate.
//!
//! Every fallible operation reports a dedicated error naming the violated
//! constraint and enough context to reproduce the failure. The verifier
//! converts these errors into check failures with witnesses; nothing in
//! this crate panics on bad combinatorial data.

use crate::series::{Kind, Series};
use thiserror::Error;

/// A sequence failed one of the series/kind shape constraints.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    /// The entry list does not have the length prescribed for level `m`.
    #[error("{series} {kind} at level m = {m} requires {expected} entries, got {actual}")]
    WrongLength {
        series: Series,
        kind: Kind,
        m: u32,
        expected: usize,
        actual: usize,
    },

    /// An entry is below the minimum required at its index.
    #[error("entry a_{index} = {entry} is below the series minimum {min}")]
    BoundViolation { index: usize, entry: u32, min: u32 },

    /// Two entries in the same row are too close together.
    #[error(
        "entries a_{index} = {lo} and a_{hi_index} = {hi} must differ by at least {gap}",
        hi_index = index + 2
    )]
    GapViolation {
        index: usize,
        lo: u32,
        hi: u32,
        gap: u32,
    },

    /// The entries do not add up to the required total.
    #[error("entries sum to {actual}, expected {expected} for n = {n}, m = {m}")]
    SumMismatch {
        n: u32,
        m: u32,
        expected: u64,
        actual: u64,
    },

    /// The first unequal even-indexed pair is descending (series D rule).
    #[error(
        "first unequal even-indexed pair is descending: a_{index} > a_{next}",
        next = index + 1
    )]
    StarViolation { index: usize },
}

/// Twisting was attempted with an unusable index set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    /// An index in the twist set does not point at an entry.
    #[error("twist index {index} is out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// The entry at a twist index occurs more than once in the sequence.
    #[error("entry a_{index} is repeated elsewhere in the sequence, so it cannot be twisted")]
    EntryNotDistinct { index: usize },
}

/// The bijection `i` (or its inverse) could not produce a valid output.
///
/// For valid inputs under the standard tables this never happens; it exists
/// so that deliberately perturbed tables fail loudly instead of wrapping.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    /// The input had the wrong kind for this direction of the map.
    #[error("expected a {expected}, got a {got}")]
    WrongKind { expected: Kind, got: Kind },

    /// Subtracting the half-index offset underflowed an entry.
    #[error("entry a_{index} underflows when the half-index offset is subtracted")]
    Underflow { index: usize },

    /// The mapped sequence failed validation.
    #[error("mapped sequence is invalid: {0}")]
    InvalidImage(ValidationError),
}

/// Enumeration could not certify a stable level.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilizeError {
    /// No level up to the safety bound satisfied the shift-saturation check.
    #[error("series {series}, n = {n}: no stable level found up to m = {m_max}")]
    NotStabilized { series: Series, n: u32, m_max: u32 },
}

/// Grouping sequences into congruence/similarity classes failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    /// The input mixed different series, kinds, ranks, or levels.
    #[error("classify requires sequences of one series/kind/n/m")]
    MixedInput,

    /// A class contains no nondecreasing member.
    #[error("class with entry multiset {key:?} has no nondecreasing member")]
    NoCanonicalMember { key: Vec<u32> },
}

/// Structural analysis (parts, blocks, labelings) failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    /// Parts and blocks are only defined for nondecreasing u-symbols.
    #[error("expected a distinguished (nondecreasing) u-symbol")]
    NotDistinguished,

    /// Labelings are anchored at the nondecreasing member of a symbol class.
    #[error("expected a special (nondecreasing) symbol")]
    NotSpecial,

    /// The computed blocks violate the series' block axioms.
    #[error("block structure is inconsistent: {detail}")]
    BlockStructure { detail: String },

    /// The number of isolated points has the wrong parity for the series.
    #[error("series {series} expects {expected} isolated points, found {count}")]
    IsolatedParity {
        series: Series,
        expected: &'static str,
        count: usize,
    },

    /// A symbol does not carry the isolated values of this labeling's family.
    #[error("symbol does not belong to the labeled family: {detail}")]
    NotInFamily { detail: String },

    /// The projection to the cell space is only defined on even-size sets.
    #[error("point set of odd cardinality has no image in the cell space")]
    OddCardinality,

    /// An even-size point set had no expansion in the label basis.
    #[error("point set has no expansion in the label basis (labeling is inconsistent)")]
    Unsolvable,
}

/// Family-level computations hit a state the theorems rule out.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    /// A symbol was offered to a family it is not congruent to.
    #[error("symbol is not congruent to the family's special symbol")]
    NotInFamily,

    /// No (or more than one) ladder set maps one u-symbol onto another.
    #[error("no unique ladder twist relates the u-symbols: {detail}")]
    NoTwistFound { detail: String },

    /// Directly computed twistable sets disagree with the series rule.
    #[error("transversal rule mismatch: {detail}")]
    TransversalMismatch { detail: String },

    /// The class invariant of a piece class has a nonzero character part.
    #[error("class invariant has a nontrivial character part: {detail}")]
    NonTrivialCharacterPart { detail: String },

    /// A block character landed outside the span of its class's blocks.
    #[error("character lies outside the block span of the class invariant: {detail}")]
    CharacterOutsideSpan { detail: String },

    /// A structural computation failed inside a family operation.
    #[error(transparent)]
    Structure(#[from] StructureError),

    /// A sequence map failed inside a family operation.
    #[error(transparent)]
    Map(#[from] MapError),

    /// A twist failed inside a family operation.
    #[error(transparent)]
    Twist(#[from] TwistError),
}

/// Partition-side computations failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    /// An odd part occurs with odd multiplicity.
    #[error("odd part {part} occurs with odd multiplicity {multiplicity}")]
    NotAdmissible { part: u32, multiplicity: usize },

    /// The partition-to-u-symbol formula produced an invalid sequence.
    #[error("partition maps to an invalid u-symbol: {0}")]
    InvalidOutput(ValidationError),

    /// Closure comparison requires equal-length sequences.
    #[error("closure comparison requires matching levels: {left} vs {right} entries")]
    LengthMismatch { left: usize, right: usize },
}
