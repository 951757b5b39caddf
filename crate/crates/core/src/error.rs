use thiserror::Error;

/// Errors raised by constructions, checkers and parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },

    #[error("shift bound {delta} must be smaller than the period {n}")]
    ShiftOutOfRange { delta: usize, n: usize },

    #[error("residue {value} is out of range for Z_{modulus}")]
    ResidueOutOfRange { value: usize, modulus: usize },

    #[error("residue {value} appears twice in a set over Z_{modulus}")]
    DuplicateResidue { value: usize, modulus: usize },

    #[error("expected weight {expected}, found {found}")]
    WeightMismatch { expected: usize, found: usize },

    #[error("block {index} has size {found}, expected {expected}")]
    BlockSizeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field order {p}^{m} is too large")]
    FieldTooLarge { p: u64, m: u32 },

    #[error("zero has no discrete logarithm")]
    LogOfZero,

    #[error("not a disjoint difference set: residue {residue} occurs more than once")]
    NotDisjointDifferenceSet { residue: usize },

    #[error("not a packing: members {first} and {second} share edge {{{u},{v}}}")]
    NotPacking {
        first: usize,
        second: usize,
        u: usize,
        v: usize,
    },

    #[error("sequences {first} and {second} are identical")]
    DuplicateSequence { first: usize, second: usize },

    #[error("shift bound {delta} is in the collapse regime for n = {n} (delta >= floor(n/2))")]
    CollapseRegime { n: usize, delta: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
