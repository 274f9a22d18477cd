use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("cannot parse Pauli observable {0:?}")]
    ParsePauli(String),

    #[error("{what} exceeds the size guard ({size} > {limit})")]
    SizeGuard { what: String, size: u128, limit: u128 },

    #[error("observable set contains both {0} and its negative")]
    PlusMinusPair(String),

    #[error("observable set has no +identity")]
    MissingIdentity,

    #[error("observable {0} listed twice")]
    Duplicate(String),

    #[error("invalid product relation {members:?}: {reason}")]
    InvalidRelation { members: Vec<usize>, reason: String },

    #[error("conjugation maps {observable} outside of ±Ω₊")]
    NotClosed { observable: String },

    #[error("value assignment violates constraint row {row}")]
    InconsistentAssignment { row: usize },

    #[error("vector is not an element of the module V")]
    NotInModule,

    #[error("index {0} is not an output index")]
    NotOutputIndex(usize),

    #[error("state not G-symmetric: |Ξ({image})| differs from |Ξ({index})| under element {element}")]
    NotSymmetric { element: usize, index: usize, image: usize },

    #[error("phase function is not exact (dΦ ≠ 0)")]
    NotExact,

    #[error("observables {0} and {1} are not separated by V")]
    SeparationFails(usize, usize),

    #[error("state is not a stabilizer state: {0}")]
    NotStabilizer(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("group action is not an input group: element {element} flips the sign of index {index}")]
    NotInputGroup { element: usize, index: usize },

    #[error("λ({g},{h}) lies outside N")]
    ImageOutsideN { g: usize, h: usize },

    #[error("N is not closed under the action of element {element}")]
    NotGClosed { element: usize },

    #[error("2-cochain is not a cocycle: dλ({g},{h},{k}) ≠ 0")]
    CocycleViolation { g: usize, h: usize, k: usize },

    #[error("element {element} does not permute the constraint rows (row {row} has no image)")]
    RowPermutation { element: usize, row: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

impl Error {
    /// True when the failure is a desk-scale size refusal rather than a
    /// violated invariant.
    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. })
    }
}
