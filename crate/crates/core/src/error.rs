use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a lattice needs at least one element")]
    EmptyLattice,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("order is not antisymmetric: `{0}` <= `{1}` <= `{0}`")]
    Cycle(String, String),
    #[error("order has no bottom element")]
    NoBottom,
    #[error("elements `{0}` and `{1}` have no least upper bound")]
    NoJoin(String, String),
    #[error("element #{index} does not belong to a carrier of {size} elements")]
    ForeignElement { index: usize, size: usize },
    #[error("map has {got} entries but its domain has {expected} elements")]
    ArityMismatch { expected: usize, got: usize },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("map does not send bottom to bottom")]
    BottomNotPreserved,
    #[error("map does not preserve the join of `{0}` and `{1}`")]
    NotJoinPreserving(String, String),
    #[error("frame needs at least one node")]
    EmptyNodeSet,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node map sends related pair ({0}, {1}) to an unrelated pair")]
    NotFrameHom(String, String),
    #[error("{what} would have {size} elements, above the carrier cap of {cap}")]
    CarrierTooLarge { what: String, size: u128, cap: usize },
    #[error("operator is not monotone on `{0}` <= `{1}`")]
    NotMonotone(String, String),
    #[error("operator is not increasing at `{0}`")]
    NotIncreasing(String),
    #[error("operator is not idempotent at `{0}`")]
    NotIdempotent(String),
    #[error("map is not lax at `{0}`")]
    NotLax(String),
    #[error("map separates the identified pair (`{0}`, `{1}`)")]
    NotConstantOnX(String, String),
    #[error("factorization is not well defined: `{0}` and its closure have different images")]
    FiberConflict(String),
    #[error("not a congruence: {0}")]
    NotACongruence(String),
    #[error("law `{law}` fails at {witness}")]
    LawViolation { law: String, witness: String },
}

impl Error {
    pub(crate) fn law(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::LawViolation {
            law: law.into(),
            witness: witness.into(),
        }
    }
}
