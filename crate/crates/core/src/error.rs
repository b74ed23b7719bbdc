use thiserror::Error;

/// Errors produced by the group-theoretic pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed permutation: {0}")]
    Shape(String),

    #[error("scale limit exceeded: {what} has order {order}, limit is {limit}")]
    ScaleLimit { what: String, order: u64, limit: u64 },

    #[error("element {0} is not a member of the group")]
    NotMember(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("mismatched group context: {0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("not a genuine character: {0}")]
    NotCharacter(String),

    #[error("value is not rational: {0}")]
    NotRational(String),

    #[error("missing family entries for primes {0:?}")]
    MissingPrimes(Vec<u64>),

    #[error("character table computation failed: {0}")]
    CharacterTable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("stage `{stage}`: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
