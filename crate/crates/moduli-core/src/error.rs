use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid space context: {0}")]
    InvalidContext(String),
    #[error("symbol `{sym}` is not valid on {ctx}")]
    InvalidSymbol { sym: String, ctx: String },
    #[error("terms live on different spaces")]
    MixedContexts,
    #[error("cannot combine an empty list of classes")]
    EmptyCombination,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("class is not invariant under the group action")]
    NotInvariant,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("{what} needs a composite value but {value} is prime")]
    Primality { what: String, value: u64 },
    #[error("parity condition failed: {0}")]
    Parity(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{generator}` has no known coefficient on `{coord}`")]
    UnknownCoordinate { generator: String, coord: String },
    #[error("no (r, k) realizes g = {g} with {points} marked points")]
    NoRealization { g: u32, points: u32 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("unit {unit} is not coprime to the order {order}")]
    NotCoprime { unit: u64, order: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
