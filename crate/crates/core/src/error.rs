use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol {symbol} is outside an alphabet of size {arity}")]
    SymbolOutOfRange { symbol: u32, arity: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sequence of length {len} is shorter than block length {block}")]
    SequenceTooShort { len: usize, block: usize },
    #[error("window of {states} states exceeds the cap of {cap}")]
    WindowCap { states: u128, cap: u64 },
    #[error("undersampled: {distinct} distinct joint blocks from {windows} windows")]
    Undersampled { distinct: usize, windows: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("stationary distribution is not unique")]
    NonUniqueStationary,
    #[error("model has no closed form: {0}")]
    NoClosedForm(String),
    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),
    #[error("matrix is reducible")]
    Reducible,
    #[error("substitution is not primitive")]
    NotPrimitive,
    #[error("substitution violates its growth or start condition: {0}")]
    InvalidSubstitution(String),
    #[error("power {power} too small for factor length {length}: need min |ζ^p(a)| >= {needed}")]
    ShortcutPowerTooSmall { power: u32, length: usize, needed: usize },
    #[error("grid too small: need at least {needed} distinct {axis} values")]
    GridTooSmall { axis: &'static str, needed: usize },
    #[error("partition is not unifilar at history length {history_length}")]
    NonUnifilar { history_length: usize },
    #[error("inconsistent estimate: {0}")]
    Inconsistent(String),
    #[error("time reversal unavailable for this model")]
    ReversalUnavailable,
}
