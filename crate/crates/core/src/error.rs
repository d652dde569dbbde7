use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet size {0} is below the minimum of 2")]
    SigmaTooSmall(u32),
    #[error("block of {r} characters at {bits} bits each does not fit a 64-bit word")]
    BlockTooWide { r: u32, bits: u32 },
    #[error("character code {code} is outside the alphabet of size {sigma}")]
    InvalidCharacter { code: u32, sigma: u32 },
    #[error("sequence has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitvecError {
    #[error("position {pos} is outside 1..={len}")]
    OutOfRange { pos: u64, len: u64 },
    #[error("interval [{x}, {y}] is empty or outside 1..={len}")]
    BadInterval { x: u64, y: u64, len: u64 },
    #[error("no {0}-th set bit")]
    NoSuchBit(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockTreeError {
    #[error("meta-character {0:#x} has not been seen")]
    NotFound(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizeError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("input has more than {sigma} distinct byte values (byte {byte:#04x})")]
    AlphabetOverflow { byte: u8, sigma: u32 },
    #[error("memory budget of {budget} bytes cannot hold the bit arrays for a block size of 1")]
    MemoryBudget { budget: u64 },
    #[error("stream already finished")]
    Finished,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RleError {
    #[error("run {index} repeats the character of the previous run")]
    AdjacentEqualRuns { index: usize },
    #[error("run {index} has exponent 0")]
    ZeroExponent { index: usize },
    #[error("stream already finished")]
    Finished,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("record {record}: copy source {src} with length {len} is out of range at output position {at}")]
    CopyOutOfRange {
        record: usize,
        src: u64,
        len: u64,
        at: u64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
