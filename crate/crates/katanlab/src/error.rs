use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown cipher variant `{0}`; accepted: katan32, katan48, katan64, ktantan32, ktantan48, ktantan64")]
    UnknownVariant(String),

    #[error("{what}: expected {expected} bits, got {got}")]
    SizeMismatch {
        what: &'static str,
        expected: u32,
        got: u32,
    },

    #[error("malformed hex at position {pos}: {msg}")]
    BadHex { pos: usize, msg: String },

    #[error("expected {expected} hex digits, got {got}")]
    BadHexLength { expected: usize, got: usize },

    #[error("key count mismatch: batch has {lanes} lanes, got {keys} keys")]
    KeyCountMismatch { lanes: usize, keys: usize },

    #[error("invalid design point: {0}")]
    InvalidDesign(String),

    #[error("invalid benchmark config: {0}")]
    InvalidBenchConfig(String),

    #[error("benchmark ciphertext checksum mismatch (run {run}): got {got:#018x}, reference {reference:#018x}")]
    ChecksumMismatch { run: u32, got: u64, reference: u64 },

    #[error("{0}")]
    NonPositive(&'static str),

    #[error("unknown report format `{0}`; accepted: csv, markdown, plotdata")]
    UnknownFormat(String),

    #[error("unknown engine `{0}`")]
    UnknownEngine(String),

    #[error("embedded table data corrupt: {0}")]
    CorruptTableData(String),

    #[error("KAT file line {line}: {msg}")]
    KatParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
