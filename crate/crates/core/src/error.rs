use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input text is empty")]
    EmptyText,
    #[error("input contains the reserved sentinel byte 0x00 at offset {at}")]
    ReservedSymbol { at: usize },
    #[error("input of {0} bytes exceeds the 32-bit index range")]
    TextTooLong(usize),
    #[error("invalid query range ({p}, {q}) for text of length {n}")]
    InvalidRange { p: usize, q: usize, n: usize },
    #[error("bad index file: {0}")]
    Corrupt(String),
    #[error("checksum mismatch in section {0}")]
    Checksum(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
