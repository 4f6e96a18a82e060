use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("locus {locus} has {size} allele(s); at least 2 are required")]
    AlphabetTooSmall { locus: usize, size: usize },
    #[error("locus {locus} lists allele {symbol:?} more than once")]
    DuplicateAllele { locus: usize, symbol: String },
    #[error("sequence space has no loci")]
    NoLoci,
    #[error("sequence space size exceeds the 63-bit code range")]
    SpaceTooLarge,
    #[error("unknown allele {symbol:?} at locus {locus}")]
    UnknownAllele { locus: usize, symbol: String },
    #[error("expected {expected} loci, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("genotype code {code} outside space of size {size}")]
    CodeOutOfRange { code: u64, size: u64 },

    #[error("no records supplied")]
    EmptyInput,
    #[error("sequence {sequence} has conflicting fitness values {first} and {second}")]
    ConflictingDuplicate {
        sequence: String,
        first: f64,
        second: f64,
    },
    #[error("row {row}: fitness is not finite")]
    NonFiniteFitness { row: usize },
    #[error("row {row}: variance must be finite and non-negative")]
    InvalidVariance { row: usize },
    #[error("start genotype {0} is not present in the landscape")]
    StartNotFound(u64),
    #[error("node {0} is not a local optimum")]
    NotAnOptimum(usize),
    #[error("focal genotype {0} is not present in the landscape")]
    FocalNotFound(u64),

    #[error("feature requires at least two loci")]
    SingleLocus,
    #[error("no node has a present neighbor")]
    NoNeighbors,
    #[error("no complete epistasis squares in the landscape")]
    NoCompleteSquares,
    #[error("selection-coefficient variance is zero")]
    DegenerateVariance,
    #[error("least-squares design is rank deficient (rank {rank} of {columns} columns)")]
    DegenerateFit { rank: usize, columns: usize },

    #[error("invalid k = {k} for n = {n}; need 0 <= k < n")]
    InvalidK { k: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("line {line}: row length does not match the first row")]
    RaggedRow { line: usize },
    #[error("line {line}: fitness {value:?} is not numeric")]
    NonNumericFitness { line: usize, value: String },
    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
