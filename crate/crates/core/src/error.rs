use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid Pauli letter {0:?} at position {1}")]
    InvalidLetter(char, usize),
    #[error("empty Pauli string")]
    EmptyWord,
    #[error("empty generator list")]
    NoGenerators,
    #[error("generator count {generators} does not match coupling count {couplings}")]
    CountMismatch { generators: usize, couplings: usize },
    #[error("generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),
    #[error("generator {0} is the identity")]
    IdentityGenerator(usize),
    #[error("dependent generators multiply to minus the identity (involving generator {0})")]
    InconsistentSigns(usize),
    #[error("invalid coupling {0:?}")]
    InvalidCoupling(String),
    #[error("syndrome is not in the image of the parity check")]
    InvalidSyndrome,
    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit { what: &'static str, size: usize, limit: usize },
    #[error("{0} below minimum size")]
    TooSmall(&'static str),
    #[error("path does not compose to its target")]
    PathMismatch,
    #[error("path step {0} is not a weight-one Pauli")]
    NotWeightOne(usize),
    #[error("path revisits an edge at step {0}")]
    PathLoop(usize),
    #[error("path family does not fit the model: {0}")]
    FamilyMismatch(String),
    #[error("generator {0} has non-interval support in this ordering")]
    NotOneDimensional(usize),
    #[error("rate table has no entry for frequency {0}")]
    TableMiss(String),
    #[error("negative rate {0} in table")]
    NegativeRate(f64),
    #[error("special bound requires single-visit paths")]
    NotSingleVisit,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pencil has eigenvalue {0} below zero")]
    NonPositivePencil(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
