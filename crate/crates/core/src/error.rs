use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty request: {0}")]
    EmptyRequest(&'static str),

    #[error("unsupported derivative order ({dz}, {dw}); only orders 0 and 1 are available")]
    UnsupportedOrder { dz: u8, dw: u8 },

    #[error("degenerate configuration: points {0} and {1} coincide")]
    DegenerateConfiguration(usize, usize),

    #[error("ill-conditioned covariance: smallest eigenvalue {smallest_eigenvalue:e} (pivot threshold {threshold:e})")]
    IllConditioned {
        smallest_eigenvalue: f64,
        threshold: f64,
    },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("size limit exceeded for {what}: {requested} > {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("root finder failed for replica seed {seed:?}: {reason}")]
    RootFinder { seed: Option<u64>, reason: String },

    #[error("polynomial of degree 0 has no zeros")]
    NoZeros,

    #[error("multiple zero detected near {location} (replica seed {seed:?})")]
    MultipleZero { location: String, seed: Option<u64> },

    #[error("statistic support radius {support:.6} exceeds the trusted radius {trusted:.6}")]
    UntrustedRegion { support: f64, trusted: f64 },

    #[error("incomplete input: {0}")]
    IncompleteInput(String),

    #[error("correlation integrator failed for block sizes {sizes:?}: {reason}")]
    Integrator { sizes: Vec<usize>, reason: String },

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("unit mismatch: expected {expected}, found {found}")]
    Units {
        expected: &'static str,
        found: &'static str,
    },

    #[error("lower bound undefined: |κ̂| never drops below 1/2 on the frequency grid")]
    BoundUndefined,

    #[error("unsupported set description: {0}")]
    UnsupportedShape(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate distribution: sample variance is zero")]
    DegenerateDistribution,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical contract (as opposed to I/O or parsing).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Parse { .. })
    }
}
