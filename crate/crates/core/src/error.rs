use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("quiver has an oriented cycle through vertex {0}")]
    CyclicQuiver(String),
    #[error("inadmissible relation: {0}")]
    InadmissibleRelation(String),
    #[error("relation system forces a rewrite coefficient outside {{0, 1, -1}}: {0}")]
    NonIntegralRewrite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("subspace tuple is not closed under the arrow maps")]
    NotClosed,
    #[error("decomposition draw budget of {0} exhausted without certification")]
    DecompositionBudgetExceeded(usize),
    #[error("Hom matrix is not unitriangular: {0}")]
    NonUnitriangularHomMatrix(String),
    #[error("negative multiplicity while identifying a module: {0}")]
    NegativeMultiplicity(String),
    #[error("knitting did not close up within {0} vertices")]
    NotRepresentationFinite(usize),
    #[error("left almost split map out of {0} is not a monomorphism")]
    EtaNotInjective(String),
    #[error("AR quiver is not directed: {0}")]
    NotDirected(String),
    #[error("vertex {0} is projective")]
    IsProjective(String),
    #[error("field dependence detected: {0}")]
    FieldDependenceDetected(String),
    #[error("inconsistent Hall counts: {0}")]
    InconsistentCounts(String),
    #[error("interpolated polynomial has non-integral coefficients: {0}")]
    NonIntegralCoefficients(String),
    #[error("injective homomorphism count {count} not divisible by |Aut| = {aut}")]
    NonIntegralOrbitCount { count: u64, aut: u64 },
    #[error("commutator not supported on a single indecomposable: {0}")]
    NotClosedOnIndecomposables(String),
    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
}

/// Coarse classification used to map errors onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Resource,
    Verification,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Parse(_) | CyclicQuiver(_) | InadmissibleRelation(_) | NonIntegralRewrite(_)
            | InvalidInput(_) | NotPrime(_) | IsProjective(_) | NotFiniteType(_) => {
                ErrorClass::Input
            }
            ResourceBound(_) | DecompositionBudgetExceeded(_) | NotRepresentationFinite(_) => {
                ErrorClass::Resource
            }
            _ => ErrorClass::Verification,
        }
    }
}
