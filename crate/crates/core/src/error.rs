use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: [{0}] vs [{1}]")]
    RingMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("polarization vector {gamma:?} is orthogonal to weight {weight:?}")]
    NonGenericPolarization { weight: Vec<i64>, gamma: Vec<i64> },
    #[error("stage {0} is degenerate")]
    DegenerateStage(usize),
    #[error("not a regular value: xi lies on wall {0}")]
    NotRegular(String),
    #[error("xi must lie strictly inside the hypercube (-1,1)^{0}")]
    OutsidePolytope(usize),
    #[error("first ray from xi crosses wall {0} before reaching its facet")]
    RayCrossesWall(String),
    #[error("class degree a+b = {got} differs from the quotient dimension {want}")]
    Dimension { got: u32, want: u32 },
    #[error("input is not symmetric under swapping {0} and {1}")]
    NotSymmetric(String, String),
    #[error("quotient is infinite-dimensional: no pure power of {0} among leading monomials")]
    InfiniteQuotient(String),
    #[error("density integrates to {0}, not 1")]
    NotNormalized(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("residue result still has a non-constant denominator: {0}")]
    NotPolynomial(String),
}

pub type Result<T> = std::result::Result<T, Error>;
