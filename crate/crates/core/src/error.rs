use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not an exact rational: {0:?} (expected an integer or p/q, e.g. -1/3)")]
pub struct RationalParseError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("ordering has no terms")]
    Empty,
    #[error("term {term}: alpha + beta + gamma = {sum}, expected -1 (classical limit)")]
    ConstraintViolation { term: usize, sum: String },
    #[error("weights sum to {sum}, expected 1")]
    WeightSumViolation { sum: String },
}

/// Every violation found by `OrderingSpec::validate`, in term order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors(pub Vec<OrderingError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown ordering name {0:?}")]
    UnknownName(String),
    #[error("{name} takes {expected} parameter(s), got {got}")]
    Arity {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{name}: {reason}")]
    OutOfDomain { name: &'static str, reason: String },
    #[error(transparent)]
    BadArgument(#[from] RationalParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("allowed region 1/4 >= -xi/2 >= zeta >= 0 violated at (xi, zeta) = ({xi}, {zeta}): {violated}")]
    OutsideAllowedRegion {
        xi: String,
        zeta: String,
        violated: &'static str,
    },
    #[error("class {class} constraint {constraint} not satisfied at (xi, zeta) = ({xi}, {zeta})")]
    ConstraintUnsatisfied {
        class: &'static str,
        constraint: &'static str,
        xi: String,
        zeta: String,
    },
    #[error("square root of {value} is irrational; request surd or float output")]
    IrrationalSquareRoot { value: String },
    #[error("degenerate denominator: {reason}")]
    DegenerateDenominator { reason: String },
    #[error("dual image (xi, zeta) = ({xi}, {zeta}) lies outside the allowed region 1/4 >= -xi/2 >= zeta >= 0")]
    DualOutsideAllowedRegion { xi: String, zeta: String },
    #[error("inverted weight {weight} outside [0, 1/2] for class {class}")]
    WeightOutOfRange { class: &'static str, weight: String },
    #[error("region resolution must be at least 2, got {0}")]
    BadResolution(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("term {term} (byte {position}) has {count} momentum factor(s), expected exactly 2")]
    WrongMomentumCount {
        term: usize,
        position: usize,
        count: usize,
    },
    #[error("coefficients sum to {sum}, expected 1/2")]
    NonUnitWeightSum { sum: String },
    #[error("term {term} (byte {position}): mass exponents sum to {sum}, expected -1")]
    PerTermConstraintViolation {
        term: usize,
        position: usize,
        sum: String,
    },
}

impl ParseError {
    /// Byte offset into the source, when the error has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::WrongMomentumCount { position, .. }
            | ParseError::PerTermConstraintViolation { position, .. } => Some(*position),
            ParseError::NonUnitWeightSum { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscretizeError {
    #[error("grid needs at least 3 interior points, got {0}")]
    GridTooSmall(usize),
    #[error("grid interval [{x_min}, {x_max}] is empty or not finite")]
    BadInterval { x_min: f64, x_max: f64 },
    #[error("mass is not positive at grid point {index} (x = {x})")]
    NonPositiveMass { index: usize, x: f64 },
    #[error("mass profile {profile}: {reason}")]
    InvalidProfile { profile: String, reason: String },
    #[error("analytic derivative of 1/m disagrees with finite differences at x = {x} ({which})")]
    DerivativeMismatch { x: f64, which: &'static str },
    #[error(transparent)]
    Validation(#[from] ValidationErrors),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("potential sampled on {got} points, operator grid has {expected}")]
    GridMismatch { expected: usize, got: usize },
    #[error("potential {name}: {reason}")]
    InvalidPotential { name: String, reason: String },
    #[error("matrix is not symmetric (max |A - A^T| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("requested {k} eigenvalues from a {n}x{n} matrix")]
    TooManyEigenvalues { k: usize, n: usize },
    #[error("eigenvalue count must be at least 1")]
    ZeroCount,
    #[error("grid of {n} points exceeds the dense limit of {max}")]
    GridTooLarge { n: usize, max: usize },
    #[error("inverse iteration did not converge for eigenvalue {0}")]
    NoConvergence(f64),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Umbrella error for callers that cross module boundaries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Rational(#[from] RationalParseError),
    #[error(transparent)]
    Validation(#[from] ValidationErrors),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}
