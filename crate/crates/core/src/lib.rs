//! Position-dependent-mass kinetic energy orderings: exact parameter
//! algebra, classification of the Hermitian family, a text format, and
//! finite-difference checks of the resulting operators and spectra.
//!
//! The ordering algebra is generic over [`Scalar`]. Exact work uses
//! [`Rational`] (and [`Surd`] where a square root appears); numerical work
//! uses `f64`.

pub mod catalog;
pub mod classifier;
pub mod discretizer;
pub mod error;
pub mod ordering;
pub mod parser;
pub mod scalar;
pub mod spectra;
pub mod surd;

pub use catalog::{catalog, Named, CATALOG_NAMES};
pub use classifier::{
    classify, dual, in_allowed_region, invert, invert_rational, region_samples, to_duality,
    Boundary, ClassLabel, DualityParams, KeoClass, RegionSample,
};
pub use discretizer::{
    assemble_linear, assemble_terms, effective_potential, equivalence_defect, AssembledOperator,
    Grid, MassProfile, Stencil,
};
pub use error::{
    CatalogError, ClassifyError, DiscretizeError, Error, OrderingError, ParseError,
    RationalParseError, SpectrumError, ValidationErrors,
};
pub use ordering::{BuildingBlock, LinearParams, OrderingSpec, Selector, Validation};
pub use parser::{parse, print_canonical};
pub use scalar::{parse_rational, ratio, Rational, Scalar};
pub use spectra::{
    dual_pair_report, hamiltonian, refinement_study, solve, spectrum, DualPairReport,
    PotentialProfile, RefinementStudy, SpectrumResult,
};
pub use surd::{SqrtField, Surd};

/// Exact ordering with rational weights and exponents.
pub type ExactOrdering = OrderingSpec<Rational>;
/// Exact ordering whose exponents may carry one square root.
pub type SurdOrdering = OrderingSpec<Surd>;
pub type FloatOrdering = OrderingSpec<f64>;
pub type ExactParams = LinearParams<Rational>;
pub type Operator = AssembledOperator<f64>;
