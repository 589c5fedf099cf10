use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structure constants violate the Jacobi identity: ‖d²e{generator}‖ = {residual:.3e}")]
    JacobiViolation { generator: usize, residual: f64 },

    #[error("complex structure is not integrable: d of the (1,0)-coframe has a (0,2)-component of norm {residual:.3e}")]
    NonIntegrable { residual: f64 },

    #[error("not an almost complex structure (residual {residual:.3e})")]
    NotAlmostComplex { residual: f64 },

    #[error("wedge product of degree {degree} overflows the top degree {top}")]
    DegreeOverflow { degree: usize, top: usize },

    #[error("operator parameter h must be a nonzero real number")]
    ZeroH,

    #[error("expected a pure-type form of bidegree ({p},{q})")]
    DegreeMismatch { p: usize, q: usize },

    #[error("the {lemma} lemma fails on this model, so the requested construction is undefined")]
    LemmaRequired { lemma: String },

    #[error("no canonical map from {from} to {to}")]
    NoCanonicalMap { from: String, to: String },

    #[error("hypothesis check failed: {0}")]
    HypothesisFailed(String),

    #[error("candidate form is not positive (worst margin {0:.3e})")]
    NotPositive(f64),

    #[error("candidate form is not real (‖ᾱ − α‖ = {0:.3e})")]
    NotReal(f64),

    #[error("linear system for the representative is inconsistent (residual {0:.3e})")]
    InconsistentSystem(f64),

    #[error("invalid trivializing (n,0)-form: {0}")]
    NoTrivializer(String),

    #[error("tangent class is not in the co-polarised subspace (residual {0:.3e})")]
    NotInSubspace(f64),

    #[error("Maurer-Cartan obstruction at order {order}: residual {residual:.3e}")]
    MCObstructed { order: usize, residual: f64 },

    #[error("iteration did not converge within the budget (residual {0:.3e})")]
    NoConvergence(f64),

    #[error("schema error at {pointer}: {message}")]
    SchemaError { pointer: String, message: String },

    #[error("dim_real must be even and positive, got {0}")]
    DimensionOdd(usize),

    #[error("structure constants are ragged or not antisymmetric: {0}")]
    RaggedConstants(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
