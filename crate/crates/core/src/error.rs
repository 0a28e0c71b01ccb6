use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable
/// machine-readable code through [`Error::code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("degenerate configuration: bodies {0} and {1} coincide")]
    DegenerateConfiguration(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no circumcircle: points are collinear")]
    NoCircumcircle,
    #[error("no circumsphere: points are coplanar but not co-circular")]
    NoCircumsphere,
    #[error("sub-configuration not central (normalized residual {0:.3e})")]
    NotCentral(f64),
    #[error("configuration is collinear; use the collinear module")]
    CollinearInput,
    #[error("configuration is not collinear")]
    NotCollinear,
    #[error("not co-circular or co-spherical (relative deviation {0:.3e})")]
    NotCocircularOrCospherical(f64),
    #[error("extension plan does not match this configuration")]
    MismatchedPlan,
    #[error("r0 invariance does not apply to way {0} extensions")]
    InvarianceNotApplicable(String),
    #[error("not pyramidal: {0}")]
    NotPyramidal(String),
    #[error("no diagonals for fewer than four bodies")]
    NoDiagonals,
    #[error("extension possible for two bodies, use euler_solve")]
    ExtensionPossible,
    #[error("no positive polar mass for n = {0} (requires 3 <= n <= 8)")]
    NoPositivePolarMass(usize),
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("negative mass in solution: m{index} = {value}")]
    NegativeMass { index: usize, value: f64 },
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidConfiguration(_) => "invalid_configuration",
            Error::DegenerateConfiguration(..) => "degenerate_configuration",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NoCircumcircle => "no_circumcircle",
            Error::NoCircumsphere => "no_circumsphere",
            Error::NotCentral(_) => "not_central",
            Error::CollinearInput => "collinear_input",
            Error::NotCollinear => "not_collinear",
            Error::NotCocircularOrCospherical(_) => "not_cocircular_or_cospherical",
            Error::MismatchedPlan => "mismatched_plan",
            Error::InvarianceNotApplicable(_) => "invariance_not_applicable",
            Error::NotPyramidal(_) => "not_pyramidal",
            Error::NoDiagonals => "no_diagonals",
            Error::ExtensionPossible => "extension_possible",
            Error::NoPositivePolarMass(_) => "no_positive_polar_mass",
            Error::NewtonDiverged { .. } => "newton_diverged",
            Error::NegativeMass { .. } => "negative_mass",
            Error::Json(_) => "malformed_json",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
