use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("matrix is singular")]
    Singular,
    #[error("BCH truncation at class {0} does not reproduce exp(x)exp(y)")]
    ClassBoundViolated(usize),
    #[error("subspace is not closed under the bracket: {0}")]
    NotClosed(String),
    #[error("nilpotency class {found} exceeds the supported bound {bound}")]
    ClassTooLarge { found: usize, bound: usize },
    #[error("vector does not lie in the span: {0}")]
    Span(String),
    #[error("not a Lie algebra homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("unknown catalog entry '{0}'")]
    Catalog(String),
    #[error("element is not in the group: {0}")]
    NotInGroup(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("holonomy closure exceeded {0} elements")]
    NotFinite(usize),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("malformed grading: {0}")]
    MalformedGrading(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("cannot parse '{token}': {reason}")]
    Parse { token: String, reason: String },
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// Short machine-readable tag, used as the error code in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::Singular => "singular",
            Error::ClassBoundViolated(_) => "class_bound_violated",
            Error::NotClosed(_) => "not_closed",
            Error::ClassTooLarge { .. } => "class_too_large",
            Error::Span(_) => "span",
            Error::NotAHomomorphism(_) => "not_a_homomorphism",
            Error::NotAnAutomorphism(_) => "not_an_automorphism",
            Error::Catalog(_) => "catalog",
            Error::NotInGroup(_) => "not_in_group",
            Error::Domain(_) => "domain",
            Error::NotFinite(_) => "not_finite",
            Error::InvalidMap(_) => "invalid_map",
            Error::MalformedGrading(_) => "malformed_grading",
            Error::InvalidGroup(_) => "invalid_group",
            Error::Parse { .. } => "parse",
            Error::Format(_) => "format",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
