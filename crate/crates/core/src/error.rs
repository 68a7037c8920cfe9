use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A table is missing a cell or has the wrong dimensions.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The box signals, so a marginal depends on the dropped parties' inputs.
    #[error("marginal ill-defined: {0}")]
    MarginalIllDefined(String),

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    #[error("invalid expression: {0}")]
    InvalidExpression(String),

    #[error("expected a unique game, found {0} provenance")]
    NotUniqueGame(String),

    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("linear program has {variables} variables, above the cap of {cap}")]
    SizeCap { variables: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("relation is outside its proven scope for this expression: {0}")]
    OutsideProvenScope(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake-case tag for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::InvalidBox(_) => "invalid_box",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::MarginalIllDefined(_) => "marginal_ill_defined",
            Error::UnsupportedScenario(_) => "unsupported_scenario",
            Error::InvalidExpression(_) => "invalid_expression",
            Error::NotUniqueGame(_) => "not_unique_game",
            Error::InvalidRestriction(_) => "invalid_restriction",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::SizeCap { .. } => "size_cap",
            Error::Precondition(_) => "precondition",
            Error::OutsideProvenScope(_) => "outside_proven_scope",
            Error::UnknownName(_) => "unknown_name",
            Error::Parse(_) => "parse",
        }
    }
}
