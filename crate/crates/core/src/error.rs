use thiserror::Error;

/// Errors raised by the engine.
///
/// `Bound` and `Budget` are the two "not finitely enumerable at this size"
/// failures; the CLI maps them to exit code 3, everything else to 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("map is not total: missing {missing:?}")]
    NotTotal { missing: Vec<String> },

    #[error("hom-set not finitely enumerable at this bound: {what} (bound {bound})")]
    Bound { what: String, bound: usize },

    #[error("enumeration budget exceeded: {what} (limit {limit})")]
    Budget { what: String, limit: u64 },

    #[error("not composable: {0}")]
    NotComposable(String),

    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),

    #[error("incompatible: {0}")]
    Incompatible(String),

    #[error("law violated: {0}")]
    Law(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown { kind, name: name.into() }
    }

    pub fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::Budget { what: what.into(), limit }
    }

    /// Prefixes the message with `ctx`, keeping the variant.
    pub fn context(self, ctx: &str) -> Self {
        match self {
            Error::Invalid(m) => Error::Invalid(format!("{ctx}: {m}")),
            Error::Bound { what, bound } => Error::Bound { what: format!("{ctx}: {what}"), bound },
            Error::Budget { what, limit } => Error::Budget { what: format!("{ctx}: {what}"), limit },
            Error::NotComposable(m) => Error::NotComposable(format!("{ctx}: {m}")),
            Error::CarrierMismatch(m) => Error::CarrierMismatch(format!("{ctx}: {m}")),
            Error::Law(m) => Error::Law(format!("{ctx}: {m}")),
            Error::Incompatible(m) => Error::Incompatible(format!("{ctx}: {m}")),
            other => other,
        }
    }

    /// True for bound and budget failures.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::Bound { .. } | Error::Budget { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("json: {e}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
