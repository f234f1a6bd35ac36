use thiserror::Error;

pub type Result<T> = std::result::Result<T, FidelityError>;

/// Every failure the library can report.
///
/// The variants group into the three classes the command line maps to exit
/// codes: domain violations (bad input), regime violations (an asymptotic
/// formula used outside its validity window) and numerical failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FidelityError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("numerical error: {message} (achieved {achieved:e})")]
    Numerical { message: String, achieved: f64 },

    #[error("resource error: {0}")]
    Resource(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("arity error: need at least {needed} points, got {got}")]
    Arity { needed: usize, got: usize },

    #[error("range error: {0}")]
    Range(String),

    #[error("data quality error: {0}")]
    DataQuality(String),

    #[error("at grid point {x}: {source}")]
    AtGridPoint {
        x: f64,
        #[source]
        source: Box<FidelityError>,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl FidelityError {
    pub fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub fn regime(msg: impl Into<String>) -> Self {
        Self::Regime(msg.into())
    }

    pub fn numerical(msg: impl Into<String>, achieved: f64) -> Self {
        Self::Numerical {
            message: msg.into(),
            achieved,
        }
    }

    /// Attach the sweep coordinate at which an evaluation failed.
    pub fn at(self, x: f64) -> Self {
        Self::AtGridPoint {
            x,
            source: Box::new(self),
        }
    }

    /// Process exit code used by the command line front end:
    /// 2 for domain errors, 3 for regime errors, 4 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Domain(_) | Self::Resource(_) | Self::Arity { .. } | Self::DegenerateData(_) | Self::Io(_) => 2,
            Self::Regime(_) => 3,
            Self::Numerical { .. } | Self::Precision(_) | Self::Range(_) | Self::DataQuality(_) => 4,
            Self::AtGridPoint { source, .. } => source.exit_code(),
        }
    }
}

impl From<std::io::Error> for FidelityError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
