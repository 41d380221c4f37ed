use thiserror::Error;

/// Errors raised while evaluating surfaces, fields or integrals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A surface was evaluated outside its domain inflated by the padding.
    #[error("point ({u}, {v}) lies outside the evaluable neighborhood of the surface domain")]
    Domain { u: f64, v: f64 },

    /// A vector field was evaluated where its guard rejects the point.
    #[error("vector field is undefined at ({x}, {y}, {z})")]
    FieldDomain { x: f64, y: f64, z: f64 },

    /// An integrand produced a non-finite value.
    #[error("integrand is not finite at {location}")]
    Evaluation { location: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid region: {0}")]
    Region(String),

    #[error("invalid quadrature specification: {0}")]
    Quadrature(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
