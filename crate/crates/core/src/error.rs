use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point is not in the upper half-plane: ({x}, {y})")]
    NotInHalfPlane { x: f64, y: f64 },

    #[error("invalid boundary point: homogeneous pair ({p}, {q})")]
    InvalidBoundaryPoint { p: f64, q: f64 },

    #[error("mean curvature H = {0} is outside [0, 1/2); the construction requires H < 1/2")]
    CurvatureOutOfRange(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("orientation mismatch: {0}")]
    Orientation(String),

    #[error("horocycle error: {0}")]
    Horocycle(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("complex error: {0}")]
    Complex(String),

    #[error("enumeration limit exceeded: {0}")]
    EnumerationLimit(String),

    #[error("extension failed: {0}")]
    Extension(String),

    #[error("not admissible: {0}")]
    NotAdmissible(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
