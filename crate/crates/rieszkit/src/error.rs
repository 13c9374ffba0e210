use thiserror::Error;

/// How a gamma-function pole affects the constant being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleEffect {
    /// Pole in a numerator gamma factor: the constant blows up.
    Infinite,
    /// Pole in a denominator gamma factor: the constant vanishes.
    Vanishing,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma-function pole at argument {arg}: value would be {}",
        match effect { PoleEffect::Infinite => "infinite", PoleEffect::Vanishing => "zero" })]
    Pole { arg: f64, effect: PoleEffect },

    #[error("degenerate normalizing constant: {0}")]
    DegenerateConstant(String),

    #[error("invalid kernel parameters: {0}")]
    InvalidSpec(String),

    #[error("alpha must lie in (0, n): alpha={alpha}, n={n}")]
    Domain { alpha: f64, n: usize },

    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("operation requires a 2-dimensional field, got n={0}")]
    Dimension(usize),

    #[error("sinogram does not cover offset {needed:.6} (s_max = {s_max:.6})")]
    Coverage { needed: f64, s_max: f64 },

    #[error("psi-kernel convolution is an oracle: a reference field is required")]
    Mode,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("bad file format: {0}")]
    Format(String),

    #[error("selftest reported failures")]
    SelftestFailed,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
