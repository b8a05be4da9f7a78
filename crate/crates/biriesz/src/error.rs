use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bessel order {0} outside the supported range [-0.49, 25]")]
    OrderOutOfRange(f64),

    #[error("expected a {expected} grid function, got {found}")]
    WrongSpace {
        expected: &'static str,
        found: &'static str,
    },

    #[error("grid mismatch: {0}")]
    SpecMismatch(String),

    #[error(
        "aliasing: {fraction:.3e} of the spectral energy of `{which}` lies outside the guard band"
    )]
    Aliasing { which: &'static str, fraction: f64 },

    #[error(
        "profile under-resolved: frequency spacing {spacing} exceeds smooth_scale/4 = {limit}"
    )]
    UnderResolved { spacing: f64, limit: f64 },

    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),

    #[error("grid too large: {samples} samples exceeds the cap {cap}")]
    TooLarge { samples: u64, cap: u64 },

    #[error("non-finite value encountered after {steps} ascent steps")]
    NonFinite { steps: usize, trace: Vec<f64> },

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
