use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config: missing key `{0}`")]
    MissingKey(&'static str),

    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("config line {line}: bad value `{value}` for key `{key}`")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },

    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },

    #[error("gaussian laser profile requested but `w_tilde` is not set")]
    MissingLaserWaist,

    #[error("closed-form coupling angle requires the constant laser profile")]
    ConstantOmegaRequired,

    #[error("integrator step size underflow at t = {t} us")]
    StepUnderflow { t: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error}")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error(
        "non-adiabatic transit: intermediate population {leakage:.3e} exceeds bound {bound:.3e}"
    )]
    NonAdiabatic { leakage: f64, bound: f64 },

    #[error("state norm {norm} deviates from unity beyond tolerance")]
    Unnormalized { norm: f64 },

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 1 usage/config, 2 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::StepUnderflow { .. }
            | Error::QuadratureNonConvergence { .. }
            | Error::NonAdiabatic { .. }
            | Error::Unnormalized { .. } => 2,
            _ => 1,
        }
    }
}
