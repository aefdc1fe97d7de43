use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {value} ({reason})")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} = {value} lies outside [{lower}, {upper}]")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("integrand is not finite at {abscissa}: {value}")]
    NonFinite { abscissa: f64, value: f64 },

    #[error("root is not bracketed on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error(
        "cutoff {target} s is unreachable for noise PSD in [{min_psd:e}, {max_psd:e}] W/Hz \
         (achievable cutoffs {cutoff_at_max_psd} s to {cutoff_at_min_psd} s)"
    )]
    Calibration {
        target: f64,
        min_psd: f64,
        max_psd: f64,
        cutoff_at_min_psd: f64,
        cutoff_at_max_psd: f64,
    },

    #[error("reference profile has zero capacity at tau = {tau} s")]
    ZeroCapacity { tau: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::OutOfDomain { .. }
                | Error::Config(_)
                | Error::Io { .. }
                | Error::Csv(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
