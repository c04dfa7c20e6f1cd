use thiserror::Error;

/// Errors raised by the simulator and the reference solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has vanishing norm (total norm² = {0:e})")]
    ZeroNorm(f64),

    #[error("channel {channel} cannot fire: intensity {intensity:e} is zero")]
    ZeroIntensity { channel: String, intensity: f64 },

    #[error("total intensity {0:e} is zero at a fire event")]
    AllZero(f64),

    #[error("non-finite value produced by {0}")]
    NonFinite(String),

    #[error("invalid operator set: {0}")]
    InvalidOperatorSet(String),

    #[error("{name} {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("rates must be positive for a steady state: {0}")]
    DegenerateRates(String),

    #[error("at least {needed} samples required, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("{discarded} of {total} trajectories discarded by the norm guard (limit {limit})")]
    ExcessDiscarded {
        discarded: usize,
        total: usize,
        limit: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
