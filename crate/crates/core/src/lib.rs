//! Stochastic unravellings of generalized Lindblad rate equations.
//!
//! A state is a tuple of unnormalized vectors (ψ_1, …, ψ_n) whose outer
//! products average to the densities η_i solving the rate equation. The
//! crate provides
//!
//! * [`linalg`]: fixed-size complex vectors, matrices and component states,
//! * [`unravelling`]: coefficients of the stochastic equation for any operator set,
//! * [`engine`]: a jump-adapted Euler–Maruyama integrator,
//! * [`two_band`]: the two-band model in closed form,
//! * [`lindblad`]: the deterministic rate equation and an RK4 solver,
//! * [`ensemble`]: seeded parallel ensembles with deterministic reductions,
//! * [`output`]: CSV writers.

pub mod engine;
pub mod ensemble;
pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod output;
pub mod two_band;
pub mod unravelling;

pub use error::{Error, Result};
pub use linalg::{CMat, CMat2, CVec, CVec2, ComponentState, DensityPair, DensityVector, StateVector, C64};
pub use two_band::{JumpConvention, ModelParams, TwoBandModel};
pub use unravelling::{OperatorSet, Unravelling};
