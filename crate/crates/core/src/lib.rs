//! Fractional-time heat-balance integral (FT-HBI) approximations for the
//! time-fractional subdiffusion and drift equations with Riemann–Liouville
//! derivatives.
//!
//! The approximate solution is the generalized parabolic profile
//! Θ = (1 - x/δ)^n with a power-law penetration depth δ(t). The crate
//! provides the front laws, an exact RL derivative of the profile,
//! exponent calibration, and exact M-Wright reference profiles for the
//! drift problem.

pub mod calibrate;
pub mod error;
pub mod fracops;
pub mod minimize;
pub mod oracle;
pub mod profiles;
pub mod quad;
pub mod report;
pub mod specfun;

pub use error::{Error, Result};
pub use profiles::{EvalMode, ExponentSpec, FractionalOrder, FrontMode, ProblemKind, ProblemSpec, SimilarityProfile};
