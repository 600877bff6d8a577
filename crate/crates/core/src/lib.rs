//! Qubit probes for fractional Brownian noise.
//!
//! A qubit prepared in a superposition and coupled longitudinally to a
//! classical fBm field dephases at a rate set by the complementary Hurst
//! parameter γ. This crate computes the probe dynamics in closed form, the
//! information-geometric figures of merit of the resulting state family
//! (Bures metric / quantum Fisher information, Helstrom error, quantum
//! Chernoff quantity), optimizes them over the interaction time, and checks
//! the analytic averages against exact Monte Carlo sampling of fBm paths.
//!
//! Modules, bottom-up:
//!
//! - [`specfun`]: ln Γ, ψ, and the amplitude coefficient `V_γ` with its
//!   derivative.
//! - [`dephasing`]: covariance kernel, dephasing exponent β(t), visibility
//!   and evolved states.
//! - [`metrology`]: Bures / QCB metrics, fidelity, Helstrom and Chernoff.
//! - [`search`]: golden-section search.
//! - [`optimize`]: interaction-time optimization, threshold coupling and
//!   figure sweeps.
//! - [`montecarlo`]: fBm path sampling, empirical visibility, simulated
//!   measurements and maximum-likelihood estimation.

#![forbid(unsafe_code)]

pub mod dephasing;
pub mod error;
pub mod metrology;
pub mod montecarlo;
pub mod optimize;
pub mod search;
pub mod specfun;

pub use dephasing::{
    covariance, Coupling, CouplingPower, DephasingFamily, Eigensystem, QubitState,
};
pub use error::{Error, Result};
pub use metrology::{ChernoffResult, DiscriminationPair, MetricSample};
pub use montecarlo::{EstimationRun, MleReport, PathSpec, VisibilityEstimate};
pub use optimize::{BetaWindow, OptResult, TimeGrid};

pub use specfun::HurstPoint;
