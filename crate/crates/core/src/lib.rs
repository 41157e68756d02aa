//! Pure-state decompositions of rank-two mixed states and optimal two-state
//! discrimination.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: two-level states, 2×2 density matrices, the SPDC source and
//!   the partial trace over its idler photon.
//! - [`decomposition`]: the γ-parametrized family of two-state pure
//!   decompositions of a rank-two state.
//! - [`discrimination`]: unambiguous (Jaeger–Shimony) and minimum-error
//!   (Helstrom) figures of merit, alone and as functions of γ.
//! - [`optics`]: state-vector simulation of the polarization/path circuit
//!   that performs the optimal unambiguous discrimination, its closed-form
//!   analysis, and a seeded Monte Carlo detection experiment.
//! - [`sweep`]: parameter sweeps backing the figure-data commands of the CLI.
//!
//! Data-parallel loops (Monte Carlo trials, grid searches, sweeps) run on
//! rayon when the default `parallel` feature is enabled and fall back to a
//! plain sequential loop otherwise. Results never depend on the choice; see
//! [`Execution`].

pub mod decomposition;
pub mod discrimination;
mod error;
mod exec;
pub mod optics;
pub mod qcore;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
