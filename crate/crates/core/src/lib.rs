//! Adiabatic preparation of long-distance entanglement (LDE) in chains of
//! superconducting flux qubits, at desk scale.
//!
//! The library covers two preparation protocols for an open four-qubit chain
//! with weak end bonds:
//!
//! * a dc protocol that ramps the energy biases of a transverse-field Ising
//!   chain down to zero, and
//! * a microwave protocol that ramps the amplitude of a resonant drive,
//!   realizing an effective XX chain in a rotating frame.
//!
//! On top of the chain builders sit exact-diagonalization sweeps (gaps and
//! end-to-end concurrence), time-dependent Schrödinger evolution with
//! fidelity/concurrence tracking, Monte Carlo statistics over tunnel-splitting
//! disorder, and dispersive-readout feasibility estimates.
//!
//! Conventions used throughout:
//!
//! * qubit basis |R⟩, |L⟩ with σ^z|R⟩ = +|R⟩; basis index bit 0 means |R⟩,
//!   and site 1 is the most significant bit of the basis index;
//! * configuration values are linear frequencies in GHz and are multiplied
//!   by 2π on ingestion; internal energies are angular frequencies in rad/ns
//!   with ħ = 1; time is in ns.

pub mod cli;
pub mod config;
pub mod disorder;
pub mod dynamics;
pub mod hamiltonians;
pub mod linalg;
pub mod metrics;
pub mod output;
pub mod readout;
pub mod spectral;

pub use linalg::{CMatrix, CVector, EigenDecomposition};

/// 2π, the GHz → rad/ns conversion factor.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),
    #[error("odd chain length {0} is rejected for the LDE pattern (degenerate ground state)")]
    OddChainLength(usize),
    #[error("disorder offset {value} exceeds half-width {half_width}")]
    DisorderOutOfRange { value: f64, half_width: f64 },
    #[error("state vectors must be orthogonal: overlap {0:.3e}")]
    NotOrthogonal(f64),
    #[error("density matrix validation failed: {0}")]
    InvalidDensityMatrix(String),
    #[error("energy gap must be positive, got {0}")]
    NonPositiveGap(f64),
    #[error("search range [{lo}, {hi}] does not bracket a minimum")]
    NoBracketedMinimum { lo: u32, hi: u32 },
    #[error("integrator step size underflow at t = {t_ns} ns")]
    StepSizeUnderflow { t_ns: f64 },
    #[error("invalid run configuration: {0}")]
    RunConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
