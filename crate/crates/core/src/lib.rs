//! Born-approximation, non-Markovian dynamics of two exchange-coupled qubits,
//! each damped by its own zero-temperature bosonic bath.
//!
//! The crate is organised bottom-up:
//!
//! - [`state`]: two-qubit states, system parameters and physicality diagnostics.
//! - [`baths`]: spectral-density models and their correlation functions
//!   `B(t)`, `Φ(t)` and the decoherence exponent `G(t) = 2 Re Φ(t)`.
//! - [`propagator`]: the analytic block propagators and the closed-form map
//!   `ρ(0) → ρ(t)` for arbitrary initial states.
//! - [`entanglement`]: Wootters concurrence, populations, purity.
//! - [`oracle`]: a brute-force Runge–Kutta integrator of the underlying
//!   master equation, used to cross-check the analytic solution.
//!
//! Basis order everywhere is `|11⟩, |10⟩, |01⟩, |00⟩` (index 0..3), with `1`
//! the excited qubit level.

pub mod baths;
pub mod entanglement;
mod error;
pub mod oracle;
pub mod propagator;
pub mod state;

pub use baths::{BathModel, CorrelationProfile, TabulatedSpectrum};
pub use entanglement::{concurrence, concurrence_bell, population, purity, ObservableSample};
pub use error::{Error, Result};
pub use oracle::{integrate_me, max_deviation, Trajectory};
pub use propagator::{evolve, evolve_bell, AuxIntegrals, PropagatorBundle};
pub use state::{
    bell_psi_minus, check_physical, density_from_pure, BasisState, DensityMatrix4,
    PhysicalityReport, StateVector4, SystemParams,
};

pub use num_complex::Complex64;
