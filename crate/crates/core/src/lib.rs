//! Exact diagonalization, entanglement negativities and phase maps for the
//! mixed spin-(1, 1/2, 1) Heisenberg trimer with uniaxial single-ion
//! anisotropy.
//!
//! The Hilbert space is the ordered product `2 ⊗ 3 ⊗ 3` of the central
//! spin-1/2 (`μ`) and the two spin-1 sites (`S1`, `S2`). Product basis states
//! are indexed row-major over `(m_μ, m_1, m_2)`, each site ordered from the
//! highest to the lowest magnetic quantum number.

pub mod analytic;
pub mod contour;
pub mod eigen;
mod error;
pub mod export;
pub mod hamiltonian;
pub mod label;
pub mod negativity;
pub mod phase;
pub mod scan;
pub mod spin;
pub mod thermal;
pub mod units;

pub use error::{Error, Result};

pub use analytic::{analytic_eigensystem, cubic_roots, AnalyticLevel, TableCoefficients};
pub use hamiltonian::{build_hamiltonian, diagonalize, total_sz, ModelParams, Spectrum};
pub use label::{Branch, LevelLabel};
pub use negativity::{gtn, negativity, partial_transpose, NegativityReport, Quantity};
pub use phase::{find_gtn_maximum, find_maximum, ground_phase, scan_phases, PhaseLabel, PhaseMap, Stability};
pub use scan::{scan_gtn_zero_t, scan_thermal, Axis, AxisSpec, GridRange, GridScan};
pub use thermal::{ground_state_density_matrix, thermal_density_matrix, DensityMatrix, StateMode};
pub use spin::{embed, kron, spin_matrices, HalfInt, Operator, Site, SiteDims, C64};

