//! Exact diagonalization for few-body cavity QED model Hamiltonians.
//!
//! The crate assembles coupled light-matter Hamiltonians for one-dimensional
//! model systems (Shin-Metiu, screened hydrogen, pinned dipole) in either the
//! length (PZW) or the Coulomb gauge, with independent toggles for the two
//! quadratic coupling terms: the self-polarization term of the length gauge
//! and the diamagnetic term of the Coulomb gauge. Operators are kept as sums
//! of Kronecker products of per-subsystem factors and applied matrix-free;
//! the lowest eigenpairs come from a thick-restart Lanczos iteration with
//! full reorthogonalization.
//!
//! Modules follow the pipeline:
//!
//! * [`grid`] - uniform 1D grids, finite-difference kinetic/momentum
//!   stencils, softened model potentials.
//! * [`photon`] - truncated Fock space, ladder and quadrature matrices, the
//!   pinned-dipole analytic solution.
//! * [`linop`] - Kronecker-structured operators, wavefunctions, dense
//!   materialization for small systems.
//! * [`lanczos`] - the iterative eigensolver.
//! * [`model`] - coupled Hamiltonian assembly in both gauges, bare matter
//!   spectra, the extension criterion.
//! * [`observables`] - dipole, field, photon-number and density expectation
//!   values on eigenstates.
//! * [`experiments`] - box sweeps, gauge comparison, translation-invariance
//!   and resonance-finder recipes.
//!
//! All quantities are in Hartree atomic units unless stated otherwise.

pub mod error;
pub mod experiments;
pub mod grid;
pub mod lanczos;
pub mod linop;
pub mod model;
pub mod observables;
pub mod photon;
pub mod scalar;
pub mod units;

pub use error::{Error, Result};
pub use grid::{Grid1D, ScreenedHydrogenParams, ShinMetiuParams};
pub use lanczos::{lowest_eigenpairs, EigenOptions};
pub use linop::{Dims, ScalarField, SpectrumResult, TensorOperator, WaveFunction};
pub use model::{CavityCoupling, Gauge, HamiltonianSpec, MatterKind, ModelSpec};
pub use photon::FockSpace;
