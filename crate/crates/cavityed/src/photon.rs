//! Single-mode photon space in the truncated number basis.
//!
//! After the PZW and canonical transformations the mode is described by the
//! displacement coordinate `p` and its conjugate momentum `-i d/dp`. All
//! quadratic operators are built as products of the truncated ladder
//! matrices, so the coupled Hamiltonian with self-polarization stays an
//! exact perfect square inside the truncated space and the zero-field
//! identity holds to truncation accuracy.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::CavityCoupling;

/// Truncated Fock space of a single cavity mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    n_fock: usize,
    omega: f64,
}

impl FockSpace {
    pub fn new(n_fock: usize, omega: f64) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::InvalidParameter(format!(
                "Fock truncation must keep at least 2 states, got {n_fock}"
            )));
        }
        if omega <= 0.0 || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode frequency must be positive, got {omega}"
            )));
        }
        Ok(FockSpace { n_fock, omega })
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Annihilation and creation matrices: `a[n-1, n] = sqrt(n)`,
/// `a_dagger = a^T`.
pub fn ladder_operators(space: &FockSpace) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = space.n_fock();
    let mut a = DMatrix::zeros(n, n);
    for m in 1..n {
        a[(m - 1, m)] = (m as f64).sqrt();
    }
    let a_dagger = a.transpose();
    (a, a_dagger)
}

/// Photon coordinate and momentum matrices in the truncated space.
#[derive(Debug, Clone)]
pub struct PhotonOps {
    /// p = (a_dagger + a) / sqrt(2 omega).
    pub coord: DMatrix<f64>,
    /// Matrix square of the truncated `coord` (not the truncation of p^2).
    pub coord_sq: DMatrix<f64>,
    /// d^2/dp^2 = -[i sqrt(omega/2) (a_dagger - a)]^2; negative semidefinite.
    pub d2_dp2: DMatrix<f64>,
}

pub fn coordinate_operators(space: &FockSpace) -> PhotonOps {
    let (a, a_dagger) = ladder_operators(space);
    let omega = space.omega();
    let coord = (&a_dagger + &a) / (2.0 * omega).sqrt();
    let coord_sq = &coord * &coord;
    let diff = &a_dagger - &a;
    let d2_dp2 = (&diff * &diff) * (0.5 * omega);
    PhotonOps {
        coord,
        coord_sq,
        d2_dp2,
    }
}

/// Bare mode Hamiltonian: `diag(n w)` when the vacuum shift is removed,
/// `diag((n + 1/2) w)` otherwise.
pub fn photon_hamiltonian(space: &FockSpace, subtract_vacuum: bool) -> DMatrix<f64> {
    let n = space.n_fock();
    let omega = space.omega();
    DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            let base = r as f64 * omega;
            if subtract_vacuum {
                base
            } else {
                base + 0.5 * omega
            }
        } else {
            0.0
        }
    })
}

/// Ground-state expectation values of the mode coupled to a fixed classical
/// dipole `r0`: the displaced-oscillator limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedDipoleExpectations {
    /// Vacuum-subtracted ground-state energy.
    pub ground_energy: f64,
    /// Photon coordinate expectation value.
    pub expect_p: f64,
    /// Physical photon occupation.
    pub expect_n: f64,
    /// Naive occupation of the PZW canonical coordinates.
    pub expect_n_prime: f64,
}

/// Analytic displaced-oscillator solution for a pinned dipole.
///
/// With self-polarization the Hamiltonian is a complete square: the ground
/// state is the coherently displaced vacuum at zero energy. Dropping the
/// self-polarization term only removes the constant `(lambda r0)^2 / 2`.
pub fn pinned_dipole_oracle(r0: f64, coupling: &CavityCoupling) -> PinnedDipoleExpectations {
    let lambda = coupling.lambda();
    let omega = coupling.omega();
    let lr = lambda * r0;
    let expect_p = lr / omega;
    let expect_n_prime = lr * lr / (2.0 * omega);
    let ground_energy = if coupling.self_polarization() {
        0.0
    } else {
        -0.5 * lr * lr
    };
    PinnedDipoleExpectations {
        ground_energy,
        expect_p,
        expect_n: 0.0,
        expect_n_prime,
    }
}
