//! Expectation values on coupled eigenstates: dipole, displacement /
//! polarization / electric fields, both photon-number operators and
//! reduced densities.
//!
//! Every photon-operator expectation uses exactly the truncated matrices
//! that entered the Hamiltonian, so the zero-electric-field identity of
//! self-polarized ground states holds to truncation accuracy rather than
//! discretization accuracy. Atomic units with `epsilon_0 = 1/(4 pi)`; the
//! 4 pi factors stay explicit in D and P and cancel analytically in E.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linop::{Dims, Factor, KronTerm, ScalarField, TensorOperator, WaveFunction};
use crate::model::{Gauge, HamiltonianSpec};

/// All observables the engine reports for one eigenstate.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    /// Total dipole <R>, atomic units.
    pub dipole_r: f64,
    /// Photon coordinate expectation <p>.
    pub expect_p: f64,
    /// Displacement field D_perp = (w L / 4 pi) <p>.
    pub d_perp: f64,
    /// Transversal polarization P_perp = (L^2 / 4 pi) <R>.
    pub p_perp: f64,
    /// Transversal electric field E_perp = w L <p> - L^2 <R>.
    pub e_perp: f64,
    /// Physical photon occupation (displaced number operator).
    pub n_physical: f64,
    /// Naive occupation of the PZW canonical coordinates.
    pub n_naive: f64,
    pub electron_density: Option<Vec<f64>>,
    pub nuclear_density: Option<Vec<f64>>,
    /// Fock-state populations.
    pub photon_occupation: Vec<f64>,
}

/// Field expectation values.
#[derive(Debug, Clone, Copy)]
pub struct FieldExpectations {
    pub d_perp: f64,
    pub p_perp: f64,
    pub e_perp: f64,
}

/// The two photon-number definitions.
#[derive(Debug, Clone, Copy)]
pub struct PhotonNumbers {
    pub n_physical: f64,
    pub n_naive: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Electron,
    Nucleus,
    Photon,
}

fn require_length_gauge(h: &HamiltonianSpec, what: &str) -> Result<()> {
    if h.gauge() != Gauge::Length {
        return Err(Error::Config(format!(
            "{what} is defined on length-gauge states"
        )));
    }
    Ok(())
}

fn matter_diag_op(h: &HamiltonianSpec, diag: Vec<f64>) -> Result<TensorOperator> {
    TensorOperator::new(
        h.dims(),
        ScalarField::Real,
        vec![KronTerm {
            coeff: 1.0,
            photon: None,
            matter: Some(Factor::diagonal(diag)),
        }],
    )
}

fn photon_op(h: &HamiltonianSpec, mat: nalgebra::DMatrix<f64>) -> Result<TensorOperator> {
    TensorOperator::new(
        h.dims(),
        ScalarField::Real,
        vec![KronTerm {
            coeff: 1.0,
            photon: Some(mat),
            matter: None,
        }],
    )
}

fn photon_matter_op(
    h: &HamiltonianSpec,
    mat: nalgebra::DMatrix<f64>,
    diag: Vec<f64>,
) -> Result<TensorOperator> {
    TensorOperator::new(
        h.dims(),
        ScalarField::Real,
        vec![KronTerm {
            coeff: 1.0,
            photon: Some(mat),
            matter: Some(Factor::diagonal(diag)),
        }],
    )
}

/// `<psi| (-x + Z X) |psi>` by diagonal contraction.
pub fn dipole_expectation(h: &HamiltonianSpec, psi: &WaveFunction) -> Result<f64> {
    require_length_gauge(h, "the dipole observable")?;
    let op = matter_diag_op(h, h.dipole_diag().to_vec())?;
    psi.expectation(&op)
}

/// Displacement, polarization and transversal electric field.
pub fn field_expectations(h: &HamiltonianSpec, psi: &WaveFunction) -> Result<FieldExpectations> {
    require_length_gauge(h, "the field observables")?;
    let omega = h.coupling().omega();
    let lambda = h.coupling().lambda();
    let p = psi.expectation(&photon_op(h, h.photon_ops().coord.clone())?)?;
    let r = psi.expectation(&matter_diag_op(h, h.dipole_diag().to_vec())?)?;
    Ok(FieldExpectations {
        d_perp: omega * lambda * p / (4.0 * PI),
        p_perp: lambda * lambda * r / (4.0 * PI),
        e_perp: omega * lambda * p - lambda * lambda * r,
    })
}

/// Physical and naive photon occupations:
///
/// ```text
/// N  = <-d^2/dp^2>/(2w) + (w/2) <(p - (L/w) R)^2> - 1/2
/// N' = <-d^2/dp^2>/(2w) + (w/2) <p^2>             - 1/2
/// ```
pub fn photon_numbers(h: &HamiltonianSpec, psi: &WaveFunction) -> Result<PhotonNumbers> {
    require_length_gauge(h, "the photon-number observables")?;
    let omega = h.coupling().omega();
    let lambda = h.coupling().lambda();
    let ops = h.photon_ops();
    let dipole = h.dipole_diag();

    let kin = -psi.expectation(&photon_op(h, ops.d2_dp2.clone())?)?;
    let p_sq = psi.expectation(&photon_op(h, ops.coord_sq.clone())?)?;
    let n_naive = kin / (2.0 * omega) + 0.5 * omega * p_sq - 0.5;

    let p_r = psi.expectation(&photon_matter_op(h, ops.coord.clone(), dipole.to_vec())?)?;
    let r_sq = psi.expectation(&matter_diag_op(
        h,
        dipole.iter().map(|&r| r * r).collect(),
    )?)?;
    let displaced_sq = p_sq - 2.0 * (lambda / omega) * p_r + (lambda / omega).powi(2) * r_sq;
    let n_physical = kin / (2.0 * omega) + 0.5 * omega * displaced_sq - 0.5;
    Ok(PhotonNumbers {
        n_physical,
        n_naive,
    })
}

/// Marginal probability distribution of one subsystem. Matter densities are
/// normalized as densities (`sum n * spacing = 1`); the photon marginal is
/// a plain probability vector.
pub fn reduced_density(
    h: &HamiltonianSpec,
    psi: &WaveFunction,
    subsystem: Subsystem,
) -> Result<Vec<f64>> {
    marginal(psi.dims, psi, subsystem, h)
}

fn marginal(
    dims: Dims,
    psi: &WaveFunction,
    subsystem: Subsystem,
    h: &HamiltonianSpec,
) -> Result<Vec<f64>> {
    let n_el = dims.n_electron.unwrap_or(1);
    let n_nuc = dims.n_nucleus.unwrap_or(1);
    let n_ph = dims.n_fock;
    match subsystem {
        Subsystem::Electron => {
            let grid = h
                .model()
                .electron_grid
                .as_ref()
                .ok_or_else(|| Error::Config("model has no electron grid".into()))?;
            let mut out = vec![0.0; n_el];
            for ip in 0..n_ph {
                for inuc in 0..n_nuc {
                    for iel in 0..n_el {
                        out[iel] += psi.amplitudes.prob(dims.index(ip, inuc, iel));
                    }
                }
            }
            let inv = 1.0 / grid.spacing();
            for v in &mut out {
                *v *= inv;
            }
            Ok(out)
        }
        Subsystem::Nucleus => {
            let grid = h
                .model()
                .nuclear_grid
                .as_ref()
                .ok_or_else(|| Error::Config("model has no nuclear grid".into()))?;
            let mut out = vec![0.0; n_nuc];
            for ip in 0..n_ph {
                for inuc in 0..n_nuc {
                    for iel in 0..n_el {
                        out[inuc] += psi.amplitudes.prob(dims.index(ip, inuc, iel));
                    }
                }
            }
            let inv = 1.0 / grid.spacing();
            for v in &mut out {
                *v *= inv;
            }
            Ok(out)
        }
        Subsystem::Photon => {
            let mut out = vec![0.0; n_ph];
            let n_m = dims.matter_dim();
            for ip in 0..n_ph {
                for jm in 0..n_m {
                    out[ip] += psi.amplitudes.prob(ip * n_m + jm);
                }
            }
            Ok(out)
        }
    }
}

/// Threshold on the top-two Fock populations above which the truncation is
/// considered inadequate.
pub const TRUNCATION_POPULATION_LIMIT: f64 = 1e-8;

/// Check Fock-truncation adequacy of one state: the top two number-state
/// populations must stay below [`TRUNCATION_POPULATION_LIMIT`].
pub fn truncation_check(h: &HamiltonianSpec, psi: &WaveFunction, label: &str) -> Option<String> {
    let occ = marginal(psi.dims, psi, Subsystem::Photon, h).ok()?;
    let n = occ.len();
    let top = occ[n - 1].max(occ[n - 2]);
    if top > TRUNCATION_POPULATION_LIMIT {
        Some(format!(
            "{label}: top Fock populations ({:.3e}, {:.3e}) exceed {:.0e}; increase n_fock",
            occ[n - 2],
            occ[n - 1],
            TRUNCATION_POPULATION_LIMIT
        ))
    } else {
        None
    }
}

/// Evaluate the full observable set of one length-gauge eigenstate.
pub fn evaluate(h: &HamiltonianSpec, psi: &WaveFunction) -> Result<ObservableSet> {
    require_length_gauge(h, "the observable set")?;
    let dipole_r = dipole_expectation(h, psi)?;
    let expect_p = psi.expectation(&photon_op(h, h.photon_ops().coord.clone())?)?;
    let fields = field_expectations(h, psi)?;
    let numbers = photon_numbers(h, psi)?;
    let electron_density = match h.model().electron_grid {
        Some(_) => Some(reduced_density(h, psi, Subsystem::Electron)?),
        None => None,
    };
    let nuclear_density = match h.model().nuclear_grid {
        Some(_) => Some(reduced_density(h, psi, Subsystem::Nucleus)?),
        None => None,
    };
    let photon_occupation = reduced_density(h, psi, Subsystem::Photon)?;
    Ok(ObservableSet {
        dipole_r,
        expect_p,
        d_perp: fields.d_perp,
        p_perp: fields.p_perp,
        e_perp: fields.e_perp,
        n_physical: numbers.n_physical,
        n_naive: numbers.n_naive,
        electron_density,
        nuclear_density,
        photon_occupation,
    })
}
