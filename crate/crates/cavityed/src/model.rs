//! Coupled light-matter Hamiltonians in the length (PZW) and Coulomb
//! gauges, bare matter spectra and the extension criterion.
//!
//! Length gauge (single mode, vacuum shift optionally removed):
//!
//! ```text
//! H = H_matter (x) 1 + 1 (x) [ (1/2)(-d^2/dp^2) + (w^2/2) p^2 - w/2 ]
//!     - w L (R (x) p) + s (L^2/2) (R^2 (x) 1),        R = -x + Z X
//! ```
//!
//! with `s = 1` when the self-polarization term is kept. The photon
//! quadratics are products of truncated matrices, so with `s = 1` the
//! photonic part is an exact complete square in the truncated space.
//!
//! Coulomb gauge: every mobile charge couples through its momentum,
//!
//! ```text
//! H = sum_i [ T_i - (q_i/m_i) L (p_i (x) q_c) + d (q_i^2 / 2 m_i) L^2 q_c^2 ]
//!     + V_matter + w a'a,        q_c = (a' + a)/sqrt(2 w)
//! ```
//!
//! with `d = 1` when the diamagnetic term is kept. The momentum factors are
//! purely imaginary, so Coulomb-gauge states are complex.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::{
    kinetic_operator, momentum_operator, screened_hydrogen_potential, shinmetiu_potential,
    Grid1D, ImaginaryAntisymmetric, ScreenedHydrogenParams, ShinMetiuParams, Tridiagonal,
};
use crate::lanczos::{lowest_eigenpairs, EigenOptions};
use crate::linop::{Dims, Factor, KronTerm, ScalarField, SpectrumResult, TensorOperator, WaveFunction};
use crate::photon::{coordinate_operators, photon_hamiltonian, FockSpace, PhotonOps};

/// Single-mode coupling parameters with the quadratic-term toggles.
///
/// The scalar coupling strength and the dimensionless ratio are tied by
/// `lambda = (g/w) sqrt(2 w)`; constructors derive one from the other.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityCoupling {
    omega: f64,
    lambda: f64,
    g_over_omega: f64,
    self_polarization: bool,
    diamagnetic: bool,
}

impl CavityCoupling {
    pub fn from_g_ratio(omega: f64, g_over_omega: f64) -> Result<Self> {
        if omega <= 0.0 || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode frequency must be positive, got {omega}"
            )));
        }
        if g_over_omega < 0.0 || !g_over_omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling ratio must be nonnegative, got {g_over_omega}"
            )));
        }
        Ok(CavityCoupling {
            omega,
            lambda: g_over_omega * (2.0 * omega).sqrt(),
            g_over_omega,
            self_polarization: true,
            diamagnetic: true,
        })
    }

    pub fn from_lambda(omega: f64, lambda: f64) -> Result<Self> {
        if omega <= 0.0 || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode frequency must be positive, got {omega}"
            )));
        }
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling strength must be nonnegative, got {lambda}"
            )));
        }
        Ok(CavityCoupling {
            omega,
            lambda,
            g_over_omega: lambda / (2.0 * omega).sqrt(),
            self_polarization: true,
            diamagnetic: true,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn g_over_omega(&self) -> f64 {
        self.g_over_omega
    }

    pub fn self_polarization(&self) -> bool {
        self.self_polarization
    }

    pub fn diamagnetic(&self) -> bool {
        self.diamagnetic
    }

    pub fn with_self_polarization(mut self, on: bool) -> Self {
        self.self_polarization = on;
        self
    }

    pub fn with_diamagnetic(mut self, on: bool) -> Self {
        self.diamagnetic = on;
        self
    }

    /// Coupling with the sign of lambda flipped. The spectrum and all
    /// physical observables are invariant under this together with
    /// `p -> -p`; exposed for that symmetry check.
    pub fn negated(&self) -> Self {
        CavityCoupling {
            omega: self.omega,
            lambda: -self.lambda,
            g_over_omega: -self.g_over_omega,
            self_polarization: self.self_polarization,
            diamagnetic: self.diamagnetic,
        }
    }

    fn check_invariant(&self) -> Result<()> {
        let derived = self.g_over_omega * (2.0 * self.omega).sqrt();
        if (self.lambda - derived).abs() > 1e-12 * self.lambda.abs().max(1.0) {
            return Err(Error::Config(format!(
                "inconsistent coupling: lambda = {} but (g/w) sqrt(2w) = {}",
                self.lambda, derived
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    Length,
    Coulomb,
}

/// Matter content of a model.
#[derive(Debug, Clone, PartialEq)]
pub enum MatterKind {
    ShinMetiu(ShinMetiuParams),
    ScreenedHydrogen(ScreenedHydrogenParams),
    /// Matter replaced by a fixed classical dipole of the given strength.
    PinnedDipole { r0: f64 },
}

/// Full specification of a coupled model: matter kind, grids, Fock space,
/// coupling and gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: MatterKind,
    pub electron_grid: Option<Grid1D>,
    pub nuclear_grid: Option<Grid1D>,
    pub fock: FockSpace,
    pub coupling: CavityCoupling,
    pub gauge: Gauge,
    /// Coordinate-system shift applied to both grids and the pinned
    /// charges; enters observables only through the net-charge dipole
    /// offset.
    pub origin_shift: f64,
    /// Remove the w/2 vacuum energy (default true, both gauges).
    pub subtract_vacuum: bool,
}

impl ModelSpec {
    pub fn shin_metiu(
        params: ShinMetiuParams,
        electron_grid: Grid1D,
        nuclear_grid: Grid1D,
        fock: FockSpace,
        coupling: CavityCoupling,
        gauge: Gauge,
    ) -> Result<Self> {
        let model = ModelSpec {
            kind: MatterKind::ShinMetiu(params),
            electron_grid: Some(electron_grid),
            nuclear_grid: Some(nuclear_grid),
            fock,
            coupling,
            gauge,
            origin_shift: 0.0,
            subtract_vacuum: true,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn screened_hydrogen(
        params: ScreenedHydrogenParams,
        electron_grid: Grid1D,
        fock: FockSpace,
        coupling: CavityCoupling,
        gauge: Gauge,
    ) -> Result<Self> {
        let model = ModelSpec {
            kind: MatterKind::ScreenedHydrogen(params),
            electron_grid: Some(electron_grid),
            nuclear_grid: None,
            fock,
            coupling,
            gauge,
            origin_shift: 0.0,
            subtract_vacuum: true,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn pinned_dipole(r0: f64, fock: FockSpace, coupling: CavityCoupling) -> Result<Self> {
        let model = ModelSpec {
            kind: MatterKind::PinnedDipole { r0 },
            electron_grid: None,
            nuclear_grid: None,
            fock,
            coupling,
            gauge: Gauge::Length,
            origin_shift: 0.0,
            subtract_vacuum: true,
        };
        model.validate()?;
        Ok(model)
    }

    /// Move the coordinate-system origin: both grids and the pinned charges
    /// shift together by `mu` bohr.
    pub fn with_origin_shift(mut self, mu: f64) -> Result<Self> {
        self.origin_shift += mu;
        self.electron_grid = self.electron_grid.map(|g| g.shifted(mu));
        self.nuclear_grid = self.nuclear_grid.map(|g| g.shifted(mu));
        self.validate()?;
        Ok(self)
    }

    pub fn with_subtract_vacuum(mut self, on: bool) -> Self {
        self.subtract_vacuum = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.coupling.check_invariant()?;
        match &self.kind {
            MatterKind::ShinMetiu(p) => {
                p.validate()?;
                let (eg, ng) = match (&self.electron_grid, &self.nuclear_grid) {
                    (Some(e), Some(n)) => (e, n),
                    _ => {
                        return Err(Error::Config(
                            "the Shin-Metiu model needs electron and nuclear grids".into(),
                        ))
                    }
                };
                let _ = eg;
                // The moving nucleus must never sit on a pinned charge.
                let half_l = 0.5 * p.l;
                for j in 0..ng.n_points() {
                    let rel = ng.coordinate(j) - self.origin_shift;
                    if (rel - half_l).abs() < 1e-9 || (rel + half_l).abs() < 1e-9 {
                        return Err(Error::Config(format!(
                            "nuclear grid point {} coincides with a pinned nucleus",
                            ng.coordinate(j)
                        )));
                    }
                }
            }
            MatterKind::ScreenedHydrogen(p) => {
                p.validate()?;
                if self.electron_grid.is_none() {
                    return Err(Error::Config(
                        "the screened-hydrogen model needs an electron grid".into(),
                    ));
                }
                if self.nuclear_grid.is_some() {
                    return Err(Error::Config(
                        "the screened-hydrogen model has no nuclear grid".into(),
                    ));
                }
            }
            MatterKind::PinnedDipole { .. } => {
                if self.electron_grid.is_some() || self.nuclear_grid.is_some() {
                    return Err(Error::Config(
                        "the pinned-dipole model carries no matter grids".into(),
                    ));
                }
                if self.gauge != Gauge::Length {
                    return Err(Error::Config(
                        "the pinned-dipole model is defined in the length gauge".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n_fock: self.fock.n_fock(),
            n_nucleus: self.nuclear_grid.as_ref().map(|g| g.n_points()),
            n_electron: self.electron_grid.as_ref().map(|g| g.n_points()),
        }
    }

    /// Total dipole R on the flattened matter index.
    fn dipole_diag(&self) -> Vec<f64> {
        match &self.kind {
            MatterKind::PinnedDipole { r0 } => vec![*r0],
            MatterKind::ScreenedHydrogen(_) => self
                .electron_grid
                .as_ref()
                .unwrap()
                .coordinates()
                .iter()
                .map(|&x| -x)
                .collect(),
            MatterKind::ShinMetiu(p) => {
                let xs = self.electron_grid.as_ref().unwrap().coordinates();
                let bigs = self.nuclear_grid.as_ref().unwrap().coordinates();
                let mut r = Vec::with_capacity(xs.len() * bigs.len());
                for big_x in &bigs {
                    for x in &xs {
                        r.push(-x + p.z * big_x);
                    }
                }
                r
            }
        }
    }

    /// Matter potential on the flattened matter index (empty well for the
    /// pinned dipole).
    fn potential_diag(&self) -> Result<Vec<f64>> {
        let mu = self.origin_shift;
        match &self.kind {
            MatterKind::PinnedDipole { .. } => Ok(vec![0.0]),
            MatterKind::ScreenedHydrogen(p) => Ok(self
                .electron_grid
                .as_ref()
                .unwrap()
                .coordinates()
                .iter()
                .map(|&x| screened_hydrogen_potential(x - mu, p))
                .collect()),
            MatterKind::ShinMetiu(p) => {
                let xs = self.electron_grid.as_ref().unwrap().coordinates();
                let bigs = self.nuclear_grid.as_ref().unwrap().coordinates();
                let mut v = Vec::with_capacity(xs.len() * bigs.len());
                for big_x in &bigs {
                    for x in &xs {
                        v.push(shinmetiu_potential(x - mu, big_x - mu, p)?);
                    }
                }
                Ok(v)
            }
        }
    }

    /// Mobile charges as (charge, mass, axis) for the Coulomb-gauge
    /// coupling. Axis 0 is the electron coordinate, axis 1 the nucleus.
    fn mobile_charges(&self) -> Vec<(f64, f64, MatterAxis)> {
        match &self.kind {
            MatterKind::PinnedDipole { .. } => Vec::new(),
            MatterKind::ScreenedHydrogen(_) => vec![(-1.0, 1.0, MatterAxis::Electron)],
            MatterKind::ShinMetiu(p) => vec![
                (-1.0, p.m_e, MatterAxis::Electron),
                (p.z, p.mass, MatterAxis::Nucleus),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MatterAxis {
    Electron,
    Nucleus,
}

/// Assembled Hamiltonian: the matrix-free operator plus everything needed
/// to evaluate observables on its eigenstates.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    operator: TensorOperator,
    photon_ops: PhotonOps,
    dipole: Vec<f64>,
    model: ModelSpec,
}

impl HamiltonianSpec {
    pub fn operator(&self) -> &TensorOperator {
        &self.operator
    }

    pub fn dims(&self) -> Dims {
        self.operator.dims()
    }

    pub fn scalar_field(&self) -> ScalarField {
        self.operator.field()
    }

    pub fn gauge(&self) -> Gauge {
        self.model.gauge
    }

    pub fn coupling(&self) -> &CavityCoupling {
        &self.model.coupling
    }

    pub fn photon_ops(&self) -> &PhotonOps {
        &self.photon_ops
    }

    /// Total dipole R on the flattened matter index.
    pub fn dipole_diag(&self) -> &[f64] {
        &self.dipole
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    /// Solve for the lowest eigenpairs of the assembled operator.
    pub fn lowest_eigenpairs(&self, opts: &EigenOptions) -> Result<SpectrumResult> {
        lowest_eigenpairs(&self.operator, opts)
    }
}

/// Dispatch on the model gauge.
pub fn build_hamiltonian(model: &ModelSpec) -> Result<HamiltonianSpec> {
    match model.gauge {
        Gauge::Length => build_length_gauge(model),
        Gauge::Coulomb => build_coulomb_gauge(model),
    }
}

/// Assemble the length-gauge Hamiltonian. All factors are real.
pub fn build_length_gauge(model: &ModelSpec) -> Result<HamiltonianSpec> {
    if model.gauge != Gauge::Length {
        return Err(Error::Config(
            "build_length_gauge called on a Coulomb-gauge model".into(),
        ));
    }
    model.validate()?;
    let dims = model.dims();
    let ops = coordinate_operators(&model.fock);
    let omega = model.fock.omega();
    let lambda = model.coupling.lambda();
    let n_fock = model.fock.n_fock();

    let mut terms = kinetic_terms(model, dims)?;

    // Matter diagonal: potential plus the self-polarization square.
    let dipole = model.dipole_diag();
    let mut diag = model.potential_diag()?;
    if model.coupling.self_polarization() {
        for (v, r) in diag.iter_mut().zip(dipole.iter()) {
            *v += 0.5 * lambda * lambda * r * r;
        }
    }
    terms.push(KronTerm {
        coeff: 1.0,
        photon: None,
        matter: Some(Factor::diagonal(diag)),
    });

    // Bare mode: (1/2)(-d2/dp2) + (w^2/2) p^2 (- w/2), built from the
    // truncated quadrature matrices.
    let mut bare = &ops.d2_dp2 * (-0.5) + &ops.coord_sq * (0.5 * omega * omega);
    if model.subtract_vacuum {
        bare -= DMatrix::identity(n_fock, n_fock) * (0.5 * omega);
    }
    terms.push(KronTerm {
        coeff: 1.0,
        photon: Some(bare),
        matter: None,
    });

    // Bilinear coupling -w L (R (x) p).
    if lambda != 0.0 {
        terms.push(KronTerm {
            coeff: -omega * lambda,
            photon: Some(ops.coord.clone()),
            matter: Some(Factor::diagonal(dipole.clone())),
        });
    }

    let operator = TensorOperator::new(dims, ScalarField::Real, terms)?;
    Ok(HamiltonianSpec {
        operator,
        photon_ops: ops,
        dipole,
        model: model.clone(),
    })
}

/// Assemble the Coulomb-gauge Hamiltonian. The bilinear couplings are
/// purely imaginary, so the operator acts on complex states.
pub fn build_coulomb_gauge(model: &ModelSpec) -> Result<HamiltonianSpec> {
    if model.gauge != Gauge::Coulomb {
        return Err(Error::Config(
            "build_coulomb_gauge called on a length-gauge model".into(),
        ));
    }
    model.validate()?;
    let dims = model.dims();
    let ops = coordinate_operators(&model.fock);
    let lambda = model.coupling.lambda();

    let mut terms = kinetic_terms(model, dims)?;
    terms.push(KronTerm {
        coeff: 1.0,
        photon: None,
        matter: Some(Factor::diagonal(model.potential_diag()?)),
    });
    terms.push(KronTerm {
        coeff: 1.0,
        photon: Some(photon_hamiltonian(&model.fock, model.subtract_vacuum)),
        matter: None,
    });

    let mut diamagnetic_strength = 0.0;
    for (charge, mass, axis) in model.mobile_charges() {
        if lambda != 0.0 {
            let momentum = lift_momentum(model, dims, axis)?;
            terms.push(KronTerm {
                coeff: -(charge / mass) * lambda,
                photon: Some(ops.coord.clone()),
                matter: Some(momentum),
            });
        }
        diamagnetic_strength += charge * charge / (2.0 * mass);
    }
    if model.coupling.diamagnetic() && lambda != 0.0 {
        terms.push(KronTerm {
            coeff: diamagnetic_strength * lambda * lambda,
            photon: Some(ops.coord_sq.clone()),
            matter: None,
        });
    }

    let dipole = model.dipole_diag();
    let operator = TensorOperator::new(dims, ScalarField::Complex, terms)?;
    Ok(HamiltonianSpec {
        operator,
        photon_ops: ops,
        dipole,
        model: model.clone(),
    })
}

/// Kinetic terms of all mobile coordinates, lifted to the flattened matter
/// index.
fn kinetic_terms(model: &ModelSpec, dims: Dims) -> Result<Vec<KronTerm>> {
    let mut terms = Vec::new();
    match &model.kind {
        MatterKind::PinnedDipole { .. } => {}
        MatterKind::ScreenedHydrogen(_) => {
            let grid = model.electron_grid.as_ref().unwrap();
            let t = kinetic_operator(grid, 1.0)?;
            terms.push(KronTerm {
                coeff: 1.0,
                photon: None,
                matter: Some(lift_tridiagonal(&t, dims, MatterAxis::Electron)?),
            });
        }
        MatterKind::ShinMetiu(p) => {
            let eg = model.electron_grid.as_ref().unwrap();
            let ng = model.nuclear_grid.as_ref().unwrap();
            let te = kinetic_operator(eg, p.m_e)?;
            let tn = kinetic_operator(ng, p.mass)?;
            terms.push(KronTerm {
                coeff: 1.0,
                photon: None,
                matter: Some(lift_tridiagonal(&te, dims, MatterAxis::Electron)?),
            });
            terms.push(KronTerm {
                coeff: 1.0,
                photon: None,
                matter: Some(lift_tridiagonal(&tn, dims, MatterAxis::Nucleus)?),
            });
        }
    }
    Ok(terms)
}

/// Lift a per-axis symmetric tridiagonal onto the flattened matter index:
/// the electron axis is the fast index (band offset 1, masked at block
/// boundaries), the nuclear axis is the slow index (band offset n_el).
fn lift_tridiagonal(t: &Tridiagonal, dims: Dims, axis: MatterAxis) -> Result<Factor> {
    let n_el = dims.n_electron.unwrap_or(1);
    let n_nuc = dims.n_nucleus.unwrap_or(1);
    let n_m = n_el * n_nuc;
    match axis {
        MatterAxis::Electron => {
            let mut diag = vec![0.0; n_m];
            let mut band = vec![0.0; n_m - 1];
            for j in 0..n_m {
                diag[j] = t.diag[j % n_el];
            }
            for (j, b) in band.iter_mut().enumerate() {
                let col = j % n_el;
                *b = if col == n_el - 1 { 0.0 } else { t.off[col] };
            }
            Factor::new(n_m, Some(diag), vec![(1, band)], vec![])
        }
        MatterAxis::Nucleus => {
            let mut diag = vec![0.0; n_m];
            let mut band = vec![0.0; n_m - n_el];
            for j in 0..n_m {
                diag[j] = t.diag[j / n_el];
            }
            for (j, b) in band.iter_mut().enumerate() {
                *b = t.off[j / n_el];
            }
            Factor::new(n_m, Some(diag), vec![(n_el, band)], vec![])
        }
    }
}

/// Lift the momentum stencil the same way; entries are imaginary.
fn lift_momentum(model: &ModelSpec, dims: Dims, axis: MatterAxis) -> Result<Factor> {
    let n_el = dims.n_electron.unwrap_or(1);
    let n_nuc = dims.n_nucleus.unwrap_or(1);
    let n_m = n_el * n_nuc;
    let grid = match axis {
        MatterAxis::Electron => model.electron_grid.as_ref().unwrap(),
        MatterAxis::Nucleus => model.nuclear_grid.as_ref().unwrap(),
    };
    let p: ImaginaryAntisymmetric = momentum_operator(grid);
    match axis {
        MatterAxis::Electron => {
            let mut band = vec![0.0; n_m - 1];
            for (j, b) in band.iter_mut().enumerate() {
                let col = j % n_el;
                *b = if col == n_el - 1 { 0.0 } else { p.off[col] };
            }
            Factor::new(n_m, None, vec![], vec![(1, band)])
        }
        MatterAxis::Nucleus => {
            let mut band = vec![0.0; n_m - n_el];
            for (j, b) in band.iter_mut().enumerate() {
                *b = p.off[j / n_el];
            }
            Factor::new(n_m, None, vec![], vec![(n_el, band)])
        }
    }
}

/// Matter-only spectrum with scattering-state flags.
#[derive(Debug, Clone)]
pub struct MatterSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<WaveFunction>,
    pub residual_norms: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations: usize,
    /// Flag per state: positive eigenvalue, i.e. a scattering-like box
    /// state rather than a bound state.
    pub scattering_flags: Vec<bool>,
    /// Minimum of the potential over the box boundary; states below it are
    /// genuinely bound.
    pub wall_potential_min: f64,
}

/// Bare matter operator (no photon) on the model grids.
pub fn bare_matter_operator(model: &ModelSpec) -> Result<(TensorOperator, Vec<f64>)> {
    model.validate()?;
    if matches!(model.kind, MatterKind::PinnedDipole { .. }) {
        return Err(Error::Domain(
            "the pinned-dipole model has no matter spectrum".into(),
        ));
    }
    let full = model.dims();
    let dims = Dims {
        n_fock: 1,
        n_nucleus: full.n_nucleus,
        n_electron: full.n_electron,
    };
    let mut terms = kinetic_terms(model, dims)?;
    let potential = model.potential_diag()?;
    terms.push(KronTerm {
        coeff: 1.0,
        photon: None,
        matter: Some(Factor::diagonal(potential.clone())),
    });
    Ok((TensorOperator::new(dims, ScalarField::Real, terms)?, potential))
}

/// Minimum of the matter potential over the boundary of the box.
pub fn wall_potential_min(model: &ModelSpec, potential: &[f64]) -> f64 {
    let dims = model.dims();
    let n_el = dims.n_electron.unwrap_or(1);
    let n_nuc = dims.n_nucleus.unwrap_or(1);
    let mut min = f64::INFINITY;
    for i_nuc in 0..n_nuc {
        for i_el in 0..n_el {
            let boundary = i_el == 0
                || i_el == n_el - 1
                || (n_nuc > 1 && (i_nuc == 0 || i_nuc == n_nuc - 1));
            if boundary {
                min = min.min(potential[i_nuc * n_el + i_el]);
            }
        }
    }
    min
}

/// Lowest `k` eigenpairs of the bare matter Hamiltonian.
pub fn bare_matter_spectrum(
    model: &ModelSpec,
    k: usize,
    opts: &EigenOptions,
) -> Result<MatterSpectrum> {
    let (op, potential) = bare_matter_operator(model)?;
    let mut eigen_opts = opts.clone();
    eigen_opts.k = k;
    let res = lowest_eigenpairs(&op, &eigen_opts)?;
    let scattering_flags = res.eigenvalues.iter().map(|&e| e > 0.0).collect();
    Ok(MatterSpectrum {
        scattering_flags,
        wall_potential_min: wall_potential_min(model, &potential),
        eigenvalues: res.eigenvalues,
        eigenvectors: res.eigenvectors,
        residual_norms: res.residual_norms,
        converged: res.converged,
        iterations: res.iterations,
    })
}

/// Extension criterion `lambda^2 / (4 eps_i^2)` estimating how quickly a
/// bound state at energy `eps_i < 0` destabilizes once the
/// self-polarization term is dropped.
pub fn extension_criterion(lambda: f64, epsilon_i: f64) -> Result<f64> {
    if epsilon_i >= 0.0 {
        return Err(Error::Domain(format!(
            "extension criterion needs a bound-state energy, got {epsilon_i}"
        )));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!(
            "extension criterion needs a nonnegative coupling, got {lambda}"
        )));
    }
    Ok(lambda * lambda / (4.0 * epsilon_i * epsilon_i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lanczos::dense_spectrum;
    use crate::photon::pinned_dipole_oracle;
    use crate::units::LengthUnit;

    fn tiny_shin_metiu(gauge: Gauge, n_fock: usize) -> ModelSpec {
        let eg = Grid1D::new(12.0, LengthUnit::Bohr, 1.2, 0.0).unwrap();
        let ng = Grid1D::new(4.0, LengthUnit::Bohr, 0.5, 0.0).unwrap();
        let fock = FockSpace::new(n_fock, 0.00231).unwrap();
        let coupling = CavityCoupling::from_g_ratio(0.00231, 0.40748).unwrap();
        ModelSpec::shin_metiu(ShinMetiuParams::default(), eg, ng, fock, coupling, gauge).unwrap()
    }

    fn tiny_hydrogen(gauge: Gauge, g_ratio: f64) -> ModelSpec {
        let eg = Grid1D::new(24.0, LengthUnit::Bohr, 2.0, 0.0).unwrap();
        let fock = FockSpace::new(12, 0.01368).unwrap();
        let coupling = CavityCoupling::from_g_ratio(0.01368, g_ratio).unwrap();
        ModelSpec::screened_hydrogen(
            ScreenedHydrogenParams::rydberg(),
            eg,
            fock,
            coupling,
            gauge,
        )
        .unwrap()
    }

    #[test]
    fn coupling_constructor_reproduces_paper_strengths() {
        let sm = CavityCoupling::from_g_ratio(0.00231, 0.40748).unwrap();
        assert!((sm.lambda() - 0.02770).abs() < 5e-6, "lambda = {}", sm.lambda());
        let ryd = CavityCoupling::from_g_ratio(0.01368, 0.006).unwrap();
        assert!((ryd.lambda() - 9.924e-4).abs() < 5e-7, "lambda = {}", ryd.lambda());
        // Round trip through from_lambda.
        let back = CavityCoupling::from_lambda(0.00231, sm.lambda()).unwrap();
        assert!((back.g_over_omega() - 0.40748).abs() < 1e-12);
    }

    #[test]
    fn extension_criterion_values() {
        assert_eq!(extension_criterion(0.0, -0.5).unwrap(), 0.0);
        let v = extension_criterion(2e-3, -0.01).unwrap();
        assert!((v - 4e-6 / (4.0 * 1e-4)).abs() < 1e-15);
        assert!(extension_criterion(1e-3, 0.2).is_err());
        assert!(extension_criterion(1e-3, 0.0).is_err());
        assert!(extension_criterion(-1e-3, -0.2).is_err());
    }

    #[test]
    fn decoupled_spectrum_is_a_tensor_sum() {
        // lambda = 0: eigenvalues are E_matter + n w, cross-checked against
        // the separate matter diagonalization.
        let mut model = tiny_hydrogen(Gauge::Length, 0.0);
        model.coupling = CavityCoupling::from_g_ratio(0.01368, 0.0).unwrap();
        let h = build_length_gauge(&model).unwrap();
        let coupled = dense_spectrum(h.operator(), 6).unwrap();

        let (matter_op, _) = bare_matter_operator(&model).unwrap();
        let matter = dense_spectrum(&matter_op, matter_op.total_dim()).unwrap();
        let omega = model.fock.omega();
        let mut sums = Vec::new();
        for n in 0..model.fock.n_fock() {
            for e in &matter.eigenvalues {
                sums.push(e + n as f64 * omega);
            }
        }
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for j in 0..6 {
            assert!(
                (coupled.eigenvalues[j] - sums[j]).abs() < 1e-10,
                "pair {j}: {} vs {}",
                coupled.eigenvalues[j],
                sums[j]
            );
        }
    }

    #[test]
    fn gauges_coincide_when_uncoupled() {
        let length = {
            let mut m = tiny_hydrogen(Gauge::Length, 0.0);
            m.coupling = CavityCoupling::from_g_ratio(0.01368, 0.0).unwrap();
            build_length_gauge(&m).unwrap()
        };
        let coulomb = {
            let mut m = tiny_hydrogen(Gauge::Coulomb, 0.0);
            m.coupling = CavityCoupling::from_g_ratio(0.01368, 0.0).unwrap();
            build_coulomb_gauge(&m).unwrap()
        };
        let a = dense_spectrum(length.operator(), 5).unwrap();
        let b = dense_spectrum(coulomb.operator(), 5).unwrap();
        for j in 0..5 {
            assert!((a.eigenvalues[j] - b.eigenvalues[j]).abs() < 1e-11);
        }
    }

    #[test]
    fn pinned_dipole_matches_analytic_oracle() {
        let omega = 0.00231;
        let coupling = CavityCoupling::from_lambda(omega, 0.0277).unwrap();
        let fock = FockSpace::new(32, omega).unwrap();
        let r0 = 1.0;
        for sp in [true, false] {
            let model = ModelSpec::pinned_dipole(
                r0,
                fock.clone(),
                coupling.clone().with_self_polarization(sp),
            )
            .unwrap();
            let h = build_length_gauge(&model).unwrap();
            let res = dense_spectrum(h.operator(), 1).unwrap();
            let oracle = pinned_dipole_oracle(r0, h.coupling());
            assert!(
                (res.eigenvalues[0] - oracle.ground_energy).abs() < 1e-10,
                "sp={sp}: {} vs {}",
                res.eigenvalues[0],
                oracle.ground_energy
            );
        }
    }

    #[test]
    fn hermitian_in_both_gauges() {
        use crate::linop::dot;
        use num_complex::Complex64;
        let h_l = build_length_gauge(&tiny_shin_metiu(Gauge::Length, 3)).unwrap();
        let n = h_l.operator().total_dim();
        let u: Vec<f64> = (0..n).map(|i| (0.13 * i as f64).sin()).collect();
        let v: Vec<f64> = (0..n).map(|i| (0.29 * i as f64).cos()).collect();
        let hu = h_l.operator().apply_alloc(&u).unwrap();
        let hv = h_l.operator().apply_alloc(&v).unwrap();
        assert!((dot(&u, &hv) - dot(&v, &hu)).abs() < 1e-12 * n as f64);

        let h_c = build_coulomb_gauge(&tiny_shin_metiu(Gauge::Coulomb, 3)).unwrap();
        let uc: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((0.17 * i as f64).sin(), (0.07 * i as f64).cos()))
            .collect();
        let vc: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((0.23 * i as f64).cos(), (0.11 * i as f64).sin()))
            .collect();
        let huc = h_c.operator().apply_alloc(&uc).unwrap();
        let hvc = h_c.operator().apply_alloc(&vc).unwrap();
        let lhs = dot(&uc, &hvc);
        let rhs = dot(&vc, &huc).conj();
        assert!((lhs - rhs).norm() < 1e-12 * n as f64);
    }

    #[test]
    fn lanczos_matches_dense_on_tiny_coupled_model() {
        let h = build_length_gauge(&tiny_shin_metiu(Gauge::Length, 8)).unwrap();
        let dense = dense_spectrum(h.operator(), 4).unwrap();
        let opts = EigenOptions {
            k: 4,
            tol: 1e-11,
            max_iter: 6000,
            seed: 17,
            max_basis: 60,
        };
        let iter = h.lowest_eigenpairs(&opts).unwrap();
        for j in 0..4 {
            assert!(
                (dense.eigenvalues[j] - iter.eigenvalues[j]).abs() < 1e-10,
                "pair {j}: {} vs {}",
                dense.eigenvalues[j],
                iter.eigenvalues[j]
            );
        }
    }

    #[test]
    fn gauge_mismatch_is_a_config_error() {
        let m = tiny_shin_metiu(Gauge::Length, 3);
        assert!(build_coulomb_gauge(&m).is_err());
        let m = tiny_shin_metiu(Gauge::Coulomb, 3);
        assert!(build_length_gauge(&m).is_err());
    }

    #[test]
    fn scalar_field_follows_the_gauge() {
        use crate::linop::ScalarField;
        let h = build_length_gauge(&tiny_shin_metiu(Gauge::Length, 3)).unwrap();
        assert_eq!(h.scalar_field(), ScalarField::Real);
        let h = build_coulomb_gauge(&tiny_shin_metiu(Gauge::Coulomb, 3)).unwrap();
        assert_eq!(h.scalar_field(), ScalarField::Complex);
    }

    #[test]
    fn shin_metiu_requires_both_grids() {
        let eg = Grid1D::new(12.0, LengthUnit::Bohr, 1.2, 0.0).unwrap();
        let fock = FockSpace::new(3, 0.00231).unwrap();
        let coupling = CavityCoupling::from_g_ratio(0.00231, 0.1).unwrap();
        let model = ModelSpec {
            kind: MatterKind::ShinMetiu(ShinMetiuParams::default()),
            electron_grid: Some(eg),
            nuclear_grid: None,
            fock,
            coupling,
            gauge: Gauge::Length,
            origin_shift: 0.0,
            subtract_vacuum: true,
        };
        assert!(model.validate().is_err());
    }

    #[test]
    fn nuclear_grid_must_avoid_pinned_nuclei() {
        // A nuclear box wide enough to reach +-L/2 = +-9.44865 with a point
        // exactly there is rejected.
        let params = ShinMetiuParams {
            l: 16.0,
            ..Default::default()
        };
        let eg = Grid1D::new(12.0, LengthUnit::Bohr, 1.2, 0.0).unwrap();
        let ng = Grid1D::new(16.0, LengthUnit::Bohr, 1.0, 0.0).unwrap();
        let fock = FockSpace::new(3, 0.00231).unwrap();
        let coupling = CavityCoupling::from_g_ratio(0.00231, 0.1).unwrap();
        let res = ModelSpec::shin_metiu(params, eg, ng, fock, coupling, Gauge::Length);
        assert!(res.is_err());
    }

    #[test]
    fn bare_matter_flags_positive_eigenvalues() {
        // A harmonic-like well shifted fully above zero: every state is
        // flagged scattering-like by the sign convention.
        let mut model = tiny_hydrogen(Gauge::Length, 0.0);
        model.coupling = CavityCoupling::from_g_ratio(0.01368, 0.0).unwrap();
        let spec = bare_matter_spectrum(&model, 3, &EigenOptions::default().with_tol(1e-10))
            .unwrap();
        // The screened hydrogen well is attractive: at least the ground
        // state is bound and unflagged.
        assert!(!spec.scattering_flags[0]);
        assert!(spec.eigenvalues[0] < 0.0);
        assert!(spec.wall_potential_min < 0.0);
    }
}
