//! Uniform one-dimensional grids, finite-difference stencils and the model
//! potentials.
//!
//! Grids use hard-wall (Dirichlet) boundaries: the wavefunction is zero
//! outside the box, matching simulation-box disintegration studies where
//! scattering-like states fill the box.

use crate::error::{Error, Result};
use crate::units::LengthUnit;

/// Uniform 1D grid for a matter coordinate.
///
/// The point count is always odd so one point sits exactly on the declared
/// center; coordinates are generated relative to the center so the grid is
/// symmetric about it to the last bit (an explicit origin shift moves the
/// center itself).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    spacing: f64,
    center: f64,
}

impl Grid1D {
    /// Build a grid covering `box_length` around `center` with the given
    /// spacing (bohr). The point count is `floor(box/spacing) + 1`, reduced
    /// by one when even so that a point lies at the center.
    pub fn new(box_length: f64, unit: LengthUnit, spacing: f64, center: f64) -> Result<Self> {
        let box_bohr = unit.to_bohr(box_length);
        if spacing <= 0.0 || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive, got {spacing}"
            )));
        }
        if box_bohr <= 0.0 || !box_bohr.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "box length must be positive, got {box_bohr} bohr"
            )));
        }
        let mut n = (box_bohr / spacing).floor() as usize + 1;
        if n % 2 == 0 {
            n -= 1;
        }
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "box length {box_bohr} bohr holds fewer than 3 points at spacing {spacing} bohr"
            )));
        }
        Ok(Grid1D {
            n_points: n,
            spacing,
            center,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn origin(&self) -> f64 {
        self.coordinate(0)
    }

    /// Coordinate of point `i`, generated symmetrically about the center.
    pub fn coordinate(&self, i: usize) -> f64 {
        let mid = (self.n_points / 2) as isize;
        self.center + (i as isize - mid) as f64 * self.spacing
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.coordinate(i)).collect()
    }

    /// Same grid with the center moved by `mu` bohr.
    pub fn shifted(&self, mu: f64) -> Self {
        Grid1D {
            n_points: self.n_points,
            spacing: self.spacing,
            center: self.center + mu,
        }
    }

    /// Total extent covered by the points, in bohr.
    pub fn extent(&self) -> f64 {
        (self.n_points - 1) as f64 * self.spacing
    }
}

/// Real symmetric tridiagonal operator on a single grid.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// y = T x, Dirichlet boundaries.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
        }
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }
}

/// Purely imaginary antisymmetric tridiagonal operator: the matrix has
/// entries `M[i, i+1] = -i v[i]` and `M[i+1, i] = +i v[i]`, which is
/// Hermitian with `M^T = -M` on the imaginary part.
#[derive(Debug, Clone)]
pub struct ImaginaryAntisymmetric {
    pub off: Vec<f64>,
}

/// Second-difference kinetic operator `-(1/2m) d^2/dx^2` as a symmetric
/// tridiagonal factor (3-point stencil, hard walls).
pub fn kinetic_operator(grid: &Grid1D, mass: f64) -> Result<Tridiagonal> {
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive, got {mass}"
        )));
    }
    let n = grid.n_points();
    let h2 = grid.spacing() * grid.spacing();
    let t = 1.0 / (2.0 * mass * h2);
    Ok(Tridiagonal {
        diag: vec![2.0 * t; n],
        off: vec![-t; n - 1],
    })
}

/// Central-difference momentum operator `-i d/dx` (Hermitian, purely
/// imaginary entries, hard walls).
pub fn momentum_operator(grid: &Grid1D) -> ImaginaryAntisymmetric {
    let n = grid.n_points();
    let v = 1.0 / (2.0 * grid.spacing());
    ImaginaryAntisymmetric { off: vec![v; n - 1] }
}

/// Parameters of the Shin-Metiu model: a moving nucleus of charge `z`
/// between two pinned nuclei a distance `l` apart, plus one electron.
#[derive(Debug, Clone, PartialEq)]
pub struct ShinMetiuParams {
    /// Moving-nucleus charge.
    pub z: f64,
    /// Pinned charge at +L/2.
    pub z_plus: f64,
    /// Pinned charge at -L/2.
    pub z_minus: f64,
    /// Nuclear mass in electron masses.
    pub mass: f64,
    /// Pinned-nuclei separation, bohr.
    pub l: f64,
    /// Softening length of the electron / pinned-nucleus attraction, bohr.
    pub r_c: f64,
    /// Softening length of the electron / moving-nucleus attraction, bohr.
    pub r_f: f64,
    /// Electron mass (1 in atomic units).
    pub m_e: f64,
}

impl Default for ShinMetiuParams {
    fn default() -> Self {
        ShinMetiuParams {
            z: 1.0,
            z_plus: 1.0,
            z_minus: 1.05,
            mass: 1836.0,
            l: 18.8973,
            r_c: 2.8346,
            r_f: 3.7795,
            m_e: 1.0,
        }
    }
}

impl ShinMetiuParams {
    /// The charged variant used by the translation test.
    pub fn charged(z: f64) -> Self {
        ShinMetiuParams {
            z,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mass <= 0.0 || self.m_e <= 0.0 {
            return Err(Error::InvalidParameter("masses must be positive".into()));
        }
        if self.r_c <= 0.0 || self.r_f <= 0.0 {
            return Err(Error::InvalidParameter(
                "softening lengths must be positive".into(),
            ));
        }
        if self.l <= 0.0 {
            return Err(Error::InvalidParameter(
                "pinned-nuclei separation must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Screened soft-Coulomb hydrogen: `v(x) = -z / sqrt(x^2 + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenedHydrogenParams {
    pub z: f64,
}

impl ScreenedHydrogenParams {
    /// The weakly bound Rydberg-type variant, z = 1/20.
    pub fn rydberg() -> Self {
        ScreenedHydrogenParams { z: 1.0 / 20.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.z <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "screened charge must be positive, got {}",
                self.z
            )));
        }
        Ok(())
    }
}

/// `erf(|u|/r) / |u|` with the analytic coincidence limit `2/(sqrt(pi) r)`
/// at u = 0, so softened interactions stay grid-independent.
pub fn softened_coulomb(u: f64, r: f64) -> f64 {
    let au = u.abs();
    if au == 0.0 {
        2.0 / (std::f64::consts::PI.sqrt() * r)
    } else {
        libm::erf(au / r) / au
    }
}

/// Shin-Metiu potential energy surface V(x, X): repulsive bare Coulomb
/// terms between the moving nucleus and the pinned charges, attractive
/// softened terms binding the electron.
pub fn shinmetiu_potential(x: f64, big_x: f64, params: &ShinMetiuParams) -> Result<f64> {
    let half_l = 0.5 * params.l;
    let d_minus = big_x - half_l;
    let d_plus = big_x + half_l;
    if d_minus == 0.0 || d_plus == 0.0 {
        return Err(Error::Singularity(format!(
            "moving nucleus at X = {big_x} coincides with a pinned nucleus"
        )));
    }
    let v_nn = params.z * params.z_minus / d_minus.abs() + params.z * params.z_plus / d_plus.abs();
    let v_en = -params.z_minus * softened_coulomb(x - half_l, params.r_c)
        - params.z_plus * softened_coulomb(x + half_l, params.r_c);
    let v_en_x = -params.z * softened_coulomb(x - big_x, params.r_f);
    Ok(v_nn + v_en + v_en_x)
}

/// v(x) = -z / sqrt(x^2 + 1).
pub fn screened_hydrogen_potential(x: f64, params: &ScreenedHydrogenParams) -> f64 {
    -params.z / (x * x + 1.0).sqrt()
}
