//! Unit conventions and conversions.
//!
//! Everything internal is in Hartree atomic units. Input lengths may be
//! given in bohr or angstrom; energies are reported in hartree with an
//! optional electronvolt conversion.

/// 1 angstrom in bohr.
pub const BOHR_PER_ANGSTROM: f64 = 1.8897261246;

/// 1 hartree in electronvolt.
pub const EV_PER_HARTREE: f64 = 27.211386;

pub fn angstrom_to_bohr(value: f64) -> f64 {
    value * BOHR_PER_ANGSTROM
}

pub fn bohr_to_angstrom(value: f64) -> f64 {
    value / BOHR_PER_ANGSTROM
}

pub fn hartree_to_ev(value: f64) -> f64 {
    value * EV_PER_HARTREE
}

/// Length unit accepted on input boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    Bohr,
    Angstrom,
}

impl LengthUnit {
    pub fn to_bohr(self, value: f64) -> f64 {
        match self {
            LengthUnit::Bohr => value,
            LengthUnit::Angstrom => angstrom_to_bohr(value),
        }
    }
}
