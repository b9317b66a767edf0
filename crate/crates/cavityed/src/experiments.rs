//! Reproducible experiment recipes: box-size sweeps, gauge comparison,
//! the translation-invariance test and the resonance finder.
//!
//! Every experiment is a pure function of its declared configuration;
//! rerunning with the same seed reproduces all table values bit-for-bit
//! (wall times excepted).

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::lanczos::EigenOptions;
use crate::model::{
    bare_matter_spectrum, build_hamiltonian, CavityCoupling, Gauge, MatterKind,
    ModelSpec,
};
use crate::observables::{evaluate, reduced_density, truncation_check, Subsystem};
use crate::photon::FockSpace;
use crate::units::{hartree_to_ev, LengthUnit};

/// Everything that stays fixed across a sweep; the electron box and the
/// quadratic-term flags vary per row.
#[derive(Debug, Clone)]
pub struct ModelTemplate {
    pub matter: MatterKind,
    pub gauge: Gauge,
    /// Electron grid spacing, bohr.
    pub electron_spacing: f64,
    /// Nuclear box (angstrom) and spacing (bohr), Shin-Metiu only.
    pub nuclear_box: Option<(f64, f64)>,
    pub n_fock: usize,
    pub omega: f64,
    pub lambda: f64,
    pub self_polarization: bool,
    pub diamagnetic: bool,
    pub subtract_vacuum: bool,
}

impl ModelTemplate {
    /// Instantiate the model at a given electron box size (angstrom).
    pub fn model(&self, electron_box_angstrom: f64) -> Result<ModelSpec> {
        let fock = FockSpace::new(self.n_fock, self.omega)?;
        let coupling = CavityCoupling::from_lambda(self.omega, self.lambda)?
            .with_self_polarization(self.self_polarization)
            .with_diamagnetic(self.diamagnetic);
        let electron_grid = Grid1D::new(
            electron_box_angstrom,
            LengthUnit::Angstrom,
            self.electron_spacing,
            0.0,
        )?;
        let model = match &self.matter {
            MatterKind::ScreenedHydrogen(p) => ModelSpec::screened_hydrogen(
                p.clone(),
                electron_grid,
                fock,
                coupling,
                self.gauge,
            )?,
            MatterKind::ShinMetiu(p) => {
                let (nbox, nspacing) = self.nuclear_box.ok_or_else(|| {
                    Error::Config("Shin-Metiu template needs a nuclear box".into())
                })?;
                let nuclear_grid =
                    Grid1D::new(nbox, LengthUnit::Angstrom, nspacing, 0.0)?;
                ModelSpec::shin_metiu(
                    p.clone(),
                    electron_grid,
                    nuclear_grid,
                    fock,
                    coupling,
                    self.gauge,
                )?
            }
            MatterKind::PinnedDipole { .. } => {
                return Err(Error::Config(
                    "box experiments need a grid-based matter model".into(),
                ))
            }
        };
        Ok(model.with_subtract_vacuum(self.subtract_vacuum))
    }

    fn with_flags(&self, self_polarization: bool, diamagnetic: bool) -> Self {
        ModelTemplate {
            self_polarization,
            diamagnetic,
            ..self.clone()
        }
    }
}

/// Which quadratic term a sweep toggles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticToggle {
    SelfPolarization,
    Diamagnetic,
}

impl QuadraticToggle {
    pub fn name(&self) -> &'static str {
        match self {
            QuadraticToggle::SelfPolarization => "self_polarization",
            QuadraticToggle::Diamagnetic => "diamagnetic",
        }
    }
}

/// One (box, flag) result of a box sweep. Observables are filled for
/// length-gauge rows; Coulomb-gauge rows report eigenvalues only.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub box_angstrom: f64,
    pub box_bohr: f64,
    pub n_electron: usize,
    pub n_nucleus: Option<usize>,
    pub n_fock: usize,
    pub toggle: QuadraticToggle,
    pub toggle_on: bool,
    pub eigenvalues: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub dipole_r: Option<f64>,
    pub d_perp: Option<f64>,
    pub e_perp: Option<f64>,
    pub n_physical: Option<f64>,
    pub n_naive: Option<f64>,
    pub truncation_warnings: Vec<String>,
    pub wall_time_s: f64,
    pub error: Option<String>,
}

fn failed_row(
    box_angstrom: f64,
    toggle: QuadraticToggle,
    toggle_on: bool,
    n_fock: usize,
    err: &Error,
    started: Instant,
) -> SweepRow {
    SweepRow {
        box_angstrom,
        box_bohr: LengthUnit::Angstrom.to_bohr(box_angstrom),
        n_electron: 0,
        n_nucleus: None,
        n_fock,
        toggle,
        toggle_on,
        eigenvalues: Vec::new(),
        residual_norms: Vec::new(),
        converged: false,
        iterations: 0,
        dipole_r: None,
        d_perp: None,
        e_perp: None,
        n_physical: None,
        n_naive: None,
        truncation_warnings: Vec::new(),
        wall_time_s: started.elapsed().as_secs_f64(),
        error: Some(err.to_string()),
    }
}

/// Solve the template across ascending box sizes with the chosen quadratic
/// term on and off. Per-row failures are recorded in the row and the sweep
/// continues.
pub fn box_sweep(
    template: &ModelTemplate,
    boxes_angstrom: &[f64],
    toggle: QuadraticToggle,
    opts: &EigenOptions,
) -> Result<Vec<SweepRow>> {
    if boxes_angstrom.is_empty() {
        return Err(Error::InvalidParameter("empty box list".into()));
    }
    if boxes_angstrom.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "box list must be strictly ascending".into(),
        ));
    }
    let mut rows = Vec::with_capacity(2 * boxes_angstrom.len());
    for &box_a in boxes_angstrom {
        for on in [true, false] {
            rows.push(sweep_row(template, box_a, toggle, on, opts));
        }
    }
    Ok(rows)
}

fn sweep_row(
    template: &ModelTemplate,
    box_a: f64,
    toggle: QuadraticToggle,
    on: bool,
    opts: &EigenOptions,
) -> SweepRow {
    let started = Instant::now();
    let t = match toggle {
        QuadraticToggle::SelfPolarization => template.with_flags(on, template.diamagnetic),
        QuadraticToggle::Diamagnetic => template.with_flags(template.self_polarization, on),
    };
    let model = match t.model(box_a) {
        Ok(m) => m,
        Err(e) => return failed_row(box_a, toggle, on, template.n_fock, &e, started),
    };
    let h = match build_hamiltonian(&model) {
        Ok(h) => h,
        Err(e) => return failed_row(box_a, toggle, on, template.n_fock, &e, started),
    };
    let spectrum = match h.lowest_eigenpairs(opts) {
        Ok(s) => s,
        Err(e) => return failed_row(box_a, toggle, on, template.n_fock, &e, started),
    };
    let dims = h.dims();
    let mut warnings = Vec::new();
    for (j, psi) in spectrum.eigenvectors.iter().enumerate() {
        if let Some(w) = truncation_check(&h, psi, &format!("state {j}")) {
            warnings.push(w);
        }
    }
    let observables = if h.gauge() == Gauge::Length {
        evaluate(&h, &spectrum.eigenvectors[0]).ok()
    } else {
        None
    };
    SweepRow {
        box_angstrom: box_a,
        box_bohr: LengthUnit::Angstrom.to_bohr(box_a),
        n_electron: dims.n_electron.unwrap_or(1),
        n_nucleus: dims.n_nucleus,
        n_fock: dims.n_fock,
        toggle,
        toggle_on: on,
        eigenvalues: spectrum.eigenvalues.clone(),
        residual_norms: spectrum.residual_norms.clone(),
        converged: spectrum.all_converged(),
        iterations: spectrum.iterations,
        dipole_r: observables.as_ref().map(|o| o.dipole_r),
        d_perp: observables.as_ref().map(|o| o.d_perp),
        e_perp: observables.as_ref().map(|o| o.e_perp),
        n_physical: observables.as_ref().map(|o| o.n_physical),
        n_naive: observables.as_ref().map(|o| o.n_naive),
        truncation_warnings: warnings,
        wall_time_s: started.elapsed().as_secs_f64(),
        error: None,
    }
}

/// One eigenindex of a gauge comparison.
#[derive(Debug, Clone)]
pub struct GaugeDeltaRow {
    /// "both_on", "self_polarization_off" or "diamagnetic_off".
    pub variant: &'static str,
    pub index: usize,
    pub e_length: f64,
    pub e_coulomb: f64,
    pub delta_hartree: f64,
    pub delta_ev: f64,
    pub converged: bool,
    /// Fock-truncation warnings for this pair of eigenvectors.
    pub truncation_warnings: Vec<String>,
}

pub const GAUGE_VARIANTS: [&str; 3] = ["both_on", "self_polarization_off", "diamagnetic_off"];

/// Compare length- and Coulomb-gauge eigenvalues at matched grids and
/// truncations: both quadratic terms on, then each one dropped.
pub fn gauge_compare(
    template: &ModelTemplate,
    electron_box_angstrom: f64,
    opts: &EigenOptions,
) -> Result<Vec<GaugeDeltaRow>> {
    let mut rows = Vec::new();
    for variant in GAUGE_VARIANTS {
        let (sp, dia) = match variant {
            "both_on" => (true, true),
            "self_polarization_off" => (false, true),
            "diamagnetic_off" => (true, false),
            _ => unreachable!(),
        };
        let mut length_t = template.with_flags(sp, dia);
        length_t.gauge = Gauge::Length;
        let mut coulomb_t = template.with_flags(sp, dia);
        coulomb_t.gauge = Gauge::Coulomb;

        let h_l = build_hamiltonian(&length_t.model(electron_box_angstrom)?)?;
        let h_c = build_hamiltonian(&coulomb_t.model(electron_box_angstrom)?)?;
        let s_l = h_l.lowest_eigenpairs(opts)?;
        let s_c = h_c.lowest_eigenpairs(opts)?;
        for j in 0..opts.k {
            let delta = (s_l.eigenvalues[j] - s_c.eigenvalues[j]).abs();
            let mut warnings = Vec::new();
            for (h, s, tag) in [(&h_l, &s_l, "length"), (&h_c, &s_c, "coulomb")] {
                if let Some(w) =
                    truncation_check(h, &s.eigenvectors[j], &format!("{variant} {tag} state {j}"))
                {
                    warnings.push(w);
                }
            }
            rows.push(GaugeDeltaRow {
                variant,
                index: j,
                e_length: s_l.eigenvalues[j],
                e_coulomb: s_c.eigenvalues[j],
                delta_hartree: delta,
                delta_ev: hartree_to_ev(delta),
                converged: s_l.converged[j] && s_c.converged[j],
                truncation_warnings: warnings,
            });
        }
    }
    Ok(rows)
}

/// One row of the translation-invariance test.
#[derive(Debug, Clone)]
pub struct TranslationRow {
    pub self_polarization: bool,
    pub mu_bohr: f64,
    /// max_x |n^mu(x - mu) - n(x)| over the electron grid.
    pub max_density_diff: f64,
    pub e0: f64,
    pub dipole_r: f64,
    pub e_perp: f64,
    pub converged: bool,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub truncation_warning: Option<String>,
}

/// Shift the coordinate-system origin by each `mu` (grids and pinned
/// charges move together, the dipole picks up the net-charge offset),
/// re-solve and compare the back-translated electron density with the
/// unshifted one. Runs with the self-polarization term on and off.
pub fn translation_test(
    template: &ModelTemplate,
    electron_box_angstrom: f64,
    shifts_bohr: &[f64],
    opts: &EigenOptions,
) -> Result<Vec<TranslationRow>> {
    if !matches!(template.matter, MatterKind::ShinMetiu(_)) {
        return Err(Error::Config(
            "the translation test is defined for the Shin-Metiu model".into(),
        ));
    }
    let probe = template.model(electron_box_angstrom)?;
    let margin = 0.25 * probe.electron_grid.as_ref().unwrap().extent();
    for &mu in shifts_bohr {
        if !mu.is_finite() || mu.abs() > margin {
            return Err(Error::InvalidParameter(format!(
                "shift {mu} bohr exceeds the box margin {margin:.2} bohr"
            )));
        }
    }

    let mut rows = Vec::new();
    let mut solver = opts.clone();
    solver.k = 1;
    for sp in [true, false] {
        let t = template.with_flags(sp, template.diamagnetic);
        let base_model = t.model(electron_box_angstrom)?;
        let started = Instant::now();
        let (base_density, base_row) = solve_translation_point(&base_model, 0.0, sp, &solver, started)?;
        rows.push(base_row);
        for &mu in shifts_bohr {
            let model = t.model(electron_box_angstrom)?.with_origin_shift(mu)?;
            let started = Instant::now();
            let (density, mut row) = solve_translation_point(&model, mu, sp, &solver, started)?;
            // The grids moved with the system, so back-translation is the
            // identity on indices.
            let mut diff: f64 = 0.0;
            for (a, b) in density.iter().zip(base_density.iter()) {
                diff = diff.max((a - b).abs());
            }
            row.max_density_diff = diff;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn solve_translation_point(
    model: &ModelSpec,
    mu: f64,
    sp: bool,
    opts: &EigenOptions,
    started: Instant,
) -> Result<(Vec<f64>, TranslationRow)> {
    let h = build_hamiltonian(model)?;
    let spectrum = h.lowest_eigenpairs(opts)?;
    let psi = &spectrum.eigenvectors[0];
    let density = reduced_density(&h, psi, Subsystem::Electron)?;
    let obs = evaluate(&h, psi)?;
    let label = format!("sp={sp} mu={mu}");
    Ok((
        density,
        TranslationRow {
            self_polarization: sp,
            mu_bohr: mu,
            max_density_diff: 0.0,
            e0: spectrum.eigenvalues[0],
            dipole_r: obs.dipole_r,
            e_perp: obs.e_perp,
            converged: spectrum.all_converged(),
            iterations: spectrum.iterations,
            wall_time_s: started.elapsed().as_secs_f64(),
            truncation_warning: truncation_check(&h, psi, &label),
        },
    ))
}

/// Resonance condition: the gap between the two lowest bound states.
#[derive(Debug, Clone)]
pub struct Resonance {
    pub omega: f64,
    pub epsilon_1: f64,
    pub epsilon_2: f64,
    pub n_bound: usize,
}

/// Extract `eps_2 - eps_1` from a matter spectrum; a state counts as bound
/// when it lies below the minimum of the potential on the box boundary.
pub fn resonance_from_spectrum(eigenvalues: &[f64], wall_potential_min: f64) -> Result<Resonance> {
    let bound: Vec<f64> = eigenvalues
        .iter()
        .copied()
        .filter(|&e| e < wall_potential_min)
        .collect();
    if bound.len() < 2 {
        return Err(Error::Domain(format!(
            "resonance needs at least 2 bound states, found {}",
            bound.len()
        )));
    }
    Ok(Resonance {
        omega: bound[1] - bound[0],
        epsilon_1: bound[0],
        epsilon_2: bound[1],
        n_bound: bound.len(),
    })
}

/// Mode frequency resonant with the first matter excitation, from the bare
/// matter spectrum on the model grids.
pub fn find_resonance(model: &ModelSpec, opts: &EigenOptions) -> Result<Resonance> {
    let spectrum = bare_matter_spectrum(model, opts.k.max(4), opts)?;
    resonance_from_spectrum(&spectrum.eigenvalues, spectrum.wall_potential_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ScreenedHydrogenParams, ShinMetiuParams};

    fn tiny_hydrogen_template(lambda: f64) -> ModelTemplate {
        ModelTemplate {
            matter: MatterKind::ScreenedHydrogen(ScreenedHydrogenParams::rydberg()),
            gauge: Gauge::Length,
            electron_spacing: 2.0,
            nuclear_box: None,
            n_fock: 8,
            omega: 0.01368,
            lambda,
            self_polarization: true,
            diamagnetic: true,
            subtract_vacuum: true,
        }
    }

    fn tiny_shinmetiu_template() -> ModelTemplate {
        ModelTemplate {
            matter: MatterKind::ShinMetiu(ShinMetiuParams::charged(1.05)),
            gauge: Gauge::Length,
            electron_spacing: 1.6,
            nuclear_box: Some((2.65, 0.4)),
            n_fock: 12,
            omega: 0.00231,
            lambda: 0.0277,
            self_polarization: true,
            diamagnetic: true,
            subtract_vacuum: true,
        }
    }

    fn quick_opts(k: usize) -> EigenOptions {
        EigenOptions {
            k,
            tol: 1e-9,
            max_iter: 4000,
            seed: 7,
            max_basis: 60,
        }
    }

    #[test]
    fn sweep_requires_ascending_boxes() {
        let t = tiny_hydrogen_template(0.0);
        assert!(box_sweep(&t, &[], QuadraticToggle::SelfPolarization, &quick_opts(1)).is_err());
        assert!(box_sweep(
            &t,
            &[20.0, 15.0],
            QuadraticToggle::SelfPolarization,
            &quick_opts(1)
        )
        .is_err());
    }

    #[test]
    fn uncoupled_sweep_rows_identical_for_both_flags() {
        let t = tiny_hydrogen_template(0.0);
        let rows = box_sweep(
            &t,
            &[12.0, 16.0],
            QuadraticToggle::SelfPolarization,
            &quick_opts(2),
        )
        .unwrap();
        assert_eq!(rows.len(), 4);
        for pair in rows.chunks(2) {
            let (on, off) = (&pair[0], &pair[1]);
            assert!(on.toggle_on && !off.toggle_on);
            for j in 0..on.eigenvalues.len() {
                assert_eq!(on.eigenvalues[j].to_bits(), off.eigenvalues[j].to_bits());
            }
            assert_eq!(
                on.dipole_r.unwrap().to_bits(),
                off.dipole_r.unwrap().to_bits()
            );
        }
    }

    #[test]
    fn sweep_reruns_bit_identically() {
        let t = tiny_hydrogen_template(5e-4);
        let a = box_sweep(&t, &[14.0], QuadraticToggle::SelfPolarization, &quick_opts(2)).unwrap();
        let b = box_sweep(&t, &[14.0], QuadraticToggle::SelfPolarization, &quick_opts(2)).unwrap();
        for (ra, rb) in a.iter().zip(b.iter()) {
            for j in 0..ra.eigenvalues.len() {
                assert_eq!(ra.eigenvalues[j].to_bits(), rb.eigenvalues[j].to_bits());
            }
            assert_eq!(ra.e_perp.unwrap().to_bits(), rb.e_perp.unwrap().to_bits());
        }
    }

    #[test]
    fn gauge_compare_uncoupled_deltas_at_solver_tolerance() {
        let t = tiny_hydrogen_template(0.0);
        let rows = gauge_compare(&t, 16.0, &quick_opts(3)).unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows {
            assert!(row.delta_hartree < 1e-8, "{}: {}", row.variant, row.delta_hartree);
        }
    }

    #[test]
    fn translation_zero_shift_is_exactly_zero() {
        let t = tiny_shinmetiu_template();
        let mut opts = quick_opts(1);
        opts.tol = 1e-12;
        opts.max_iter = 20_000;
        let rows = translation_test(&t, 8.0, &[0.7], &opts).unwrap();
        // Rows: (sp on: mu=0, mu=0.7), (sp off: mu=0, mu=0.7).
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].max_density_diff, 0.0);
        assert_eq!(rows[2].max_density_diff, 0.0);
        // Self-polarized rows are translation invariant: density, energy,
        // field, and the dipole up to the net-charge offset (Z-1) mu.
        assert!(rows[1].max_density_diff < 1e-8, "{}", rows[1].max_density_diff);
        assert!((rows[1].e0 - rows[0].e0).abs() < 1e-8);
        assert!(rows[1].e_perp.abs() < 1e-8);
        let offset = 0.05 * rows[1].mu_bohr;
        assert!((rows[1].dipole_r - rows[0].dipole_r - offset).abs() < 1e-7);
        // Without self-polarization the charged system notices the shift.
        assert!(rows[3].max_density_diff > rows[1].max_density_diff);
    }

    #[test]
    fn translation_rejects_shift_beyond_margin() {
        let t = tiny_shinmetiu_template();
        let err = translation_test(&t, 8.0, &[100.0], &quick_opts(1));
        assert!(err.is_err());
    }

    #[test]
    fn resonance_helpers() {
        // Harmonic-well levels: exact spacing, everything bound below the
        // wall value.
        let levels = [0.5, 1.5, 2.5, 3.5];
        let r = resonance_from_spectrum(&levels, 1e6).unwrap();
        assert!((r.omega - 1.0).abs() < 1e-15);
        assert_eq!(r.n_bound, 4);
        // Fewer than two bound states is a domain error.
        assert!(resonance_from_spectrum(&levels, 1.0).is_err());
    }

    #[test]
    fn harmonic_well_spacing_via_bare_solver() {
        // Internal sanity model v = x^2/2 on a box: level spacing 1 + O(dx^2).
        use crate::linop::{Dims, Factor, KronTerm, ScalarField, TensorOperator};
        use crate::lanczos::lowest_eigenpairs;
        let n = 161;
        let dx = 0.1;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 - 80.0) * dx).collect();
        let t = 1.0 / (2.0 * dx * dx);
        let diag: Vec<f64> = xs.iter().map(|&x| 2.0 * t + 0.5 * x * x).collect();
        let op = TensorOperator::new(
            Dims {
                n_fock: 1,
                n_nucleus: None,
                n_electron: Some(n),
            },
            ScalarField::Real,
            vec![KronTerm {
                coeff: 1.0,
                photon: None,
                matter: Some(Factor::new(n, Some(diag), vec![(1, vec![-t; n - 1])], vec![]).unwrap()),
            }],
        )
        .unwrap();
        let res = lowest_eigenpairs(&op, &quick_opts(2)).unwrap();
        let spacing = res.eigenvalues[1] - res.eigenvalues[0];
        assert!((spacing - 1.0).abs() < 5.0 * dx * dx, "spacing {spacing}");
    }
}
