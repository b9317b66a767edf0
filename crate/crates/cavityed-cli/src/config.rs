//! Run configuration: a TOML file with flat sections, `key = value` pairs
//! and `#` comments. Unknown keys are rejected; every length carries an
//! explicit unit; exactly one of `lambda` / `g_over_omega` is given and the
//! other is derived.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};

use cavityed::experiments::ModelTemplate;
use cavityed::grid::{ScreenedHydrogenParams, ShinMetiuParams};
use cavityed::lanczos::EigenOptions;
use cavityed::model::{CavityCoupling, Gauge, MatterKind};
use cavityed::units::LengthUnit;

/// A length with an explicit unit, written as `"<value> <bohr|angstrom>"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Length {
    pub value: f64,
    pub unit: LengthUnit,
}

impl Length {
    pub fn bohr(&self) -> f64 {
        self.unit.to_bohr(self.value)
    }

    pub fn angstrom(&self) -> f64 {
        cavityed::units::bohr_to_angstrom(self.bohr())
    }
}

impl FromStr for Length {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split_whitespace();
        let value: f64 = parts
            .next()
            .ok_or_else(|| "empty length".to_string())?
            .parse()
            .map_err(|e| format!("bad length value in {s:?}: {e}"))?;
        let unit = match parts.next() {
            Some("bohr") => LengthUnit::Bohr,
            Some("angstrom") => LengthUnit::Angstrom,
            Some(other) => return Err(format!("unknown length unit {other:?} (use bohr or angstrom)")),
            None => return Err(format!("length {s:?} is missing its unit (bohr or angstrom)")),
        };
        if parts.next().is_some() {
            return Err(format!("trailing tokens in length {s:?}"));
        }
        Ok(Length { value, unit })
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit {
            LengthUnit::Bohr => "bohr",
            LengthUnit::Angstrom => "angstrom",
        };
        write!(f, "{} {}", self.value, unit)
    }
}

impl Serialize for Length {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    BoxSweep,
    GaugeCompare,
    TranslationTest,
    FindResonance,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::BoxSweep => "box_sweep",
            ExperimentKind::GaugeCompare => "gauge_compare",
            ExperimentKind::TranslationTest => "translation_test",
            ExperimentKind::FindResonance => "find_resonance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToggleKind {
    SelfPolarization,
    Diamagnetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    /// box_sweep: ascending electron boxes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boxes: Option<Vec<Length>>,
    /// box_sweep: which quadratic term the sweep toggles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toggle: Option<ToggleKind>,
    /// Electron box for single-box experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electron_box: Option<Length>,
    /// translation_test: origin shifts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<Length>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    ShinMetiu,
    ScreenedHydrogen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeKind {
    Length,
    Coulomb,
}

impl From<GaugeKind> for Gauge {
    fn from(g: GaugeKind) -> Gauge {
        match g {
            GaugeKind::Length => Gauge::Length,
            GaugeKind::Coulomb => Gauge::Coulomb,
        }
    }
}

fn default_gauge() -> GaugeKind {
    GaugeKind::Length
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    #[serde(default = "default_gauge")]
    pub gauge: GaugeKind,
    /// Moving-nucleus charge (shin_metiu) or screened charge (hydrogen).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nuclear_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinned_separation: Option<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub softening_pinned: Option<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub softening_moving: Option<Length>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub electron_spacing: Length,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nuclear_box: Option<Length>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nuclear_spacing: Option<Length>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonSection {
    pub n_fock: usize,
    /// Mode frequency, hartree.
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_over_omega: Option<f64>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlagsSection {
    pub self_polarization: bool,
    pub diamagnetic: bool,
    pub subtract_vacuum: bool,
}

impl Default for FlagsSection {
    fn default() -> Self {
        FlagsSection {
            self_polarization: default_true(),
            diamagnetic: default_true(),
            subtract_vacuum: default_true(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    /// Number of lowest eigenpairs.
    pub k: usize,
    /// Residual tolerance, hartree.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub max_basis: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            k: 4,
            tol: 1e-9,
            max_iter: 20_000,
            seed: 1,
            max_basis: 160,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Directory receiving results.csv and manifest.json.
    pub directory: String,
}

/// Fully parsed run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentSection,
    pub model: ModelSection,
    pub grid: GridSection,
    pub photon: PhotonSection,
    pub coupling: CouplingSection,
    #[serde(default)]
    pub flags: FlagsSection,
    #[serde(default)]
    pub solver: SolverSection,
    pub output: OutputSection,
}

impl RunConfig {
    /// Parse and validate a config file; errors carry the TOML line number
    /// when the grammar or a key is at fault.
    pub fn parse(text: &str) -> anyhow::Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| anyhow!("{e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Scalar coupling strength: given directly or derived from g/w.
    pub fn lambda(&self) -> f64 {
        match (self.coupling.lambda, self.coupling.g_over_omega) {
            (Some(l), _) => l,
            (None, Some(g)) => g * (2.0 * self.photon.omega).sqrt(),
            (None, None) => unreachable!("validated"),
        }
    }

    pub fn g_over_omega(&self) -> f64 {
        self.lambda() / (2.0 * self.photon.omega).sqrt()
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        match (self.coupling.lambda, self.coupling.g_over_omega) {
            (None, None) => bail!("[coupling] needs one of `lambda` or `g_over_omega`"),
            (Some(l), Some(g)) => bail!(
                "[coupling] keys `lambda` ({l}) and `g_over_omega` ({g}) contradict: give exactly one, the other is derived"
            ),
            _ => {}
        }
        if self.photon.omega <= 0.0 {
            bail!("[photon] omega must be positive");
        }
        if self.photon.n_fock < 2 {
            bail!("[photon] n_fock must be at least 2");
        }
        if self.lambda() < 0.0 {
            bail!("[coupling] strength must be nonnegative");
        }
        if self.solver.k < 1 {
            bail!("[solver] k must be at least 1");
        }
        if self.solver.tol <= 0.0 {
            bail!("[solver] tol must be positive");
        }
        match self.model.kind {
            ModelKind::ShinMetiu => {
                if self.grid.nuclear_box.is_none() || self.grid.nuclear_spacing.is_none() {
                    bail!("[grid] shin_metiu needs nuclear_box and nuclear_spacing");
                }
            }
            ModelKind::ScreenedHydrogen => {
                if self.grid.nuclear_box.is_some() || self.grid.nuclear_spacing.is_some() {
                    bail!("[grid] screened_hydrogen has no nuclear grid");
                }
            }
        }
        match self.experiment.kind {
            ExperimentKind::BoxSweep => {
                let boxes = self
                    .experiment
                    .boxes
                    .as_ref()
                    .ok_or_else(|| anyhow!("[experiment] box_sweep needs `boxes`"))?;
                if boxes.is_empty() {
                    bail!("[experiment] box list is empty");
                }
                if self.experiment.toggle.is_none() {
                    bail!("[experiment] box_sweep needs `toggle`");
                }
            }
            ExperimentKind::GaugeCompare | ExperimentKind::FindResonance => {
                if self.experiment.electron_box.is_none() {
                    bail!(
                        "[experiment] {} needs `electron_box`",
                        self.experiment.kind.name()
                    );
                }
            }
            ExperimentKind::TranslationTest => {
                if self.experiment.electron_box.is_none() {
                    bail!("[experiment] translation_test needs `electron_box`");
                }
                if self
                    .experiment
                    .shifts
                    .as_ref()
                    .map(|s| s.is_empty())
                    .unwrap_or(true)
                {
                    bail!("[experiment] translation_test needs nonempty `shifts`");
                }
                if self.model.kind != ModelKind::ShinMetiu {
                    bail!("[experiment] translation_test runs on the shin_metiu model");
                }
            }
        }
        // Probe the matter parameters early for a friendlier error.
        self.matter_kind().context("bad [model] parameters")?;
        Ok(())
    }

    pub fn matter_kind(&self) -> anyhow::Result<MatterKind> {
        Ok(match self.model.kind {
            ModelKind::ShinMetiu => {
                let d = ShinMetiuParams::default();
                let p = ShinMetiuParams {
                    z: self.model.z.unwrap_or(d.z),
                    z_plus: self.model.z_plus.unwrap_or(d.z_plus),
                    z_minus: self.model.z_minus.unwrap_or(d.z_minus),
                    mass: self.model.nuclear_mass.unwrap_or(d.mass),
                    l: self.model.pinned_separation.map(|l| l.bohr()).unwrap_or(d.l),
                    r_c: self.model.softening_pinned.map(|l| l.bohr()).unwrap_or(d.r_c),
                    r_f: self.model.softening_moving.map(|l| l.bohr()).unwrap_or(d.r_f),
                    m_e: 1.0,
                };
                p.validate().map_err(|e| anyhow!("{e}"))?;
                MatterKind::ShinMetiu(p)
            }
            ModelKind::ScreenedHydrogen => {
                let p = ScreenedHydrogenParams {
                    z: self.model.z.unwrap_or(0.05),
                };
                p.validate().map_err(|e| anyhow!("{e}"))?;
                MatterKind::ScreenedHydrogen(p)
            }
        })
    }

    pub fn template(&self) -> anyhow::Result<ModelTemplate> {
        Ok(ModelTemplate {
            matter: self.matter_kind()?,
            gauge: self.model.gauge.into(),
            electron_spacing: self.grid.electron_spacing.bohr(),
            nuclear_box: match (&self.grid.nuclear_box, &self.grid.nuclear_spacing) {
                (Some(b), Some(s)) => Some((b.angstrom(), s.bohr())),
                _ => None,
            },
            n_fock: self.photon.n_fock,
            omega: self.photon.omega,
            lambda: self.lambda(),
            self_polarization: self.flags.self_polarization,
            diamagnetic: self.flags.diamagnetic,
            subtract_vacuum: self.flags.subtract_vacuum,
        })
    }

    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions {
            k: self.solver.k,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            seed: self.solver.seed,
            max_basis: self.solver.max_basis,
        }
    }

    /// The coupling constructed exactly as the engine sees it.
    pub fn cavity_coupling(&self) -> anyhow::Result<CavityCoupling> {
        let c = match (self.coupling.lambda, self.coupling.g_over_omega) {
            (Some(l), None) => CavityCoupling::from_lambda(self.photon.omega, l),
            (None, Some(g)) => CavityCoupling::from_g_ratio(self.photon.omega, g),
            _ => bail!("exactly one coupling key"),
        }
        .map_err(|e| anyhow!("{e}"))?;
        Ok(c
            .with_self_polarization(self.flags.self_polarization)
            .with_diamagnetic(self.flags.diamagnetic))
    }
}
