//! Execute a parsed configuration and write its outputs.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use serde_json::json;

use cavityed::experiments::{
    box_sweep, find_resonance, gauge_compare, translation_test, QuadraticToggle,
};

use crate::config::{ExperimentKind, RunConfig, ToggleKind};
use crate::output;

/// Process exit codes: 0 ok, 2 partial convergence, 3 config error,
/// 4 runtime error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    PartialConvergence,
}

impl RunStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::PartialConvergence => 2,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::PartialConvergence => "partial_convergence",
        }
    }
}

/// Run the configured experiment; results land in the configured output
/// directory resolved against `base_dir`.
pub fn run(config: &RunConfig, base_dir: &Path) -> anyhow::Result<RunStatus> {
    let started = Instant::now();
    let dir = base_dir.join(&config.output.directory);
    let paths = output::paths(&dir);
    let template = config.template()?;
    let opts = config.eigen_options();

    let (csv, rows_json, status) = match config.experiment.kind {
        ExperimentKind::BoxSweep => {
            let boxes: Vec<f64> = config
                .experiment
                .boxes
                .as_ref()
                .unwrap()
                .iter()
                .map(|l| l.angstrom())
                .collect();
            let toggle = match config.experiment.toggle.unwrap() {
                ToggleKind::SelfPolarization => QuadraticToggle::SelfPolarization,
                ToggleKind::Diamagnetic => QuadraticToggle::Diamagnetic,
            };
            let rows = box_sweep(&template, &boxes, toggle, &opts).map_err(|e| anyhow!("{e}"))?;
            let ok = rows.iter().all(|r| r.converged && r.error.is_none());
            let rows_json: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "box_angstrom": r.box_angstrom,
                        "toggle_on": r.toggle_on,
                        "n_electron": r.n_electron,
                        "n_nucleus": r.n_nucleus,
                        "converged": r.converged,
                        "iterations": r.iterations,
                        "residual_norms": r.residual_norms,
                        "truncation_warnings": r.truncation_warnings,
                        "wall_time_s": r.wall_time_s,
                        "error": r.error,
                    })
                })
                .collect();
            (
                output::sweep_csv(&rows, opts.k),
                json!(rows_json),
                if ok { RunStatus::Ok } else { RunStatus::PartialConvergence },
            )
        }
        ExperimentKind::GaugeCompare => {
            let box_a = config.experiment.electron_box.unwrap().angstrom();
            let rows = gauge_compare(&template, box_a, &opts).map_err(|e| anyhow!("{e}"))?;
            let ok = rows.iter().all(|r| r.converged);
            let rows_json: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "variant": r.variant,
                        "index": r.index,
                        "delta_hartree": r.delta_hartree,
                        "converged": r.converged,
                        "truncation_warnings": r.truncation_warnings,
                    })
                })
                .collect();
            (
                output::gauge_csv(&rows),
                json!(rows_json),
                if ok { RunStatus::Ok } else { RunStatus::PartialConvergence },
            )
        }
        ExperimentKind::TranslationTest => {
            let box_a = config.experiment.electron_box.unwrap().angstrom();
            let shifts: Vec<f64> = config
                .experiment
                .shifts
                .as_ref()
                .unwrap()
                .iter()
                .map(|l| l.bohr())
                .collect();
            let rows =
                translation_test(&template, box_a, &shifts, &opts).map_err(|e| anyhow!("{e}"))?;
            let ok = rows.iter().all(|r| r.converged);
            let rows_json: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "self_polarization": r.self_polarization,
                        "mu_bohr": r.mu_bohr,
                        "converged": r.converged,
                        "iterations": r.iterations,
                        "wall_time_s": r.wall_time_s,
                        "truncation_warning": r.truncation_warning,
                    })
                })
                .collect();
            (
                output::translation_csv(&rows),
                json!(rows_json),
                if ok { RunStatus::Ok } else { RunStatus::PartialConvergence },
            )
        }
        ExperimentKind::FindResonance => {
            let box_a = config.experiment.electron_box.unwrap().angstrom();
            let model = template.model(box_a).map_err(|e| anyhow!("{e}"))?;
            let r = find_resonance(&model, &opts).map_err(|e| anyhow!("{e}"))?;
            (
                output::resonance_csv(r.omega, r.epsilon_1, r.epsilon_2, r.n_bound),
                json!([{ "omega": r.omega, "n_bound": r.n_bound }]),
                RunStatus::Ok,
            )
        }
    };

    output::write_atomic(&paths.csv, &csv)
        .with_context(|| format!("writing {}", paths.csv.display()))?;
    output::write_manifest(
        &paths.manifest,
        config,
        rows_json,
        status.label(),
        started.elapsed().as_secs_f64(),
    )?;
    Ok(status)
}
