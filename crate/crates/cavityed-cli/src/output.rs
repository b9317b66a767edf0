//! Result tables (CSV) and the run manifest (JSON), written atomically.
//!
//! CSV numbers use 17-significant-digit scientific notation so reruns diff
//! byte-for-byte; everything non-deterministic (wall times, residual
//! details, warnings) lives in the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::json;

use cavityed::experiments::{GaugeDeltaRow, SweepRow, TranslationRow};

/// 17 significant digits, scientific.
pub fn sci(x: f64) -> String {
    format!("{:.16e}", x)
}

fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

/// Rewrites separators/newlines so free-form messages stay single-cell.
fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n', '\r'], ";")
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn sweep_csv(rows: &[SweepRow], k: usize) -> String {
    let mut header: Vec<String> = vec![
        "box_angstrom".into(),
        "box_bohr".into(),
        "n_electron".into(),
        "n_nucleus".into(),
        "n_fock".into(),
        "toggle".into(),
        "toggle_on".into(),
    ];
    for j in 0..k {
        header.push(format!("eigenvalue_{j}_hartree"));
    }
    header.extend(
        [
            "residual_max",
            "converged",
            "dipole_r",
            "d_perp",
            "e_perp",
            "n_physical",
            "n_naive",
            "truncation_warning_count",
            "error",
        ]
        .map(String::from),
    );
    let mut out = header.join(",") + "\n";
    for r in rows {
        let mut cells: Vec<String> = vec![
            sci(r.box_angstrom),
            sci(r.box_bohr),
            r.n_electron.to_string(),
            r.n_nucleus.map(|n| n.to_string()).unwrap_or_default(),
            r.n_fock.to_string(),
            r.toggle.name().to_string(),
            r.toggle_on.to_string(),
        ];
        for j in 0..k {
            cells.push(r.eigenvalues.get(j).copied().map(sci).unwrap_or_default());
        }
        let residual_max = r
            .residual_norms
            .iter()
            .copied()
            .fold(f64::NAN, |a, b| if a.is_nan() { b } else { a.max(b) });
        cells.push(if r.residual_norms.is_empty() {
            String::new()
        } else {
            sci(residual_max)
        });
        cells.push(r.converged.to_string());
        cells.push(opt_sci(r.dipole_r));
        cells.push(opt_sci(r.d_perp));
        cells.push(opt_sci(r.e_perp));
        cells.push(opt_sci(r.n_physical));
        cells.push(opt_sci(r.n_naive));
        cells.push(r.truncation_warnings.len().to_string());
        cells.push(r.error.as_deref().map(sanitize).unwrap_or_default());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn gauge_csv(rows: &[GaugeDeltaRow]) -> String {
    let mut out = String::from(
        "variant,index,e_length_hartree,e_coulomb_hartree,delta_hartree,delta_ev,converged\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.variant,
            r.index,
            sci(r.e_length),
            sci(r.e_coulomb),
            sci(r.delta_hartree),
            sci(r.delta_ev),
            r.converged
        ));
    }
    out
}

pub fn translation_csv(rows: &[TranslationRow]) -> String {
    let mut out = String::from(
        "self_polarization,mu_bohr,max_density_diff,e0_hartree,dipole_r,e_perp,converged\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.self_polarization,
            sci(r.mu_bohr),
            sci(r.max_density_diff),
            sci(r.e0),
            sci(r.dipole_r),
            sci(r.e_perp),
            r.converged
        ));
    }
    out
}

pub fn resonance_csv(omega: f64, eps1: f64, eps2: f64, n_bound: usize) -> String {
    format!(
        "omega_hartree,epsilon_1_hartree,epsilon_2_hartree,n_bound\n{},{},{},{}\n",
        sci(omega),
        sci(eps1),
        sci(eps2),
        n_bound
    )
}

pub struct OutputPaths {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

pub fn paths(directory: &Path) -> OutputPaths {
    OutputPaths {
        csv: directory.join("results.csv"),
        manifest: directory.join("manifest.json"),
    }
}

/// Assemble and write the manifest: resolved config, derived constants,
/// software version, per-row diagnostics, wall times.
#[allow(clippy::too_many_arguments)]
pub fn write_manifest(
    path: &Path,
    config: &crate::config::RunConfig,
    rows: serde_json::Value,
    status: &str,
    total_wall_time_s: f64,
) -> anyhow::Result<()> {
    let manifest = json!({
        "software": {
            "name": "cavityed",
            "version": env!("CARGO_PKG_VERSION"),
        },
        "experiment": config.experiment.kind.name(),
        "config": config,
        "derived": {
            "lambda": config.lambda(),
            "g_over_omega": config.g_over_omega(),
            "omega_hartree": config.photon.omega,
            "electron_spacing_bohr": config.grid.electron_spacing.bohr(),
            "nuclear_spacing_bohr": config.grid.nuclear_spacing.map(|l| l.bohr()),
        },
        "rows": rows,
        "status": status,
        "total_wall_time_s": total_wall_time_s,
    });
    write_atomic(path, &(serde_json::to_string_pretty(&manifest)? + "\n"))
}
