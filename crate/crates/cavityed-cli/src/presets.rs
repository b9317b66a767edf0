//! Shipped run configurations for the standard model systems.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "rydberg-resonance",
        summary: "Bound-state gap of the screened hydrogen model (sets the resonant mode frequency)",
        text: r#"# Screened hydrogen (Z = 1/20): gap between the two lowest bound states.
[experiment]
kind = "find_resonance"
electron_box = "200 angstrom"

[model]
kind = "screened_hydrogen"
z = 0.05

[grid]
electron_spacing = "0.8 bohr"

[photon]
n_fock = 2
omega = 0.01368

[coupling]
g_over_omega = 0.006

[solver]
k = 6
tol = 1e-10
max_iter = 20000
seed = 1
max_basis = 120

[output]
directory = "runs/rydberg-resonance"
"#,
    },
    Preset {
        name: "shinmetiu-resonance",
        summary: "Vibrational gap of the bare Shin-Metiu model",
        text: r#"# Shin-Metiu matter spectrum: first vibrational excitation.
[experiment]
kind = "find_resonance"
electron_box = "50 angstrom"

[model]
kind = "shin_metiu"

[grid]
electron_spacing = "0.8 bohr"
nuclear_box = "5.93 angstrom"
nuclear_spacing = "0.08 bohr"

[photon]
n_fock = 2
omega = 0.00231

[coupling]
g_over_omega = 0.40748

[solver]
k = 5
tol = 1e-9
max_iter = 30000
seed = 1
max_basis = 140

[output]
directory = "runs/shinmetiu-resonance"
"#,
    },
    Preset {
        name: "rydberg-box-sweep",
        summary: "Disintegration of weakly bound states without self-polarization, box sweep",
        text: r#"# Screened hydrogen coupled at g/w = 0.006, self-polarization on/off
# across box sizes: with the quadratic term the spectrum is box-stable,
# without it the excited states slide into scattering states.
[experiment]
kind = "box_sweep"
toggle = "self_polarization"
boxes = [
    "60 angstrom",
    "100 angstrom",
    "140 angstrom",
    "200 angstrom",
    "260 angstrom",
    "300 angstrom",
]

[model]
kind = "screened_hydrogen"
z = 0.05

[grid]
electron_spacing = "0.8 bohr"

[photon]
n_fock = 120
omega = 0.01368

[coupling]
g_over_omega = 0.006

[solver]
k = 4
tol = 1e-9
max_iter = 40000
seed = 1
max_basis = 160

[output]
directory = "runs/rydberg-box-sweep"
"#,
    },
    Preset {
        name: "shinmetiu-box-sweep",
        summary: "Shin-Metiu disintegration and dipole divergence without self-polarization",
        text: r#"# Ultra-strongly coupled Shin-Metiu model, self-polarization on/off.
# The 40 number states matter: the energy gained by a large dipole is
# capped by the photon truncation, so too few states delay the collapse.
[experiment]
kind = "box_sweep"
toggle = "self_polarization"
boxes = ["40 angstrom", "55 angstrom", "70 angstrom"]

[model]
kind = "shin_metiu"

[grid]
electron_spacing = "0.8 bohr"
nuclear_box = "5.93 angstrom"
nuclear_spacing = "0.08 bohr"

[photon]
n_fock = 40
omega = 0.00231

[coupling]
g_over_omega = 0.40748

[solver]
k = 2
tol = 1e-8
max_iter = 20000
seed = 1
max_basis = 90

[output]
directory = "runs/shinmetiu-box-sweep"
"#,
    },
    Preset {
        name: "shinmetiu-box-sweep-fast",
        summary: "Reduced Shin-Metiu sweep (20 number states) for quick qualitative runs",
        text: r#"# Coarse CI variant: qualitative only. The 20-state photon space
# saturates large displacements, pushing the collapse to larger boxes.
[experiment]
kind = "box_sweep"
toggle = "self_polarization"
boxes = ["30 angstrom", "45 angstrom"]

[model]
kind = "shin_metiu"

[grid]
electron_spacing = "0.8 bohr"
nuclear_box = "5.93 angstrom"
nuclear_spacing = "0.08 bohr"

[photon]
n_fock = 20
omega = 0.00231

[coupling]
g_over_omega = 0.40748

[solver]
k = 2
tol = 1e-8
max_iter = 15000
seed = 1
max_basis = 80

[output]
directory = "runs/shinmetiu-box-sweep-fast"
"#,
    },
    Preset {
        name: "rydberg-gauge-compare",
        summary: "Length vs Coulomb gauge eigenvalues with and without each quadratic term",
        text: r#"# Gauge agreement needs a fine grid: the central-difference momentum
# satisfies the f-sum rule only to O(dx^2), and the residual gauge split
# scales the same way.
[experiment]
kind = "gauge_compare"
electron_box = "44 angstrom"

[model]
kind = "screened_hydrogen"
z = 0.05

[grid]
electron_spacing = "0.09 bohr"

[photon]
n_fock = 24
omega = 0.01368

[coupling]
g_over_omega = 0.006

[solver]
k = 4
tol = 1e-9
max_iter = 60000
seed = 1
max_basis = 220

[output]
directory = "runs/rydberg-gauge-compare"
"#,
    },
    Preset {
        name: "rydberg-diamagnetic-shift",
        summary: "Photon-replica spacing with and without the A^2 term at a low mode frequency",
        text: r#"# Coulomb gauge at a ten-times-smaller frequency, same lambda: the
# diamagnetic term restores the bare replica spacing; dropping it leaves
# the matter-renormalized (red-shifted) spacing.
[experiment]
kind = "box_sweep"
toggle = "diamagnetic"
boxes = ["60 angstrom"]

[model]
kind = "screened_hydrogen"
z = 0.05
gauge = "coulomb"

[grid]
electron_spacing = "0.4 bohr"

[photon]
n_fock = 120
omega = 0.00137

[coupling]
lambda = 9.9245148e-4

[solver]
k = 2
tol = 1e-10
max_iter = 40000
seed = 1
max_basis = 160

[output]
directory = "runs/rydberg-diamagnetic-shift"
"#,
    },
    Preset {
        name: "shinmetiu-translation",
        summary: "Coordinate-system independence of the charged Shin-Metiu model",
        text: r#"# Slightly charged system (Z = +1.05): shift the coordinate origin,
# re-solve, translate back. With self-polarization the density difference
# vanishes; without it the difference grows with the shift.
[experiment]
kind = "translation_test"
electron_box = "59.27 angstrom"
shifts = ["0.5 bohr", "1 bohr", "2 bohr"]

[model]
kind = "shin_metiu"
z = 1.05

[grid]
electron_spacing = "0.8 bohr"
nuclear_box = "5.93 angstrom"
nuclear_spacing = "0.08 bohr"

[photon]
n_fock = 24
omega = 0.00231

[coupling]
g_over_omega = 0.40748

[solver]
k = 1
tol = 1e-11
max_iter = 30000
seed = 1
max_basis = 70

[output]
directory = "runs/shinmetiu-translation"
"#,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
