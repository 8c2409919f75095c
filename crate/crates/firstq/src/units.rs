//! Unit conventions and conversion constants.
//!
//! All internal computation is in Hartree atomic units (lengths in bohr,
//! energies in hartree, masses in electron masses, ħ = 1). Ångström and
//! femtoseconds are accepted at the boundary only.

/// 1 Å in bohr.
pub const BOHR_PER_ANGSTROM: f64 = 1.889_725_988_6;

/// 1 fs in atomic time units.
pub const AU_PER_FS: f64 = 41.341_374_575_751;

/// Boltzmann constant in hartree per kelvin.
pub const KB_HARTREE_PER_KELVIN: f64 = 3.166_811_563e-6;

/// 1 atomic mass unit in electron masses.
pub const ELECTRON_MASSES_PER_AMU: f64 = 1_822.888_486_209;

/// 1 cm^-1 in hartree (h·c·1cm^-1).
pub const HARTREE_PER_INVCM: f64 = 4.556_335_252_912e-6;

pub fn angstrom_to_bohr(a: f64) -> f64 {
    a * BOHR_PER_ANGSTROM
}

pub fn bohr_to_angstrom(b: f64) -> f64 {
    b / BOHR_PER_ANGSTROM
}

pub fn fs_to_au(t: f64) -> f64 {
    t * AU_PER_FS
}

pub fn amu_to_au(m: f64) -> f64 {
    m * ELECTRON_MASSES_PER_AMU
}

pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + 273.15
}
