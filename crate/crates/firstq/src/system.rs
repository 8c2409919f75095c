//! Molecular system, real-space grid, thermal context, and the physical
//! scalars the cost pipeline consumes: grid spacings, the nuclear saturation
//! constant, and the Hamiltonian 1-norms.

use crate::error::Error;
use crate::units;
use crate::Result;

/// Equilibrium bond length of the shortest known bond, in Å.
const H2_BOND_ANGSTROM: f64 = 0.74;

/// Vibrational wavenumber of that bond, in cm^-1.
const H2_WAVENUMBER_INVCM: f64 = 4200.0;

/// All particles of a molecular system. Nuclei first, then `eta_e` unit-charge
/// electrons; the particle index therefore encodes the species flag.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    /// (charge magnitude, mass in electron masses) per nucleus.
    nuclei: Vec<(u32, f64)>,
    eta_e: usize,
    net_charge: i64,
}

impl ParticleSet {
    /// Build from nuclear charges/masses and a net charge (default 0 for
    /// neutral reactions). The electron count is derived.
    pub fn new(nuclei: Vec<(u32, f64)>, net_charge: i64) -> Result<Self> {
        if nuclei.is_empty() {
            return Err(Error::domain("particle set needs at least one nucleus"));
        }
        for (z, m) in &nuclei {
            if *z == 0 {
                return Err(Error::domain("nuclear charge must be >= 1"));
            }
            if *m <= 1.0 {
                return Err(Error::domain("nuclear mass must exceed one electron mass"));
            }
        }
        let z_tot: i64 = nuclei.iter().map(|(z, _)| *z as i64).sum();
        let eta_e = z_tot - net_charge;
        if eta_e < 0 {
            return Err(Error::domain(format!(
                "net charge {net_charge} exceeds total nuclear charge {z_tot}"
            )));
        }
        Ok(Self {
            nuclei,
            eta_e: eta_e as usize,
            net_charge,
        })
    }

    pub fn nuclei(&self) -> &[(u32, f64)] {
        &self.nuclei
    }

    /// Nucleus count.
    pub fn eta_n(&self) -> usize {
        self.nuclei.len()
    }

    /// Electron count.
    pub fn eta_e(&self) -> usize {
        self.eta_e
    }

    /// Total particle count.
    pub fn eta(&self) -> usize {
        self.eta_n() + self.eta_e
    }

    pub fn net_charge(&self) -> i64 {
        self.net_charge
    }

    /// Sum of nuclear charge magnitudes.
    pub fn z_tot(&self) -> u64 {
        self.nuclei.iter().map(|(z, _)| *z as u64).sum()
    }

    /// Charge magnitude of every particle, nuclei first.
    pub fn charges(&self) -> impl Iterator<Item = u64> + '_ {
        self.nuclei
            .iter()
            .map(|(z, _)| *z as u64)
            .chain(std::iter::repeat_n(1, self.eta_e))
    }

    /// Mass of every particle in electron masses, nuclei first.
    pub fn masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.nuclei
            .iter()
            .map(|(_, m)| *m)
            .chain(std::iter::repeat_n(1.0, self.eta_e))
    }
}

/// Cubic simulation box discretization: width `l` (bohr) and `n_g` qubits per
/// Cartesian axis. The spacing is always recomputed, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    l: f64,
    n_g: u32,
}

impl GridSpec {
    pub fn new(l_bohr: f64, n_g: u32) -> Result<Self> {
        if l_bohr <= 0.0 {
            return Err(Error::domain("box width must be positive"));
        }
        if n_g < 2 {
            return Err(Error::domain("need at least 2 qubits per axis"));
        }
        Ok(Self { l: l_bohr, n_g })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn n_g(&self) -> u32 {
        self.n_g
    }

    /// Grid spacing L/(2^n_g − 1) in bohr.
    pub fn delta(&self) -> f64 {
        self.l / ((1u64 << self.n_g) - 1) as f64
    }
}

/// Temperature and the confidence width (number of standard deviations) used
/// for the minimum nuclear distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalContext {
    temperature_k: f64,
    n_sigma: u32,
}

impl ThermalContext {
    pub const DEFAULT_N_SIGMA: u32 = 3;

    pub fn new(temperature_k: f64, n_sigma: u32) -> Result<Self> {
        if temperature_k <= 0.0 {
            return Err(Error::domain("temperature must be positive"));
        }
        if !(1..=6).contains(&n_sigma) {
            return Err(Error::domain("n_sigma must be in 1..=6"));
        }
        Ok(Self {
            temperature_k,
            n_sigma,
        })
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    pub fn n_sigma(&self) -> u32 {
        self.n_sigma
    }

    /// Inverse temperature in 1/hartree.
    pub fn beta(&self) -> f64 {
        1.0 / (units::KB_HARTREE_PER_KELVIN * self.temperature_k)
    }
}

/// Nuclear-pair saturation: the clipping radius for nuclear-nuclear
/// interactions is raised from Δ to Γ·Δ, with Γ² an exact power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationSpec {
    pub n_gamma: u32,
}

impl SaturationSpec {
    pub fn unsaturated() -> Self {
        Self { n_gamma: 0 }
    }

    /// Γ = 2^{n_Γ/2}.
    pub fn gamma(&self) -> f64 {
        2f64.powf(self.n_gamma as f64 / 2.0)
    }

    /// Γ² = 2^{n_Γ}, exact.
    pub fn gamma_sq(&self) -> u64 {
        1u64 << self.n_gamma
    }

    /// Clipping radius Γ·Δ in bohr.
    pub fn effective_min_distance(&self, grid: &GridSpec) -> f64 {
        grid.delta() * self.gamma()
    }
}

/// The 1-norms and block-encoding subnormalizations of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBundle {
    /// Sum of charge products over ordered pairs.
    pub lambda_v: f64,
    /// Same with nuclear-nuclear pairs damped by 1/Γ.
    pub lambda_v_gamma: f64,
    /// Sum of reciprocal masses, 1/(electron mass) units.
    pub lambda_t: f64,
    /// Potential subnormalization in hartree.
    pub alpha_v: f64,
    /// Kinetic subnormalization in hartree.
    pub alpha_t: f64,
    /// Total subnormalization in hartree.
    pub alpha_h: f64,
    pub shifted: bool,
    pub gamma_applied: bool,
}

/// Grid spacing resolving a thermal particle of mass `m` (electron masses) at
/// temperature `t` kelvin, in bohr: π/√(3·m·k_B·T).
pub fn nuclear_grid_spacing(mass_au: f64, temperature_k: f64) -> Result<f64> {
    if mass_au <= 0.0 {
        return Err(Error::domain("mass must be positive"));
    }
    if temperature_k <= 0.0 {
        return Err(Error::domain("temperature must be positive"));
    }
    let kt = units::KB_HARTREE_PER_KELVIN * temperature_k;
    Ok(std::f64::consts::PI / (3.0 * mass_au * kt).sqrt())
}

/// Grid spacing resolving the tightest electronic orbital around charge `z`,
/// in bohr: π/z.
pub fn electronic_grid_spacing(z: u32) -> Result<f64> {
    if z == 0 {
        return Err(Error::domain("nuclear charge must be >= 1"));
    }
    Ok(std::f64::consts::PI / z as f64)
}

/// Smallest qubits-per-axis count whose induced spacing is at most
/// `delta_min`: ceil(log2(1 + L/Δ_min)).
pub fn required_ng(l_bohr: f64, delta_min_bohr: f64) -> Result<u32> {
    if l_bohr <= 0.0 || delta_min_bohr <= 0.0 {
        return Err(Error::domain("box width and spacing must be positive"));
    }
    let n = (1.0 + l_bohr / delta_min_bohr).log2().ceil();
    Ok(n.max(1.0) as u32)
}

/// Thermal RMS displacement of the reference bond at inverse temperature β,
/// in bohr: sqrt(coth(βħω/2)·ħ/(2πμω)).
pub fn bond_rms_displacement(ctx: &ThermalContext) -> f64 {
    let omega = H2_WAVENUMBER_INVCM * units::HARTREE_PER_INVCM;
    let mu = units::amu_to_au(1.008) / 2.0;
    let x = ctx.beta() * omega / 2.0;
    let coth = 1.0 / x.tanh();
    (coth / (2.0 * std::f64::consts::PI * mu * omega)).sqrt()
}

/// Minimum nuclear-nuclear distance in bohr: the reference bond length minus
/// `n_sigma` thermal RMS displacements.
pub fn min_nuclear_distance(ctx: &ThermalContext) -> Result<f64> {
    let d = units::angstrom_to_bohr(H2_BOND_ANGSTROM)
        - ctx.n_sigma() as f64 * bond_rms_displacement(ctx);
    if d <= 0.0 {
        return Err(Error::domain(format!(
            "temperature {} K too high for the bond-width model",
            ctx.temperature_k()
        )));
    }
    Ok(d)
}

/// Largest saturation constant with Γ² a power of two whose clipping radius
/// Γ·Δ stays at or below `delta_nuc`. Clamps to Γ = 1 when `delta_nuc` < Δ.
pub fn gamma_spec(delta_nuc_bohr: f64, grid: &GridSpec) -> SaturationSpec {
    let ratio = delta_nuc_bohr / grid.delta();
    if ratio <= 1.0 {
        return SaturationSpec::unsaturated();
    }
    let n_gamma = (2.0 * ratio.log2()).floor() as u32;
    SaturationSpec { n_gamma }
}

/// The Hamiltonian 1-norms and subnormalizations for a particle set on a grid.
///
/// The potential subnormalization is λ/(4Δ) when the spectrum is shifted and
/// λ/(2Δ) otherwise, with λ the saturated or plain charge-pair sum as
/// requested. The kinetic part is 3π²·2^{2(n_g−1)}·λ_T/L².
pub fn compute_norms(
    particles: &ParticleSet,
    grid: &GridSpec,
    sat: &SaturationSpec,
    shifted: bool,
) -> Result<NormBundle> {
    if particles.eta() == 0 {
        return Err(Error::domain("empty particle set"));
    }
    let charges: Vec<u64> = particles.charges().collect();
    let sum: u64 = charges.iter().sum();
    let sum_sq: u64 = charges.iter().map(|z| z * z).sum();
    let lambda_v = (sum * sum - sum_sq) as f64;

    let zn: u64 = particles.z_tot();
    let zn_sq: u64 = particles
        .nuclei()
        .iter()
        .map(|(z, _)| (*z as u64) * (*z as u64))
        .sum();
    let nn_pairs = (zn * zn - zn_sq) as f64;
    let eta_e = particles.eta_e() as f64;
    let lambda_v_gamma = nn_pairs / sat.gamma() + 2.0 * eta_e * zn as f64 + eta_e * (eta_e - 1.0);

    let lambda_t: f64 = particles.masses().map(|m| 1.0 / m).sum();

    let gamma_applied = sat.n_gamma > 0;
    let lambda = if gamma_applied {
        lambda_v_gamma
    } else {
        lambda_v
    };
    let delta = grid.delta();
    let alpha_v = if shifted {
        lambda / (4.0 * delta)
    } else {
        lambda / (2.0 * delta)
    };
    let grid_points_sq = 2f64.powi(2 * (grid.n_g() as i32 - 1));
    let alpha_t =
        3.0 * std::f64::consts::PI.powi(2) * grid_points_sq * lambda_t / (grid.l() * grid.l());

    Ok(NormBundle {
        lambda_v,
        lambda_v_gamma,
        lambda_t,
        alpha_v,
        alpha_t,
        alpha_h: alpha_v + alpha_t,
        shifted,
        gamma_applied,
    })
}

/// Rigorous spatial discretization scale from conserved-energy arguments:
/// h = γ·√(6π/L)·(εδ/(3·(η_e+η_n)·Ē))^{3/4}, electron mass 1.
pub fn rigorous_h_bound(
    l_bohr: f64,
    eta_e: usize,
    eta_n: usize,
    mean_energy_ha: f64,
    eps: f64,
    delta: f64,
    gamma_tol: f64,
) -> Result<f64> {
    if l_bohr <= 0.0 || mean_energy_ha <= 0.0 || gamma_tol <= 0.0 {
        return Err(Error::domain(
            "box width, mean energy, and tolerance must be positive",
        ));
    }
    if !(0.0..1.0).contains(&eps) || eps == 0.0 || !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::domain("probabilities must be in (0,1)"));
    }
    if eta_e + eta_n == 0 {
        return Err(Error::domain("need at least one particle"));
    }
    let particles = (eta_e + eta_n) as f64;
    let inner = eps * delta / (3.0 * particles * mean_energy_ha);
    Ok(gamma_tol * (6.0 * std::f64::consts::PI / l_bohr).sqrt() * inner.powf(0.75))
}
