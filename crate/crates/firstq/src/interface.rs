//! Reaction ingestion, built-in benchmark definitions, the end-to-end
//! estimate pipeline, and report rendering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cost::{
    self, alias_prep_cost, amplitude_amplified_prep_cost, block_encoding_cost_h, qubit_tally,
    symmetric_prep_cost, CostRecord, DataLoad, KineticConstant, PrepStrategy, QubitTally,
};
use crate::elements::ElementTable;
use crate::error::Error;
use crate::evolution::{
    allocate, charge_error_at_grid, n_m_from_budget, optimize_allocation, phase_gradient_width,
    qsp_degree, total_toffoli, uniform_fractions, ErrorBudget,
};
use crate::system::{
    compute_norms, electronic_grid_spacing, gamma_spec, min_nuclear_distance, nuclear_grid_spacing,
    required_ng, GridSpec, NormBundle, ParticleSet, SaturationSpec, ThermalContext,
};
use crate::units;
use crate::Result;

/// How the six error fractions are chosen.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Allocation {
    #[default]
    Uniform,
    Optimized,
    Explicit {
        fractions: [f64; 6],
    },
}

/// Manual parameter pins; a present override wins over the derived value and
/// is echoed in the report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_g: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_gamma: Option<u32>,
}

/// Pipeline options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    pub gamma_saturation: bool,
    pub spectral_shift: bool,
    /// `None` selects the cheaper strategy automatically.
    pub prep_strategy: Option<PrepStrategy>,
    pub allocation: Allocation,
    pub data_load: DataLoad,
    pub overrides: Overrides,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            gamma_saturation: true,
            spectral_shift: true,
            prep_strategy: None,
            allocation: Allocation::Uniform,
            data_load: DataLoad::Qroam,
            overrides: Overrides::default(),
        }
    }
}

/// A reaction to estimate: composition plus box, temperature, time, and
/// error target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReactionSpec {
    /// Schema version; always 1.
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub name: String,
    /// (element symbol, count) pairs.
    pub composition: Vec<(String, u32)>,
    #[serde(default)]
    pub net_charge: i64,
    pub temperature_k: f64,
    pub box_width_angstrom: f64,
    pub time_fs: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub options: Options,
}

fn schema_version() -> u32 {
    1
}

/// Parse and validate a reaction document against the embedded elements.
pub fn load_reaction(json: &str) -> Result<ReactionSpec> {
    load_reaction_with_table(json, &ElementTable::embedded())
}

/// Parse and validate a reaction document against a specific element table.
pub fn load_reaction_with_table(json: &str, table: &ElementTable) -> Result<ReactionSpec> {
    let spec: ReactionSpec =
        serde_json::from_str(json).map_err(|e| Error::schema(format!("reaction: {e}")))?;
    validate(&spec, table)?;
    Ok(spec)
}

fn validate(spec: &ReactionSpec, table: &ElementTable) -> Result<()> {
    if spec.schema != 1 {
        return Err(Error::schema(format!(
            "unsupported schema version {}",
            spec.schema
        )));
    }
    if spec.composition.is_empty() {
        return Err(Error::schema("composition must not be empty"));
    }
    if spec.composition.iter().any(|(_, c)| *c == 0) {
        return Err(Error::schema("element counts must be >= 1"));
    }
    for (symbol, _) in &spec.composition {
        table.lookup(symbol)?;
    }
    if !(spec.epsilon > 0.0 && spec.epsilon < 1.0) {
        return Err(Error::domain("epsilon must be in (0,1)"));
    }
    if spec.box_width_angstrom <= 0.0 {
        return Err(Error::domain("box width must be positive"));
    }
    if spec.temperature_k <= 0.0 {
        return Err(Error::domain("temperature must be positive"));
    }
    if spec.time_fs <= 0.0 {
        return Err(Error::domain("evolution time must be positive"));
    }
    Ok(())
}

/// Expand a composition into a particle set using the embedded elements.
pub fn particles_for(spec: &ReactionSpec) -> Result<ParticleSet> {
    particles_with_table(spec, &ElementTable::embedded())
}

/// Expand a composition into a particle set against a specific element table.
pub fn particles_with_table(spec: &ReactionSpec, table: &ElementTable) -> Result<ParticleSet> {
    let mut nuclei = Vec::new();
    for (symbol, count) in &spec.composition {
        let (z, mass_amu) = table.lookup(symbol)?;
        for _ in 0..*count {
            nuclei.push((z, units::amu_to_au(mass_amu)));
        }
    }
    ParticleSet::new(nuclei, spec.net_charge)
}

/// Reference benchmark values for a built-in reaction: headline cost table
/// plus the published hyperparameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Benchmark {
    pub toffolis_per_fs: f64,
    pub toffolis_per_walk: f64,
    pub qubits_total: u64,
    pub qubits_ancilla: u64,
    pub one_norm: f64,
    /// Inverse fractions for (rotation, poly, potential, charge, mass); the
    /// W-state fraction is the residual.
    pub inv_fractions: [f64; 5],
    pub n_g: u32,
    pub n_gamma: u32,
    pub n_m: u32,
}

/// One built-in reaction with its benchmark row.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub key: &'static str,
    pub composition: &'static [(&'static str, u32)],
    pub box_width_angstrom: f64,
    pub temperature_c: f64,
    pub benchmark: Benchmark,
}

/// The five benchmark reactions.
pub fn builtins() -> Vec<Builtin> {
    vec![
        Builtin {
            key: "NH3+BF3",
            composition: &[("N", 1), ("H", 3), ("B", 1), ("F", 3)],
            box_width_angstrom: 22.0,
            temperature_c: 30.0,
            benchmark: Benchmark {
                toffolis_per_fs: 8.72e9,
                toffolis_per_walk: 8.2e3,
                qubits_total: 1362,
                qubits_ancilla: 312,
                one_norm: 1.88e4,
                inv_fractions: [51.13, 25.93, 1.64, 3.20, 56.57],
                n_g: 7,
                n_gamma: 3,
                n_m: 24,
            },
        },
        Builtin {
            key: "2NO2",
            composition: &[("N", 2), ("O", 4)],
            box_width_angstrom: 22.0,
            temperature_c: 30.0,
            benchmark: Benchmark {
                toffolis_per_fs: 1.05e10,
                toffolis_per_walk: 8.6e3,
                qubits_total: 1419,
                qubits_ancilla: 327,
                one_norm: 2.15e4,
                inv_fractions: [158.64, 1.73, 3.08, 12.18, 130.02],
                n_g: 7,
                n_gamma: 3,
                n_m: 24,
            },
        },
        Builtin {
            key: "C2H4+O2",
            composition: &[("C", 2), ("H", 4), ("O", 2)],
            box_width_angstrom: 22.0,
            temperature_c: 1500.0,
            benchmark: Benchmark {
                toffolis_per_fs: 7.07e10,
                toffolis_per_walk: 8.5e3,
                qubits_total: 1453,
                qubits_ancilla: 373,
                one_norm: 1.46e5,
                inv_fractions: [89.89, 42.15, 1.19, 10.31, 40.70],
                n_g: 9,
                n_gamma: 7,
                n_m: 23,
            },
        },
        Builtin {
            key: "C2H4+O3",
            composition: &[("C", 2), ("H", 4), ("O", 3)],
            box_width_angstrom: 22.0,
            temperature_c: -90.0,
            benchmark: Benchmark {
                toffolis_per_fs: 8.05e9,
                toffolis_per_walk: 8.1e3,
                qubits_total: 1341,
                qubits_ancilla: 312,
                one_norm: 1.76e4,
                inv_fractions: [28.39, 257.08, 1.09, 25.87, 144.65],
                n_g: 7,
                n_gamma: 3,
                n_m: 23,
            },
        },
        Builtin {
            key: "C23H20N3O",
            composition: &[("C", 23), ("H", 20), ("N", 3), ("O", 1)],
            box_width_angstrom: 44.0,
            temperature_c: 30.0,
            benchmark: Benchmark {
                toffolis_per_fs: 2.73e11,
                toffolis_per_walk: 2.2e4,
                qubits_total: 6198,
                qubits_ancilla: 582,
                one_norm: 2.16e5,
                inv_fractions: [83.45, 12.95, 1.38, 5.92, 61.28],
                n_g: 8,
                n_gamma: 3,
                n_m: 30,
            },
        },
    ]
}

/// The six fractions pinned by a benchmark row: the five published inverse
/// fractions plus the residual for the W channel. The published values are
/// rounded to two decimals, so the residual can land at or below zero; it is
/// floored and the vector renormalized to sum exactly one.
pub fn benchmark_fractions(b: &Benchmark) -> [f64; 6] {
    let f: Vec<f64> = b.inv_fractions.iter().map(|x| 1.0 / x).collect();
    let f_w = (1.0 - f.iter().sum::<f64>()).max(1e-4);
    let mut out = [f[0], f[1], f[2], f[3], f[4], f_w];
    let total: f64 = out.iter().sum();
    for x in &mut out {
        *x /= total;
    }
    out
}

/// Resolve a built-in by name into a full reaction spec with the benchmark's
/// hyperparameters pinned as overrides.
pub fn builtin_reaction(key: &str) -> Result<(ReactionSpec, Benchmark)> {
    let b = builtins()
        .into_iter()
        .find(|b| b.key.eq_ignore_ascii_case(key))
        .ok_or_else(|| Error::schema(format!("unknown built-in reaction {key:?}")))?;
    let spec = ReactionSpec {
        schema: 1,
        name: b.key.to_string(),
        composition: b
            .composition
            .iter()
            .map(|(s, c)| (s.to_string(), *c))
            .collect(),
        net_charge: 0,
        temperature_k: units::celsius_to_kelvin(b.temperature_c),
        box_width_angstrom: b.box_width_angstrom,
        time_fs: 1.0,
        epsilon: 1e-2,
        options: Options {
            allocation: Allocation::Explicit {
                fractions: benchmark_fractions(&b.benchmark),
            },
            overrides: Overrides {
                n_g: Some(b.benchmark.n_g),
                n_m: Some(b.benchmark.n_m),
                n_gamma: Some(b.benchmark.n_gamma),
            },
            ..Options::default()
        },
    };
    Ok((spec, b.benchmark))
}

/// Where a reported parameter came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Derived,
    Override,
}

/// One component of the per-walk Toffoli breakdown.
#[derive(Debug, Clone, Serialize)]
pub struct BreakdownPart {
    pub component: String,
    pub toffolis: u64,
}

/// One arithmetic step of the pair-interaction flagging circuit. Signed so
/// the closing adjustment between the step sum and the charged total can go
/// either way.
#[derive(Debug, Clone, Serialize)]
pub struct CoulombPart {
    pub step: String,
    pub toffolis: i64,
}

/// Per-step decomposition of the pair-interaction arithmetic, with a final
/// adjustment entry reconciling the step sum against the charged closed form.
fn coulomb_steps(n_g: u64, n_m: u64, shifted: bool, total: u64) -> Vec<CoulombPart> {
    let n_g = n_g as i64;
    let n_m = n_m as i64;
    let mut parts: Vec<(String, i64)> = if shifted {
        vec![
            ("axis_differences".into(), 2 * 6 * n_g),
            ("sum_of_squares".into(), 2 * (3 * n_g * n_g - n_g - 1)),
            ("index_square".into(), 2 * (n_m * n_m - 2)),
            ("shift_offsets".into(), 2 * (2 * n_m + 5)),
            (
                "multiply".into(),
                2 * (4 * n_m * n_g + 10 * n_g + 8 * n_m + 21),
            ),
            ("comparators".into(), (2 * n_g + 1) + (2 * n_g + 5)),
            ("sign_flip".into(), 1),
        ]
    } else {
        vec![
            ("axis_differences".into(), 2 * 6 * n_g),
            ("sum_of_squares".into(), 2 * (3 * n_g * n_g - n_g - 1)),
            ("index_square".into(), 2 * (n_m * n_m - 2)),
            (
                "multiply".into(),
                2 * (4 * n_m * n_g + 8 * n_m + 2 * n_g + 5),
            ),
            ("comparators".into(), 2 * n_g + 1),
            ("sign_flip".into(), 1),
        ]
    };
    let listed: i64 = parts.iter().map(|(_, t)| t).sum();
    parts.push(("adjustment".into(), total as i64 - listed));
    parts
        .into_iter()
        .map(|(step, toffolis)| CoulombPart { step, toffolis })
        .collect()
}

/// Consistency check against a published benchmark row: the query count at
/// the published 1-norm times the published walk cost, against the published
/// total.
#[derive(Debug, Clone, Serialize)]
pub struct ReferenceConsistency {
    pub degree: u64,
    pub product_toffolis_per_fs: f64,
    pub published_toffolis_per_fs: f64,
    pub relative_gap: f64,
    /// Formula 1-norm over the published one, per shift/saturation variant.
    pub alpha_ratio_by_variant: BTreeMap<String, f64>,
}

/// The full estimate for one reaction.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub schema: u32,
    pub name: String,
    pub eta: usize,
    pub eta_e: usize,
    pub n_g: u32,
    pub n_g_provenance: Provenance,
    pub n_g_derived: u32,
    pub n_m: u32,
    pub n_m_provenance: Provenance,
    pub n_m_derived: u32,
    pub n_gamma: u32,
    pub n_gamma_provenance: Provenance,
    pub n_gamma_derived: u32,
    pub n_sigma: u32,
    pub delta_bohr: f64,
    pub delta_min_bohr: f64,
    pub delta_nuc_bohr: f64,
    pub lambda_v: f64,
    pub lambda_v_gamma: f64,
    pub lambda_t: f64,
    pub alpha_v: f64,
    pub alpha_t: f64,
    pub alpha_h: f64,
    pub fractions: [f64; 6],
    pub allocation: String,
    pub prep_strategy: PrepStrategy,
    pub phase_gradient_bits: u64,
    pub toffolis_per_walk: u64,
    pub breakdown: Vec<BreakdownPart>,
    pub coulomb_breakdown: Vec<CoulombPart>,
    pub qsp_degree: u64,
    pub qsp_queries: u64,
    pub toffolis_total: u128,
    pub toffolis_per_fs: f64,
    pub qubits: QubitTally,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceConsistency>,
}

struct DerivedParams {
    n_g: u32,
    n_g_derived: u32,
    n_g_provenance: Provenance,
    delta_min: f64,
    delta_nuc: f64,
    n_gamma: u32,
    n_gamma_derived: u32,
    n_gamma_provenance: Provenance,
}

/// Minimum spacing over every species: thermal spacings for the nuclei
/// present plus the tightest-orbital spacing for the largest charge.
pub fn delta_min_bohr(spec: &ReactionSpec, particles: &ParticleSet) -> Result<f64> {
    let mut delta_min = f64::INFINITY;
    for (z, mass) in particles.nuclei() {
        delta_min = delta_min.min(nuclear_grid_spacing(*mass, spec.temperature_k)?);
        delta_min = delta_min.min(electronic_grid_spacing(*z)?);
    }
    Ok(delta_min)
}

fn derive_params(spec: &ReactionSpec, particles: &ParticleSet) -> Result<DerivedParams> {
    let l_bohr = units::angstrom_to_bohr(spec.box_width_angstrom);
    let delta_min = delta_min_bohr(spec, particles)?;
    let n_g_derived = required_ng(l_bohr, delta_min)?;
    let (n_g, n_g_provenance) = match spec.options.overrides.n_g {
        Some(n) => (n, Provenance::Override),
        None => (n_g_derived, Provenance::Derived),
    };
    let grid = GridSpec::new(l_bohr, n_g)?;
    let ctx = ThermalContext::new(spec.temperature_k, ThermalContext::DEFAULT_N_SIGMA)?;
    let delta_nuc = min_nuclear_distance(&ctx)?;
    let n_gamma_derived = if spec.options.gamma_saturation {
        gamma_spec(delta_nuc, &grid).n_gamma
    } else {
        0
    };
    let (n_gamma, n_gamma_provenance) = match spec.options.overrides.n_gamma {
        Some(n) if spec.options.gamma_saturation => (n, Provenance::Override),
        _ => (n_gamma_derived, Provenance::Derived),
    };
    Ok(DerivedParams {
        n_g,
        n_g_derived,
        n_g_provenance,
        delta_min,
        delta_nuc,
        n_gamma,
        n_gamma_derived,
        n_gamma_provenance,
    })
}

struct PipelineOutput {
    walk: CostRecord,
    breakdown: Vec<BreakdownPart>,
    coulomb_breakdown: Vec<CoulombPart>,
    prep_strategy: PrepStrategy,
    n_m: u32,
    n_m_derived: u32,
    budget: ErrorBudget,
    n_r: u64,
    prep_junk: CostRecord,
}

/// Assemble the walk operator for one fraction choice.
fn assemble(
    spec: &ReactionSpec,
    particles: &ParticleSet,
    grid: &GridSpec,
    sat: &SaturationSpec,
    norms: &NormBundle,
    fractions: [f64; 6],
) -> Result<PipelineOutput> {
    let t_au = units::fs_to_au(spec.time_fs);
    let budget = allocate(spec.epsilon, t_au, norms, fractions)?;
    let eta = particles.eta() as u64;
    let n_g = grid.n_g() as u64;
    let shifted = spec.options.spectral_shift;
    let n_m_derived = n_m_from_budget(&budget, grid, shifted);
    let n_m = spec.options.overrides.n_m.unwrap_or(n_m_derived);
    let eps_zeta = charge_error_at_grid(&budget, grid);
    let rot_zeta = cost::rotation_width(eps_zeta / 4.0)?;
    let mode = spec.options.data_load;

    let gamma_flagging = sat.n_gamma > 0;
    let n_f = u64::from(gamma_flagging);
    let (strategy, mut prep_v) = match spec.options.prep_strategy {
        Some(PrepStrategy::Symmetric) => (
            PrepStrategy::Symmetric,
            symmetric_prep_cost(eta, n_f, eps_zeta, mode)?,
        ),
        Some(PrepStrategy::AmplitudeAmplified) => (
            PrepStrategy::AmplitudeAmplified,
            amplitude_amplified_prep_cost(eta, eps_zeta, rot_zeta, mode)?,
        ),
        Some(PrepStrategy::Alias) => (
            PrepStrategy::Alias,
            alias_prep_cost(eta * eta, n_f, eps_zeta, mode)?,
        ),
        None => cost::choose_prep(eta, n_f, eps_zeta, rot_zeta, mode)?,
    };
    if gamma_flagging {
        prep_v.toffolis += cost::GAMMA_FLAG_SURCHARGE;
    }

    let w_rot = CostRecord::new(cost::rotation_width(budget.eps_w)?, 0, 0, 0);
    let mass_prep = alias_prep_cost(eta, 0, budget.eps_mass, mode)?;
    let n_m64 = n_m as u64;

    // The shifted construction has a fused closed form; the plain one is the
    // potential and kinetic encodings combined under one selector, plus the
    // top-level split rotation.
    let (walk, coulomb, swap, rotations) = if shifted {
        let walk = block_encoding_cost_h(eta, n_g, n_m64, prep_v, w_rot, mass_prep)?;
        let coulomb =
            6 * n_g * n_g + 2 * n_m64 * n_m64 + 8 * n_m64 * n_g + 36 * n_g + 20 * n_m64 + 46;
        let swap = 12 * eta * n_g + 4 * eta - 12 * n_g - 4;
        (walk, coulomb, swap, 2 * w_rot.toffolis)
    } else {
        let variant = if gamma_flagging {
            cost::SignVariant::Gamma
        } else {
            cost::SignVariant::Plain
        };
        let sign = cost::alternating_sign_cost(n_g, n_m64, variant)?;
        let v = cost::block_encoding_cost_v(eta, n_g, n_m64, variant, prep_v)?;
        let t = cost::block_encoding_cost_t(eta, n_g, w_rot.toffolis, mass_prep, true)?;
        let split_rot = 2 * cost::rotation_width(budget.eps_rotation)?;
        let walk = CostRecord {
            toffolis: v.toffolis + t.toffolis + split_rot,
            be_qubits: v.be_qubits.max(t.be_qubits) + 1,
            junk_ancillas: v.junk_ancillas + t.junk_ancillas,
            temp_carry: v.temp_carry.max(t.temp_carry),
        };
        let swap = 4 * (eta - 1) * (1 + 3 * n_g) - 8;
        (walk, sign.toffolis, swap, 2 * w_rot.toffolis + split_rot)
    };

    // Breakdown: parts sum exactly to the walk total. The kinetic core is
    // listed at its headline constant; the residual between that and the
    // fused closed form is carried explicitly.
    let kinetic = cost::kinetic_core(n_g, KineticConstant::Statement);
    let preps = 2 * (prep_v.toffolis + mass_prep.toffolis);
    let listed = swap + coulomb + kinetic + preps + rotations;
    let residual = walk.toffolis - listed;
    let breakdown = vec![
        BreakdownPart {
            component: "swap_network".into(),
            toffolis: swap,
        },
        BreakdownPart {
            component: "coulomb_arithmetic".into(),
            toffolis: coulomb,
        },
        BreakdownPart {
            component: "kinetic_core".into(),
            toffolis: kinetic,
        },
        BreakdownPart {
            component: "prepares".into(),
            toffolis: preps,
        },
        BreakdownPart {
            component: "rotations".into(),
            toffolis: rotations,
        },
        BreakdownPart {
            component: "kinetic_constant_residual".into(),
            toffolis: residual,
        },
    ];

    let n_r = phase_gradient_width(&budget, grid)?;
    let coulomb_breakdown = coulomb_steps(n_g, n_m64, shifted, coulomb);
    Ok(PipelineOutput {
        walk,
        breakdown,
        coulomb_breakdown,
        prep_strategy: strategy,
        n_m,
        n_m_derived,
        budget,
        n_r,
        prep_junk: prep_v,
    })
}

fn fractions_for(
    spec: &ReactionSpec,
    particles: &ParticleSet,
    grid: &GridSpec,
    sat: &SaturationSpec,
    norms: &NormBundle,
) -> Result<([f64; 6], String)> {
    match &spec.options.allocation {
        Allocation::Uniform => Ok((uniform_fractions(), "uniform".into())),
        Allocation::Explicit { fractions } => Ok((*fractions, "explicit".into())),
        Allocation::Optimized => {
            let t_au = units::fs_to_au(spec.time_fs);
            let eval = |f: &[f64; 6]| -> f64 {
                match assemble(spec, particles, grid, sat, norms, *f) {
                    Ok(p) => match qsp_degree(norms.alpha_h, t_au, p.budget.eps_poly) {
                        Ok(plan) => total_toffoli(&plan, p.walk.toffolis, p.n_r) as f64,
                        Err(_) => f64::INFINITY,
                    },
                    Err(_) => f64::INFINITY,
                }
            };
            let best = optimize_allocation(norms.lambda_t, eval, 0x5eed);
            Ok((best, "optimized".into()))
        }
    }
}

/// Run the full pipeline for a reaction.
pub fn estimate(spec: &ReactionSpec) -> Result<EstimateReport> {
    estimate_full(spec, None, &ElementTable::embedded())
}

/// Run the pipeline and, when a benchmark row is given, attach the published
/// consistency check.
pub fn estimate_with_benchmark(
    spec: &ReactionSpec,
    benchmark: Option<&Benchmark>,
) -> Result<EstimateReport> {
    estimate_full(spec, benchmark, &ElementTable::embedded())
}

/// Full pipeline with an explicit element table.
pub fn estimate_full(
    spec: &ReactionSpec,
    benchmark: Option<&Benchmark>,
    table: &ElementTable,
) -> Result<EstimateReport> {
    validate(spec, table)?;
    let particles = particles_with_table(spec, table)?;
    let p = derive_params(spec, &particles)?;
    let l_bohr = units::angstrom_to_bohr(spec.box_width_angstrom);
    let grid = GridSpec::new(l_bohr, p.n_g)?;
    let sat = SaturationSpec { n_gamma: p.n_gamma };
    let norms = compute_norms(&particles, &grid, &sat, spec.options.spectral_shift)?;

    let (fractions, allocation) = fractions_for(spec, &particles, &grid, &sat, &norms)?;
    let out = assemble(spec, &particles, &grid, &sat, &norms, fractions)?;

    let t_au = units::fs_to_au(spec.time_fs);
    let plan = qsp_degree(norms.alpha_h, t_au, out.budget.eps_poly)?;
    let total = total_toffoli(&plan, out.walk.toffolis, out.n_r);
    let qubits = qubit_tally(
        particles.eta() as u64,
        p.n_g as u64,
        out.n_m as u64,
        out.prep_junk,
        out.n_r,
    );

    let reference = benchmark.map(|b| {
        let eps_poly = spec.epsilon / b.inv_fractions[1];
        let ref_plan = qsp_degree(b.one_norm, t_au, eps_poly).expect("benchmark degree");
        let product = ref_plan.degree as f64 * b.toffolis_per_walk / spec.time_fs;
        let mut by_variant = BTreeMap::new();
        for (label, shifted, gamma) in [
            ("plain", false, false),
            ("saturated", false, true),
            ("shifted", true, false),
            ("shifted_saturated", true, true),
        ] {
            let s = if gamma {
                sat
            } else {
                SaturationSpec::unsaturated()
            };
            if let Ok(n) = compute_norms(&particles, &grid, &s, shifted) {
                by_variant.insert(label.to_string(), n.alpha_h / b.one_norm);
            }
        }
        ReferenceConsistency {
            degree: ref_plan.degree,
            product_toffolis_per_fs: product,
            published_toffolis_per_fs: b.toffolis_per_fs,
            relative_gap: (product - b.toffolis_per_fs).abs() / b.toffolis_per_fs,
            alpha_ratio_by_variant: by_variant,
        }
    });

    Ok(EstimateReport {
        schema: 1,
        name: spec.name.clone(),
        eta: particles.eta(),
        eta_e: particles.eta_e(),
        n_g: p.n_g,
        n_g_provenance: p.n_g_provenance,
        n_g_derived: p.n_g_derived,
        n_m: out.n_m,
        n_m_provenance: if spec.options.overrides.n_m.is_some() {
            Provenance::Override
        } else {
            Provenance::Derived
        },
        n_m_derived: out.n_m_derived,
        n_gamma: p.n_gamma,
        n_gamma_provenance: p.n_gamma_provenance,
        n_gamma_derived: p.n_gamma_derived,
        n_sigma: ThermalContext::DEFAULT_N_SIGMA,
        delta_bohr: grid.delta(),
        delta_min_bohr: p.delta_min,
        delta_nuc_bohr: p.delta_nuc,
        lambda_v: norms.lambda_v,
        lambda_v_gamma: norms.lambda_v_gamma,
        lambda_t: norms.lambda_t,
        alpha_v: norms.alpha_v,
        alpha_t: norms.alpha_t,
        alpha_h: norms.alpha_h,
        fractions,
        allocation,
        prep_strategy: out.prep_strategy,
        phase_gradient_bits: out.n_r,
        toffolis_per_walk: out.walk.toffolis,
        breakdown: out.breakdown,
        coulomb_breakdown: out.coulomb_breakdown,
        qsp_degree: plan.degree,
        qsp_queries: plan.queries,
        toffolis_total: total,
        toffolis_per_fs: total as f64 / spec.time_fs,
        qubits,
        reference,
    })
}

/// Output formats for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// Render a batch of reports.
pub fn render(reports: &[EstimateReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(reports).map_err(|e| Error::internal(e.to_string()))
        }
        Format::Markdown => Ok(render_markdown(reports)),
        Format::Csv => Ok(render_csv(reports)),
    }
}

fn render_markdown(reports: &[EstimateReport]) -> String {
    let mut out = String::new();
    out.push_str(
        "| Reactants | Number of particles (electrons) | Toffolis per fs | Toffolis per W | Logical qubits | 1-norm |\n",
    );
    out.push_str("|---|---|---|---|---|---|\n");
    for r in reports {
        out.push_str(&format!(
            "| {} | {} ({}) | {:.3e} | {:.2e} | {} ({}) | {:.3e} |\n",
            r.name,
            r.eta,
            r.eta_e,
            r.toffolis_per_fs,
            r.toffolis_per_walk as f64,
            r.qubits.total,
            r.qubits.ancilla,
            r.alpha_h
        ));
    }
    out.push_str("\nPer-walk cost decomposition:\n\n```csv\n");
    out.push_str(&render_csv(reports));
    out.push_str("```\n");
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains(['"', ',', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(reports: &[EstimateReport]) -> String {
    let mut out = String::from("reaction,group,component,toffolis,group_total\n");
    for r in reports {
        for part in &r.breakdown {
            out.push_str(&format!(
                "{},walk,{},{},{}\n",
                csv_quote(&r.name),
                csv_quote(&part.component),
                part.toffolis,
                r.toffolis_per_walk
            ));
        }
        let coulomb: i64 = r.coulomb_breakdown.iter().map(|p| p.toffolis).sum();
        for part in &r.coulomb_breakdown {
            out.push_str(&format!(
                "{},pair_arithmetic,{},{},{}\n",
                csv_quote(&r.name),
                csv_quote(&part.step),
                part.toffolis,
                coulomb
            ));
        }
    }
    out
}
