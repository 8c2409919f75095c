//! Closed-form Toffoli and qubit costs for every circuit directive and for
//! the composite block-encodings of the potential, kinetic, and full
//! Hamiltonian operators.
//!
//! Qubit accounting distinguishes three kinds of ancillas: block-encoding
//! qubits (must read zero for the encoding to apply), junk ancillas (carry
//! intermediate data that survives until the mirrored uncomputation), and
//! temporary carries (transient, freed within a subroutine).

use crate::error::Error;
use crate::Result;

/// Toffoli count plus the three qubit tallies of one primitive or composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostRecord {
    pub toffolis: u64,
    pub be_qubits: u64,
    pub junk_ancillas: u64,
    pub temp_carry: u64,
}

impl CostRecord {
    pub const ZERO: CostRecord = CostRecord {
        toffolis: 0,
        be_qubits: 0,
        junk_ancillas: 0,
        temp_carry: 0,
    };

    pub fn new(toffolis: u64, be_qubits: u64, junk_ancillas: u64, temp_carry: u64) -> Self {
        Self {
            toffolis,
            be_qubits,
            junk_ancillas,
            temp_carry,
        }
    }

    /// Sequential composition with ancilla reuse: Toffolis, block-encoding
    /// qubits, and junk accumulate; temporary carries take the peak.
    pub fn seq(self, other: CostRecord) -> CostRecord {
        CostRecord {
            toffolis: self.toffolis + other.toffolis,
            be_qubits: self.be_qubits + other.be_qubits,
            junk_ancillas: self.junk_ancillas + other.junk_ancillas,
            temp_carry: self.temp_carry.max(other.temp_carry),
        }
    }

    /// Repeat the same subroutine `n` times sequentially.
    pub fn repeat(self, n: u64) -> CostRecord {
        CostRecord {
            toffolis: self.toffolis * n,
            be_qubits: self.be_qubits * n,
            junk_ancillas: self.junk_ancillas * n,
            temp_carry: self.temp_carry,
        }
    }
}

/// The circuit directives with closed-form costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveKind {
    /// |a⟩ → ||a|⟩|sign⟩ on an n-bit two's-complement register.
    Abs,
    /// |a⟩|b⟩ → ||a−b|⟩|b⟩|sign⟩, n bits each.
    AbsDiff,
    /// Flag a = b over two n-bit registers.
    IsEq,
    /// |a⟩ → |a⟩|a²⟩, n bits in.
    Square,
    /// |a,b,c⟩ → |a,b,c⟩|a²+b²+c²⟩ over three n_g-bit registers.
    SumOfSquares,
    /// |a⟩|b⟩ → |a⟩|b⟩|ab⟩ for unsigned a (n_a bits) and b (n_b bits), n_a ≤ n_b.
    Mult,
    /// Subtract the power of two 2^k from an n-bit register; the sign bit
    /// doubles as the comparator output.
    SubPow2,
    /// Subtract a Hamming-weight-1 constant whose bit position moves by a
    /// quantum control, on a q-bit register.
    CSub,
    /// Block-encode |a⟩ → a|a⟩ on n two's-complement bits.
    AmpBe,
    /// Block-encode |a⟩ → (2a²−1)|a⟩ via two walk steps.
    WalkSquare,
    /// One single-qubit rotation against a phase-gradient register of n_R bits.
    Rotation,
    /// Three-qubit W-state preparation at rotation width n_R.
    PrepW,
    /// Exact quantum Fourier transform on n qubits; one application of a
    /// conjugated pair is costed n(n+1).
    Qft,
    /// One-dimensional swap network over K registers of n qubits (kernel and
    /// coefficient preparation costed by the caller).
    Swap1D,
    /// Two-dimensional swap network.
    Swap2D,
    /// Alternating-sign Coulomb flagging; use [`alternating_sign_cost`].
    AlternatingSign,
}

pub(crate) fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

/// Exact per-directive cost formulas.
///
/// `params` carries the directive's width arguments in order. Rotation and
/// W-state preparation take the already-computed phase-gradient width.
pub fn primitive_cost(kind: PrimitiveKind, params: &[u64]) -> Result<CostRecord> {
    let arity_err = |want: &str| Error::usage(format!("{kind:?} expects parameters ({want})"));
    match kind {
        PrimitiveKind::Abs => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            if *n < 2 {
                return Err(Error::usage("Abs needs n >= 2"));
            }
            Ok(CostRecord::new(n - 1, 0, 1, n - 2))
        }
        PrimitiveKind::AbsDiff => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            if *n < 2 {
                return Err(Error::usage("AbsDiff needs n >= 2"));
            }
            Ok(CostRecord::new(2 * n, 0, 1, n + 1))
        }
        PrimitiveKind::IsEq => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            if *n < 1 {
                return Err(Error::usage("IsEq needs n >= 1"));
            }
            Ok(CostRecord::new(n - 1, 0, 1, n - 1))
        }
        PrimitiveKind::Square => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            if *n < 2 {
                return Err(Error::usage("Square needs n >= 2"));
            }
            Ok(CostRecord::new(n * n - 2, 0, 2 * n, 2 * n + 2))
        }
        PrimitiveKind::SumOfSquares => {
            let [n] = params else {
                return Err(arity_err("n_g"));
            };
            if *n < 1 {
                return Err(Error::usage("SumOfSquares needs n_g >= 1"));
            }
            Ok(CostRecord::new(
                3 * n * n - n - 1,
                0,
                2 * n + 2,
                3 * n * n - n - 1,
            ))
        }
        PrimitiveKind::Mult => {
            let [n_a, n_b] = params else {
                return Err(arity_err("n_a, n_b"));
            };
            if *n_a < 2 || n_a > n_b {
                return Err(Error::usage("Mult needs 2 <= n_a <= n_b"));
            }
            Ok(CostRecord::new(
                n_a * n_b + 2 * n_b + n_a + 3,
                0,
                n_a + n_b,
                n_a + n_b + 1,
            ))
        }
        PrimitiveKind::SubPow2 => {
            let [n, k] = params else {
                return Err(arity_err("n, k"));
            };
            if k >= n {
                return Err(Error::usage("SubPow2 needs k < n"));
            }
            let width = n - k;
            Ok(CostRecord::new(
                width.saturating_sub(1),
                0,
                1,
                width.saturating_sub(3),
            ))
        }
        PrimitiveKind::CSub => {
            let [q] = params else {
                return Err(arity_err("q"));
            };
            if *q < 2 {
                return Err(Error::usage("CSub needs q >= 2"));
            }
            Ok(CostRecord::new(q - 1, 0, 3, q - 2))
        }
        PrimitiveKind::AmpBe => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            if *n < 1 {
                return Err(Error::usage("AmpBe needs n >= 1"));
            }
            Ok(CostRecord::new(4 * n - 3, n + 1, 0, 2))
        }
        PrimitiveKind::WalkSquare => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            if *n < 1 {
                return Err(Error::usage("WalkSquare needs n >= 1"));
            }
            Ok(CostRecord::new(10 * n - 6, n + 1, 0, n.saturating_sub(1)))
        }
        PrimitiveKind::Rotation => {
            let [n_r] = params else {
                return Err(arity_err("n_R"));
            };
            Ok(CostRecord::new(*n_r, 0, 0, 0))
        }
        PrimitiveKind::PrepW => {
            let [n_r] = params else {
                return Err(arity_err("n_R"));
            };
            Ok(CostRecord::new(n_r + 1, 0, 0, 0))
        }
        PrimitiveKind::Qft => {
            let [n] = params else {
                return Err(arity_err("n"));
            };
            Ok(CostRecord::new(n * (n + 1), 0, 0, 0))
        }
        PrimitiveKind::Swap1D => {
            let [k, n] = params else {
                return Err(arity_err("K, n"));
            };
            swap_network_cost(1, *k, *n, CostRecord::ZERO, CostRecord::ZERO)
        }
        PrimitiveKind::Swap2D => {
            let [k, n] = params else {
                return Err(arity_err("K, n"));
            };
            swap_network_cost(2, *k, *n, CostRecord::ZERO, CostRecord::ZERO)
        }
        PrimitiveKind::AlternatingSign => Err(Error::usage(
            "AlternatingSign takes a variant; call alternating_sign_cost directly",
        )),
    }
}

/// Rotation-synthesis width for accuracy eps: ceil(log2(pi/eps)).
pub fn rotation_width(eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::usage("rotation accuracy must be in (0,1)"));
    }
    Ok((std::f64::consts::PI / eps).log2().ceil() as u64)
}

/// Swap-network block-encoding: conjugates one kernel application with
/// multiplexed register swaps over K registers of n qubits each.
pub fn swap_network_cost(
    dims: u32,
    k: u64,
    n: u64,
    inner: CostRecord,
    prep: CostRecord,
) -> Result<CostRecord> {
    if !(1..=2).contains(&dims) {
        return Err(Error::usage("swap network dims must be 1 or 2"));
    }
    if k < 2 {
        return Err(Error::usage("swap network needs K >= 2 registers"));
    }
    let d = dims as u64;
    let toffolis = 2 * prep.toffolis + inner.toffolis + 2 * d * (k - 1) * (1 + n) - 4 * d;
    let unary_carry = if k <= 4 { 0 } else { ceil_log2(k - 3) };
    Ok(CostRecord {
        toffolis,
        be_qubits: inner.be_qubits + d * ceil_log2(k),
        junk_ancillas: inner.junk_ancillas + prep.junk_ancillas,
        temp_carry: inner.temp_carry.max(prep.temp_carry).max(unary_carry),
    })
}

/// Variants of the alternating-sign Coulomb flagging circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignVariant {
    /// Uniform saturation radius.
    Plain,
    /// Nuclear-pair saturation radius raised to Γ·Δ.
    Gamma,
    /// Spectral shift plus nuclear saturation.
    ShiftedGamma,
}

/// Arithmetic cost of the alternating-sign flagging for one particle pair.
///
/// For [`SignVariant::ShiftedGamma`] the returned Toffolis cover only the
/// arithmetic; the two coefficient preparations and the swap network are the
/// caller's, as is the preparation junk added to the carry tally.
pub fn alternating_sign_cost(n_g: u64, n_m: u64, variant: SignVariant) -> Result<CostRecord> {
    if n_m <= n_g + 1 {
        return Err(Error::usage(format!(
            "alternating sign arithmetic requires n_M > n_g + 1 (got n_M = {n_m}, n_g = {n_g})"
        )));
    }
    match variant {
        SignVariant::Plain => Ok(CostRecord {
            toffolis: 2 * n_m * n_m + 8 * n_m * n_g + 16 * n_m + 6 * n_g * n_g + 16 * n_g + 8,
            be_qubits: n_m,
            junk_ancillas: 2 * n_g,
            temp_carry: n_g + 4 + (3 * n_g * n_g).max(4 * n_m + 5 * n_g + 6),
        }),
        SignVariant::Gamma => {
            let plain = alternating_sign_cost(n_g, n_m, SignVariant::Plain)?;
            Ok(CostRecord {
                toffolis: plain.toffolis + 3,
                temp_carry: plain.temp_carry + 3,
                ..plain
            })
        }
        SignVariant::ShiftedGamma => Ok(CostRecord {
            toffolis: 6 * n_g * n_g + 2 * n_m * n_m + 8 * n_m * n_g + 36 * n_g + 20 * n_m + 46,
            be_qubits: n_m,
            junk_ancillas: 2 * n_g,
            temp_carry: (6 * n_g + 6 * n_m + 25).max(3 * n_g * n_g + n_g + 4),
        }),
    }
}

/// Data-load strategy for the coefficient tables inside state preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataLoad {
    /// Plain table lookup: K−1 Toffolis.
    Qrom,
    /// Lookup with a power-of-two fan-out trading Toffolis for dirty
    /// ancillas; the expansion exponent minimizes the Toffoli count.
    Qroam,
}

/// Cost of loading K bitstrings of width b: (toffolis, temp carries, dirty ancillas).
pub fn data_load_cost(k: u64, b: u64, mode: DataLoad) -> (u64, u64, u64) {
    if k <= 1 {
        return (0, 0, 0);
    }
    match mode {
        DataLoad::Qrom => (k - 1, ceil_log2(k).saturating_sub(1), 0),
        DataLoad::Qroam => {
            let mut best = (k - 1, ceil_log2(k).saturating_sub(1), 0);
            for lambda in 1..=ceil_log2(k) {
                let fan: u64 = 1 << lambda;
                let toff = k.div_ceil(fan) + b * (fan - 1);
                if toff < best.0 {
                    best = (toff, ceil_log2(k).saturating_sub(1), b * (fan - 1));
                }
            }
            best
        }
    }
}

/// Coefficient-loading strategies for the charge-pair preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepStrategy {
    /// Plain controlled coherent alias sampling over K coefficients.
    Alias,
    /// Alias sampling over the unique entries of a symmetric pair matrix.
    Symmetric,
    /// Product of two single-index preparations fixed up by one
    /// amplitude-amplification round.
    AmplitudeAmplified,
}

/// Precision register width of the keep/comparator stage:
/// ceil(log2(2/(K·eps))), at least 1.
pub fn aleph(k: u64, eps: f64) -> u64 {
    let raw = (2.0 / (k as f64 * eps)).log2().ceil();
    if raw < 1.0 {
        1
    } else {
        raw as u64
    }
}

/// Controlled coherent alias sampling over `k` coefficients with `n_f`
/// flag qubits, to coefficient accuracy `eps`.
pub fn alias_prep_cost(k: u64, n_f: u64, eps: f64, mode: DataLoad) -> Result<CostRecord> {
    if k < 1 {
        return Err(Error::usage("prepare needs at least one coefficient"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::usage("coefficient error must be in (0,1)"));
    }
    let b_k = ceil_log2(k);
    let k_pow = k.trailing_zeros() as u64;
    let l_k = ceil_log2(k >> k_pow);
    let al = aleph(k, eps);
    let data_width = b_k + al + 2 * n_f;
    let (q_load, q_carry, _dirty) = data_load_cost(k, data_width, mode);
    let t_r = rotation_width(eps / 4.0)?;
    let toffolis = b_k + n_f + 2 * l_k + q_load + 2 * t_r + al + (l_k + k_pow + al + 1);
    let junk = b_k + 2 * al + n_f + 1;
    let temp = (l_k.saturating_sub(1) + 1)
        .max(q_carry)
        .max(al.saturating_sub(1));
    Ok(CostRecord::new(toffolis, 0, junk, temp))
}

/// Alias sampling over the unique entries of a symmetric K×K coefficient
/// matrix with zero diagonal: S = K(K−1)/2 loaded entries, pair indices
/// reconstructed by a final controlled index swap.
pub fn symmetric_prep_cost(eta: u64, n_f: u64, eps: f64, mode: DataLoad) -> Result<CostRecord> {
    if eta < 2 {
        return Err(Error::usage(
            "symmetric prepare needs at least two particles",
        ));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::usage("coefficient error must be in (0,1)"));
    }
    let s = eta * (eta - 1) / 2;
    let n_eta = ceil_log2(eta);
    let b_s = ceil_log2(s);
    let s_pow = s.trailing_zeros() as u64;
    let l_s = ceil_log2(s >> s_pow);
    let al = aleph(s, eps);
    // Loaded data: the index pair, its alternate, the keep fraction, flags.
    let data_width = 4 * n_eta + al + 2 * n_f;
    let (q_load, q_carry, _dirty) = data_load_cost(s, data_width, mode);
    let t_r = rotation_width(eps / 4.0)?;
    let swaps = 2 * n_eta + n_f; // alternate-index and flag swaps
    let pair_swap = n_eta; // final j<->k symmetrization
    let toffolis = swaps + pair_swap + 1 + 2 * l_s + q_load + 2 * t_r + al + (l_s + s_pow + al + 1);
    let junk = b_s + 2 * n_eta + 2 * al + n_f + 2;
    let temp = (l_s.saturating_sub(1) + 1)
        .max(q_carry)
        .max(al.saturating_sub(1));
    Ok(CostRecord::new(toffolis, 0, junk, temp))
}

/// Charge-pair preparation from a product of two single-index charge
/// preparations and one amplitude-amplification round: six calls to the
/// single-index oracle plus the reflection logic.
pub fn amplitude_amplified_prep_cost(
    eta: u64,
    eps: f64,
    rotation_bits: u64,
    mode: DataLoad,
) -> Result<CostRecord> {
    let single = alias_prep_cost(eta, 1, eps, mode)?;
    let n_eta = ceil_log2(eta);
    // Each oracle call carries one extra Toffoli for the species flag.
    let t_single = single.toffolis + 1;
    let toffolis = 6 * t_single + 2 * n_eta + 16 + 5 * rotation_bits;
    Ok(CostRecord {
        toffolis,
        be_qubits: 0,
        junk_ancillas: 2 * single.junk_ancillas + 6,
        temp_carry: single.temp_carry.max(2 * n_eta + 7),
    })
}

/// Pick the cheaper charge-pair preparation for the system size.
pub fn choose_prep(
    eta: u64,
    n_f: u64,
    eps: f64,
    rotation_bits: u64,
    mode: DataLoad,
) -> Result<(PrepStrategy, CostRecord)> {
    let sym = symmetric_prep_cost(eta, n_f, eps, mode)?;
    let aa = amplitude_amplified_prep_cost(eta, eps, rotation_bits, mode)?;
    if sym.toffolis <= aa.toffolis {
        Ok((PrepStrategy::Symmetric, sym))
    } else {
        Ok((PrepStrategy::AmplitudeAmplified, aa))
    }
}

/// Surcharge on the pair preparation for flagging nuclear pairs when
/// saturation control is active.
pub const GAMMA_FLAG_SURCHARGE: u64 = 2;

/// Block-encoding of the full pairwise potential: a two-dimensional swap
/// network over η position registers wrapping the alternating-sign circuit.
pub fn block_encoding_cost_v(
    eta: u64,
    n_g: u64,
    n_m: u64,
    variant: SignVariant,
    prep: CostRecord,
) -> Result<CostRecord> {
    let sign = alternating_sign_cost(n_g, n_m, variant)?;
    if eta < 2 {
        return Err(Error::usage("potential needs at least two particles"));
    }
    let swap = match variant {
        // The shifted construction keeps the swap-network constant inside its
        // arithmetic total.
        SignVariant::ShiftedGamma => 4 * (eta - 1) * (1 + 3 * n_g),
        _ => 4 * (eta - 1) * (1 + 3 * n_g) - 8,
    };
    Ok(CostRecord {
        toffolis: 2 * prep.toffolis + swap + sign.toffolis,
        be_qubits: n_m + 2 * ceil_log2(eta),
        junk_ancillas: sign.junk_ancillas + prep.junk_ancillas,
        temp_carry: sign.temp_carry + prep.junk_ancillas,
    })
}

/// The two published constants of the kinetic arithmetic core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticConstant {
    /// Headline form: 2n_g² + 14n_g − 3.
    Statement,
    /// Step-sum form: 2n_g² + 16n_g − 4.
    StepSum,
}

/// Kinetic arithmetic core: the conjugated transform pair, the walk-based
/// squaring, and the Cartesian swaps.
pub fn kinetic_core(n_g: u64, constant: KineticConstant) -> u64 {
    match constant {
        KineticConstant::Statement => 2 * n_g * n_g + 14 * n_g - 3,
        KineticConstant::StepSum => 2 * n_g * n_g + 16 * n_g - 4,
    }
}

/// Block-encoding of the kinetic operator.
///
/// `fused_swaps` drops the particle swap network, shared with the potential
/// when both are combined under one selector.
pub fn block_encoding_cost_t(
    eta: u64,
    n_g: u64,
    w_rotation_bits: u64,
    mass_prep: CostRecord,
    fused_swaps: bool,
) -> Result<CostRecord> {
    if eta < 1 {
        return Err(Error::usage("kinetic term needs at least one particle"));
    }
    let mut toffolis = kinetic_core(n_g, KineticConstant::Statement)
        + 2 * w_rotation_bits
        + 2 * mass_prep.toffolis;
    if !fused_swaps {
        toffolis += 2 * (eta - 1) * (1 + 3 * n_g) - 4;
    }
    Ok(CostRecord {
        toffolis,
        be_qubits: ceil_log2(eta) + n_g + 4,
        junk_ancillas: mass_prep.junk_ancillas,
        temp_carry: (ceil_log2(eta) + n_g - 1).max(mass_prep.temp_carry),
    })
}

/// Full-Hamiltonian walk-operator cost: the closed-form core plus two calls
/// each to the pair preparation, the W-state rotation, and the mass
/// preparation.
pub fn block_encoding_cost_h(
    eta: u64,
    n_g: u64,
    n_m: u64,
    prep_v: CostRecord,
    w_rotation: CostRecord,
    mass_prep: CostRecord,
) -> Result<CostRecord> {
    if n_m <= n_g + 1 {
        return Err(Error::usage("full encoding requires n_M > n_g + 1"));
    }
    if eta < 2 {
        return Err(Error::usage("full encoding needs at least two particles"));
    }
    let core = h_closed_form_core(eta, n_g, n_m);
    let toffolis = core + 2 * (prep_v.toffolis + w_rotation.toffolis + mass_prep.toffolis);
    let junk = prep_v.junk_ancillas + mass_prep.junk_ancillas;
    Ok(CostRecord {
        toffolis,
        be_qubits: n_m + 2 * ceil_log2(eta) + 3,
        junk_ancillas: junk,
        temp_carry: n_g + 4 + (3 * n_g * n_g).max(4 * n_m + 5 * n_g + 6) + junk,
    })
}

/// The closed-form part of the walk-operator Toffoli count.
pub fn h_closed_form_core(eta: u64, n_g: u64, n_m: u64) -> u64 {
    12 * eta * n_g
        + 4 * eta
        + 2 * n_m * n_m
        + 8 * n_g * n_g
        + 8 * n_m * n_g
        + 40 * n_g
        + 20 * n_m
        + 39
}

/// Logical-qubit tally for the full simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QubitTally {
    pub system: u64,
    pub ancilla: u64,
    pub total: u64,
}

/// System register plus every ancilla class: block-encoding register,
/// arithmetic carries, phase gradient, preparation junk, and the two
/// polynomial-sequence controls.
pub fn qubit_tally(eta: u64, n_g: u64, n_m: u64, prep: CostRecord, n_r: u64) -> QubitTally {
    let system = 3 * n_g * eta;
    let n_h = n_m + 2 * ceil_log2(eta) + 3;
    let carry = n_g + 4 + (3 * n_g * n_g).max(4 * n_m + 5 * n_g + 6);
    let ancilla = n_h + carry + n_r + prep.junk_ancillas + 2;
    QubitTally {
        system,
        ancilla,
        total: system + ancilla,
    }
}
