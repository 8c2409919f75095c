//! Brute-force numeric verification of the diagonal LCU decompositions: the
//! alternating-sign encoding of the saturated Coulomb kernel, its spectrally
//! shifted and nuclear-saturated variants, and the amplitude and square
//! block-encoding identities.
//!
//! Every branch test here uses exact integer arithmetic. The quantum circuits
//! being modelled are exact, so floating-point rounding at branch boundaries
//! would produce spurious bound violations.

use crate::error::Error;
use crate::system::ParticleSet;
use crate::Result;

/// Parameters of one diagonal LCU instance.
#[derive(Debug, Clone, Copy)]
pub struct LcuParams {
    /// Grid bits per axis.
    pub n_g: u32,
    /// Sign-register bits; M = 2^{n_M}.
    pub n_m: u32,
    /// Grid spacing in bohr.
    pub delta: f64,
    /// Nuclear saturation exponent; Γ² = 2^{n_gamma}.
    pub n_gamma: u32,
    pub shifted: bool,
}

impl LcuParams {
    pub fn m(&self) -> u64 {
        1u64 << self.n_m
    }

    pub fn gamma(&self) -> f64 {
        2f64.powf(self.n_gamma as f64 / 2.0)
    }

    /// Largest grid distance on the cubic grid diagonal.
    pub fn q_max(&self) -> u64 {
        (3f64.sqrt() * (1u64 << self.n_g) as f64).ceil() as u64
    }
}

/// Saturated Coulomb kernel: 1/r above one grid spacing, clipped to 1/Δ below.
pub fn saturated_kernel(r: f64, delta: f64) -> f64 {
    if r > delta {
        1.0 / r
    } else {
        1.0 / delta
    }
}

/// Sign of the m-th LCU component for squared distance `x`: +1 while
/// m²·x < M², alternating (−1)^m once the inequality flips.
pub fn u_m(x: u64, m: u64, big_m: u64) -> i8 {
    let lhs = (m as u128) * (m as u128) * (x as u128);
    let rhs = (big_m as u128) * (big_m as u128);
    if lhs < rhs {
        return 1;
    }
    alternating(m)
}

fn alternating(m: u64) -> i8 {
    if m.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Uniform-weight alternating-sign sum approximating S(qΔ)/2.
pub fn alternating_sum(q: u64, params: &LcuParams) -> f64 {
    let m_total = params.m();
    let x = q * q;
    let mut acc: i64 = 0;
    for m in 0..m_total {
        acc += u_m(x, m, m_total) as i64;
    }
    acc as f64 / (2.0 * m_total as f64 * params.delta)
}

/// Shifted sign function with nuclear saturation Γ.
///
/// `x` is the squared grid distance. The solid +1 branch holds while
/// m/M < Γ/q − 1/2 inside the saturation radius, the solid −1 branch while
/// m/M < 1/2 − Γ/q outside it, and the remainder alternates.
pub fn v_m_nuc(x: u64, m: u64, big_m: u64, gamma_sq: u64) -> i8 {
    let x = x as u128;
    let m = m as u128;
    let big_m = big_m as u128;
    let gamma_sq = gamma_sq as u128;
    // q ≤ 2Γ  ⟺  q² ≤ 4Γ²
    let inside = x <= 4 * gamma_sq;
    if inside {
        // m/M < Γ/q − 1/2  ⟺  q²(2m+M)² < 4Γ²M²
        let lhs = x * (2 * m + big_m) * (2 * m + big_m);
        let rhs = 4 * gamma_sq * big_m * big_m;
        if lhs < rhs {
            return 1;
        }
    } else {
        // m/M < 1/2 − Γ/q  ⟺  2m < M and q²(M−2m)² > 4Γ²M²
        if 2 * m < big_m {
            let lhs = x * (big_m - 2 * m) * (big_m - 2 * m);
            let rhs = 4 * gamma_sq * big_m * big_m;
            if lhs > rhs {
                return -1;
            }
        }
    }
    alternating(m as u64)
}

/// Unsaturated shifted sign function.
pub fn v_m(x: u64, m: u64, big_m: u64) -> i8 {
    v_m_nuc(x, m, big_m, 1)
}

/// Target kernel of the shifted encoding for q ≥ 1, scaled by Γ for nuclear
/// pairs: min(1/(2Δ), Γ/(2qΔ) − 1/(4Δ)). At Γ = 1 this is S(qΔ)/2 − 1/(4Δ).
/// The clip at the unshifted ceiling only engages inside the nuclear
/// exclusion zone q < 2Γ/3.
pub fn shifted_target(q: u64, params: &LcuParams) -> f64 {
    let gamma = params.gamma();
    let delta = params.delta;
    let unclipped = gamma / (2.0 * q as f64 * delta) - 1.0 / (4.0 * delta);
    unclipped.min(1.0 / (2.0 * delta))
}

/// Uniform-weight shifted alternating sum. Valid for q ≥ 1; the coincident
/// point q = 0 keeps the full saturated value 1/(2Δ) by construction.
pub fn shifted_sum(q: u64, params: &LcuParams) -> f64 {
    let m_total = params.m();
    let gamma_sq = 1u64 << params.n_gamma;
    let x = q * q;
    let mut acc: i64 = 0;
    for m in 0..m_total {
        acc += v_m_nuc(x, m, m_total, gamma_sq) as i64;
    }
    acc as f64 / (2.0 * m_total as f64 * params.delta)
}

/// One row of a verification sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub q: u64,
    pub m: u64,
    pub approx: f64,
    pub target: f64,
    pub error: f64,
    pub bound: f64,
}

/// Sweep the alternating sum over all grid distances, comparing against the
/// saturated kernel with the 3/(2MΔ) guarantee.
pub fn alternating_sweep(params: &LcuParams) -> Vec<SweepRow> {
    let m_total = params.m();
    let bound = 3.0 / (2.0 * m_total as f64 * params.delta);
    (0..=params.q_max())
        .map(|q| {
            let approx = alternating_sum(q, params);
            let target = saturated_kernel(q as f64 * params.delta, params.delta) / 2.0;
            SweepRow {
                q,
                m: m_total,
                approx,
                target,
                error: (approx - target).abs(),
                bound,
            }
        })
        .collect()
}

/// Sweep the shifted sum over q ≥ 1 against the shifted kernel. The recorded
/// bound is the measured maximum rather than an assumed constant.
pub fn shifted_sweep(params: &LcuParams) -> Vec<SweepRow> {
    let m_total = params.m();
    let mut rows: Vec<SweepRow> = (1..=params.q_max())
        .map(|q| {
            let approx = shifted_sum(q, params);
            let target = shifted_target(q, params);
            SweepRow {
                q,
                m: m_total,
                approx,
                target,
                error: (approx - target).abs(),
                bound: 0.0,
            }
        })
        .collect();
    let max_err = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    for r in &mut rows {
        r.bound = max_err;
    }
    rows
}

/// Report of the amplitude and square identity check.
#[derive(Debug, Clone)]
pub struct AmpReport {
    pub width: u32,
    pub checked: u64,
    pub failures: Vec<i64>,
}

/// Verify, for every two's-complement value of the given width, that the
/// bitwise LCU with the one's-complement negative branch reproduces the value
/// exactly, and that the walk identity 2â² − 1 = T₂(â) holds at the declared
/// normalization.
pub fn amp_identity_check(width: u32) -> Result<AmpReport> {
    if !(2..=12).contains(&width) {
        return Err(Error::usage("amp identity check supports widths 2..=12"));
    }
    let n = width;
    let half = 1i64 << (n - 1);
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in -half..half {
        let bits = (a as u64) & ((1u64 << n) - 1);
        let sign = (bits >> (n - 1)) & 1;
        // Negative branch works on the one's complement of the low bits.
        let low_mask = (1u64 << (n - 1)) - 1;
        let eff = if sign == 1 {
            !bits & low_mask
        } else {
            bits & low_mask
        };
        // Double sum over the one-hot amplitude index b and the ± qubit h.
        let mut magnitude_num = 0i64; // in halves
        for b in 0..(n - 1) {
            let bit = (eff >> b) & 1;
            for h in 0..2u64 {
                let k = if bit == 1 { 1 } else { alternating(h) as i64 };
                magnitude_num += k * (1i64 << b);
            }
        }
        let mut magnitude = magnitude_num / 2;
        if sign == 1 {
            // The all-zeros flag component contributes the +1 of the
            // complement-and-increment branch.
            magnitude += 1;
        }
        let reconstructed = if sign == 1 { -magnitude } else { magnitude };
        if reconstructed != a {
            failures.push(a);
        }
        // Walk identity at 1-norm 2^{n-1}.
        let a_hat = a as f64 / half as f64;
        let lhs = 2.0 * a_hat * a_hat - 1.0;
        let rhs = chebyshev_t2(a_hat);
        if (lhs - rhs).abs() > 0.0 {
            failures.push(a);
        }
        checked += 1;
    }
    let report = AmpReport {
        width,
        checked,
        failures,
    };
    if report.failures.is_empty() {
        Ok(report)
    } else {
        Err(Error::verification(format!(
            "amplitude identity failed for width {} at values {:?}",
            width, report.failures
        )))
    }
}

fn chebyshev_t2(x: f64) -> f64 {
    2.0 * x * x - 1.0
}

/// Exact success probability of preparing the charge-pair state from a
/// product of two single-index charge states via one amplitude-amplification
/// round.
pub fn aa_success_probability(particles: &ParticleSet, gamma: f64) -> Result<f64> {
    if particles.eta_e() == 0 {
        return Err(Error::domain(
            "amplitude-amplified preparation needs at least one electron",
        ));
    }
    if gamma < 1.0 {
        return Err(Error::domain("saturation constant must be >= 1"));
    }
    let charges: Vec<f64> = particles.charges().map(|z| z as f64).collect();
    let eta_n = particles.eta_n();
    let lambda_zeta: f64 = charges.iter().sum();
    if lambda_zeta == 0.0 {
        return Err(Error::domain("zero total charge"));
    }
    let mut overlap = 0.0;
    let mut lambda_v_gamma = 0.0;
    for i in 0..charges.len() {
        for j in 0..charges.len() {
            if i == j {
                continue;
            }
            let zz = charges[i] * charges[j];
            let weight = if i < eta_n && j < eta_n {
                zz / gamma
            } else {
                zz
            };
            overlap += (zz * weight).sqrt();
            lambda_v_gamma += weight;
        }
    }
    let p = overlap * overlap / (lambda_zeta * lambda_zeta * lambda_v_gamma);
    if particles.net_charge() == 0 && p < 0.25 {
        return Err(Error::internal(format!(
            "success probability {p} below 1/4 for a neutral system"
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements;
    use crate::system::ParticleSet;

    fn params(n_g: u32, n_m: u32) -> LcuParams {
        LcuParams {
            n_g,
            n_m,
            delta: 1.0,
            n_gamma: 0,
            shifted: false,
        }
    }

    #[test]
    fn kernel_branches() {
        assert_eq!(saturated_kernel(1.0, 1.0), 1.0);
        assert_eq!(saturated_kernel(2.0, 1.0), 0.5);
        assert_eq!(saturated_kernel(0.0, 1.0), 1.0);
    }

    #[test]
    fn u_m_branch_examples() {
        let m_total = 8;
        for x in [0, 1, 5, 100] {
            assert_eq!(u_m(x, 0, m_total), 1);
        }
        for m in 0..m_total {
            assert_eq!(u_m(0, m, m_total), 1);
        }
        // m = M−1 = 7, x = 4: 49·4 = 196 ≥ 64 → (−1)^7.
        assert_eq!(u_m(4, 7, 8), -1);
    }

    #[test]
    fn alternating_sum_exact_at_origin() {
        for n_m in [4, 6, 10] {
            let p = params(4, n_m);
            assert_eq!(alternating_sum(0, &p), 1.0 / (2.0 * p.delta));
        }
    }

    #[test]
    fn alternating_sum_bound_at_unit_distance() {
        let p = params(4, 10);
        let s = alternating_sum(1, &p);
        assert!((s - 0.5).abs() <= 3.0 / (2.0 * 1024.0));
    }

    #[test]
    fn alternating_error_shrinks_with_m() {
        let mut prev = f64::INFINITY;
        for n_m in 4..=12 {
            let p = params(4, n_m);
            let worst = alternating_sweep(&p)
                .iter()
                .map(|r| r.error)
                .fold(0.0, f64::max);
            assert!(
                worst <= prev * (1.0 + 1e-12),
                "n_m={n_m}: {worst} vs {prev}"
            );
            prev = worst;
        }
    }

    #[test]
    fn v_m_reduces_to_unsaturated() {
        for x in 0..64 {
            for m in 0..16 {
                assert_eq!(v_m(x, m, 16), v_m_nuc(x, m, 16, 1));
            }
        }
    }

    #[test]
    fn v_m_branch_examples() {
        let m_total = 16;
        // One grid step: threshold 1/2, +1 branch below it.
        for m in 0..m_total / 2 {
            assert_eq!(v_m(1, m, m_total), 1);
        }
        // Far outside the saturation radius at m = 0: solid −1.
        assert_eq!(v_m(100, 0, m_total), -1);
    }

    #[test]
    fn shifted_sum_examples() {
        let p = LcuParams {
            n_g: 5,
            n_m: 12,
            delta: 1.0,
            n_gamma: 0,
            shifted: true,
        };
        // q = 1: S(Δ)/2 − 1/(4Δ) = 1/(4Δ).
        let s1 = shifted_sum(1, &p);
        assert!((s1 - 0.25).abs() < 3.0 / p.m() as f64, "got {s1}");
        // Large q: tends to the shifted floor −1/(4Δ).
        let far = shifted_sum(p.q_max(), &p);
        assert!((far + 0.25).abs() < 0.01, "got {far}");
    }

    #[test]
    fn shifted_norm_is_half_the_plain_one() {
        let plain = params(5, 10);
        let shifted = LcuParams {
            shifted: true,
            ..plain
        };
        let plain_max = alternating_sweep(&plain)
            .iter()
            .map(|r| r.approx.abs())
            .fold(0.0, f64::max);
        let shifted_max = shifted_sweep(&shifted)
            .iter()
            .map(|r| r.approx.abs())
            .fold(0.0, f64::max);
        assert!(
            shifted_max <= 0.55 * plain_max,
            "{shifted_max} vs {plain_max}"
        );
    }

    #[test]
    fn shifted_error_within_linear_bound() {
        for n_m in [6, 8, 10] {
            for n_gamma in [0, 3] {
                let p = LcuParams {
                    n_g: 4,
                    n_m,
                    delta: 1.0,
                    n_gamma,
                    shifted: true,
                };
                let worst = shifted_sweep(&p)
                    .iter()
                    .map(|r| r.error)
                    .fold(0.0, f64::max);
                assert!(
                    worst <= 3.0 / (p.m() as f64 * p.delta),
                    "n_m={n_m} gamma2^{n_gamma}: {worst}"
                );
            }
        }
    }

    #[test]
    fn amp_identity_rejects_unsupported_widths() {
        assert!(amp_identity_check(1).is_err());
        assert!(amp_identity_check(13).is_err());
    }

    #[test]
    fn amp_identity_exhaustive_small() {
        for n in 2..=8 {
            let rep = amp_identity_check(n).unwrap();
            assert_eq!(rep.checked, 1u64 << n);
            assert!(rep.failures.is_empty());
        }
    }

    fn nh3_bf3() -> ParticleSet {
        let m = |s: &str| elements::by_symbol(s).unwrap().mass_au();
        ParticleSet::new(
            vec![
                (7, m("N")),
                (1, m("H")),
                (1, m("H")),
                (1, m("H")),
                (5, m("B")),
                (9, m("F")),
                (9, m("F")),
                (9, m("F")),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn success_probability_bounds() {
        let p = nh3_bf3();
        let eta_e = p.eta_e() as f64;
        // Γ = 1: the product-state overlap bound λ_V/λ_ζ².
        let p1 = aa_success_probability(&p, 1.0).unwrap();
        let lambda_zeta: f64 = p.charges().map(|z| z as f64).sum();
        let lambda_v = 6694.0;
        assert!(p1 >= lambda_v / (lambda_zeta * lambda_zeta) - 1e-12);
        // Saturated: still a single amplification round.
        let p2 = aa_success_probability(&p, 2f64.powf(1.5)).unwrap();
        assert!(p2 >= 0.25);
        // Neutral-system floor.
        assert!(p2 >= 0.75 - 1.0 / (4.0 * eta_e) - 0.05);
    }
}
