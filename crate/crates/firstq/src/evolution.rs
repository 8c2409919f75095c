//! Error-budget allocation across the six subroutine errors, inversion of the
//! truncation bounds into register widths, query counts for the polynomial
//! time-evolution sequence, and the end-to-end Toffoli total.

use crate::cost;
use crate::error::Error;
use crate::system::{GridSpec, NormBundle};
use crate::Result;

/// Labels for the six error channels, in allocation order.
pub const FRACTION_LABELS: [&str; 6] =
    ["rotation", "poly", "potential", "charge", "mass", "w_state"];

/// Total-error split across the six subroutine channels.
///
/// Fractions, in order: prepare-rotation, polynomial approximation, potential
/// truncation, charge coefficients, mass coefficients, W state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ErrorBudget {
    pub epsilon_total: f64,
    /// Evolution time in atomic units.
    pub t_au: f64,
    pub fractions: [f64; 6],
    pub eps_rotation: f64,
    pub eps_poly: f64,
    pub eps_potential: f64,
    /// Charge-coefficient error per bohr of grid spacing; multiply by Δ at
    /// the use site ([`charge_error_at_grid`]).
    pub eps_charge_per_delta: f64,
    pub eps_mass: f64,
    pub eps_w: f64,
}

/// Uniform split: one sixth per channel.
pub fn uniform_fractions() -> [f64; 6] {
    [1.0 / 6.0; 6]
}

/// Derive the six subroutine errors from a total budget and its split.
///
/// Each channel's contribution to the propagated evolution error is exactly
/// its fraction of the total, which the closing assertion re-checks.
pub fn allocate(
    epsilon: f64,
    t_au: f64,
    norms: &NormBundle,
    fractions: [f64; 6],
) -> Result<ErrorBudget> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain("epsilon must be in (0,1)"));
    }
    if t_au <= 0.0 {
        return Err(Error::domain("evolution time must be positive"));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "fractions must sum to 1 (got {sum})"
        )));
    }
    if fractions.iter().any(|f| *f <= 0.0) {
        return Err(Error::domain("every fraction must be positive"));
    }
    let [f_r, f_exp, f_m, f_zeta, f_mass, f_w] = fractions;
    let alpha_h = norms.alpha_h;
    let alpha_v = norms.alpha_v;
    let alpha_t = norms.alpha_t;
    let lambda = if norms.gamma_applied {
        norms.lambda_v_gamma
    } else {
        norms.lambda_v
    };

    let budget = ErrorBudget {
        epsilon_total: epsilon,
        t_au,
        fractions,
        eps_rotation: epsilon * f_r / (t_au * alpha_h),
        eps_poly: epsilon * f_exp,
        eps_potential: epsilon * f_m * alpha_h / (t_au * lambda * alpha_v),
        eps_charge_per_delta: epsilon * f_zeta * 2.0 * alpha_h / (t_au * alpha_v),
        eps_mass: epsilon * f_mass * alpha_h * norms.lambda_t / (t_au * alpha_t * alpha_t),
        eps_w: epsilon * f_w * alpha_h / (t_au * alpha_t * alpha_t),
    };
    // Reassemble the propagated total error channel by channel; each term
    // folds back to ε·f by construction, so the sum must saturate ε.
    let reassembled = t_au
        * (alpha_h * budget.eps_rotation
            + (alpha_v / alpha_h)
                * (budget.eps_charge_per_delta / 2.0 + lambda * budget.eps_potential)
            + (alpha_t * alpha_t / alpha_h) * (budget.eps_w + budget.eps_mass / norms.lambda_t))
        + budget.eps_poly;
    if (reassembled - epsilon).abs() > 1e-9 * epsilon {
        return Err(Error::internal(format!(
            "allocated errors do not saturate the budget: {reassembled} vs {epsilon}"
        )));
    }
    Ok(budget)
}

/// The charge-coefficient error carries a grid-spacing factor at its use
/// site; this applies it.
pub fn charge_error_at_grid(budget: &ErrorBudget, grid: &GridSpec) -> f64 {
    budget.eps_charge_per_delta * grid.delta()
}

/// Smallest sign-register width whose truncation error fits the potential
/// allocation. The shifted encoding's per-pair bound is 1/(2^{n_M}·Δ); the
/// plain one carries the 3/2 boundary factor. Clamped below by the
/// alternating-sign precondition n_g + 2 and above at 64 bits.
pub fn n_m_from_budget(budget: &ErrorBudget, grid: &GridSpec, shifted: bool) -> u32 {
    let delta = grid.delta();
    let eps = budget.eps_potential;
    let needed = if shifted {
        // 1/(2^{n_M}·Δ) ≤ ε
        (1.0 / (eps * delta)).log2().ceil()
    } else {
        // 3/(2^{n_M+1}·Δ) ≤ ε
        (3.0 / (2.0 * eps * delta)).log2().ceil()
    };
    let floor = grid.n_g() + 2;
    let n_m = needed.max(0.0) as u32;
    n_m.clamp(floor, 64)
}

/// Degree and query count of the evolution polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QspPlan {
    pub degree: u64,
    /// Walk-operator queries: degree + 2.
    pub queries: u64,
}

/// Chebyshev-truncation constant 4/(√(2π)·e^{1/13}) ≈ 1.47762.
pub fn qsp_constant() -> f64 {
    4.0 / ((2.0 * std::f64::consts::PI).sqrt() * (1.0_f64 / 13.0).exp())
}

/// Polynomial degree for evolving to time `t_au` under a block-encoding with
/// subnormalization `alpha`: ceil((e/2)·α·t + ln(2c/ε_poly)).
pub fn qsp_degree(alpha: f64, t_au: f64, eps_poly: f64) -> Result<QspPlan> {
    if alpha <= 0.0 || t_au < 0.0 {
        return Err(Error::domain("alpha must be positive and t non-negative"));
    }
    if !(eps_poly > 0.0 && eps_poly < 1.0) {
        return Err(Error::domain("polynomial error must be in (0,1)"));
    }
    let c = qsp_constant();
    let raw = (std::f64::consts::E / 2.0) * alpha * t_au + (2.0 * c / eps_poly).ln();
    let degree = raw.ceil().max(1.0) as u64;
    Ok(QspPlan {
        degree,
        queries: degree + 2,
    })
}

/// Total Toffoli count: one walk operator per query plus the one-time
/// phase-gradient preparation.
pub fn total_toffoli(plan: &QspPlan, walk_toffolis: u64, phase_gradient_bits: u64) -> u128 {
    plan.degree as u128 * walk_toffolis as u128 + phase_gradient_bits as u128
}

/// Derivative-free minimization of the total cost over the error split.
///
/// Four fractions are free (rotation, potential, charge, mass); the W-state
/// fraction is tied to the mass channel and the polynomial fraction absorbs
/// the remainder, saturating the total-error budget. A deterministic simplex
/// search over the log-fractions runs from a seeded start plus restarts, and
/// the uniform split stays in the candidate set, so the result never loses
/// to it.
pub fn optimize_allocation(
    lambda_t: f64,
    cost_of: impl Fn(&[f64; 6]) -> f64,
    seed: u64,
) -> [f64; 6] {
    let tie = (lambda_t - 1.0) / lambda_t;
    // log-space simplex over (f_r, f_M, f_ζ, f_m)
    let complete = |x: &[f64; 4]| -> Option<[f64; 6]> {
        let f = [x[0].exp(), x[1].exp(), x[2].exp(), x[3].exp()];
        let f_w = f[3] * tie;
        let used: f64 = f.iter().sum::<f64>() + f_w;
        if used >= 0.999 {
            return None;
        }
        let f_exp = 1.0 - used;
        Some([f[0], f_exp, f[1], f[2], f[3], f_w])
    };
    let eval = |x: &[f64; 4]| -> f64 {
        match complete(x) {
            Some(f) => cost_of(&f),
            None => f64::INFINITY,
        }
    };

    let mut rng = seed.max(1);
    let mut next = move || {
        // xorshift64*
        rng ^= rng >> 12;
        rng ^= rng << 25;
        rng ^= rng >> 27;
        (rng.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
    };

    let uniform = uniform_fractions();
    let mut best_f = uniform;
    let mut best_cost = cost_of(&uniform);

    let starts: Vec<[f64; 4]> = {
        let u = (1.0f64 / 6.0).ln();
        let mut v = vec![[u; 4]];
        for _ in 0..3 {
            v.push([
                u + 3.0 * (next() - 0.5),
                u + 3.0 * (next() - 0.5),
                u + 3.0 * (next() - 0.5),
                u + 3.0 * (next() - 0.5),
            ]);
        }
        v
    };

    for start in starts {
        let mut simplex: Vec<[f64; 4]> = vec![start];
        for d in 0..4 {
            let mut p = start;
            p[d] += 0.7;
            simplex.push(p);
        }
        let mut values: Vec<f64> = simplex.iter().map(&eval).collect();
        for _ in 0..200 {
            let mut order: Vec<usize> = (0..simplex.len()).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
            let (lo, hi, hi2) = (order[0], order[4], order[3]);
            if (values[hi] - values[lo]).abs() <= 1e-9 * values[lo].abs().max(1.0) {
                break;
            }
            let mut centroid = [0.0; 4];
            for &i in &order[..4] {
                for d in 0..4 {
                    centroid[d] += simplex[i][d] / 4.0;
                }
            }
            let reflect = |t: f64| {
                let mut p = [0.0; 4];
                for d in 0..4 {
                    p[d] = centroid[d] + t * (centroid[d] - simplex[hi][d]);
                }
                p
            };
            let xr = reflect(1.0);
            let fr = eval(&xr);
            if fr < values[lo] {
                let xe = reflect(2.0);
                let fe = eval(&xe);
                if fe < fr {
                    simplex[hi] = xe;
                    values[hi] = fe;
                } else {
                    simplex[hi] = xr;
                    values[hi] = fr;
                }
            } else if fr < values[hi2] {
                simplex[hi] = xr;
                values[hi] = fr;
            } else {
                let xc = reflect(-0.5);
                let fc = eval(&xc);
                if fc < values[hi] {
                    simplex[hi] = xc;
                    values[hi] = fc;
                } else {
                    for &i in &order[1..] {
                        let low = simplex[lo];
                        for (x, l) in simplex[i].iter_mut().zip(low) {
                            *x = l + 0.5 * (*x - l);
                        }
                        values[i] = eval(&simplex[i]);
                    }
                }
            }
        }
        for (i, v) in values.iter().enumerate() {
            if *v < best_cost {
                if let Some(f) = complete(&simplex[i]) {
                    best_cost = *v;
                    best_f = f;
                }
            }
        }
    }
    best_f
}

/// Shared phase-gradient register width: wide enough for the most precise
/// rotation in the workflow.
pub fn phase_gradient_width(budget: &ErrorBudget, grid: &GridSpec) -> Result<u64> {
    let eps_zeta = charge_error_at_grid(budget, grid);
    let widths = [
        cost::rotation_width(budget.eps_rotation)?,
        cost::rotation_width(budget.eps_w)?,
        cost::rotation_width(eps_zeta / 4.0)?,
        cost::rotation_width(budget.eps_mass / 4.0)?,
    ];
    Ok(widths.into_iter().max().unwrap())
}
