//! Property tests spanning modules: grid identities, permutation invariance,
//! circuit semantics on random widths, sign-function cross-checks between the
//! numeric and gate-level paths, and a high-precision oracle for the query
//! count.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use firstq::cost::CostRecord;
use firstq::evolution::qsp_degree;
use firstq::lcu;
use firstq::revsim;
use firstq::system::{
    compute_norms, gamma_spec, required_ng, GridSpec, ParticleSet, SaturationSpec,
};

proptest! {
    #[test]
    fn grid_spacing_round_trips(l in 1.0f64..500.0, n_g in 2u32..16) {
        let grid = GridSpec::new(l, n_g).unwrap();
        let back = required_ng(grid.l(), grid.delta()).unwrap();
        prop_assert_eq!(back, n_g);
        let exact = l / ((1u64 << n_g) - 1) as f64;
        prop_assert!((grid.delta() - exact).abs() <= f64::EPSILON * exact);
    }

    #[test]
    fn gamma_spec_is_maximal_and_clamped(l in 1.0f64..100.0, n_g in 3u32..10, ratio in 0.2f64..40.0) {
        let grid = GridSpec::new(l, n_g).unwrap();
        let d_nuc = ratio * grid.delta();
        let sat = gamma_spec(d_nuc, &grid);
        prop_assert!(sat.effective_min_distance(&grid) <= d_nuc * (1.0 + 1e-12) || sat.n_gamma == 0);
        if sat.n_gamma > 0 {
            let next = grid.delta() * 2f64.powf((sat.n_gamma + 1) as f64 / 2.0);
            prop_assert!(next > d_nuc * (1.0 - 1e-12));
        } else {
            prop_assert!(d_nuc <= 2f64.sqrt() * grid.delta() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn norms_are_permutation_invariant(seed in 0u64..1000) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(2..8);
        let mut nuclei: Vec<(u32, f64)> = (0..n)
            .map(|_| (rng.gen_range(1..10), rng.gen_range(1800.0..40000.0)))
            .collect();
        let grid = GridSpec::new(30.0, 6).unwrap();
        let sat = SaturationSpec { n_gamma: 3 };
        let base = compute_norms(
            &ParticleSet::new(nuclei.clone(), 0).unwrap(), &grid, &sat, true).unwrap();
        for _ in 0..4 {
            let i = rng.gen_range(0..nuclei.len());
            let j = rng.gen_range(0..nuclei.len());
            nuclei.swap(i, j);
        }
        let shuffled = compute_norms(
            &ParticleSet::new(nuclei, 0).unwrap(), &grid, &sat, true).unwrap();
        prop_assert!((base.lambda_v - shuffled.lambda_v).abs() < 1e-9);
        prop_assert!((base.lambda_v_gamma - shuffled.lambda_v_gamma).abs() < 1e-9);
        prop_assert!((base.lambda_t - shuffled.lambda_t).abs() < 1e-12);
        prop_assert!((base.alpha_h - shuffled.alpha_h).abs() < 1e-9 * base.alpha_h);
    }

    #[test]
    fn cost_record_seq_associative(
        a in any::<[u16; 4]>(), b in any::<[u16; 4]>(), c in any::<[u16; 4]>()
    ) {
        let rec = |x: [u16; 4]| CostRecord::new(x[0] as u64, x[1] as u64, x[2] as u64, x[3] as u64);
        let (a, b, c) = (rec(a), rec(b), rec(c));
        prop_assert_eq!(a.seq(b).seq(c), a.seq(b.seq(c)));
    }

    #[test]
    fn alternating_bound_holds_for_random_params(n_g in 2u32..7, n_m in 4u32..11) {
        let params = lcu::LcuParams { n_g, n_m, delta: 1.0, n_gamma: 0, shifted: false };
        for row in lcu::alternating_sweep(&params) {
            prop_assert!(row.error <= row.bound, "q={} M={}", row.q, row.m);
        }
    }

    #[test]
    fn mult_random_wide(seed in 0u64..60) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n_a = rng.gen_range(2..=10u32);
        let n_b = rng.gen_range(n_a..=12u32);
        let c = revsim::build_mult(n_a, n_b).unwrap();
        for _ in 0..20 {
            let a = rng.gen_range(0..(1i128 << n_a));
            let b = rng.gen_range(0..(1i128 << n_b));
            let run = c.run(&[("a", a), ("b", b)]).unwrap();
            prop_assert_eq!(run.values["product"], a * b);
            prop_assert_eq!(run.values["a"], a);
            prop_assert_eq!(run.values["b"], b);
        }
    }

    #[test]
    fn abs_diff_random_wide(seed in 0u64..60) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(2..=16u32);
        let c = revsim::build_abs_diff(n).unwrap();
        let half = 1i128 << (n - 1);
        for _ in 0..30 {
            let a = rng.gen_range(-half..half);
            let b = rng.gen_range(-half..half);
            let run = c.run(&[("a", a), ("b", b)]).unwrap();
            prop_assert_eq!(run.values["result"], (a - b).abs());
            prop_assert_eq!(run.values["sign"], i128::from(a < b));
        }
    }
}

/// Every certified builder declares exactly the Toffoli count its gate list
/// measures.
#[test]
fn declared_costs_match_measured_counts() {
    let circuits = vec![
        revsim::build_abs(7).unwrap(),
        revsim::build_abs_diff(6).unwrap(),
        revsim::build_mult(5, 9).unwrap(),
        revsim::build_is_eq(8).unwrap(),
        revsim::build_sub_pow2(9, 4).unwrap(),
        revsim::build_csub(14, 4, 3).unwrap(),
        revsim::build_uv_arithmetic(3, 6).unwrap(),
    ];
    for c in circuits {
        assert_eq!(c.declared_cost.toffolis, c.measured_toffolis());
    }
}

/// Total cost grows with evolution time, subnormalization, and precision.
#[test]
fn total_cost_is_monotone() {
    use firstq::evolution::{total_toffoli, QspPlan};
    let d = |alpha: f64, t: f64, eps: f64| qsp_degree(alpha, t, eps).unwrap().degree;
    assert!(d(1e4, 82.7, 1e-2) >= d(1e4, 41.3, 1e-2));
    assert!(d(2e4, 41.3, 1e-2) >= d(1e4, 41.3, 1e-2));
    assert!(d(1e4, 41.3, 1e-4) >= d(1e4, 41.3, 1e-2));
    let plan = QspPlan {
        degree: 100,
        queries: 102,
    };
    let bigger = QspPlan {
        degree: 101,
        queries: 103,
    };
    assert!(total_toffoli(&bigger, 5000, 30) > total_toffoli(&plan, 5000, 30));
}

/// Every builder followed by its mirror acts as the identity on random
/// wire patterns.
#[test]
fn circuits_mirror_to_identity_on_random_states() {
    let circuits = vec![
        revsim::build_abs(6).unwrap(),
        revsim::build_abs_diff(5).unwrap(),
        revsim::build_mult(4, 6).unwrap(),
        revsim::build_is_eq(6).unwrap(),
        revsim::build_sub_pow2(7, 3).unwrap(),
        revsim::build_csub(12, 3, 4).unwrap(),
        revsim::build_uv_arithmetic(2, 5).unwrap(),
    ];
    let mut rng = StdRng::seed_from_u64(7);
    for c in circuits {
        let inv = c.inverse();
        for _ in 0..1000 {
            let mut state = revsim::SimState::zeros(c.wire_count);
            for bit in state.bits.iter_mut() {
                *bit = rng.gen_bool(0.5);
            }
            let before = state.bits.clone();
            c.run_from(&mut state).unwrap();
            inv.run_from(&mut state).unwrap();
            assert_eq!(state.bits, before);
        }
    }
}

/// Temporary registers come back to zero after a forward pass on valid
/// inputs: the circuits leave no junk beyond their declared outputs.
#[test]
fn junk_discipline_on_valid_inputs() {
    let c = revsim::build_mult(4, 5).unwrap();
    let named: Vec<usize> = c
        .registers
        .iter()
        .flat_map(|r| r.wires.iter().copied())
        .collect();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let a = rng.gen_range(0..16);
        let b = rng.gen_range(0..32);
        let mut state = revsim::SimState::zeros(c.wire_count);
        let ra = c.register("a").unwrap();
        let rb = c.register("b").unwrap();
        for (i, w) in ra.wires.iter().enumerate() {
            state.bits[*w] = (a >> i) & 1 == 1;
        }
        for (i, w) in rb.wires.iter().enumerate() {
            state.bits[*w] = (b >> i) & 1 == 1;
        }
        c.run_from(&mut state).unwrap();
        for w in 0..c.wire_count {
            if !named.contains(&w) {
                assert!(!state.bits[w], "temp wire {w} dirty for a={a} b={b}");
            }
        }
    }
}

/// The phase trace of the gate-level flagging arithmetic agrees with the
/// integer sign function, sampled over a thousand random inputs.
#[test]
fn phase_trace_matches_sign_function() {
    let mut rng = StdRng::seed_from_u64(23);
    let mut checked = 0;
    for (n_g, n_m) in [(2u32, 5u32), (2, 6), (3, 6)] {
        let c = revsim::build_uv_arithmetic(n_g, n_m).unwrap();
        let half = 1i128 << (n_g - 1);
        let big_m = 1u64 << n_m;
        for _ in 0..334 {
            let m = rng.gen_range(0..big_m as i128);
            let q1: Vec<i128> = (0..3).map(|_| rng.gen_range(-half..half)).collect();
            let q2: Vec<i128> = (0..3).map(|_| rng.gen_range(-half..half)).collect();
            let run = c
                .run(&[
                    ("m", m),
                    ("q1x", q1[0]),
                    ("q1y", q1[1]),
                    ("q1z", q1[2]),
                    ("q2x", q2[0]),
                    ("q2y", q2[1]),
                    ("q2z", q2[2]),
                ])
                .unwrap();
            let x: u64 = (0..3)
                .map(|i| ((q1[i] - q2[i]) * (q1[i] - q2[i])) as u64)
                .sum();
            let expect = lcu::u_m(x, m as u64, big_m);
            assert_eq!(run.phase as i8, expect, "m={m} q1={q1:?} q2={q2:?}");
            // Inputs restored by the mirrored arithmetic.
            assert_eq!(run.values["m"], m);
            assert_eq!(run.values["q1x"], q1[0]);
            assert_eq!(run.values["q2z"], q2[2]);
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}

/// The query-count ceiling evaluated in 192-bit arithmetic brackets the
/// double-precision result on random inputs.
#[test]
fn qsp_degree_matches_high_precision_oracle() {
    use astro_float::{BigFloat, Consts, RoundingMode};
    const P: usize = 192;
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().unwrap();

    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..100 {
        let alpha = 10f64.powf(rng.gen_range(0.0..6.0));
        let t = 10f64.powf(rng.gen_range(-1.0..3.0));
        let eps = 10f64.powf(rng.gen_range(-12.0..-1.0));
        let plan = qsp_degree(alpha, t, eps).unwrap();

        let e = cc.e(P, rm);
        let lead = e
            .mul(&BigFloat::from_f64(0.5, P), P, rm)
            .mul(&BigFloat::from_f64(alpha, P), P, rm)
            .mul(&BigFloat::from_f64(t, P), P, rm);
        let pi = cc.pi(P, rm);
        let sqrt_2pi = pi.mul(&BigFloat::from_f64(2.0, P), P, rm).sqrt(P, rm);
        let e13 = BigFloat::from_f64(1.0, P)
            .div(&BigFloat::from_f64(13.0, P), P, rm)
            .exp(P, rm, &mut cc);
        let c = BigFloat::from_f64(4.0, P).div(&sqrt_2pi.mul(&e13, P, rm), P, rm);
        let log_term = c
            .mul(&BigFloat::from_f64(2.0, P), P, rm)
            .div(&BigFloat::from_f64(eps, P), P, rm)
            .ln(P, rm, &mut cc);
        let raw = lead.add(&log_term, P, rm);

        // plan.degree is the ceiling: degree − 1 < raw ≤ degree.
        let d = BigFloat::from_f64(plan.degree as f64, P);
        let d_minus = BigFloat::from_f64((plan.degree - 1) as f64, P);
        assert!(
            raw.cmp(&d).unwrap() <= 0,
            "raw above ceiling at alpha={alpha} t={t} eps={eps}"
        );
        assert!(
            raw.cmp(&d_minus).unwrap() > 0,
            "ceiling too high at alpha={alpha} t={t} eps={eps}"
        );
    }
}

/// Builtin estimates barely move when the error fractions are permuted, as
/// long as the published register widths stay pinned.
#[test]
fn allocation_permutations_stay_within_ten_percent() {
    use firstq::interface::{builtin_reaction, estimate, Allocation};
    for key in ["NH3+BF3", "C2H4+O2", "C23H20N3O"] {
        let (mut spec, _) = builtin_reaction(key).unwrap();
        let base = estimate(&spec).unwrap().toffolis_total as f64;
        let Allocation::Explicit { fractions } = spec.options.allocation.clone() else {
            panic!("builtin allocation shape")
        };
        for perm in [
            [1usize, 2, 3, 4, 5, 0],
            [5, 4, 3, 2, 1, 0],
            [2, 0, 5, 1, 3, 4],
        ] {
            let mut f = [0.0; 6];
            for (i, p) in perm.into_iter().enumerate() {
                f[i] = fractions[p];
            }
            spec.options.allocation = Allocation::Explicit { fractions: f };
            let cost = estimate(&spec).unwrap().toffolis_total as f64;
            assert!(
                (cost - base).abs() / base < 0.10,
                "{key}: permutation moved cost by {:.3}",
                (cost - base).abs() / base
            );
        }
    }
}
