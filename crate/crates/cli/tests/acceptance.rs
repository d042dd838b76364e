//! Acceptance suite: one test per release criterion, each printing the
//! measured quantities it gates on (visible with `--nocapture`).
//!
//! Reference constants are re-derived through the brute-force oracles before
//! the solver outputs are compared against them, so a frozen value is never
//! trusted on its own.

use std::process::{Command, Output};

use erasure_bounds::*;

fn bec(eps: f64) -> BecSpec {
    BecSpec::new(eps).unwrap()
}

fn src_k4(p: f64) -> SourceSpec {
    SourceSpec::new(4, p).unwrap()
}

fn expurgated_objective(rate: f64, eps: f64) -> impl Fn(f64) -> f64 {
    move |rho: f64| rho * (1.0 - rate - (1.0 + eps.powf(1.0 / rho)).log2())
}

fn sphere_objective(rate: f64, eps: f64) -> impl Fn(f64) -> f64 {
    move |rho: f64| rho * (1.0 - rate) - ((1.0 - eps) + eps * rho.exp2()).log2()
}

const EPS_GRID: [f64; 5] = [1e-4, 1e-3, 1e-2, 0.1, 0.25];

fn rate_grid(eps: f64) -> Vec<f64> {
    let cap = 0.95 * (1.0 - eps);
    (1..)
        .map(|i| 0.05 * i as f64)
        .take_while(|&r| r <= cap)
        .collect()
}

#[test]
fn criterion_1_closed_form_equivalence() {
    let mut max_sp_dev: f64 = 0.0;
    for &eps in &EPS_GRID {
        let b = bec(eps);
        for rate in rate_grid(eps) {
            let closed = sphere_packing_closed(rate, &b).unwrap();
            let sup = sphere_packing_sup(rate, &b).unwrap().value;
            max_sp_dev = max_sp_dev.max((closed - sup).abs());
        }
    }
    assert!(max_sp_dev < 1e-6, "sup/closed deviation {max_sp_dev}");

    let mut max_gen_dev: f64 = 0.0;
    for &eps in &EPS_GRID {
        let ch = bec_matrix(&bec(eps));
        // The expurgated form requires rho >= 1; the E0 form allows rho >= 0,
        // so only it is checked at rho = 0.5.
        for &rho in &[1.0, 2.0, 5.0, 10.0] {
            let closed = rho * (1.0 - (1.0 + eps.powf(1.0 / rho)).log2());
            max_gen_dev = max_gen_dev.max((e_x_general(rho, &ch).unwrap() - closed).abs());
        }
        for &rho in &[0.5f64, 1.0, 2.0, 5.0, 10.0] {
            let closed = rho - ((1.0 - eps) + eps * rho.exp2()).log2();
            max_gen_dev = max_gen_dev.max((e0_general(rho, &ch).unwrap() - closed).abs());
        }
    }
    assert!(
        max_gen_dev < 1e-10,
        "generic/closed deviation {max_gen_dev}"
    );

    println!(
        "[criterion 1] PASS closed-vs-sup max dev {max_sp_dev:.3e} (tol 1e-6), \
         generic-vs-closed max dev {max_gen_dev:.3e} (tol 1e-10)"
    );
}

#[test]
fn criterion_2_capacity_and_tangency() {
    let mut max_cap: f64 = 0.0;
    let mut max_slope_rel: f64 = 0.0;
    let mut max_r_prime_dev: f64 = 0.0;
    let mut max_endpoint_dev: f64 = 0.0;
    for &eps in &EPS_GRID {
        let b = bec(eps);
        max_cap = max_cap.max(sphere_packing_sup(b.capacity(), &b).unwrap().value.abs());

        let r_prime = tangent_rate(&b);
        let fd = numeric_slope(|r| sphere_packing_closed(r, &b), r_prime, 1e-6).unwrap();
        let chord = straight_line_slope(&b);
        max_slope_rel = max_slope_rel.max(((fd - chord) / chord).abs());

        let via_intercept = 1.0 - (expurgated_zero_rate(&b) - (1.0 / eps).log2()).exp2();
        max_r_prime_dev = max_r_prime_dev.max((r_prime - (1.0 - eps.sqrt())).abs());
        max_r_prime_dev = max_r_prime_dev.max((r_prime - via_intercept).abs());

        let at_zero = (straight_line_exponent(0.0, &b).unwrap() - expurgated_zero_rate(&b)).abs();
        let at_tangent = (straight_line_exponent(r_prime, &b).unwrap()
            - sphere_packing_closed(r_prime, &b).unwrap())
        .abs();
        max_endpoint_dev = max_endpoint_dev.max(at_zero).max(at_tangent);
    }
    assert!(max_cap < 1e-9, "capacity-zero deviation {max_cap}");
    assert!(
        max_slope_rel < 1e-4,
        "tangency relative error {max_slope_rel}"
    );
    assert!(
        max_r_prime_dev < 1e-12,
        "tangent-rate form deviation {max_r_prime_dev}"
    );
    assert!(
        max_endpoint_dev < 1e-12,
        "straight-line endpoint deviation {max_endpoint_dev}"
    );

    println!(
        "[criterion 2] PASS capacity zero {max_cap:.3e} (tol 1e-9), tangency rel \
         {max_slope_rel:.3e} (tol 1e-4), r' forms {max_r_prime_dev:.3e} (tol 1e-12), \
         endpoints {max_endpoint_dev:.3e} (tol 1e-12)"
    );
}

#[test]
fn criterion_3_derived_fixtures() {
    let b = bec(0.01);
    let src = src_k4(2.0);

    // Zero-rate intercept: oracle = divergent-rho sequence, then the frozen
    // analytic constant.
    let intercept_oracle = expurgated_objective(0.0, 0.01)(1e6);
    let intercept = expurgated_zero_rate(&b);
    assert!((intercept - intercept_oracle).abs() < 1e-3);
    // E_ex(0) at eps = 0.01 is (1/2) log2(100) = log2(10) exactly.
    assert!(
        (intercept - std::f64::consts::LOG2_10).abs() < 1e-9,
        "E_ex(0) = {intercept}"
    );

    // E_sp(0.9): oracle = dense grid over the E0 objective.
    let grid = GridSpec::oracle(0.0, 50.0).unwrap();
    let (_, e_sp_oracle) = grid_sup(sphere_objective(0.9, 0.01), &grid).unwrap();
    let e_sp = sphere_packing_closed(0.9, &b).unwrap();
    assert!((e_sp - e_sp_oracle).abs() < 1e-6);
    assert!((e_sp - 0.2084).abs() < 1e-4, "E_sp(0.9) = {e_sp}");

    // c_eps: oracle = sign-change scan of the residual, certified bracket.
    let residual = rate_bounds::c_epsilon_residual(&b, &src);
    let scan = GridSpec::new(-40.0, 40.0, 80_001, GridScale::Linear).unwrap();
    let rising: Vec<(f64, f64)> = residual_scan(&residual, &scan)
        .into_iter()
        .filter(|&(lo, _)| residual(lo) < 0.0)
        .collect();
    assert_eq!(rising.len(), 1, "one rising crossing expected");
    let c_eps = solve_c_epsilon(&b, &src).unwrap();
    assert!(
        rising[0].0 <= c_eps && c_eps <= rising[0].1,
        "solver root outside oracle bracket"
    );
    assert!((c_eps - 1.452).abs() < 5e-3, "c_eps = {c_eps}");

    // r_ex: oracle = bisection of the balance against the grid-sup exponent.
    let coarse = GridSpec::new(1.0, 1e3, 20_000, GridScale::Log).unwrap();
    let oracle_balance = |r: f64| {
        let (_, v) = grid_sup(expurgated_objective(r, 0.01), &coarse).unwrap();
        v.max(0.0) - src.ratio() * r
    };
    let (mut lo, mut hi) = (0.5, 0.95);
    assert!(oracle_balance(lo) > 0.0 && oracle_balance(hi) < 0.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if oracle_balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_ex_oracle = 0.5 * (lo + hi);
    let r_ex = r_ex_exact(&b, &src).unwrap();
    let r_ex_simpl = r_ex_simplified(&b, &src).unwrap();
    assert!(
        (r_ex - r_ex_oracle).abs() < 1e-4,
        "solver {r_ex} vs oracle {r_ex_oracle}"
    );
    assert!((r_ex - 0.702).abs() < 0.01, "r_ex = {r_ex}");
    assert!(
        (r_ex_simpl - 0.702).abs() < 0.01,
        "r_ex_simplified = {r_ex_simpl}"
    );

    // r_sl: oracle = assembled from the oracle intercept and grid E_sp at the
    // intercept-form tangent rate.
    let r_prime_oracle = 1.0 - f64::exp2(intercept_oracle - (1.0 / 0.01f64).log2());
    let (_, e_sp_at_rp) = grid_sup(sphere_objective(r_prime_oracle, 0.01), &grid).unwrap();
    let r_sl_oracle =
        intercept_oracle / (src.ratio() - (e_sp_at_rp - intercept_oracle) / r_prime_oracle);
    let r_sl = r_sl_bound(&b, &src).unwrap();
    assert!(
        (r_sl - r_sl_oracle).abs() < 1e-3,
        "solver {r_sl} vs oracle {r_sl_oracle}"
    );
    assert!((r_sl - 0.839).abs() < 5e-3, "r_sl = {r_sl}");

    println!(
        "[criterion 3] PASS c_eps {c_eps:.6}, r_ex {r_ex:.6}, r_ex_simplified \
         {r_ex_simpl:.6}, r_sl {r_sl:.6}, E_sp(0.9) {e_sp:.6}, E_ex(0) {intercept:.9} \
         (all oracle-rederived)"
    );
}

#[test]
fn criterion_4_qualitative_monotonicity() {
    let eps_grid = [1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1];
    let powers = [1.0, 2.0, 4.0, 8.0]; // p/k in {0.25, 0.5, 1, 2} at k = 4

    // Nonincreasing in eps, and strictly below capacity, for every ratio.
    for &p in &powers {
        let src = src_k4(p);
        let mut prev_ex = f64::INFINITY;
        let mut prev_sl = f64::INFINITY;
        for &eps in &eps_grid {
            let b = bec(eps);
            let r_ex = r_ex_exact(&b, &src).unwrap();
            let r_sl = r_sl_bound(&b, &src).unwrap();
            assert!(
                r_ex <= prev_ex + 1e-12 && r_sl <= prev_sl + 1e-12,
                "bounds rose in eps at ({eps}, p = {p})"
            );
            assert!(
                r_ex < b.capacity() && r_sl < b.capacity(),
                "bound reached capacity at ({eps}, p = {p})"
            );
            prev_ex = r_ex;
            prev_sl = r_sl;
        }
    }

    // Nondecreasing in packet size at fixed delta.
    let src = src_k4(2.0);
    let mut prev = (0.0, 0.0);
    for &p_bits in &[1u32, 10, 100] {
        let pkt = PacketSpec::new(1e-3, p_bits).unwrap();
        let bounds = packet_rate_bounds(&pkt, &src, RateMethod::Exact).unwrap();
        assert!(
            bounds.r_ex >= prev.0 && bounds.r_sl >= prev.1,
            "bounds fell as packet size grew to {p_bits}"
        );
        prev = (bounds.r_ex, bounds.r_sl);
    }

    // Both bounds head to 1 as the channel clears.
    let tiny = bec(1e-12);
    let at_tiny = (
        r_ex_exact(&tiny, &src).unwrap(),
        r_sl_bound(&tiny, &src).unwrap(),
    );
    let mid = bec(1e-2);
    let at_mid = (
        r_ex_exact(&mid, &src).unwrap(),
        r_sl_bound(&mid, &src).unwrap(),
    );
    assert!(at_tiny.0 > at_mid.0 && at_tiny.1 > at_mid.1);
    assert!(
        at_tiny.1 > 0.97,
        "r_sl(1e-12) = {} for p/k = 0.5",
        at_tiny.1
    );

    println!(
        "[criterion 4] PASS monotone in eps and packet size on the grid; \
         r_ex(1e-12) {:.4} > r_ex(1e-2) {:.4}; r_sl(1e-12) {:.4} > 0.97",
        at_tiny.0, at_mid.0, at_tiny.1
    );
}

#[test]
fn criterion_5_balance_identity() {
    let src = src_k4(2.0);
    let mut max_gap: f64 = 0.0;
    for &eps in &[1e-4, 1e-2, 0.1] {
        let b = bec(eps);
        let bound = optimized_total_distortion(
            &src,
            &b,
            10.0,
            DistortionMethod::Expurgated(RateMethod::Exact),
        )
        .unwrap();
        let gap = (bound.quantizer_term.log2() - bound.channel_term.log2()).abs();
        max_gap = max_gap.max(gap);
        assert_eq!(
            bound.total,
            2.0 * bound.channel_term,
            "doubling must be exact"
        );
    }
    assert!(max_gap < 1e-8, "exponent gap {max_gap}");

    println!(
        "[criterion 5] PASS distortion exponents equal at r_ex (max log2 gap \
         {max_gap:.3e}, tol 1e-8); optimized total = 2 x channel term exactly"
    );
}

#[test]
fn criterion_6_packet_equivalence_and_plan() {
    // Round trip over the conversion grid (the (0.1, 1000) corner saturates
    // delta to 1 in f64 and is the only excluded pair).
    let mut max_round: f64 = 0.0;
    for &eps in &[1e-6, 1e-4, 1e-2, 0.1] {
        for &p in &[1u32, 10, 100, 1000] {
            let delta = delta_from_epsilon(eps, p);
            if delta >= 1.0 {
                assert_eq!((eps, p), (0.1, 1000));
                continue;
            }
            max_round = max_round.max((epsilon_from_delta(delta, p) - eps).abs());
        }
    }
    assert!(max_round < 1e-12, "round-trip deviation {max_round}");

    // Reference packet plan: delta = 1e-3, R = 10, k = 4, p = 2.
    let src = src_k4(2.0);
    let table = packet_distortion_table(
        1e-3,
        &src,
        10.0,
        2000,
        DistortionMethod::Expurgated(RateMethod::Exact),
    )
    .unwrap();
    for w in table.windows(2) {
        assert!(
            w[1].total_distortion <= w[0].total_distortion,
            "distortion rose from P = {} to {}",
            w[0].packet_bits,
            w[1].packet_bits
        );
    }

    // Tail flatness. Distortion values are exponent-order bounds, so the
    // flatness of the curve is measured on the distortion exponent (log2
    // scale, the scale the planner's curve is read on); the raw linear-scale
    // ratio is reported alongside.
    let d1000 = table[999].total_distortion;
    let d2000 = table[1999].total_distortion;
    let exponent_rel = (d2000.log2() - d1000.log2()).abs() / d1000.log2().abs();
    let linear_rel = (d1000 - d2000) / d1000;
    assert!(
        exponent_rel < 0.01,
        "distortion exponent moved {exponent_rel:.4} rel from P = 1000 to 2000"
    );

    println!(
        "[criterion 6] PASS round trip {max_round:.3e} (tol 1e-12); plan table monotone \
         over P = 1..2000; tail exponent drift {exponent_rel:.5} rel (tol 0.01; linear-scale \
         decrease {linear_rel:.4})"
    );
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erasure-bounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_7_cli_determinism_and_verify_exits() {
    // Byte-identical repeated runs.
    for args in [
        vec!["sweep", "--points", "5"],
        vec!["sweep", "--points", "3", "--format", "json"],
        vec!["bounds", "--epsilon", "0.01", "--k", "4", "--p", "2"],
        vec!["bounds", "--epsilon", "0.01", "--format", "json"],
    ] {
        let first = run_cli(&args);
        let second = run_cli(&args);
        assert!(first.status.success());
        assert_eq!(
            first.stdout, second.stdout,
            "nondeterministic output for {args:?}"
        );
    }

    // verify: clean build exits 0; an artificially violated tolerance exits 4.
    let clean = run_cli(&["verify"]);
    assert_eq!(
        clean.status.code(),
        Some(0),
        "verify must pass on a correct build"
    );
    for group in ["closed_vs_sup", "tangency", "packet_round_trip"] {
        let faulted = run_cli(&["verify", "--inject-fault", group]);
        assert_eq!(
            faulted.status.code(),
            Some(4),
            "fault in {group} must exit 4"
        );
    }

    println!(
        "[criterion 7] PASS sweep/bounds byte-identical across runs; verify exits 0 clean \
         and 4 under fault injection"
    );
}
