//! Cross-validation of every closed form and solver against the brute-force
//! grid oracles. The oracles never call the solvers they check: suprema come
//! from dense grids and roots from sign-change scans.

use erasure_bounds::rate_bounds::c_epsilon_residual;
use erasure_bounds::*;

fn bec(eps: f64) -> BecSpec {
    BecSpec::new(eps).unwrap()
}

fn expurgated_objective(rate: f64, eps: f64) -> impl Fn(f64) -> f64 {
    move |rho: f64| rho * (1.0 - rate - (1.0 + eps.powf(1.0 / rho)).log2())
}

fn sphere_objective(rate: f64, eps: f64) -> impl Fn(f64) -> f64 {
    move |rho: f64| rho * (1.0 - rate) - ((1.0 - eps) + eps * rho.exp2()).log2()
}

#[test]
fn expurgated_matches_dense_grid_oracle() {
    // (rate, eps) pairs spanning the regimes; 10^6-point grid over rho.
    let cases = [(0.7, 0.01), (0.5, 0.25), (0.3, 0.1), (0.85, 1e-4)];
    let grid = GridSpec::oracle(1.0, 1e3).unwrap();
    for (rate, eps) in cases {
        let (oracle_rho, oracle_val) = grid_sup(expurgated_objective(rate, eps), &grid).unwrap();
        let solved = expurgated_exponent(rate, &bec(eps)).unwrap();
        assert!(
            (solved.value - oracle_val.max(0.0)).abs() < 1e-6,
            "({rate}, {eps}): solver {} vs oracle {oracle_val}",
            solved.value
        );
        if !solved.vacuous && oracle_rho < 999.0 {
            let rel = (solved.rho_star - oracle_rho).abs() / (1.0 + oracle_rho);
            assert!(
                rel < 1e-3,
                "({rate}, {eps}): argmax {} vs {oracle_rho}",
                solved.rho_star
            );
        }
    }
}

#[test]
fn expurgated_fixture_against_oracle() {
    let grid = GridSpec::oracle(1.0, 1e3).unwrap();
    let (rho, val) = grid_sup(expurgated_objective(0.7, 0.01), &grid).unwrap();
    assert!((val - 0.353_712_5).abs() < 1e-6, "oracle value {val}");
    assert!((rho - 1.6).abs() < 2e-3, "oracle maximizer {rho}");
}

#[test]
fn sphere_packing_matches_dense_grid_oracle() {
    let cases = [(0.5, 0.1), (0.9, 0.01), (0.2, 0.25), (0.6, 1e-3)];
    let grid = GridSpec::oracle(0.0, 50.0).unwrap();
    for (rate, eps) in cases {
        let (oracle_rho, oracle_val) = grid_sup(sphere_objective(rate, eps), &grid).unwrap();
        let solved = sphere_packing_sup(rate, &bec(eps)).unwrap();
        assert!(
            (solved.value - oracle_val).abs() < 1e-6,
            "({rate}, {eps}): solver {} vs oracle {oracle_val}",
            solved.value
        );
        let rel = (solved.rho_star - oracle_rho).abs() / (1.0 + oracle_rho);
        assert!(
            rel < 1e-3,
            "({rate}, {eps}): argmax {} vs {oracle_rho}",
            solved.rho_star
        );

        let closed = sphere_packing_closed(rate, &bec(eps)).unwrap();
        assert!((closed - oracle_val).abs() < 1e-6);
    }
}

#[test]
fn capacity_case_peaks_at_zero() {
    // rate = capacity: the sup sits at rho = 0 with value 0.
    let grid = GridSpec::oracle(0.0, 50.0).unwrap();
    let (rho, val) = grid_sup(sphere_objective(0.5, 0.5), &grid).unwrap();
    assert!(rho.abs() < 1e-4, "argmax {rho}");
    assert!(val.abs() < 1e-8, "value {val}");
}

#[test]
fn stationarity_of_rate_for_rho() {
    // Feeding the parameterized rate back into the sup must return the same
    // maximizer, up to grid resolution.
    let grid = GridSpec::oracle(0.0, 30.0).unwrap();
    for (rho, eps) in [(1.0, 0.5), (2.0, 0.1), (5.0, 0.01)] {
        let rate = rate_for_rho(rho, &bec(eps)).unwrap();
        let (oracle_rho, _) = grid_sup(sphere_objective(rate, eps), &grid).unwrap();
        assert!(
            (oracle_rho - rho).abs() < 1e-4,
            "rho {rho}: oracle {oracle_rho}"
        );
    }
}

#[test]
fn zero_rate_limit_climbs_to_analytic_intercept() {
    for eps in [1e-4, 1e-2, 0.1, 0.25] {
        let objective = expurgated_objective(0.0, eps);
        let mut prev = f64::NEG_INFINITY;
        for j in 1..=6 {
            let v = objective(10f64.powi(j));
            assert!(v > prev, "eps {eps}: not increasing at rho = 1e{j}");
            prev = v;
        }
        let limit = expurgated_zero_rate(&bec(eps));
        assert!((prev - limit).abs() < 1e-3, "eps {eps}: {prev} vs {limit}");
        assert!(prev < limit, "the supremum is approached from below");
    }
}

#[test]
fn c_epsilon_root_is_the_unique_rising_crossing() {
    let scan = GridSpec::new(-40.0, 40.0, 16_384, GridScale::Linear).unwrap();
    for eps in [1e-6, 1e-4, 1e-2, 0.1] {
        for (k, p) in [(4u32, 1.0), (4, 2.0), (4, 8.0)] {
            let b = bec(eps);
            let src = SourceSpec::new(k, p).unwrap();
            let residual = c_epsilon_residual(&b, &src);
            let crossings = residual_scan(&residual, &scan);
            let rising: Vec<_> = crossings
                .iter()
                .filter(|&&(lo, _)| residual(lo) < 0.0)
                .collect();
            assert_eq!(rising.len(), 1, "eps {eps}, p/k {}", src.ratio());

            let root = solve_c_epsilon(&b, &src).unwrap();
            let (lo, hi) = *rising[0];
            assert!(lo <= root && root <= hi, "root {root} outside [{lo}, {hi}]");
            assert!(residual(root).abs() < 1e-12);
        }
    }
}

#[test]
fn c_epsilon_fixture_certified_by_scan() {
    // The residual changes sign between 1.45 and 1.46 at the reference point.
    let b = bec(0.01);
    let src = SourceSpec::new(4, 2.0).unwrap();
    let residual = c_epsilon_residual(&b, &src);
    assert!(residual(1.45) < 0.0);
    assert!(residual(1.46) > 0.0);
    let root = solve_c_epsilon(&b, &src).unwrap();
    assert!((root - 1.452_601_042_617).abs() < 1e-9);
}

#[test]
fn balance_root_is_the_unique_sign_change() {
    let scan = GridSpec::new(1e-4, 1.0 - 1e-4, 20_000, GridScale::Linear).unwrap();
    for eps in [1e-4, 1e-2, 0.1] {
        for (k, p) in [(4u32, 1.0), (4, 2.0), (4, 8.0)] {
            let b = bec(eps);
            let src = SourceSpec::new(k, p).unwrap();
            let ratio = src.ratio();
            let balance =
                |r: f64| expurgated_exponent(r, &b).map_or(f64::NAN, |e| e.value) - ratio * r;
            let crossings = residual_scan(balance, &scan);
            assert_eq!(crossings.len(), 1, "eps {eps}, p/k {ratio}");

            let root = r_ex_exact(&b, &src).unwrap();
            let (lo, hi) = crossings[0];
            assert!(lo <= root && root <= hi, "root {root} outside [{lo}, {hi}]");
        }
    }
}

#[test]
fn tangency_slope_against_centered_difference() {
    for eps in [1e-4, 1e-3, 1e-2, 0.1, 0.25] {
        let b = bec(eps);
        let r_prime = tangent_rate(&b);
        let fd = numeric_slope(|r| sphere_packing_closed(r, &b), r_prime, 1e-6).unwrap();
        let chord = straight_line_slope(&b);
        assert!(
            ((fd - chord) / chord).abs() < 1e-4,
            "eps {eps}: slope {fd} vs chord {chord}"
        );
    }
}

#[test]
fn tangency_fixture() {
    let b = bec(0.01);
    let fd = numeric_slope(|r| sphere_packing_closed(r, &b), 0.9, 1e-6).unwrap();
    assert!((fd - (-3.459_431_618_637)).abs() < 1e-4, "slope {fd}");
}

#[test]
fn sphere_packing_slope_stays_negative_up_to_capacity() {
    // Only the sign matters here: the curve falls all the way to capacity,
    // where the closed form's slope flattens out to zero.
    for eps in [1e-3, 0.1, 0.25] {
        let b = bec(eps);
        for t in [0.5, 0.9, 0.999] {
            let rate = t * b.capacity();
            let h = (b.capacity() - rate) * 0.5;
            let fd = numeric_slope(|r| sphere_packing_closed(r, &b), rate, h).unwrap();
            assert!(fd < 0.0, "eps {eps}, rate {rate}: slope {fd}");
        }
    }
}

#[test]
fn rate_fixtures_rederived_before_trusting() {
    // Every frozen reference constant is recomputed from the oracle route
    // before the solver outputs are compared against it.
    let b = bec(0.01);
    let src = SourceSpec::new(4, 2.0).unwrap();

    // E_ex(0) from the divergent-rho sequence.
    let intercept_oracle = expurgated_objective(0.0, 0.01)(1e6);
    assert!((intercept_oracle - std::f64::consts::LOG2_10).abs() < 1e-3);
    assert!((expurgated_zero_rate(&b) - std::f64::consts::LOG2_10).abs() < 1e-9);

    // E_sp(0.9) from the dense grid.
    let grid = GridSpec::oracle(0.0, 50.0).unwrap();
    let (_, e_sp_oracle) = grid_sup(sphere_objective(0.9, 0.01), &grid).unwrap();
    assert!((e_sp_oracle - 0.2084).abs() < 1e-4);

    // r_ex from a bisection against the grid-sup expurgated oracle.
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
    assert!(
        (r_ex_oracle - 0.702).abs() < 5e-3,
        "oracle r_ex {r_ex_oracle}"
    );
    let r_ex = r_ex_exact(&b, &src).unwrap();
    assert!((r_ex - r_ex_oracle).abs() < 1e-4);

    // r_sl assembled from oracle ingredients.
    let r_prime = 1.0 - 0.01f64.sqrt();
    let r_sl_oracle = intercept_oracle / (src.ratio() - (e_sp_oracle - intercept_oracle) / r_prime);
    assert!(
        (r_sl_oracle - 0.839).abs() < 5e-3,
        "oracle r_sl {r_sl_oracle}"
    );
    let r_sl = r_sl_bound(&b, &src).unwrap();
    assert!((r_sl - r_sl_oracle).abs() < 1e-3);
}
