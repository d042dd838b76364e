//! Bounds on the optimal channel-coding rate for a quantizer cascaded with a
//! channel code over an erasure channel.
//!
//! The lower bound `r_ex` balances the expurgated error exponent against the
//! quantizer distortion exponent `(p/k) r`. Three variants are offered: an
//! exact numeric balance solve, a simplified analytic form, and the leading
//! asymptotic expansion whose auxiliary constant `c_eps` solves a scalar root
//! equation. The upper bound `r_sl` comes from the straight-line exponent.
//!
//! The asymptotic forms are derived for small erasure probabilities; outside
//! that regime they are either refused (`eps >= 1/2`) or flagged.

use crate::error::{Error, Result};
use crate::exponents::{expurgated_exponent, expurgated_zero_rate, straight_line_slope, BecSpec};

/// Erasure probabilities at or above this make the auxiliary root equation
/// low-confidence; the bound computation attaches a finding.
const LOW_CONFIDENCE_EPSILON: f64 = 0.25;

/// A source observed in vectors of dimension `k`, measured with a `p`-th
/// power distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    k: u32,
    p: f64,
}

impl SourceSpec {
    pub fn new(k: u32, p: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::invalid("k", "source vector dimension must be >= 1"));
        }
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::invalid(
                "p",
                format!("distortion power must be > 0, got {p}"),
            ));
        }
        Ok(Self { k, p })
    }

    pub fn dimension(&self) -> u32 {
        self.k
    }

    pub fn distortion_power(&self) -> f64 {
        self.p
    }

    /// The ratio p/k that couples quantizer and channel exponents.
    pub fn ratio(&self) -> f64 {
        self.p / f64::from(self.k)
    }
}

/// Which variant produced the lower-bound rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    /// Numeric solve of the balance equation E_ex(r) = (p/k) r.
    Exact,
    /// Simplified analytic form using the asymptotic maximizer rho(c_eps).
    Simplified,
    /// Leading-order asymptotic expansion in log(1/eps).
    Asymptotic,
}

impl RateMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateMethod::Exact => "exact",
            RateMethod::Simplified => "simplified",
            RateMethod::Asymptotic => "asymptotic",
        }
    }
}

/// The pair of rate bounds, the auxiliary root, and any findings raised while
/// checking them.
///
/// The ordering `r_ex <= r_sl` and strict sub-capacity position of both rates
/// hold throughout the small-erasure regime but are not guaranteed in
/// general; violations are reported in `findings` rather than clipped.
#[derive(Debug, Clone, PartialEq)]
pub struct RateBounds {
    pub r_ex: f64,
    pub r_sl: f64,
    /// Auxiliary root of the asymptotic rate equation; `None` when the
    /// small-erasure solve does not apply (only possible for the exact method).
    pub c_eps: Option<f64>,
    pub method: RateMethod,
    pub findings: Vec<String>,
}

/// Solves the scalar root equation for the auxiliary constant `c_eps`:
///
/// `(p/k) 2^c - [ (p/k)(log2 log2(1/eps) + log2 e + c) - 2^(-c) ] / log2(1/eps) - 1 = 0`
///
/// The residual is convex in `c` and, besides the wanted root, has a spurious
/// negative-going crossing near `c = -log2 log2(1/eps)` where the `2^(-c)`
/// term dominates. The solver therefore isolates the rightmost (rising)
/// crossing on a scanned bracket and refines it by bisection to residual
/// below 1e-12. As `eps -> 0` the root tends to `log2(k/p)`.
pub fn solve_c_epsilon(bec: &BecSpec, src: &SourceSpec) -> Result<f64> {
    if !bec.small_erasure_regime() {
        return Err(Error::domain(
            "solve_c_epsilon",
            format!(
                "the asymptotic root equation requires epsilon < 0.5, got {}",
                bec.epsilon()
            ),
        ));
    }
    let residual = c_epsilon_residual(bec, src);

    let mut half_width = 40.0;
    loop {
        if let Some((lo, hi)) = rightmost_rising_crossing(&residual, -half_width, half_width, 2048)
        {
            return bisect_rising(&residual, lo, hi, "c_epsilon");
        }
        half_width *= 2.0;
        if half_width > 160.0 {
            return Err(Error::NoRoot {
                what: "c_epsilon",
                lo: -160.0,
                hi: 160.0,
            });
        }
    }
}

/// Residual of the `c_eps` root equation at a given `c`.
pub fn c_epsilon_residual(bec: &BecSpec, src: &SourceSpec) -> impl Fn(f64) -> f64 {
    let ratio = src.ratio();
    let log_inv_eps = (1.0 / bec.epsilon()).log2();
    let lead = log_inv_eps.log2() + std::f64::consts::LOG2_E;
    move |c: f64| ratio * c.exp2() - (ratio * (lead + c) - (-c).exp2()) / log_inv_eps - 1.0
}

/// Scans `[lo, hi]` on a uniform grid and returns the rightmost interval on
/// which `f` crosses from negative to positive.
fn rightmost_rising_crossing<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    points: usize,
) -> Option<(f64, f64)> {
    let step = (hi - lo) / (points - 1) as f64;
    let mut found = None;
    let mut prev_x = lo;
    let mut prev_v = f(lo);
    for i in 1..points {
        let x = lo + step * i as f64;
        let v = f(x);
        if prev_v < 0.0 && v >= 0.0 {
            found = Some((prev_x, x));
        }
        prev_x = x;
        prev_v = v;
    }
    found
}

/// Bisects a rising crossing of `f` on `[lo, hi]` until the residual falls
/// below 1e-12.
fn bisect_rising<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    what: &'static str,
) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    let root = 0.5 * (lo + hi);
    if f(root).abs() >= 1e-12 {
        return Err(Error::NoRoot { what, lo, hi });
    }
    Ok(root)
}

/// Lower-bound rate from the leading asymptotic expansion,
/// `1 - 2^(-c) (log2 log2(1/eps) + log2 e + c) / log2(1/eps)`
/// with the higher-order corrections set to zero.
pub fn r_ex_asymptotic(bec: &BecSpec, src: &SourceSpec) -> Result<f64> {
    let c = solve_c_epsilon(bec, src)?;
    let log_inv_eps = (1.0 / bec.epsilon()).log2();
    let lead = log_inv_eps.log2() + std::f64::consts::LOG2_E;
    Ok(1.0 - (-c).exp2() * (lead + c) / log_inv_eps)
}

/// Lower-bound rate in simplified form: the asymptotic maximizer
/// `rho = log2(1/eps) / (log2 log2(1/eps) + c_eps)` substituted into
/// `r = rho / (p/k + rho) * (1 - log2(1 + eps^(1/rho)))`.
pub fn r_ex_simplified(bec: &BecSpec, src: &SourceSpec) -> Result<f64> {
    let c = solve_c_epsilon(bec, src)?;
    let eps = bec.epsilon();
    let log_inv_eps = (1.0 / eps).log2();
    let rho = log_inv_eps / (log_inv_eps.log2() + c);
    Ok(rho / (src.ratio() + rho) * (1.0 - (1.0 + eps.powf(1.0 / rho)).log2()))
}

/// Lower-bound rate from the exact balance `E_ex(r) = (p/k) r`.
///
/// The expurgated exponent is nonincreasing in the rate while the quantizer
/// exponent grows linearly, so the difference changes sign exactly once; the
/// crossing is located by bisection to residual below 1e-10.
pub fn r_ex_exact(bec: &BecSpec, src: &SourceSpec) -> Result<f64> {
    let ratio = src.ratio();
    let balance = |r: f64| -> Result<f64> { Ok(expurgated_exponent(r, bec)?.value - ratio * r) };

    let mut lo = 1e-9;
    let mut hi = 1.0 - 1e-9;
    let f_lo = balance(lo)?;
    if f_lo <= 0.0 {
        return Err(Error::NoPositiveExponent);
    }
    debug_assert!(balance(hi)? < 0.0);

    for _ in 0..100 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if balance(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    debug_assert!(balance(root)?.abs() < 1e-10, "balance residual too large");
    Ok(root)
}

/// Upper-bound rate from the straight-line exponent,
/// `E_ex(0) / (p/k - (E_sp(r') - E_ex(0)) / r')`.
///
/// The chord slope is negative, so the denominator is p/k plus a positive
/// quantity and stays positive for every valid input; the degenerate case is
/// still checked and reported.
pub fn r_sl_bound(bec: &BecSpec, src: &SourceSpec) -> Result<f64> {
    let intercept = expurgated_zero_rate(bec);
    let denom = src.ratio() - straight_line_slope(bec);
    if denom <= 0.0 {
        return Err(Error::DegenerateDenominator { value: denom });
    }
    Ok(intercept / denom)
}

/// Computes both rate bounds, records the auxiliary root, and checks the
/// ordering and sub-capacity properties, reporting violations as findings.
pub fn compute_bounds(bec: &BecSpec, src: &SourceSpec, method: RateMethod) -> Result<RateBounds> {
    let c_eps = match solve_c_epsilon(bec, src) {
        Ok(c) => Some(c),
        // The exact balance does not need c_eps; keep going without it.
        Err(_) if method == RateMethod::Exact => None,
        Err(e) => return Err(e),
    };

    let r_ex = match method {
        RateMethod::Exact => r_ex_exact(bec, src)?,
        RateMethod::Simplified => r_ex_simplified(bec, src)?,
        RateMethod::Asymptotic => r_ex_asymptotic(bec, src)?,
    };
    let r_sl = r_sl_bound(bec, src)?;

    let mut findings = Vec::new();
    if !bec.small_erasure_regime() {
        findings.push(format!(
            "epsilon = {} is outside the small-erasure regime (>= 0.5); asymptotic forms do not apply",
            bec.epsilon()
        ));
    } else if bec.epsilon() >= LOW_CONFIDENCE_EPSILON {
        findings.push(format!(
            "epsilon = {} is at or above 0.25; the asymptotic root c_eps is low-confidence",
            bec.epsilon()
        ));
    }
    if !(r_ex > 0.0 && r_ex < 1.0) {
        findings.push(format!("r_ex = {r_ex} lies outside (0, 1)"));
    }
    if r_ex > r_sl {
        findings.push(format!(
            "ordering violated: r_ex = {r_ex} exceeds r_sl = {r_sl}"
        ));
    }
    let capacity = bec.capacity();
    if r_ex >= capacity {
        findings.push(format!("r_ex = {r_ex} is not below capacity {capacity}"));
    }
    if r_sl >= capacity {
        findings.push(format!("r_sl = {r_sl} is not below capacity {capacity}"));
    }

    Ok(RateBounds {
        r_ex,
        r_sl,
        c_eps,
        method,
        findings,
    })
}
