//! Error exponents for discrete memoryless channels, with closed forms for
//! the binary erasure channel.
//!
//! All logarithms are base 2 and every exponent is in bits per channel use.
//! Three families are provided:
//!
//! * the expurgated exponent, an achievability bound on the channel
//!   reliability function that is tightest at low rates;
//! * the sphere-packing exponent, the classical converse bound, available
//!   both as a supremum over Gallager's E0 function and in closed form;
//! * the straight-line exponent, the segment from the zero-rate expurgated
//!   value that meets the sphere-packing curve tangentially.
//!
//! Suprema over the tilt parameter `rho` are located numerically: the search
//! bracket is grown geometrically until the objective turns over, then the
//! interior maximizer is refined by golden-section search. The expurgated
//! objective is not known to be concave in `rho`, so that search is
//! additionally seeded from a log-spaced grid before refinement.

use crate::error::{Error, Result};

/// Bracket expansions abort once `rho` passes this limit.
const RHO_BRACKET_LIMIT: f64 = 1e9;

/// Seed points for the expurgated supremum.
const EXPURGATED_SEED_POINTS: usize = 64;

/// Raw suprema below this are treated as genuinely negative rather than
/// rounding noise around zero, and are flagged as vacuous.
const VACUOUS_THRESHOLD: f64 = -1e-12;

/// Probability sums must match 1 within this tolerance.
const PROBABILITY_TOL: f64 = 1e-12;

/// Transition probabilities of a discrete memoryless channel together with an
/// input distribution.
///
/// Rows index input symbols, columns index output symbols. Every row must sum
/// to 1 and the input distribution must be a probability vector of matching
/// length. At least two input and two output symbols are required.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    transitions: Vec<Vec<f64>>,
    input_dist: Vec<f64>,
}

impl ChannelMatrix {
    pub fn new(transitions: Vec<Vec<f64>>, input_dist: Vec<f64>) -> Result<Self> {
        let num_inputs = transitions.len();
        if num_inputs < 2 {
            return Err(Error::invalid(
                "transitions",
                "need at least 2 input symbols",
            ));
        }
        let num_outputs = transitions[0].len();
        if num_outputs < 2 {
            return Err(Error::invalid(
                "transitions",
                "need at least 2 output symbols",
            ));
        }
        for (i, row) in transitions.iter().enumerate() {
            if row.len() != num_outputs {
                return Err(Error::invalid(
                    "transitions",
                    format!("row {i} has ragged length"),
                ));
            }
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return Err(Error::invalid(
                    "transitions",
                    format!("row {i} has an entry outside [0, 1]"),
                ));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROBABILITY_TOL {
                return Err(Error::invalid(
                    "transitions",
                    format!("row {i} sums to {sum}, not 1"),
                ));
            }
        }
        if input_dist.len() != num_inputs {
            return Err(Error::invalid(
                "input_dist",
                "length does not match the number of input symbols",
            ));
        }
        if input_dist.iter().any(|&q| q < 0.0) {
            return Err(Error::invalid("input_dist", "negative probability"));
        }
        let qsum: f64 = input_dist.iter().sum();
        if (qsum - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::invalid(
                "input_dist",
                format!("sums to {qsum}, not 1"),
            ));
        }
        Ok(Self {
            transitions,
            input_dist,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.transitions[0].len()
    }

    /// P(output `j` | input `i`).
    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.transitions[i][j]
    }

    pub fn input_dist(&self) -> &[f64] {
        &self.input_dist
    }
}

/// A binary erasure channel with bit-erasure probability `epsilon`.
///
/// `epsilon` must lie strictly inside (0, 1); the endpoints describe a
/// noiseless or useless channel and are rejected as degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecSpec {
    epsilon: f64,
}

impl BecSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 || epsilon >= 1.0 {
            return Err(Error::invalid(
                "epsilon",
                format!("erasure probability must lie strictly in (0, 1), got {epsilon}"),
            ));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Channel capacity 1 - epsilon in bits per channel use.
    pub fn capacity(&self) -> f64 {
        1.0 - self.epsilon
    }

    /// True when the erasure probability is below 1/2, the regime the
    /// asymptotic rate expressions are derived for.
    pub fn small_erasure_regime(&self) -> bool {
        self.epsilon < 0.5
    }
}

/// A nonnegative exponent value together with the `rho` that attained it.
///
/// Negative raw suprema are clamped to zero and flagged `vacuous`: the bound
/// carries no information at that rate, and downstream distortion formulas
/// need nonnegative exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentValue {
    /// Exponent in bits per channel use, always >= 0.
    pub value: f64,
    /// Location of the supremum over `rho` (boundary or interior).
    pub rho_star: f64,
    /// Set when the unclamped supremum was negative.
    pub vacuous: bool,
}

impl ExponentValue {
    fn from_raw(rho_star: f64, raw: f64) -> Self {
        if raw < VACUOUS_THRESHOLD {
            ExponentValue {
                value: 0.0,
                rho_star,
                vacuous: true,
            }
        } else {
            ExponentValue {
                value: raw.max(0.0),
                rho_star,
                vacuous: false,
            }
        }
    }
}

/// Transition matrix of the binary erasure channel with the maximizing
/// (uniform) input assignment.
///
/// Output symbols are ordered (intact, erased, flipped-to-other), so the rows
/// are `[1-eps, eps, 0]` and `[0, eps, 1-eps]`.
pub fn bec_matrix(bec: &BecSpec) -> ChannelMatrix {
    let eps = bec.epsilon();
    ChannelMatrix {
        transitions: vec![vec![1.0 - eps, eps, 0.0], vec![0.0, eps, 1.0 - eps]],
        input_dist: vec![0.5, 0.5],
    }
}

/// Expurgated exponent function E_x(rho, q) of a generic channel:
/// `-rho * log2( sum_{k,i} q(k) q(i) [ sum_j sqrt(P(j|k) P(j|i)) ]^(1/rho) )`.
///
/// The inner sum over outputs is the Bhattacharyya overlap of the two input
/// rows. Requires `rho >= 1`.
pub fn e_x_general(rho: f64, ch: &ChannelMatrix) -> Result<f64> {
    if rho.is_nan() || rho < 1.0 {
        return Err(Error::domain(
            "e_x_general",
            format!("rho must be >= 1, got {rho}"),
        ));
    }
    let q = ch.input_dist();
    let mut sum = 0.0;
    for a in 0..ch.num_inputs() {
        for b in 0..ch.num_inputs() {
            let overlap: f64 = (0..ch.num_outputs())
                .map(|j| (ch.transition(a, j) * ch.transition(b, j)).sqrt())
                .sum();
            sum += q[a] * q[b] * overlap.powf(1.0 / rho);
        }
    }
    Ok(-rho * sum.log2())
}

/// Gallager E0 function of a generic channel:
/// `-log2( sum_j [ sum_k q(k) P(j|k)^(1/(1+rho)) ]^(1+rho) )`.
///
/// Requires `rho >= 0`.
pub fn e0_general(rho: f64, ch: &ChannelMatrix) -> Result<f64> {
    if rho.is_nan() || rho < 0.0 {
        return Err(Error::domain(
            "e0_general",
            format!("rho must be >= 0, got {rho}"),
        ));
    }
    let q = ch.input_dist();
    let inner_exp = 1.0 / (1.0 + rho);
    let mut sum = 0.0;
    for j in 0..ch.num_outputs() {
        let inner: f64 = (0..ch.num_inputs())
            .map(|k| q[k] * ch.transition(k, j).powf(inner_exp))
            .sum();
        sum += inner.powf(1.0 + rho);
    }
    Ok(-sum.log2())
}

/// Closed form of `e_x_general` on the erasure channel with uniform inputs:
/// `rho * (1 - log2(1 + eps^(1/rho)))`.
pub fn bec_e_x_closed(rho: f64, eps: f64) -> f64 {
    rho * (1.0 - (1.0 + eps.powf(1.0 / rho)).log2())
}

/// Closed form of `e0_general` on the erasure channel with uniform inputs:
/// `rho - log2((1 - eps) + eps * 2^rho)`.
pub fn bec_e0_closed(rho: f64, eps: f64) -> f64 {
    rho - ((1.0 - eps) + eps * rho.exp2()).log2()
}

/// Expurgated exponent of the erasure channel at code rate `rate`:
/// the supremum over `rho >= 1` of `rho * (1 - rate - log2(1 + eps^(1/rho)))`.
///
/// The boundary point `rho = 1` is always evaluated alongside the refined
/// interior maximizer. Negative suprema (the bound is vacuous at that rate)
/// clamp to zero; see [`ExponentValue`].
pub fn expurgated_exponent(rate: f64, bec: &BecSpec) -> Result<ExponentValue> {
    check_rate_open(rate, "expurgated_exponent")?;
    let eps = bec.epsilon();
    let f = |rho: f64| rho * (1.0 - rate - (1.0 + eps.powf(1.0 / rho)).log2());
    let hi = expand_past_peak(&f, 1.0, "expurgated exponent maximizer")?;

    // Log-spaced seed over [1, hi]; the grid guards against undetected
    // multi-modality before the local refinement.
    let n = EXPURGATED_SEED_POINTS;
    let mut seeds = Vec::with_capacity(n);
    for i in 0..n {
        seeds.push(hi.powf(i as f64 / (n - 1) as f64));
    }
    let (best_i, _) = seeds
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, f(x)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("seed grid is nonempty");
    let lo_b = if best_i == 0 { 1.0 } else { seeds[best_i - 1] };
    let hi_b = if best_i == n - 1 {
        hi
    } else {
        seeds[best_i + 1]
    };
    let (rho_int, f_int) = golden_max(&f, lo_b, hi_b);

    let boundary = f(1.0);
    let (rho_star, raw) = if boundary > f_int {
        (1.0, boundary)
    } else {
        (rho_int, f_int)
    };
    Ok(ExponentValue::from_raw(rho_star, raw))
}

/// Zero-rate limit of the expurgated exponent, `0.5 * log2(1/eps)`.
///
/// The supremum over `rho` is attained only in the limit `rho -> inf`, so the
/// value is computed analytically rather than by a divergent search.
pub fn expurgated_zero_rate(bec: &BecSpec) -> f64 {
    0.5 * (1.0 / bec.epsilon()).log2()
}

/// Sphere-packing exponent at code rate `rate` as a supremum over `rho >= 0`
/// of `rho * (1 - rate) - log2((1 - eps) + eps * 2^rho)`.
///
/// The objective is concave in `rho`; for `rate >= 1 - eps` the maximizer sits
/// at the boundary `rho = 0` and the exponent is zero.
pub fn sphere_packing_sup(rate: f64, bec: &BecSpec) -> Result<ExponentValue> {
    check_rate_open(rate, "sphere_packing_sup")?;
    let eps = bec.epsilon();
    let f = |rho: f64| rho * (1.0 - rate) - ((1.0 - eps) + eps * rho.exp2()).log2();
    let hi = expand_past_peak(&f, 0.0, "sphere-packing exponent maximizer")?;
    let (rho_int, f_int) = golden_max(&f, 0.0, hi);
    let boundary = f(0.0);
    let (rho_star, raw) = if boundary > f_int {
        (0.0, boundary)
    } else {
        (rho_int, f_int)
    };
    Ok(ExponentValue::from_raw(rho_star, raw))
}

/// Closed form of the sphere-packing exponent for `0 < rate < 1 - eps`:
/// `r log2 r + (1-r) log2(1-r) - r log2((1-eps)/eps) - log2 eps`.
///
/// This is the parametric solution of the supremum and is only valid below
/// capacity; use [`sphere_packing_sup`] elsewhere.
pub fn sphere_packing_closed(rate: f64, bec: &BecSpec) -> Result<f64> {
    let eps = bec.epsilon();
    if rate.is_nan() || rate <= 0.0 || rate >= 1.0 - eps {
        return Err(Error::domain(
            "sphere_packing_closed",
            format!(
                "rate must lie in (0, 1 - eps) = (0, {}), got {rate}",
                1.0 - eps
            ),
        ));
    }
    Ok(rate * rate.log2() + (1.0 - rate) * (1.0 - rate).log2()
        - rate * ((1.0 - eps) / eps).log2()
        - eps.log2())
}

/// Rate at which a given `rho >= 0` maximizes the sphere-packing objective:
/// `(1 - eps) / ((1 - eps) + 2^rho * eps)`.
///
/// `rho = 0` recovers capacity. For very large `rho` the result underflows
/// toward zero, the floating-point image of an exponentially small rate.
pub fn rate_for_rho(rho: f64, bec: &BecSpec) -> Result<f64> {
    if rho.is_nan() || rho < 0.0 {
        return Err(Error::domain(
            "rate_for_rho",
            format!("rho must be >= 0, got {rho}"),
        ));
    }
    let eps = bec.epsilon();
    Ok((1.0 - eps) / ((1.0 - eps) + rho.exp2() * eps))
}

/// Rate at which the straight-line exponent touches the sphere-packing curve.
///
/// Reduces to `1 - sqrt(eps)`; the equivalent form through the zero-rate
/// intercept, `1 - 2^(E_ex(0) - log2(1/eps))`, is asserted to agree.
pub fn tangent_rate(bec: &BecSpec) -> f64 {
    let eps = bec.epsilon();
    let direct = 1.0 - eps.sqrt();
    let via_intercept = 1.0 - (expurgated_zero_rate(bec) - (1.0 / eps).log2()).exp2();
    debug_assert!(
        (direct - via_intercept).abs() <= 1e-12,
        "tangent-rate forms disagree: {direct} vs {via_intercept}"
    );
    direct
}

/// Slope of the straight-line exponent, `(E_sp(r') - E_ex(0)) / r'`.
///
/// Always negative: the line falls from the zero-rate intercept to the small
/// sphere-packing value at the tangent rate.
pub fn straight_line_slope(bec: &BecSpec) -> f64 {
    let r_prime = tangent_rate(bec);
    let e_sp = sphere_packing_closed(r_prime, bec)
        .expect("tangent rate lies strictly inside (0, capacity)");
    (e_sp - expurgated_zero_rate(bec)) / r_prime
}

/// Straight-line exponent `E_ex(0) + rate * (E_sp(r') - E_ex(0)) / r'` for
/// `0 <= rate <= r'`.
///
/// Beyond the tangent rate the segment is not defined; the sphere-packing
/// curve is the valid converse bound there.
pub fn straight_line_exponent(rate: f64, bec: &BecSpec) -> Result<f64> {
    let r_prime = tangent_rate(bec);
    if !(0.0..=r_prime).contains(&rate) {
        return Err(Error::domain(
            "straight_line_exponent",
            format!("rate must lie in [0, r' = {r_prime}], got {rate}"),
        ));
    }
    Ok(expurgated_zero_rate(bec) + rate * straight_line_slope(bec))
}

fn check_rate_open(rate: f64, operation: &'static str) -> Result<()> {
    if rate.is_nan() || rate <= 0.0 || rate >= 1.0 {
        return Err(Error::domain(
            operation,
            format!("rate must lie strictly in (0, 1), got {rate}"),
        ));
    }
    Ok(())
}

/// Grows probes `lo + 2^n` geometrically until the objective decreases from
/// one probe to the next, returning the first probe past the peak.
fn expand_past_peak<F: Fn(f64) -> f64>(f: &F, lo: f64, what: &'static str) -> Result<f64> {
    let mut f_prev = f(lo);
    let mut step = 1.0;
    loop {
        let x = lo + step;
        if x > RHO_BRACKET_LIMIT {
            return Err(Error::BracketExhausted {
                what,
                limit: RHO_BRACKET_LIMIT,
            });
        }
        let fx = f(x);
        if fx < f_prev {
            return Ok(x);
        }
        f_prev = fx;
        step *= 2.0;
    }
}

/// Golden-section maximization on `[lo, hi]`.
///
/// Stops once the interval is below `1e-12 + 1e-9 * (1 + |mid|)`; the
/// returned value is the objective at the better interior probe.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-12 + 1e-9 * (1.0 + mid.abs()) {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
