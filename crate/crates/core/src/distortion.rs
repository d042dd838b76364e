//! End-to-end distortion bounds in the high-rate quantization model.
//!
//! The quantizer contributes `2^(-p R r)` (the Zador-form high-rate law with
//! its constant normalized to 1) and channel decoding errors contribute
//! `2^(-k R E(r))` for the applicable error exponent E. Every value here is
//! an exponent-order bound: all unknown multiplicative constants and
//! lower-order corrections are set to 1, matching their treatment in the
//! rate-bound derivations.

use crate::error::{Error, Result};
use crate::exponents::{
    expurgated_exponent, sphere_packing_sup, straight_line_exponent, tangent_rate, BecSpec,
};
use crate::rate_bounds::{
    r_ex_asymptotic, r_ex_exact, r_ex_simplified, r_sl_bound, RateMethod, SourceSpec,
};

/// Transmission parameters of one source block: `R` channel bits per source
/// component and a channel code of rate `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    transmission_rate: f64,
    code_rate: f64,
}

impl LinkSpec {
    pub fn new(transmission_rate: f64, code_rate: f64) -> Result<Self> {
        if !transmission_rate.is_finite() || transmission_rate <= 0.0 {
            return Err(Error::invalid(
                "transmission_rate",
                format!("must be > 0, got {transmission_rate}"),
            ));
        }
        if code_rate.is_nan() || code_rate <= 0.0 || code_rate >= 1.0 {
            return Err(Error::invalid(
                "code_rate",
                format!("must lie strictly in (0, 1), got {code_rate}"),
            ));
        }
        Ok(Self {
            transmission_rate,
            code_rate,
        })
    }

    pub fn transmission_rate(&self) -> f64 {
        self.transmission_rate
    }

    pub fn code_rate(&self) -> f64 {
        self.code_rate
    }

    /// Source bits per block, m = k R r.
    pub fn source_bits(&self, src: &SourceSpec) -> f64 {
        f64::from(src.dimension()) * self.transmission_rate * self.code_rate
    }

    /// Channel bits per block, n = k R.
    pub fn channel_bits(&self, src: &SourceSpec) -> f64 {
        f64::from(src.dimension()) * self.transmission_rate
    }
}

/// Which side of the distortion sandwich an evaluation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Achievable side, driven by the expurgated exponent.
    Upper,
    /// Converse side, driven by the straight-line / sphere-packing exponent.
    Lower,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Upper => "upper",
            Regime::Lower => "lower",
        }
    }
}

/// A two-term distortion bound evaluated at a specific code rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionBound {
    /// Quantizer contribution 2^(-p R r).
    pub quantizer_term: f64,
    /// Channel-error contribution 2^(-k R E(r)).
    pub channel_term: f64,
    /// Combined bound.
    pub total: f64,
    pub regime: Regime,
    /// Code rate the bound was evaluated at.
    pub code_rate: f64,
    /// Set when the channel exponent was clamped to zero (the bound is
    /// uninformative at this rate).
    pub vacuous_exponent: bool,
}

/// Quantizer-only distortion `2^(-p R r)` with the high-rate constant
/// normalized to 1.
pub fn quantizer_distortion(link: &LinkSpec, src: &SourceSpec) -> f64 {
    (-src.distortion_power() * link.transmission_rate() * link.code_rate()).exp2()
}

/// Achievable-side bound: quantizer term plus `2^(-k R E_ex(r))`.
pub fn distortion_upper(
    link: &LinkSpec,
    src: &SourceSpec,
    bec: &BecSpec,
) -> Result<DistortionBound> {
    let exponent = expurgated_exponent(link.code_rate(), bec)?;
    let quantizer_term = quantizer_distortion(link, src);
    let channel_term = (-link.channel_bits(src) * exponent.value).exp2();
    Ok(DistortionBound {
        quantizer_term,
        channel_term,
        total: quantizer_term + channel_term,
        regime: Regime::Upper,
        code_rate: link.code_rate(),
        vacuous_exponent: exponent.vacuous,
    })
}

/// Converse-side bound: quantizer term plus `2^(-k R E(r))` where E is the
/// straight-line exponent up to the tangent rate and the sphere-packing
/// exponent beyond it.
pub fn distortion_lower(
    link: &LinkSpec,
    src: &SourceSpec,
    bec: &BecSpec,
) -> Result<DistortionBound> {
    let rate = link.code_rate();
    let exponent = if rate <= tangent_rate(bec) {
        straight_line_exponent(rate, bec)?
    } else {
        sphere_packing_sup(rate, bec)?.value
    };
    let quantizer_term = quantizer_distortion(link, src);
    let channel_term = (-link.channel_bits(src) * exponent).exp2();
    Ok(DistortionBound {
        quantizer_term,
        channel_term,
        total: quantizer_term + channel_term,
        regime: Regime::Lower,
        code_rate: rate,
        vacuous_exponent: false,
    })
}

/// Which solved rate drives an optimized-distortion evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionMethod {
    /// Balance the expurgated exponent (rate `r_ex` per the chosen variant).
    Expurgated(RateMethod),
    /// Use the straight-line upper bound on the rate (`r_sl`).
    StraightLine,
}

impl DistortionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistortionMethod::Expurgated(m) => m.as_str(),
            DistortionMethod::StraightLine => "straight-line",
        }
    }
}

/// Distortion at the optimized code rate for the requested method.
///
/// At the balanced optimum the quantizer and channel terms agree, so the
/// total is reported as twice the channel term; the same doubling rule is
/// applied to every method for comparability.
pub fn optimized_total_distortion(
    src: &SourceSpec,
    bec: &BecSpec,
    transmission_rate: f64,
    method: DistortionMethod,
) -> Result<DistortionBound> {
    let (rate, mut bound) = match method {
        DistortionMethod::Expurgated(m) => {
            let rate = match m {
                RateMethod::Exact => r_ex_exact(bec, src)?,
                RateMethod::Simplified => r_ex_simplified(bec, src)?,
                RateMethod::Asymptotic => r_ex_asymptotic(bec, src)?,
            };
            let link = LinkSpec::new(transmission_rate, rate)?;
            (rate, distortion_upper(&link, src, bec)?)
        }
        DistortionMethod::StraightLine => {
            let rate = r_sl_bound(bec, src)?;
            let link = LinkSpec::new(transmission_rate, rate)?;
            (rate, distortion_lower(&link, src, bec)?)
        }
    };
    bound.code_rate = rate;
    bound.total = 2.0 * bound.channel_term;
    Ok(bound)
}
