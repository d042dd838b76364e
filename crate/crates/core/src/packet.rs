//! Packet-erasure channels reduced to equivalent bit-erasure channels, and
//! packet-size planning against a distortion limit.
//!
//! A packet is erased when any of its bits is erased, so a P-bit packet
//! channel with packet-erasure probability `delta` shares its error exponent
//! with the binary erasure channel at `eps = 1 - (1 - delta)^(1/P)`. All
//! packet-level quantities are computed through that equivalent channel.

use crate::distortion::{optimized_total_distortion, DistortionMethod};
use crate::error::{Error, Result};
use crate::exponents::BecSpec;
use crate::rate_bounds::{compute_bounds, RateBounds, RateMethod, SourceSpec};

/// A packet channel: erasure probability `delta` per packet of `packet_bits`
/// bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    delta: f64,
    packet_bits: u32,
}

impl PacketSpec {
    pub fn new(delta: f64, packet_bits: u32) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
            return Err(Error::invalid(
                "delta",
                format!("packet erasure probability must lie strictly in (0, 1), got {delta}"),
            ));
        }
        if packet_bits < 1 {
            return Err(Error::invalid(
                "packet_bits",
                "packet size must be >= 1 bit",
            ));
        }
        Ok(Self { delta, packet_bits })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn packet_bits(&self) -> u32 {
        self.packet_bits
    }

    /// The bit-erasure channel sharing this packet channel's error exponent.
    pub fn equivalent_bec(&self) -> BecSpec {
        BecSpec::new(epsilon_from_delta(self.delta, self.packet_bits))
            .expect("equivalent bit-erasure probability lies in (0, 1)")
    }
}

/// Packet-erasure probability of a P-bit packet over a bit-erasure channel:
/// `delta = 1 - (1 - eps)^P`, evaluated in log space for precision.
pub fn delta_from_epsilon(epsilon: f64, packet_bits: u32) -> f64 {
    debug_assert!(epsilon > 0.0 && epsilon < 1.0);
    debug_assert!(packet_bits >= 1);
    -(f64::from(packet_bits) * (-epsilon).ln_1p()).exp_m1()
}

/// Bit-erasure probability equivalent to packet erasures:
/// `eps = 1 - (1 - delta)^(1/P)`, evaluated in log space for precision.
pub fn epsilon_from_delta(delta: f64, packet_bits: u32) -> f64 {
    debug_assert!(delta > 0.0 && delta < 1.0);
    debug_assert!(packet_bits >= 1);
    -((-delta).ln_1p() / f64::from(packet_bits)).exp_m1()
}

/// Rate bounds for a packet channel, computed on the equivalent bit channel.
pub fn packet_rate_bounds(
    pkt: &PacketSpec,
    src: &SourceSpec,
    method: RateMethod,
) -> Result<RateBounds> {
    compute_bounds(&pkt.equivalent_bec(), src, method)
}

/// One row of a packet-size scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketPoint {
    pub packet_bits: u32,
    /// Equivalent bit-erasure probability at this packet size.
    pub epsilon: f64,
    /// Optimized code rate on the equivalent channel.
    pub code_rate: f64,
    /// Optimized total distortion (twice the channel term).
    pub total_distortion: f64,
}

/// Result of a minimum-packet-size scan.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketPlan {
    /// Smallest packet size meeting the limit, if any was found.
    pub p_min: Option<u32>,
    /// The distortion limit the scan ran against.
    pub distortion_limit: f64,
    /// Rows computed before the scan stopped (the whole range when no packet
    /// size met the limit).
    pub table: Vec<PacketPoint>,
}

impl PacketPlan {
    /// True when the scan exhausted its range without meeting the limit.
    pub fn not_achievable(&self) -> bool {
        self.p_min.is_none()
    }
}

fn packet_point(
    delta: f64,
    packet_bits: u32,
    src: &SourceSpec,
    transmission_rate: f64,
    method: DistortionMethod,
) -> Result<PacketPoint> {
    let bec = PacketSpec::new(delta, packet_bits)?.equivalent_bec();
    let bound = optimized_total_distortion(src, &bec, transmission_rate, method)?;
    Ok(PacketPoint {
        packet_bits,
        epsilon: bec.epsilon(),
        code_rate: bound.code_rate,
        total_distortion: bound.total,
    })
}

/// Scans packet sizes `1..=p_max` in order and returns the first size whose
/// optimized distortion is at or below `distortion_limit`, together with the
/// rows computed along the way.
///
/// The distortion column is nonincreasing in the packet size, so the first
/// hit is the minimum. When no size qualifies the full table is returned with
/// no `p_min`.
pub fn min_packet_length(
    delta: f64,
    src: &SourceSpec,
    transmission_rate: f64,
    distortion_limit: f64,
    p_max: u32,
    method: DistortionMethod,
) -> Result<PacketPlan> {
    if distortion_limit.is_nan() || distortion_limit <= 0.0 {
        return Err(Error::invalid(
            "distortion_limit",
            format!("must be > 0, got {distortion_limit}"),
        ));
    }
    if p_max < 1 {
        return Err(Error::invalid(
            "p_max",
            "scan range must cover at least P = 1",
        ));
    }
    let mut table = Vec::new();
    for p in 1..=p_max {
        let point = packet_point(delta, p, src, transmission_rate, method)?;
        let meets = point.total_distortion <= distortion_limit;
        table.push(point);
        if meets {
            return Ok(PacketPlan {
                p_min: Some(p),
                distortion_limit,
                table,
            });
        }
    }
    Ok(PacketPlan {
        p_min: None,
        distortion_limit,
        table,
    })
}

/// Optimized distortion at every packet size `1..=p_max`, with no limit and
/// no early exit; the full curve for plotting.
pub fn packet_distortion_table(
    delta: f64,
    src: &SourceSpec,
    transmission_rate: f64,
    p_max: u32,
    method: DistortionMethod,
) -> Result<Vec<PacketPoint>> {
    if p_max < 1 {
        return Err(Error::invalid(
            "p_max",
            "scan range must cover at least P = 1",
        ));
    }
    (1..=p_max)
        .map(|p| packet_point(delta, p, src, transmission_rate, method))
        .collect()
}
