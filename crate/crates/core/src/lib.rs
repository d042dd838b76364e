//! Rate allocation between a vector quantizer and a channel code on bit- and
//! packet-erasure channels.
//!
//! A source block is quantized to `m` bits and protected by an `(n, m)`
//! channel code of rate `r = m/n`. Raising `r` spends the channel budget on
//! source fidelity; lowering it spends the budget on error protection. This
//! crate computes the two rates that bracket the optimum of that tradeoff:
//!
//! * a lower bound `r_ex`, where the expurgated error exponent balances the
//!   high-rate quantizer distortion exponent, and
//! * an upper bound `r_sl`, from the straight-line exponent that joins the
//!   zero-rate expurgated value tangentially to the sphere-packing curve.
//!
//! Around those sit the supporting pieces: the exponent functions themselves
//! ([`exponents`]), two-term distortion bounds ([`distortion`]), the
//! packet-erasure reduction and packet-size planner ([`packet`]), and
//! grid-search oracles that re-derive every closed form independently
//! ([`verification`]).
//!
//! All logarithms are base 2. Distortion values are exponent-order bounds:
//! unknown multiplicative constants are normalized to 1.
//!
//! ```
//! use erasure_bounds::{compute_bounds, BecSpec, RateMethod, SourceSpec};
//!
//! let bec = BecSpec::new(0.01).unwrap();
//! let src = SourceSpec::new(4, 2.0).unwrap(); // squared distortion, dimension 4
//! let bounds = compute_bounds(&bec, &src, RateMethod::Exact).unwrap();
//! assert!(bounds.r_ex < bounds.r_sl && bounds.r_sl < bec.capacity());
//! ```

pub mod distortion;
pub mod error;
pub mod exponents;
pub mod packet;
pub mod rate_bounds;
pub mod verification;

pub use distortion::{
    distortion_lower, distortion_upper, optimized_total_distortion, quantizer_distortion,
    DistortionBound, DistortionMethod, LinkSpec, Regime,
};
pub use error::{Error, Result};
pub use exponents::{
    bec_matrix, e0_general, e_x_general, expurgated_exponent, expurgated_zero_rate, rate_for_rho,
    sphere_packing_closed, sphere_packing_sup, straight_line_exponent, straight_line_slope,
    tangent_rate, BecSpec, ChannelMatrix, ExponentValue,
};
pub use packet::{
    delta_from_epsilon, epsilon_from_delta, min_packet_length, packet_distortion_table,
    packet_rate_bounds, PacketPlan, PacketPoint, PacketSpec,
};
pub use rate_bounds::{
    compute_bounds, r_ex_asymptotic, r_ex_exact, r_ex_simplified, r_sl_bound, solve_c_epsilon,
    RateBounds, RateMethod, SourceSpec,
};
pub use verification::{
    grid_sup, numeric_slope, residual_scan, run_standard_suite, GridScale, GridSpec, GroupResult,
    VerificationReport,
};
