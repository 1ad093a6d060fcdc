#pragma once

#include <Eigen/Core>
#include <span>

#include "uavrl/rng.hpp"

namespace uavrl::channel {

// Physical-layer constants for the uplink between ground collectors and the
// UAV-mounted receiver. All gains are linear power ratios, not dB.
struct RadioConfig {
  double beta0 = 1e-3;          // channel power gain at the d0 = 1 m reference
  double alpha = 2.0;           // path-loss exponent, in [2, 6]
  double rician_k = 10.0;       // Rician factor K; +inf means pure LoS
  double bandwidth_hz = 5e6;    // per-channel bandwidth B
  double noise_power_w = 5e-8;  // AWGN power sigma^2 at the receiver
  double tx_power_w = 5.0;      // transmit power p, identical for every MDC
  double uav_height_m = 100.0;  // fixed flight altitude H

  // Throws std::invalid_argument on any out-of-range field.
  void validate() const;
};

// Squared magnitudes |g|^2 of the small-scale coefficients, one row per MDC,
// one column per channel. Unit mean by construction.
using FadingDraw = Eigen::MatrixXd;

// UAV-to-MDC distance with the UAV at fixed altitude `height`.
double distance(const Eigen::Vector2d& mdc_xy, const Eigen::Vector2d& uav_xy, double height);

// Large-scale average gain beta = beta0 * d^-alpha. Requires d > 0.
double large_scale_gain(const RadioConfig& cfg, double d);

// Draws an n-by-m block of independent Rician fading powers
// |sqrt(K/(K+1)) + sqrt(1/(K+1)) g~|^2 with g~ circularly-symmetric unit
// Gaussian. The LoS phasor is fixed to 1; only the power matters downstream.
FadingDraw sample_fading(const RadioConfig& cfg, Rng& rng, int n, int m);

// Channel power gain |h|^2 = beta * |g|^2.
double channel_gain(double beta, double fading_sq);

// Channel-to-noise ratio Gamma = |h|^2 / (B sigma^2).
double cnr(const RadioConfig& cfg, double gain_sq);

// SINR of the target among co-channel occupants:
// gamma = p Gamma_t / (1 + sum_{i != t} p Gamma_i).
double sinr(double p_w, std::span<const double> cnrs_in_channel, std::size_t target_index);

// Shannon rate R = B log2(1 + gamma) in bits/s.
double rate(const RadioConfig& cfg, double sinr_value);

}  // namespace uavrl::channel
