#include "uavrl/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavrl::channel {

void RadioConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(beta0, "beta0");
  positive(bandwidth_hz, "bandwidth_hz");
  positive(noise_power_w, "noise_power_w");
  positive(tx_power_w, "tx_power_w");
  positive(uav_height_m, "uav_height_m");
  if (!(alpha >= 2.0 && alpha <= 6.0))
    throw std::invalid_argument("alpha must be in [2, 6]");
  if (!(rician_k >= 0.0)) throw std::invalid_argument("rician_k must be >= 0");
}

double distance(const Eigen::Vector2d& mdc_xy, const Eigen::Vector2d& uav_xy, double height) {
  const Eigen::Vector2d d = mdc_xy - uav_xy;
  return std::sqrt(d.squaredNorm() + height * height);
}

double large_scale_gain(const RadioConfig& cfg, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("distance must be > 0");
  return cfg.beta0 * std::pow(d, -cfg.alpha);
}

FadingDraw sample_fading(const RadioConfig& cfg, Rng& rng, int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("fading dimensions must be >= 1");
  FadingDraw out(n, m);
  const double k = cfg.rician_k;
  if (std::isinf(k)) {
    out.setOnes();
    return out;
  }
  const double los = std::sqrt(k / (k + 1.0));
  // Scatter component g~ = (x + iy)/sqrt(2) with x, y standard normal, so
  // E|g~|^2 = 1 and the total fading power has unit mean for every K.
  const double scatter = std::sqrt(1.0 / (2.0 * (k + 1.0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double re = los + scatter * rng.normal();
      const double im = scatter * rng.normal();
      out(i, j) = re * re + im * im;
    }
  }
  return out;
}

double channel_gain(double beta, double fading_sq) {
  return beta * fading_sq;
}

double cnr(const RadioConfig& cfg, double gain_sq) {
  return gain_sq / (cfg.bandwidth_hz * cfg.noise_power_w);
}

double sinr(double p_w, std::span<const double> cnrs_in_channel, std::size_t target_index) {
  if (target_index >= cnrs_in_channel.size())
    throw std::out_of_range("sinr: target_index out of range");
  double interference = 0.0;
  for (std::size_t i = 0; i < cnrs_in_channel.size(); ++i) {
    if (i != target_index) interference += p_w * cnrs_in_channel[i];
  }
  return p_w * cnrs_in_channel[target_index] / (1.0 + interference);
}

double rate(const RadioConfig& cfg, double sinr_value) {
  return cfg.bandwidth_hz * std::log2(1.0 + sinr_value);
}

}  // namespace uavrl::channel
