#include "uavrl/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavrl::env {

void EnvConfig::validate() const {
  radio.validate();
  if (n_mdcs < 1) throw std::invalid_argument("n_mdcs must be >= 1");
  if (n_channels < 1) throw std::invalid_argument("n_channels must be >= 1");
  if (!(area_m > 0.0)) throw std::invalid_argument("area_m must be > 0");
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be > 0");
  if (!(t_slot > 0.0)) throw std::invalid_argument("t_slot must be > 0");
  if (!(data_size_bits > 0.0)) throw std::invalid_argument("data_size_bits must be > 0");
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (!(r_time < 0.0)) throw std::invalid_argument("r_time must be < 0");
  if (!(r_fail < r_time)) throw std::invalid_argument("r_fail must be < r_time");
  if (!(r_penalty < 0.0)) throw std::invalid_argument("r_penalty must be < 0");
  if (!(w_data >= 0.0)) throw std::invalid_argument("w_data must be >= 0");
  if (radio.uav_height_m < 1.0)
    throw std::invalid_argument("uav_height_m must be >= 1 m");
  if (mdc_positions.size() != static_cast<std::size_t>(n_mdcs))
    throw std::invalid_argument("mdc_positions must have exactly n_mdcs entries");
  for (const auto& p : mdc_positions) {
    if (!(p.x() >= 0.0 && p.x() <= area_m && p.y() >= 0.0 && p.y() <= area_m))
      throw std::invalid_argument("mdc position outside [0, L]^2");
  }
  // 63-bit overflow guard for the encoded action range.
  double actions = std::pow(static_cast<double>(n_channels + 1), n_mdcs);
  if (actions > 4.0e18)
    throw std::invalid_argument("allocation action space too large to encode");
}

std::int64_t EnvConfig::n_actions() const {
  std::int64_t total = 1;
  for (int i = 0; i < n_mdcs; ++i) total *= static_cast<std::int64_t>(n_channels + 1);
  return total;
}

std::vector<Eigen::Vector2d> place_mdcs_uniform(int n, double area_m, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(area_m > 0.0)) throw std::invalid_argument("area_m must be > 0");
  Rng rng(seed);
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform(0.0, area_m);
    double y = rng.uniform(0.0, area_m);
    out.emplace_back(x, y);
  }
  return out;
}

AllocationAction encode_allocation(const Allocation& alloc, int n_channels) {
  const int base = n_channels + 1;
  AllocationAction code = 0;
  AllocationAction mult = 1;
  for (std::size_t i = 0; i < alloc.per_mdc.size(); ++i) {
    int c = alloc.per_mdc[i];
    if (c < 0 || c > n_channels)
      throw std::invalid_argument("allocation entry out of range [0, M]");
    code += mult * c;
    mult *= base;
  }
  return code;
}

Allocation decode_allocation(AllocationAction action, int n_mdcs, int n_channels) {
  if (n_mdcs < 1) throw std::invalid_argument("n_mdcs must be >= 1");
  if (n_channels < 1) throw std::invalid_argument("n_channels must be >= 1");
  const AllocationAction base = n_channels + 1;
  AllocationAction range = 1;
  for (int i = 0; i < n_mdcs; ++i) range *= base;
  if (action < 0 || action >= range)
    throw std::out_of_range("encoded allocation outside [0, (M+1)^N)");
  Allocation alloc;
  alloc.per_mdc.resize(static_cast<std::size_t>(n_mdcs));
  for (int i = 0; i < n_mdcs; ++i) {
    alloc.per_mdc[static_cast<std::size_t>(i)] = static_cast<int>(action % base);
    action /= base;
  }
  return alloc;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  // Feature compression range: large-scale gain from hovering directly above
  // an MDC down to the farthest corner-to-corner geometry in the region.
  const double h = cfg_.radio.uav_height_m;
  const double d_near = h;
  const double d_far = std::sqrt(2.0 * cfg_.area_m * cfg_.area_m + h * h);
  const double lo = std::log10(channel::large_scale_gain(cfg_.radio, d_far));
  const double hi = std::log10(channel::large_scale_gain(cfg_.radio, d_near));
  log_gain_lo_ = lo;
  log_gain_span_ = std::max(hi - lo, 1e-12);
}

EnvState Environment::reset(Rng& rng) const {
  EnvState s;
  s.u_res = Eigen::VectorXd::Constant(cfg_.n_mdcs, cfg_.data_size_bits);
  s.uav_xy = cfg_.uav_start;
  s.fading_sq = channel::sample_fading(cfg_.radio, rng, cfg_.n_mdcs, cfg_.n_channels);
  s.step = 0;
  return s;
}

bool Environment::is_terminal(const EnvState& s) const {
  return s.u_res.maxCoeff() <= 0.0 || s.step > cfg_.t_max;
}

Eigen::VectorXd Environment::slot_rates(const EnvState& s, const Allocation& alloc) const {
  if (alloc.per_mdc.size() != static_cast<std::size_t>(cfg_.n_mdcs))
    throw std::invalid_argument("allocation size mismatch");
  Eigen::VectorXd rates = Eigen::VectorXd::Zero(cfg_.n_mdcs);
  std::vector<int> occupants;
  std::vector<double> cnrs;
  for (int m = 1; m <= cfg_.n_channels; ++m) {
    occupants.clear();
    cnrs.clear();
    for (int n = 0; n < cfg_.n_mdcs; ++n) {
      if (alloc.per_mdc[static_cast<std::size_t>(n)] != m) continue;
      if (s.u_res(n) <= 0.0) continue;  // drained device, transmitter idle
      double d = channel::distance(cfg_.mdc_positions[static_cast<std::size_t>(n)],
                                   s.uav_xy, cfg_.radio.uav_height_m);
      double beta = channel::large_scale_gain(cfg_.radio, d);
      double gain = channel::channel_gain(beta, s.fading_sq(n, m - 1));
      occupants.push_back(n);
      cnrs.push_back(channel::cnr(cfg_.radio, gain));
    }
    for (std::size_t i = 0; i < occupants.size(); ++i) {
      double gamma = channel::sinr(cfg_.radio.tx_power_w, cnrs, i);
      rates(occupants[i]) = channel::rate(cfg_.radio, gamma);
    }
  }
  return rates;
}

StepOutcome Environment::step(EnvState& s, AllocationAction a_ch,
                              const TrajectoryAction& a_traj, Rng& rng) const {
  if (is_terminal(s)) throw std::logic_error("step() called on a terminal state");

  const double bound = cfg_.move_bound();
  double dx = a_traj.dx;
  double dy = a_traj.dy;
  if (cfg_.clamp_mode == ClampMode::kPerAxis) {
    dx = std::clamp(dx, -bound, bound);
    dy = std::clamp(dy, -bound, bound);
  } else {
    double norm = std::hypot(dx, dy);
    if (norm > bound && norm > 0.0) {
      dx *= bound / norm;
      dy *= bound / norm;
    }
  }
  s.uav_xy.x() += dx;
  s.uav_xy.y() += dy;

  Allocation alloc = decode_allocation(a_ch, cfg_.n_mdcs, cfg_.n_channels);
  Eigen::VectorXd rates = slot_rates(s, alloc);

  StepOutcome out;
  out.collected_bits =
      (s.u_res.array().min(rates.array() * cfg_.t_slot)).matrix();
  s.u_res -= out.collected_bits;

  const int t_new = s.step + 1;
  if (t_new > cfg_.t_max) {
    out.r_ch = cfg_.r_fail;
  } else if (cfg_.reward_mode == RewardMode::kShaped) {
    out.r_ch = cfg_.r_time + cfg_.w_data * out.collected_bits.sum() / cfg_.data_size_bits;
  } else {
    out.r_ch = cfg_.r_time / cfg_.data_size_bits * (cfg_.t_slot * rates.sum());
  }
  const bool inside = s.uav_xy.x() >= 0.0 && s.uav_xy.x() <= cfg_.area_m &&
                      s.uav_xy.y() >= 0.0 && s.uav_xy.y() <= cfg_.area_m;
  out.r_traj = inside ? out.r_ch : out.r_ch + cfg_.r_penalty;

  s.fading_sq = channel::sample_fading(cfg_.radio, rng, cfg_.n_mdcs, cfg_.n_channels);
  s.step = t_new;
  out.success = s.u_res.maxCoeff() <= 0.0;
  out.done = out.success || t_new > cfg_.t_max;
  return out;
}

Eigen::VectorXd Environment::state_vector_discrete(const EnvState& s) const {
  const int n = cfg_.n_mdcs;
  const int m = cfg_.n_channels;
  Eigen::VectorXd v(n + n * m);
  v.head(n) = s.u_res / cfg_.data_size_bits;
  for (int i = 0; i < n; ++i) {
    double d = channel::distance(cfg_.mdc_positions[static_cast<std::size_t>(i)],
                                 s.uav_xy, cfg_.radio.uav_height_m);
    double beta = channel::large_scale_gain(cfg_.radio, d);
    for (int j = 0; j < m; ++j) {
      double gain = channel::channel_gain(beta, s.fading_sq(i, j));
      double lg = std::log10(std::max(gain, 1e-300));
      v(n + i * m + j) = (lg - log_gain_lo_) / log_gain_span_;
    }
  }
  return v;
}

Eigen::VectorXd Environment::state_vector_continuous(const EnvState& s) const {
  Eigen::VectorXd base = state_vector_discrete(s);
  Eigen::VectorXd v(base.size() + 2);
  v.head(base.size()) = base;
  v(base.size()) = s.uav_xy.x() / cfg_.area_m;
  v(base.size() + 1) = s.uav_xy.y() / cfg_.area_m;
  return v;
}

}  // namespace uavrl::env
