#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "uavrl/channel.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::env {

// Shaped: r_time + w_data * collected/U, so collecting more is always better.
// Literal: (r_time/U) * sum(t_slot * R), the unrepaired textbook form.
enum class RewardMode : std::uint8_t { kShaped = 0, kLiteral = 1 };

// Per-axis box on (dx, dy), or a Euclidean cap on the displacement norm.
enum class ClampMode : std::uint8_t { kPerAxis = 0, kEuclidean = 1 };

struct EnvConfig {
  channel::RadioConfig radio;
  int n_mdcs = 5;
  int n_channels = 3;
  double area_m = 200.0;        // region is [0, L]^2
  double v_max = 10.0;          // m/s
  double t_slot = 0.5;          // s
  double data_size_bits = 50e6; // U, initial payload per MDC
  int t_max = 400;              // slot limit per episode
  double r_time = -1.0;
  double r_fail = -400.0;
  double r_penalty = -5.0;
  double w_data = 1.0;          // collection bonus weight in shaped mode
  RewardMode reward_mode = RewardMode::kShaped;
  ClampMode clamp_mode = ClampMode::kPerAxis;
  std::vector<Eigen::Vector2d> mdc_positions;  // exactly n_mdcs entries
  Eigen::Vector2d uav_start{100.0, 100.0};

  void validate() const;
  double move_bound() const { return t_slot * v_max; }
  std::int64_t n_actions() const;  // (M+1)^N
  int discrete_state_dim() const { return n_mdcs + n_mdcs * n_channels; }
  int continuous_state_dim() const { return discrete_state_dim() + 2; }
};

// Seeded uniform placement over [0, L]^2; identical output for equal seeds.
std::vector<Eigen::Vector2d> place_mdcs_uniform(int n, double area_m, std::uint64_t seed);

struct EnvState {
  Eigen::VectorXd u_res;           // remaining bits per MDC
  Eigen::Vector2d uav_xy;
  channel::FadingDraw fading_sq;   // fading the next transmission slot will see
  int step = 0;                    // completed slots
};

// Per-MDC channel assignment; entry 0 means unassigned, m in [1, M] selects
// channel m. Any number of MDCs may share a channel.
struct Allocation {
  std::vector<int> per_mdc;
};

// Base-(M+1) positional encoding of an Allocation, MDC 1 least significant.
using AllocationAction = std::int64_t;

struct TrajectoryAction {
  double dx = 0.0;
  double dy = 0.0;
};

struct StepOutcome {
  double r_ch = 0.0;
  double r_traj = 0.0;
  Eigen::VectorXd collected_bits;
  bool done = false;
  bool success = false;
};

AllocationAction encode_allocation(const Allocation& alloc, int n_channels);
Allocation decode_allocation(AllocationAction action, int n_mdcs, int n_channels);

class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  const EnvConfig& config() const { return cfg_; }

  EnvState reset(Rng& rng) const;

  // Move (clamped), transmit at the new position with the state's fading,
  // drain payloads, score, then draw fresh fading and advance the slot
  // counter. Throws std::logic_error on a terminal state.
  StepOutcome step(EnvState& s, AllocationAction a_ch, const TrajectoryAction& a_traj,
                   Rng& rng) const;

  bool is_terminal(const EnvState& s) const;

  // Achievable rate per MDC at the state's UAV position. Drained and
  // unassigned MDCs are silent: rate 0 and no interference contribution.
  Eigen::VectorXd slot_rates(const EnvState& s, const Allocation& alloc) const;

  // Normalized remaining data followed by log-compressed channel gains.
  Eigen::VectorXd state_vector_discrete(const EnvState& s) const;

  // Discrete features plus the UAV position scaled by 1/L.
  Eigen::VectorXd state_vector_continuous(const EnvState& s) const;

 private:
  EnvConfig cfg_;
  double log_gain_lo_ = 0.0;    // log10 gain at the farthest in-region geometry
  double log_gain_span_ = 1.0;  // log10 dynamic range down from hover distance H
};

}  // namespace uavrl::env
