#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavrl/agents.hpp"
#include "uavrl/env.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::trainer {

// Which learner fills the discrete (channel-allocation) slot. The trajectory
// slot is always continuous PPO.
enum class Algo : std::uint8_t { kPpo = 0, kDqn = 1, kDuelingDqn = 2 };

std::string algo_name(Algo a);
Algo algo_from_name(const std::string& name);  // throws listing valid names

inline agents::PpoConfig default_continuous_ppo() {
  agents::PpoConfig c;
  c.entropy_coef = 0.01;
  return c;
}

struct TrainConfig {
  int episodes = 5000;
  int horizon = 2048;      // steps between update rounds (T)
  int epochs = 10;         // passes over the buffer per round
  int batch_size = 64;     // bs
  int eval_period = 10;    // episodes between greedy evaluations
  int eval_episodes = 1;
  std::uint64_t seed = 1;
  Algo algo = Algo::kPpo;
  double eps_start = 0.5;  // exploration mix for the discrete agent
  double eps_end = 0.02;
  double eps_decay_frac = 0.4;  // fraction of episodes the decay spans
  agents::PpoConfig ppo_discrete;
  agents::PpoConfig ppo_continuous = default_continuous_ppo();
  agents::DqnConfig dqn;

  void validate() const;
  // Geometric decay from eps_start to eps_end over the first
  // eps_decay_frac * episodes episodes, constant afterwards; ep is 0-based.
  double epsilon_for_episode(int ep) const;
};

struct RolloutBuffer {
  std::vector<agents::DiscreteTransition> discrete;
  std::vector<agents::ContinuousTransition> continuous;

  void clear() {
    discrete.clear();
    continuous.clear();
  }
};

struct EpisodeSummary {
  int mission_time = 0;
  bool success = false;
  double sum_r_ch = 0.0;
  double sum_r_traj = 0.0;
};

struct MetricsRow {
  int episode = 0;  // 1-based
  int mission_time = 0;
  bool success = false;
  double sum_r_ch = 0.0;
  double sum_r_traj = 0.0;
  double actor_loss_d = 0.0;
  double critic_loss_d = 0.0;
  double actor_loss_c = 0.0;
  double critic_loss_c = 0.0;
  double epsilon = 0.0;
};

struct EvalRow {
  int episode = 0;
  double mission_time = 0.0;
  double success_rate = 0.0;
  double sum_r_ch = 0.0;
  double sum_r_traj = 0.0;
};

struct Metrics {
  std::vector<MetricsRow> rows;
  std::vector<EvalRow> eval_rows;
};

// Uniform-random both-agent rollout, the no-learning baseline.
EpisodeSummary run_random_episode(const env::Environment& e, Rng& rng);

class Trainer {
 public:
  Trainer(env::Environment e, TrainConfig cfg);

  // Runs the configured number of episodes, interleaving update rounds at the
  // horizon and greedy evaluations at the eval period.
  Metrics train();

  // One interaction episode; learn=false skips all storage and updates.
  EpisodeSummary run_episode(double eps, bool learn);
  // Greedy (mean/argmax) episode on the current networks.
  EpisodeSummary run_eval_episode();
  // Processes the buffered horizon: advantages, shuffled minibatch epochs,
  // snapshot refresh, flush. Throws if the buffer holds fewer than `horizon`
  // continuous transitions.
  void update_round();

  const env::Environment& environment() const { return env_; }
  const TrainConfig& config() const { return cfg_; }
  const RolloutBuffer& buffer() const { return buf_; }

  agents::PpoDiscreteAgent* discrete_agent() { return d_ ? &*d_ : nullptr; }
  agents::DqnAgent* dqn_agent() { return q_ ? &*q_ : nullptr; }
  agents::PpoContinuousAgent& continuous_agent() { return *c_; }

 private:
  env::Environment env_;
  TrainConfig cfg_;
  std::optional<agents::PpoDiscreteAgent> d_;
  std::optional<agents::DqnAgent> q_;
  std::optional<agents::PpoContinuousAgent> c_;
  RolloutBuffer buf_;
  Rng env_rng_;
  Rng act_d_rng_;
  Rng act_c_rng_;
  Rng shuffle_rng_;
  Rng eval_rng_;
  Rng dqn_rng_;
  agents::LossReport last_d_;
  agents::LossReport last_c_;
};

}  // namespace uavrl::trainer
