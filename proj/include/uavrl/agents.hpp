#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "uavrl/nn.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::agents {

// One saved interaction step. v_old and logp_old come from the frozen
// snapshots that were live when the step was taken; v_next_old is the stored
// bootstrap V'(s') so the frozen target never touches the learning critic.
// adv is filled in at the start of an update round.
template <typename ActionT>
struct Transition {
  Eigen::VectorXd s;
  Eigen::VectorXd s_next;
  ActionT a{};
  double r = 0.0;
  double logp_old = 0.0;
  double v_old = 0.0;
  double v_next_old = 0.0;
  double adv = 0.0;
  bool done = false;
};

using DiscreteTransition = Transition<std::int64_t>;
using ContinuousTransition = Transition<Eigen::Vector2d>;

struct PpoConfig {
  double clip_ratio = 0.2;
  double gamma = 0.99;
  double actor_lr = 3e-4;
  double critic_lr = 1e-3;
  double entropy_coef = 0.005;
  std::vector<int> hidden = {128, 128};
  bool use_gae = false;
  double gae_lambda = 0.95;
  double sigma_floor = 5e-3;  // continuous head only
  double sigma_init = 2.5;    // initial per-axis stddev (continuous head only)

  void validate() const;
};

struct LossReport {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

// Fills t.adv for a temporally ordered span of transitions sharing one
// snapshot generation. One-step TD by default; GAE(lambda) accumulates
// backwards, restarting at done boundaries.
template <typename ActionT>
void compute_advantages(std::span<Transition<ActionT>> seq, double gamma, bool use_gae,
                        double lambda);

class PpoDiscreteAgent {
 public:
  PpoDiscreteAgent(int state_dim, std::int64_t n_actions, PpoConfig cfg, Rng& init_rng);

  struct ActResult {
    std::int64_t action = 0;
    double logp = 0.0;
    double value = 0.0;
  };

  // Samples from the old-policy snapshot with epsilon-greedy mixing; the
  // recorded log-prob is the snapshot policy's own, which the update ratio
  // divides by.
  ActResult act(const Eigen::VectorXd& s, double eps, Rng& rng) const;
  std::int64_t act_greedy(const Eigen::VectorXd& s) const;

  double value(const Eigen::VectorXd& s) const;
  double old_value(const Eigen::VectorXd& s) const;

  // Mean squared TD error against the stored frozen-critic targets.
  double critic_loss(std::span<const DiscreteTransition> batch, nn::Grads* grads);
  // Clipped surrogate minus entropy bonus; advantages normalized per batch.
  double actor_loss(std::span<const DiscreteTransition> batch, nn::Grads* grads);

  LossReport update(std::span<const DiscreteTransition> batch);
  void sync_old();

  const PpoConfig& config() const { return cfg_; }
  int state_dim() const { return actor_.in_dim(); }
  std::int64_t n_actions() const { return actor_.out_dim(); }

  nn::Mlp& actor_net() { return actor_; }
  nn::Mlp& critic_net() { return critic_; }
  const nn::Mlp& old_actor_net() const { return actor_old_; }
  const nn::Mlp& old_critic_net() const { return critic_old_; }
  const nn::AdamState& actor_opt() const { return opt_actor_; }
  const nn::AdamState& critic_opt() const { return opt_critic_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  PpoConfig cfg_;
  nn::Mlp actor_;
  nn::Mlp critic_;
  nn::Mlp actor_old_;
  nn::Mlp critic_old_;
  nn::AdamState opt_actor_;
  nn::AdamState opt_critic_;
};

class PpoContinuousAgent {
 public:
  // move_bound scales nothing internally; it is recorded so greedy/evaluation
  // callers know the env will clamp. Sampled actions are returned unclamped
  // and the log-prob is the pre-clamp density.
  PpoContinuousAgent(int state_dim, PpoConfig cfg, Rng& init_rng);

  struct ActResult {
    Eigen::Vector2d action{0.0, 0.0};
    double logp = 0.0;
    double value = 0.0;
  };

  ActResult act(const Eigen::VectorXd& s, Rng& rng) const;
  Eigen::Vector2d act_greedy(const Eigen::VectorXd& s) const;  // mean action

  double value(const Eigen::VectorXd& s) const;
  double old_value(const Eigen::VectorXd& s) const;

  double critic_loss(std::span<const ContinuousTransition> batch, nn::Grads* grads);
  double actor_loss(std::span<const ContinuousTransition> batch, nn::Grads* grads);

  LossReport update(std::span<const ContinuousTransition> batch);
  void sync_old();

  const PpoConfig& config() const { return cfg_; }
  int state_dim() const { return actor_.in_dim(); }

  nn::Mlp& actor_net() { return actor_; }
  nn::Mlp& critic_net() { return critic_; }
  const nn::Mlp& old_actor_net() const { return actor_old_; }
  const nn::Mlp& old_critic_net() const { return critic_old_; }
  const nn::AdamState& actor_opt() const { return opt_actor_; }
  const nn::AdamState& critic_opt() const { return opt_critic_; }
  const nn::GaussianHead& head() const { return head_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  PpoConfig cfg_;
  nn::GaussianHead head_;
  nn::Mlp actor_;  // outputs (mu_x, mu_y, z_x, z_y)
  nn::Mlp critic_;
  nn::Mlp actor_old_;
  nn::Mlp critic_old_;
  nn::AdamState opt_actor_;
  nn::AdamState opt_critic_;
};

struct DqnConfig {
  double gamma = 0.99;
  double lr = 1e-3;
  int batch_size = 32;
  int capacity = 100000;
  int warmup = 1000;          // transitions before learning starts
  int update_period = 4;      // environment steps between updates
  int target_sync_period = 500;  // updates between target refreshes
  bool dueling = false;
  std::vector<int> hidden = {128, 128};

  void validate() const;
};

struct DqnTransition {
  Eigen::VectorXd s;
  Eigen::VectorXd s_next;
  std::int64_t a = 0;
  double r = 0.0;
  bool done = false;
};

class DqnAgent {
 public:
  DqnAgent(int state_dim, std::int64_t n_actions, DqnConfig cfg, Rng& init_rng);

  std::int64_t act(const Eigen::VectorXd& s, double eps, Rng& rng) const;
  std::int64_t act_greedy(const Eigen::VectorXd& s) const;  // ties break low

  // Dueling recombination Q = V + A - mean(A) applied when configured.
  Eigen::VectorXd q_values(const Eigen::VectorXd& s) const;

  void remember(DqnTransition t);

  // Mean squared TD error against the target net's bootstrap; gradients flow
  // through the online net only.
  double loss(std::span<const DqnTransition> batch, nn::Grads* grads);

  // Samples a minibatch and applies one TD step; throws on an underfull
  // buffer. Target net refreshes every target_sync_period calls.
  double update(Rng& rng);

  // Step hook for the trainer: obeys warmup and update_period.
  std::optional<double> on_step(Rng& rng);

  std::size_t buffer_size() const { return buffer_.size(); }
  const DqnConfig& config() const { return cfg_; }
  int state_dim() const { return q_.in_dim(); }
  std::int64_t n_actions() const { return n_actions_; }

  nn::Mlp& q_net() { return q_; }
  const nn::Mlp& target_net() const { return target_; }
  const nn::AdamState& opt() const { return opt_; }
  std::int64_t update_count() const { return update_count_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  Eigen::VectorXd q_from_raw(const Eigen::VectorXd& raw) const;

  DqnConfig cfg_;
  std::int64_t n_actions_ = 0;
  nn::Mlp q_;
  nn::Mlp target_;
  nn::AdamState opt_;
  std::vector<DqnTransition> buffer_;
  std::size_t buffer_next_ = 0;  // ring insertion point
  std::int64_t step_count_ = 0;
  std::int64_t update_count_ = 0;
};

}  // namespace uavrl::agents
