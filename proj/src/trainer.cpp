#include "uavrl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavrl::trainer {

namespace {

// Stream indices for derive_seed; keep stable or saved runs stop reproducing.
enum Stream : std::uint64_t {
  kStreamEnv = 0,
  kStreamInitDiscrete = 1,
  kStreamInitContinuous = 2,
  kStreamActDiscrete = 3,
  kStreamActContinuous = 4,
  kStreamShuffle = 5,
  kStreamEval = 6,
  kStreamDqnReplay = 7,
};

template <typename T, typename Agent>
agents::LossReport run_minibatch_epochs(std::vector<T>& seq, Agent& agent, int epochs,
                                        int batch_size, Rng& shuffle_rng) {
  agents::LossReport mean{};
  std::vector<std::size_t> order(seq.size());
  std::vector<T> batch;
  batch.reserve(static_cast<std::size_t>(batch_size));
  long batches = 0;
  for (int e = 0; e < epochs; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(batch_size)) {
      std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(batch_size));
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(seq[order[k]]);
      agents::LossReport r = agent.update(batch);
      mean.actor_loss += r.actor_loss;
      mean.critic_loss += r.critic_loss;
      ++batches;
    }
  }
  if (batches > 0) {
    mean.actor_loss /= static_cast<double>(batches);
    mean.critic_loss /= static_cast<double>(batches);
  }
  return mean;
}

}  // namespace

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::kPpo: return "ppo-ppo";
    case Algo::kDqn: return "dqn-ppo";
    case Algo::kDuelingDqn: return "dueling-dqn-ppo";
  }
  throw std::logic_error("unreachable algo");
}

Algo algo_from_name(const std::string& name) {
  if (name == "ppo-ppo") return Algo::kPpo;
  if (name == "dqn-ppo") return Algo::kDqn;
  if (name == "dueling-dqn-ppo") return Algo::kDuelingDqn;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (valid: ppo-ppo, dqn-ppo, dueling-dqn-ppo)");
}

void TrainConfig::validate() const {
  if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1 || batch_size > horizon)
    throw std::invalid_argument("batch_size must be in [1, horizon]");
  if (eval_period < 1) throw std::invalid_argument("eval_period must be >= 1");
  if (eval_episodes < 1) throw std::invalid_argument("eval_episodes must be >= 1");
  if (!(eps_start >= 0.0 && eps_start <= 1.0))
    throw std::invalid_argument("eps_start must be in [0, 1]");
  if (!(eps_end >= 0.0 && eps_end <= eps_start))
    throw std::invalid_argument("eps_end must be in [0, eps_start]");
  if (eps_start > 0.0 && !(eps_end > 0.0))
    throw std::invalid_argument("eps_end must be > 0 for a geometric decay");
  if (!(eps_decay_frac > 0.0 && eps_decay_frac <= 1.0))
    throw std::invalid_argument("eps_decay_frac must be in (0, 1]");
  ppo_discrete.validate();
  ppo_continuous.validate();
  dqn.validate();
}

double TrainConfig::epsilon_for_episode(int ep) const {
  if (eps_start <= 0.0) return 0.0;
  int span = std::max(1, static_cast<int>(std::lround(eps_decay_frac * episodes)));
  if (ep >= span) return eps_end;
  double ratio = eps_end / eps_start;
  return eps_start * std::pow(ratio, static_cast<double>(ep) / static_cast<double>(span));
}

EpisodeSummary run_random_episode(const env::Environment& e, Rng& rng) {
  env::EnvState st = e.reset(rng);
  const std::int64_t n_actions = e.config().n_actions();
  const double bound = e.config().move_bound();
  EpisodeSummary sum;
  while (!e.is_terminal(st)) {
    env::AllocationAction a = rng.uniform_int(n_actions);
    env::TrajectoryAction traj{rng.uniform(-bound, bound), rng.uniform(-bound, bound)};
    env::StepOutcome out = e.step(st, a, traj, rng);
    sum.sum_r_ch += out.r_ch;
    sum.sum_r_traj += out.r_traj;
    if (out.done) sum.success = out.success;
  }
  sum.mission_time = st.step;
  return sum;
}

Trainer::Trainer(env::Environment e, TrainConfig cfg)
    : env_(std::move(e)),
      cfg_(std::move(cfg)),
      env_rng_(derive_seed(cfg_.seed, kStreamEnv)),
      act_d_rng_(derive_seed(cfg_.seed, kStreamActDiscrete)),
      act_c_rng_(derive_seed(cfg_.seed, kStreamActContinuous)),
      shuffle_rng_(derive_seed(cfg_.seed, kStreamShuffle)),
      eval_rng_(derive_seed(cfg_.seed, kStreamEval)),
      dqn_rng_(derive_seed(cfg_.seed, kStreamDqnReplay)) {
  cfg_.validate();
  const int dim_d = env_.config().discrete_state_dim();
  const int dim_c = env_.config().continuous_state_dim();
  const std::int64_t n_actions = env_.config().n_actions();
  Rng init_d(derive_seed(cfg_.seed, kStreamInitDiscrete));
  Rng init_c(derive_seed(cfg_.seed, kStreamInitContinuous));
  if (cfg_.algo == Algo::kPpo) {
    d_.emplace(dim_d, n_actions, cfg_.ppo_discrete, init_d);
  } else {
    agents::DqnConfig dq = cfg_.dqn;
    dq.dueling = cfg_.algo == Algo::kDuelingDqn;
    q_.emplace(dim_d, n_actions, dq, init_d);
  }
  c_.emplace(dim_c, cfg_.ppo_continuous, init_c);
}

EpisodeSummary Trainer::run_episode(double eps, bool learn) {
  env::EnvState st = env_.reset(env_rng_);
  EpisodeSummary sum;
  while (!env_.is_terminal(st)) {
    Eigen::VectorXd sd = env_.state_vector_discrete(st);
    Eigen::VectorXd sc = env_.state_vector_continuous(st);
    std::int64_t a_ch;
    double logp_d = 0.0;
    double v_d = 0.0;
    if (d_) {
      agents::PpoDiscreteAgent::ActResult r = d_->act(sd, eps, act_d_rng_);
      a_ch = r.action;
      logp_d = r.logp;
      v_d = r.value;
    } else {
      a_ch = q_->act(sd, eps, act_d_rng_);
    }
    agents::PpoContinuousAgent::ActResult rc = c_->act(sc, act_c_rng_);
    env::StepOutcome out =
        env_.step(st, a_ch, env::TrajectoryAction{rc.action.x(), rc.action.y()}, env_rng_);
    sum.sum_r_ch += out.r_ch;
    sum.sum_r_traj += out.r_traj;
    if (learn) {
      Eigen::VectorXd sd2 = env_.state_vector_discrete(st);
      Eigen::VectorXd sc2 = env_.state_vector_continuous(st);
      if (d_) {
        buf_.discrete.push_back(agents::DiscreteTransition{
            sd, sd2, a_ch, out.r_ch, logp_d, v_d, d_->old_value(sd2), 0.0, out.done});
      } else {
        q_->remember(agents::DqnTransition{sd, sd2, a_ch, out.r_ch, out.done});
        if (std::optional<double> loss = q_->on_step(dqn_rng_)) {
          last_d_.actor_loss = 0.0;
          last_d_.critic_loss = *loss;
        }
      }
      buf_.continuous.push_back(agents::ContinuousTransition{
          sc, sc2, rc.action, out.r_traj, rc.logp, rc.value, c_->old_value(sc2), 0.0,
          out.done});
      if (buf_.continuous.size() >= static_cast<std::size_t>(cfg_.horizon)) update_round();
    }
    if (out.done) sum.success = out.success;
  }
  sum.mission_time = st.step;
  return sum;
}

void Trainer::update_round() {
  if (buf_.continuous.size() < static_cast<std::size_t>(cfg_.horizon))
    throw std::logic_error("update_round: buffer below horizon");
  if (d_) {
    agents::compute_advantages<std::int64_t>(buf_.discrete, cfg_.ppo_discrete.gamma,
                                             cfg_.ppo_discrete.use_gae,
                                             cfg_.ppo_discrete.gae_lambda);
  }
  agents::compute_advantages<Eigen::Vector2d>(buf_.continuous, cfg_.ppo_continuous.gamma,
                                              cfg_.ppo_continuous.use_gae,
                                              cfg_.ppo_continuous.gae_lambda);
  if (d_) {
    last_d_ = run_minibatch_epochs(buf_.discrete, *d_, cfg_.epochs, cfg_.batch_size,
                                   shuffle_rng_);
    d_->sync_old();
  }
  last_c_ = run_minibatch_epochs(buf_.continuous, *c_, cfg_.epochs, cfg_.batch_size,
                                 shuffle_rng_);
  c_->sync_old();
  buf_.clear();
}

EpisodeSummary Trainer::run_eval_episode() {
  env::EnvState st = env_.reset(eval_rng_);
  EpisodeSummary sum;
  while (!env_.is_terminal(st)) {
    Eigen::VectorXd sd = env_.state_vector_discrete(st);
    Eigen::VectorXd sc = env_.state_vector_continuous(st);
    std::int64_t a_ch = d_ ? d_->act_greedy(sd) : q_->act_greedy(sd);
    Eigen::Vector2d mu = c_->act_greedy(sc);
    env::StepOutcome out =
        env_.step(st, a_ch, env::TrajectoryAction{mu.x(), mu.y()}, eval_rng_);
    sum.sum_r_ch += out.r_ch;
    sum.sum_r_traj += out.r_traj;
    if (out.done) sum.success = out.success;
  }
  sum.mission_time = st.step;
  return sum;
}

Metrics Trainer::train() {
  Metrics m;
  m.rows.reserve(static_cast<std::size_t>(cfg_.episodes));
  for (int ep = 1; ep <= cfg_.episodes; ++ep) {
    double eps = cfg_.epsilon_for_episode(ep - 1);
    EpisodeSummary sum = run_episode(eps, true);
    m.rows.push_back(MetricsRow{ep, sum.mission_time, sum.success, sum.sum_r_ch,
                                sum.sum_r_traj, last_d_.actor_loss, last_d_.critic_loss,
                                last_c_.actor_loss, last_c_.critic_loss, eps});
    if (ep % cfg_.eval_period == 0) {
      EvalRow row;
      row.episode = ep;
      for (int k = 0; k < cfg_.eval_episodes; ++k) {
        EpisodeSummary es = run_eval_episode();
        row.mission_time += es.mission_time;
        row.success_rate += es.success ? 1.0 : 0.0;
        row.sum_r_ch += es.sum_r_ch;
        row.sum_r_traj += es.sum_r_traj;
      }
      double inv = 1.0 / cfg_.eval_episodes;
      row.mission_time *= inv;
      row.success_rate *= inv;
      row.sum_r_ch *= inv;
      row.sum_r_traj *= inv;
      m.eval_rows.push_back(row);
    }
  }
  return m;
}

}  // namespace uavrl::trainer
