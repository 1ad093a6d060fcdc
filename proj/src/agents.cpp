#include "uavrl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace uavrl::agents {

namespace {

constexpr double kAdvEps = 1e-8;

std::int64_t argmax_low(const Eigen::VectorXd& v) {
  std::int64_t best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;  // strict > keeps the lowest index on ties
  }
  return best;
}

void check_state_dim(const Eigen::VectorXd& s, int dim, const char* who) {
  if (s.size() != dim)
    throw std::invalid_argument(std::string(who) + ": state dimension mismatch");
}

template <typename T>
double critic_loss_impl(nn::Mlp& critic, double gamma, std::span<const T> batch,
                        nn::Grads* grads) {
  if (batch.empty()) throw std::invalid_argument("critic loss: empty batch");
  const int dim = critic.in_dim();
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd s(dim, b);
  Eigen::VectorXd target(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const T& t = batch[static_cast<std::size_t>(i)];
    check_state_dim(t.s, dim, "critic loss");
    s.col(i) = t.s;
    target(i) = t.r + gamma * (t.done ? 0.0 : t.v_next_old);
  }
  Eigen::MatrixXd v = critic.forward(s);
  Eigen::ArrayXd err = v.row(0).transpose().array() - target.array();
  double loss = err.square().mean();
  if (grads) {
    Eigen::MatrixXd dy(1, b);
    dy.row(0) = (2.0 / static_cast<double>(b)) * err.matrix().transpose();
    *grads = critic.backward(dy);
  }
  return loss;
}

template <typename T>
Eigen::VectorXd normalized_advantages(std::span<const T> batch) {
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  Eigen::VectorXd adv(b);
  for (Eigen::Index i = 0; i < b; ++i) adv(i) = batch[static_cast<std::size_t>(i)].adv;
  double mean = adv.mean();
  double var = (adv.array() - mean).square().mean();
  return (adv.array() - mean) / (std::sqrt(var) + kAdvEps);
}

// d/d(logp_new) of -min(rho*adv, clip(rho)*adv). Gradient flows only while
// the unclipped term is the active minimum.
double surrogate_logp_grad(double rho, double adv_n, double clip) {
  double unclipped = rho * adv_n;
  double clipped = std::clamp(rho, 1.0 - clip, 1.0 + clip) * adv_n;
  if (unclipped <= clipped) return -adv_n * rho;
  return 0.0;
}

double surrogate_term(double rho, double adv_n, double clip) {
  return -std::min(rho * adv_n, std::clamp(rho, 1.0 - clip, 1.0 + clip) * adv_n);
}

}  // namespace

void PpoConfig::validate() const {
  if (!(clip_ratio > 0.0 && clip_ratio < 1.0))
    throw std::invalid_argument("clip_ratio must be in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (actor_lr < 0.0 || critic_lr < 0.0)
    throw std::invalid_argument("learning rates must be >= 0");
  if (!(entropy_coef >= 0.0)) throw std::invalid_argument("entropy_coef must be >= 0");
  if (hidden.empty()) throw std::invalid_argument("hidden layer list must be non-empty");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("hidden widths must be >= 1");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
    throw std::invalid_argument("gae_lambda must be in [0, 1]");
  if (!(sigma_floor > 0.0)) throw std::invalid_argument("sigma_floor must be > 0");
  if (!(sigma_init > sigma_floor))
    throw std::invalid_argument("sigma_init must exceed sigma_floor");
}

template <typename ActionT>
void compute_advantages(std::span<Transition<ActionT>> seq, double gamma, bool use_gae,
                        double lambda) {
  if (!use_gae) {
    for (auto& t : seq)
      t.adv = t.r + gamma * (t.done ? 0.0 : t.v_next_old) - t.v_old;
    return;
  }
  double gae = 0.0;
  for (std::size_t k = seq.size(); k-- > 0;) {
    auto& t = seq[k];
    double delta = t.r + gamma * (t.done ? 0.0 : t.v_next_old) - t.v_old;
    gae = delta + gamma * lambda * (t.done ? 0.0 : gae);
    t.adv = gae;
  }
}

template void compute_advantages<std::int64_t>(std::span<Transition<std::int64_t>>, double,
                                               bool, double);
template void compute_advantages<Eigen::Vector2d>(std::span<Transition<Eigen::Vector2d>>,
                                                  double, bool, double);

// --- discrete PPO ------------------------------------------------------------

PpoDiscreteAgent::PpoDiscreteAgent(int state_dim, std::int64_t n_actions, PpoConfig cfg,
                                   Rng& init_rng)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (state_dim < 1) throw std::invalid_argument("state_dim must be >= 1");
  if (n_actions < 2 || n_actions > (1 << 26))
    throw std::invalid_argument("n_actions out of supported range");
  actor_ = nn::Mlp(state_dim, cfg_.hidden, static_cast<int>(n_actions),
                   nn::Activation::kTanh, nn::Activation::kLinear, init_rng,
                   std::sqrt(2.0), 0.01);
  critic_ = nn::Mlp(state_dim, cfg_.hidden, 1, nn::Activation::kTanh,
                    nn::Activation::kLinear, init_rng, std::sqrt(2.0), 1.0);
  actor_old_ = actor_;
  critic_old_ = critic_;
  opt_actor_ = nn::AdamState(actor_);
  opt_critic_ = nn::AdamState(critic_);
}

PpoDiscreteAgent::ActResult PpoDiscreteAgent::act(const Eigen::VectorXd& s, double eps,
                                                  Rng& rng) const {
  check_state_dim(s, actor_.in_dim(), "ppo act");
  Eigen::VectorXd logits = actor_old_.eval1(s);
  Eigen::VectorXd p = nn::CategoricalHead::probs(logits);
  std::int64_t a = nn::categorical_sample_eps_greedy(p, eps, rng);
  ActResult out;
  out.action = a;
  out.logp = nn::CategoricalHead::log_prob(logits, a);
  out.value = critic_old_.eval1(s)(0);
  return out;
}

std::int64_t PpoDiscreteAgent::act_greedy(const Eigen::VectorXd& s) const {
  check_state_dim(s, actor_.in_dim(), "ppo act");
  return argmax_low(actor_old_.eval1(s));
}

double PpoDiscreteAgent::value(const Eigen::VectorXd& s) const {
  check_state_dim(s, critic_.in_dim(), "ppo value");
  return critic_.eval1(s)(0);
}

double PpoDiscreteAgent::old_value(const Eigen::VectorXd& s) const {
  check_state_dim(s, critic_.in_dim(), "ppo value");
  return critic_old_.eval1(s)(0);
}

double PpoDiscreteAgent::critic_loss(std::span<const DiscreteTransition> batch,
                                     nn::Grads* grads) {
  return critic_loss_impl(critic_, cfg_.gamma, batch, grads);
}

double PpoDiscreteAgent::actor_loss(std::span<const DiscreteTransition> batch,
                                    nn::Grads* grads) {
  if (batch.empty()) throw std::invalid_argument("actor loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  const int dim = actor_.in_dim();
  Eigen::MatrixXd s(dim, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    check_state_dim(batch[static_cast<std::size_t>(i)].s, dim, "actor loss");
    s.col(i) = batch[static_cast<std::size_t>(i)].s;
  }
  Eigen::VectorXd adv_n = normalized_advantages(batch);
  Eigen::MatrixXd z = actor_.forward(s);
  Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const DiscreteTransition& t = batch[static_cast<std::size_t>(i)];
    if (t.a < 0 || t.a >= z.rows())
      throw std::invalid_argument("actor loss: action index out of range");
    Eigen::VectorXd logits = z.col(i);
    double logp_new = nn::CategoricalHead::log_prob(logits, t.a);
    double rho = std::exp(logp_new - t.logp_old);
    loss += surrogate_term(rho, adv_n(i), cfg_.clip_ratio);
    loss -= cfg_.entropy_coef * nn::CategoricalHead::entropy(logits);
    if (grads) {
      double dlogp = surrogate_logp_grad(rho, adv_n(i), cfg_.clip_ratio);
      dz.col(i) = inv_b * (dlogp * nn::CategoricalHead::log_prob_grad(logits, t.a) -
                           cfg_.entropy_coef * nn::CategoricalHead::entropy_grad(logits));
    }
  }
  loss *= inv_b;
  if (grads) *grads = actor_.backward(dz);
  return loss;
}

LossReport PpoDiscreteAgent::update(std::span<const DiscreteTransition> batch) {
  LossReport report;
  nn::Grads ga, gc;
  report.actor_loss = actor_loss(batch, &ga);
  report.critic_loss = critic_loss(batch, &gc);
  opt_actor_.step(actor_, ga, cfg_.actor_lr);
  opt_critic_.step(critic_, gc, cfg_.critic_lr);
  return report;
}

void PpoDiscreteAgent::sync_old() {
  actor_old_ = actor_;
  critic_old_ = critic_;
}

void PpoDiscreteAgent::save(std::ostream& out) const {
  out.write("PPOD1\n", 6);
  nn::save_mlp(out, actor_);
  nn::save_mlp(out, critic_);
  nn::save_mlp(out, actor_old_);
  nn::save_mlp(out, critic_old_);
  nn::save_adam(out, opt_actor_);
  nn::save_adam(out, opt_critic_);
}

void PpoDiscreteAgent::load(std::istream& in) {
  char tag[6];
  in.read(tag, 6);
  if (!in || std::string(tag, 6) != "PPOD1\n")
    throw std::runtime_error("checkpoint tag mismatch (want PPOD1)");
  nn::Mlp actor = nn::load_mlp(in);
  nn::Mlp critic = nn::load_mlp(in);
  nn::Mlp actor_old = nn::load_mlp(in);
  nn::Mlp critic_old = nn::load_mlp(in);
  if (actor.in_dim() != actor_.in_dim() || actor.out_dim() != actor_.out_dim())
    throw std::runtime_error("checkpoint actor shape mismatch");
  if (critic.in_dim() != critic_.in_dim() || critic.out_dim() != 1)
    throw std::runtime_error("checkpoint critic shape mismatch");
  actor_ = std::move(actor);
  critic_ = std::move(critic);
  actor_old_ = std::move(actor_old);
  critic_old_ = std::move(critic_old);
  opt_actor_ = nn::load_adam(in);
  opt_critic_ = nn::load_adam(in);
}

// --- continuous PPO -----------------------------------------------------------

PpoContinuousAgent::PpoContinuousAgent(int state_dim, PpoConfig cfg, Rng& init_rng)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (state_dim < 1) throw std::invalid_argument("state_dim must be >= 1");
  head_.sigma_floor = cfg_.sigma_floor;
  actor_ = nn::Mlp(state_dim, cfg_.hidden, 4, nn::Activation::kTanh,
                   nn::Activation::kLinear, init_rng, std::sqrt(2.0), 0.01);
  critic_ = nn::Mlp(state_dim, cfg_.hidden, 1, nn::Activation::kTanh,
                    nn::Activation::kLinear, init_rng, std::sqrt(2.0), 1.0);
  // Bias the z outputs so the starting policy explores at sigma_init.
  double z0 = std::log(std::expm1(cfg_.sigma_init - cfg_.sigma_floor));
  actor_.layers().back().b(2) = z0;
  actor_.layers().back().b(3) = z0;
  actor_old_ = actor_;
  critic_old_ = critic_;
  opt_actor_ = nn::AdamState(actor_);
  opt_critic_ = nn::AdamState(critic_);
}

PpoContinuousAgent::ActResult PpoContinuousAgent::act(const Eigen::VectorXd& s,
                                                      Rng& rng) const {
  check_state_dim(s, actor_.in_dim(), "ppo act");
  Eigen::Vector4d raw = actor_old_.eval1(s);
  nn::GaussianHead::Params p = head_.params(raw);
  ActResult out;
  out.action = head_.sample(p, rng);
  out.logp = nn::GaussianHead::log_prob(p, out.action);
  out.value = critic_old_.eval1(s)(0);
  return out;
}

Eigen::Vector2d PpoContinuousAgent::act_greedy(const Eigen::VectorXd& s) const {
  check_state_dim(s, actor_.in_dim(), "ppo act");
  Eigen::Vector4d raw = actor_old_.eval1(s);
  return head_.params(raw).mu;
}

double PpoContinuousAgent::value(const Eigen::VectorXd& s) const {
  check_state_dim(s, critic_.in_dim(), "ppo value");
  return critic_.eval1(s)(0);
}

double PpoContinuousAgent::old_value(const Eigen::VectorXd& s) const {
  check_state_dim(s, critic_.in_dim(), "ppo value");
  return critic_old_.eval1(s)(0);
}

double PpoContinuousAgent::critic_loss(std::span<const ContinuousTransition> batch,
                                       nn::Grads* grads) {
  return critic_loss_impl(critic_, cfg_.gamma, batch, grads);
}

double PpoContinuousAgent::actor_loss(std::span<const ContinuousTransition> batch,
                                      nn::Grads* grads) {
  if (batch.empty()) throw std::invalid_argument("actor loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  const int dim = actor_.in_dim();
  Eigen::MatrixXd s(dim, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    check_state_dim(batch[static_cast<std::size_t>(i)].s, dim, "actor loss");
    s.col(i) = batch[static_cast<std::size_t>(i)].s;
  }
  Eigen::VectorXd adv_n = normalized_advantages(batch);
  Eigen::MatrixXd raw = actor_.forward(s);
  Eigen::MatrixXd draw = Eigen::MatrixXd::Zero(4, b);
  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const ContinuousTransition& t = batch[static_cast<std::size_t>(i)];
    Eigen::Vector4d r = raw.col(i);
    nn::GaussianHead::Params p = head_.params(r);
    double logp_new = nn::GaussianHead::log_prob(p, t.a);
    double rho = std::exp(logp_new - t.logp_old);
    loss += surrogate_term(rho, adv_n(i), cfg_.clip_ratio);
    loss -= cfg_.entropy_coef * nn::GaussianHead::entropy(p);
    if (grads) {
      double dlogp = surrogate_logp_grad(rho, adv_n(i), cfg_.clip_ratio);
      draw.col(i) = inv_b * (dlogp * head_.log_prob_grad(r, t.a) -
                             cfg_.entropy_coef * head_.entropy_grad(r));
    }
  }
  loss *= inv_b;
  if (grads) *grads = actor_.backward(draw);
  return loss;
}

LossReport PpoContinuousAgent::update(std::span<const ContinuousTransition> batch) {
  LossReport report;
  nn::Grads ga, gc;
  report.actor_loss = actor_loss(batch, &ga);
  report.critic_loss = critic_loss(batch, &gc);
  opt_actor_.step(actor_, ga, cfg_.actor_lr);
  opt_critic_.step(critic_, gc, cfg_.critic_lr);
  return report;
}

void PpoContinuousAgent::sync_old() {
  actor_old_ = actor_;
  critic_old_ = critic_;
}

void PpoContinuousAgent::save(std::ostream& out) const {
  out.write("PPOC1\n", 6);
  nn::save_mlp(out, actor_);
  nn::save_mlp(out, critic_);
  nn::save_mlp(out, actor_old_);
  nn::save_mlp(out, critic_old_);
  nn::save_adam(out, opt_actor_);
  nn::save_adam(out, opt_critic_);
}

void PpoContinuousAgent::load(std::istream& in) {
  char tag[6];
  in.read(tag, 6);
  if (!in || std::string(tag, 6) != "PPOC1\n")
    throw std::runtime_error("checkpoint tag mismatch (want PPOC1)");
  nn::Mlp actor = nn::load_mlp(in);
  nn::Mlp critic = nn::load_mlp(in);
  nn::Mlp actor_old = nn::load_mlp(in);
  nn::Mlp critic_old = nn::load_mlp(in);
  if (actor.in_dim() != actor_.in_dim() || actor.out_dim() != 4)
    throw std::runtime_error("checkpoint actor shape mismatch");
  if (critic.in_dim() != critic_.in_dim() || critic.out_dim() != 1)
    throw std::runtime_error("checkpoint critic shape mismatch");
  actor_ = std::move(actor);
  critic_ = std::move(critic);
  actor_old_ = std::move(actor_old);
  critic_old_ = std::move(critic_old);
  opt_actor_ = nn::load_adam(in);
  opt_critic_ = nn::load_adam(in);
}

// --- DQN ---------------------------------------------------------------------

void DqnConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (lr < 0.0) throw std::invalid_argument("lr must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (capacity < batch_size)
    throw std::invalid_argument("replay capacity must be >= batch size");
  if (warmup < batch_size)
    throw std::invalid_argument("warmup must be >= batch size");
  if (update_period < 1) throw std::invalid_argument("update_period must be >= 1");
  if (target_sync_period < 1)
    throw std::invalid_argument("target_sync_period must be >= 1");
  if (hidden.empty()) throw std::invalid_argument("hidden layer list must be non-empty");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("hidden widths must be >= 1");
}

DqnAgent::DqnAgent(int state_dim, std::int64_t n_actions, DqnConfig cfg, Rng& init_rng)
    : cfg_(std::move(cfg)), n_actions_(n_actions) {
  cfg_.validate();
  if (state_dim < 1) throw std::invalid_argument("state_dim must be >= 1");
  if (n_actions < 2 || n_actions > (1 << 26))
    throw std::invalid_argument("n_actions out of supported range");
  int out = static_cast<int>(cfg_.dueling ? n_actions + 1 : n_actions);
  q_ = nn::Mlp(state_dim, cfg_.hidden, out, nn::Activation::kRelu,
               nn::Activation::kLinear, init_rng, std::sqrt(2.0), 1.0);
  target_ = q_;
  opt_ = nn::AdamState(q_);
  buffer_.reserve(static_cast<std::size_t>(std::min(cfg_.capacity, 1 << 20)));
}

Eigen::VectorXd DqnAgent::q_from_raw(const Eigen::VectorXd& raw) const {
  if (!cfg_.dueling) return raw;
  Eigen::VectorXd adv = raw.tail(n_actions_);
  return (adv.array() + (raw(0) - adv.mean())).matrix();
}

std::int64_t DqnAgent::act(const Eigen::VectorXd& s, double eps, Rng& rng) const {
  check_state_dim(s, q_.in_dim(), "dqn act");
  if (rng.uniform() < eps) return rng.uniform_int(n_actions_);
  return act_greedy(s);
}

std::int64_t DqnAgent::act_greedy(const Eigen::VectorXd& s) const {
  return argmax_low(q_values(s));
}

Eigen::VectorXd DqnAgent::q_values(const Eigen::VectorXd& s) const {
  check_state_dim(s, q_.in_dim(), "dqn act");
  return q_from_raw(q_.eval1(s));
}

void DqnAgent::remember(DqnTransition t) {
  if (buffer_.size() < static_cast<std::size_t>(cfg_.capacity)) {
    buffer_.push_back(std::move(t));
  } else {
    buffer_[buffer_next_] = std::move(t);
  }
  buffer_next_ = (buffer_next_ + 1) % static_cast<std::size_t>(cfg_.capacity);
}

double DqnAgent::loss(std::span<const DqnTransition> batch, nn::Grads* grads) {
  if (batch.empty()) throw std::invalid_argument("dqn loss: empty batch");
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  const int dim = q_.in_dim();
  Eigen::MatrixXd s(dim, b);
  Eigen::MatrixXd s_next(dim, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const DqnTransition& t = batch[static_cast<std::size_t>(i)];
    check_state_dim(t.s, dim, "dqn loss");
    check_state_dim(t.s_next, dim, "dqn loss");
    s.col(i) = t.s;
    s_next.col(i) = t.s_next;
  }
  Eigen::MatrixXd raw_next = target_.eval(s_next);
  Eigen::MatrixXd raw = q_.forward(s);
  Eigen::MatrixXd draw = Eigen::MatrixXd::Zero(raw.rows(), raw.cols());
  double total = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const DqnTransition& t = batch[static_cast<std::size_t>(i)];
    if (t.a < 0 || t.a >= n_actions_)
      throw std::invalid_argument("dqn loss: action index out of range");
    double target_q = 0.0;
    if (!t.done) {
      Eigen::VectorXd qn = q_from_raw(raw_next.col(i));
      target_q = qn.maxCoeff();
    }
    double y = t.r + cfg_.gamma * target_q;
    Eigen::VectorXd q = q_from_raw(raw.col(i));
    double err = q(t.a) - y;
    total += err * err;
    if (!grads) continue;
    double gq = 2.0 * err * inv_b;
    if (!cfg_.dueling) {
      draw(t.a, i) = gq;
    } else {
      draw(0, i) = gq;
      double mean_share = gq / static_cast<double>(n_actions_);
      for (Eigen::Index j = 0; j < n_actions_; ++j) draw(1 + j, i) -= mean_share;
      draw(1 + t.a, i) += gq;
    }
  }
  total *= inv_b;
  if (grads) *grads = q_.backward(draw);
  return total;
}

double DqnAgent::update(Rng& rng) {
  const int bs = cfg_.batch_size;
  if (buffer_.size() < static_cast<std::size_t>(bs))
    throw std::runtime_error("dqn update: replay buffer underfull");
  std::vector<DqnTransition> batch;
  batch.reserve(static_cast<std::size_t>(bs));
  for (int i = 0; i < bs; ++i) {
    batch.push_back(buffer_[static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(buffer_.size())))]);
  }
  nn::Grads g;
  double total = loss(batch, &g);
  opt_.step(q_, g, cfg_.lr);
  ++update_count_;
  if (update_count_ % cfg_.target_sync_period == 0) target_ = q_;
  return total;
}

std::optional<double> DqnAgent::on_step(Rng& rng) {
  ++step_count_;
  if (buffer_.size() < static_cast<std::size_t>(cfg_.warmup)) return std::nullopt;
  if (step_count_ % cfg_.update_period != 0) return std::nullopt;
  return update(rng);
}

void DqnAgent::save(std::ostream& out) const {
  out.write("DQN1\n", 5);
  nn::save_mlp(out, q_);
  nn::save_mlp(out, target_);
  nn::save_adam(out, opt_);
  out.write(reinterpret_cast<const char*>(&step_count_), sizeof(step_count_));
  out.write(reinterpret_cast<const char*>(&update_count_), sizeof(update_count_));
}

void DqnAgent::load(std::istream& in) {
  char tag[5];
  in.read(tag, 5);
  if (!in || std::string(tag, 5) != "DQN1\n")
    throw std::runtime_error("checkpoint tag mismatch (want DQN1)");
  nn::Mlp q = nn::load_mlp(in);
  nn::Mlp target = nn::load_mlp(in);
  if (q.in_dim() != q_.in_dim() || q.out_dim() != q_.out_dim())
    throw std::runtime_error("checkpoint q-net shape mismatch");
  q_ = std::move(q);
  target_ = std::move(target);
  opt_ = nn::load_adam(in);
  in.read(reinterpret_cast<char*>(&step_count_), sizeof(step_count_));
  in.read(reinterpret_cast<char*>(&update_count_), sizeof(update_count_));
  if (!in) throw std::runtime_error("truncated dqn checkpoint");
}

}  // namespace uavrl::agents
