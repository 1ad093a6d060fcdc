#include "uavrl/nn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace uavrl::nn {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double activate(double x, Activation a) {
  switch (a) {
    case Activation::kLinear: return x;
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kSoftplus: return softplus(x);
  }
  return x;
}

// Derivative as a function of the pre-activation and the cached output.
double activate_deriv(double pre, double post, Activation a) {
  switch (a) {
    case Activation::kLinear: return 1.0;
    case Activation::kRelu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: return 1.0 - post * post;
    case Activation::kSoftplus: return sigmoid(pre);
  }
  return 1.0;
}

// Random matrix with orthonormal rows or columns (whichever fits), scaled.
Eigen::MatrixXd orthogonal_init(int rows, int cols, double gain, Rng& rng) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd a(big, small);
  for (int i = 0; i < big; ++i)
    for (int j = 0; j < small; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  Eigen::MatrixXd r = qr.matrixQR().topRows(small);
  for (int j = 0; j < small; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  Eigen::MatrixXd w = (rows >= cols) ? q : Eigen::MatrixXd(q.transpose());
  return gain * w;
}

}  // namespace

double softplus(double x) {
  // max(x, 0) + log1p(exp(-|x|)) avoids overflow on both tails
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// --- Grads -------------------------------------------------------------------

void Grads::set_zero() {
  for (auto& m : dw) m.setZero();
  for (auto& v : db) v.setZero();
}

Grads& Grads::operator+=(const Grads& other) {
  if (other.dw.size() != dw.size()) throw std::invalid_argument("Grads shape mismatch");
  for (std::size_t i = 0; i < dw.size(); ++i) {
    dw[i] += other.dw[i];
    db[i] += other.db[i];
  }
  return *this;
}

Grads& Grads::operator*=(double s) {
  for (auto& m : dw) m *= s;
  for (auto& v : db) v *= s;
  return *this;
}

// --- Mlp ----------------------------------------------------------------------

Mlp::Mlp(int in_dim, const std::vector<int>& hidden, int out_dim, Activation hidden_act,
         Activation out_act, Rng& rng, double hidden_gain, double out_gain) {
  if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("Mlp dims must be >= 1");
  int prev = in_dim;
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("Mlp hidden width must be >= 1");
    layers_.push_back({orthogonal_init(h, prev, hidden_gain, rng),
                       Eigen::VectorXd::Zero(h), hidden_act});
    prev = h;
  }
  layers_.push_back({orthogonal_init(out_dim, prev, out_gain, rng),
                     Eigen::VectorXd::Zero(out_dim), out_act});
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) {
  if (layers_.empty()) throw std::logic_error("forward on empty Mlp");
  if (x.rows() != layers_.front().w.cols())
    throw std::invalid_argument("forward: input dimension mismatch");
  pre_.assign(layers_.size(), {});
  post_.assign(layers_.size() + 1, {});
  post_[0] = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    pre_[l] = (layers_[l].w * post_[l]).colwise() + layers_[l].b;
    post_[l + 1] = pre_[l].unaryExpr(
        [a = layers_[l].act](double v) { return activate(v, a); });
  }
  cached_ = true;
  return post_.back();
}

Eigen::VectorXd Mlp::forward1(const Eigen::VectorXd& x) {
  return forward(Eigen::MatrixXd(x)).col(0);
}

Eigen::MatrixXd Mlp::eval(const Eigen::MatrixXd& x) const {
  if (layers_.empty()) throw std::logic_error("eval on empty Mlp");
  if (x.rows() != layers_.front().w.cols())
    throw std::invalid_argument("eval: input dimension mismatch");
  Eigen::MatrixXd h = x;
  for (const auto& layer : layers_) {
    Eigen::MatrixXd z = (layer.w * h).colwise() + layer.b;
    h = z.unaryExpr([a = layer.act](double v) { return activate(v, a); });
  }
  return h;
}

Eigen::VectorXd Mlp::eval1(const Eigen::VectorXd& x) const {
  return eval(Eigen::MatrixXd(x)).col(0);
}

Grads Mlp::backward(const Eigen::MatrixXd& dy) const {
  if (!cached_) throw std::logic_error("backward without cached forward");
  if (dy.rows() != out_dim() || dy.cols() != post_.back().cols())
    throw std::invalid_argument("backward: upstream gradient shape mismatch");
  Grads g = zero_grads();
  Eigen::MatrixXd delta;  // dL/d(pre-activation) of current layer
  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    const Eigen::MatrixXd& upstream = (l == static_cast<int>(layers_.size()) - 1)
                                          ? dy
                                          : delta;
    Eigen::MatrixXd dpost = upstream;  // copy; becomes dL/d(pre)
    for (Eigen::Index c = 0; c < dpost.cols(); ++c) {
      for (Eigen::Index r = 0; r < dpost.rows(); ++r) {
        dpost(r, c) *= activate_deriv(pre_[l](r, c), post_[l + 1](r, c), layers_[l].act);
      }
    }
    g.dw[l] = dpost * post_[l].transpose();
    g.db[l] = dpost.rowwise().sum();
    if (l > 0) delta = layers_[l].w.transpose() * dpost;
  }
  return g;
}

Grads Mlp::zero_grads() const {
  Grads g;
  g.dw.reserve(layers_.size());
  g.db.reserve(layers_.size());
  for (const auto& layer : layers_) {
    g.dw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    g.db.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.w.size() + layer.b.size();
  return n;
}

// --- AdamState -----------------------------------------------------------------

AdamState::AdamState(const Mlp& net) {
  for (const auto& layer : net.layers()) {
    mw_.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    vw_.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    mb_.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    vb_.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
}

void AdamState::step(Mlp& net, const Grads& g, double lr) {
  auto& layers = net.layers();
  if (g.dw.size() != layers.size() || mw_.size() != layers.size())
    throw std::invalid_argument("adam: shape mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (g.dw[l].rows() != layers[l].w.rows() || g.dw[l].cols() != layers[l].w.cols())
      throw std::invalid_argument("adam: gradient shape mismatch");
    mw_[l] = kBeta1 * mw_[l] + (1.0 - kBeta1) * g.dw[l];
    vw_[l] = kBeta2 * vw_[l] + (1.0 - kBeta2) * g.dw[l].array().square().matrix();
    layers[l].w.array() -=
        lr * (mw_[l].array() / c1) / ((vw_[l].array() / c2).sqrt() + kEps);
    mb_[l] = kBeta1 * mb_[l] + (1.0 - kBeta1) * g.db[l];
    vb_[l] = kBeta2 * vb_[l] + (1.0 - kBeta2) * g.db[l].array().square().matrix();
    layers[l].b.array() -=
        lr * (mb_[l].array() / c1) / ((vb_[l].array() / c2).sqrt() + kEps);
  }
}

// --- GaussianHead ----------------------------------------------------------------

GaussianHead::Params GaussianHead::params(const Eigen::Vector4d& raw) const {
  Params p;
  p.mu = raw.head<2>();
  p.sigma = Eigen::Vector2d(softplus(raw(2)) + sigma_floor, softplus(raw(3)) + sigma_floor);
  return p;
}

Eigen::Vector2d GaussianHead::sample(const Params& p, Rng& rng) const {
  return {p.mu(0) + p.sigma(0) * rng.normal(), p.mu(1) + p.sigma(1) * rng.normal()};
}

double GaussianHead::log_prob(const Params& p, const Eigen::Vector2d& action) {
  double lp = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double z = (action(i) - p.mu(i)) / p.sigma(i);
    lp += -0.5 * z * z - std::log(p.sigma(i)) - 0.5 * kLog2Pi;
  }
  return lp;
}

double GaussianHead::entropy(const Params& p) {
  double h = 0.0;
  for (int i = 0; i < 2; ++i) h += 0.5 * (kLog2Pi + 1.0) + std::log(p.sigma(i));
  return h;
}

Eigen::Vector4d GaussianHead::log_prob_grad(const Eigen::Vector4d& raw,
                                            const Eigen::Vector2d& action) const {
  const Params p = params(raw);
  Eigen::Vector4d g;
  for (int i = 0; i < 2; ++i) {
    const double diff = action(i) - p.mu(i);
    const double s = p.sigma(i);
    g(i) = diff / (s * s);
    const double dlp_dsigma = diff * diff / (s * s * s) - 1.0 / s;
    g(2 + i) = dlp_dsigma * sigmoid(raw(2 + i));
  }
  return g;
}

Eigen::Vector4d GaussianHead::entropy_grad(const Eigen::Vector4d& raw) const {
  const Params p = params(raw);
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  for (int i = 0; i < 2; ++i) g(2 + i) = sigmoid(raw(2 + i)) / p.sigma(i);
  return g;
}

// --- CategoricalHead ----------------------------------------------------------------

Eigen::VectorXd CategoricalHead::probs(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

double CategoricalHead::log_prob(const Eigen::VectorXd& logits, Eigen::Index action) {
  if (action < 0 || action >= logits.size())
    throw std::out_of_range("categorical log_prob: action out of range");
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits(action) - lse;
}

Eigen::VectorXd CategoricalHead::log_prob_grad(const Eigen::VectorXd& logits,
                                               Eigen::Index action) {
  Eigen::VectorXd g = -probs(logits);
  g(action) += 1.0;
  return g;
}

double CategoricalHead::entropy(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  const Eigen::VectorXd p = probs(logits);
  return lse - p.dot(logits);
}

Eigen::VectorXd CategoricalHead::entropy_grad(const Eigen::VectorXd& logits) {
  const Eigen::VectorXd p = probs(logits);
  const double h = entropy(logits);
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  // dH/dz_i = -p_i (log p_i + H), with log p_i = z_i - lse
  return (-p.array() * ((logits.array() - lse) + h)).matrix();
}

std::int64_t categorical_sample_eps_greedy(const Eigen::VectorXd& probs, double eps, Rng& rng) {
  if (probs.size() == 0) throw std::invalid_argument("empty distribution");
  if (rng.uniform() < eps) return rng.uniform_int(probs.size());
  const double u = rng.uniform();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i);
    if (u < acc) return i;
  }
  return probs.size() - 1;  // numerical remainder lands on the last action
}

// --- checkpoint primitives ----------------------------------------------------------

namespace {

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated stream");
  return v;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(m.rows()));
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_pod<double>(os, m(r, c));
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  const auto rows = read_pod<std::uint32_t>(is);
  const auto cols = read_pod<std::uint32_t>(is);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = read_pod<double>(is);
  return m;
}

}  // namespace

void save_mlp(std::ostream& os, const Mlp& net) {
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& layer : net.layers()) {
    write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(layer.act));
    write_matrix(os, layer.w);
    write_matrix(os, Eigen::MatrixXd(layer.b));
  }
}

Mlp load_mlp(std::istream& is) {
  const auto n = read_pod<std::uint32_t>(is);
  Mlp net;
  for (std::uint32_t l = 0; l < n; ++l) {
    Layer layer;
    const auto act = read_pod<std::uint8_t>(is);
    if (act > static_cast<std::uint8_t>(Activation::kSoftplus))
      throw std::runtime_error("checkpoint: unknown activation tag");
    layer.act = static_cast<Activation>(act);
    layer.w = read_matrix(is);
    Eigen::MatrixXd b = read_matrix(is);
    if (b.cols() != 1 || b.rows() != layer.w.rows())
      throw std::runtime_error("checkpoint: bias shape mismatch");
    layer.b = b.col(0);
    if (!net.layers().empty() && net.layers().back().w.rows() != layer.w.cols())
      throw std::runtime_error("checkpoint: layer dimensions do not chain");
    net.layers().push_back(std::move(layer));
  }
  return net;
}

void save_adam(std::ostream& os, const AdamState& s) {
  write_pod<std::int64_t>(os, s.t_);
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s.mw_.size()));
  for (std::size_t i = 0; i < s.mw_.size(); ++i) {
    write_matrix(os, s.mw_[i]);
    write_matrix(os, s.vw_[i]);
    write_matrix(os, Eigen::MatrixXd(s.mb_[i]));
    write_matrix(os, Eigen::MatrixXd(s.vb_[i]));
  }
}

AdamState load_adam(std::istream& is) {
  AdamState s;
  s.t_ = read_pod<std::int64_t>(is);
  const auto n = read_pod<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < n; ++i) {
    s.mw_.push_back(read_matrix(is));
    s.vw_.push_back(read_matrix(is));
    s.mb_.push_back(read_matrix(is).col(0));
    s.vb_.push_back(read_matrix(is).col(0));
  }
  return s;
}

}  // namespace uavrl::nn
