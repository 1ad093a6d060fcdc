#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "uavrl/rng.hpp"

namespace uavrl::nn {

enum class Activation : std::uint8_t { kLinear = 0, kRelu = 1, kTanh = 2, kSoftplus = 3 };

struct Layer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;  // out
  Activation act = Activation::kLinear;
};

// Parameter-shaped gradient buffers, one (dw, db) pair per layer.
struct Grads {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;

  void set_zero();
  Grads& operator+=(const Grads& other);
  Grads& operator*=(double s);
};

// Dense feed-forward net with cached-activation reverse mode. Value type:
// copies are fully independent, which is how policy snapshots are taken.
class Mlp {
 public:
  Mlp() = default;

  // Scaled orthogonal weight init, zero biases. `out_gain` scales only the
  // final layer (small values keep initial policies near-uniform).
  Mlp(int in_dim, const std::vector<int>& hidden, int out_dim, Activation hidden_act,
      Activation out_act, Rng& rng, double hidden_gain = 1.41421356237309515,
      double out_gain = 1.0);

  // Columns are samples. Caches activations for backward().
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x);

  // Single-sample convenience wrapper.
  Eigen::VectorXd forward1(const Eigen::VectorXd& x);

  // Cache-free forward for read-only inference (safe on shared snapshots).
  Eigen::MatrixXd eval(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd eval1(const Eigen::VectorXd& x) const;

  // dy holds dLoss/d(output) column-per-sample; result is summed over the
  // batch. Throws std::logic_error when no forward pass is cached.
  Grads backward(const Eigen::MatrixXd& dy) const;

  Grads zero_grads() const;

  int in_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().w.cols()); }
  int out_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().w.rows()); }

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }

  std::size_t parameter_count() const;

 private:
  std::vector<Layer> layers_;
  std::vector<Eigen::MatrixXd> pre_;   // pre-activations per layer
  std::vector<Eigen::MatrixXd> post_;  // post_[0] = input, post_[l+1] = layer l output
  bool cached_ = false;
};

// Bias-corrected adaptive-moment optimizer state for one Mlp.
class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(const Mlp& net);

  // In-place descent step; throws std::invalid_argument on shape mismatch.
  void step(Mlp& net, const Grads& g, double lr);

  long step_count() const { return t_; }

  friend void save_adam(std::ostream& os, const AdamState& s);
  friend AdamState load_adam(std::istream& is);

 private:
  std::vector<Eigen::MatrixXd> mw_, vw_;
  std::vector<Eigen::VectorXd> mb_, vb_;
  long t_ = 0;
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
};

// --- policy heads -----------------------------------------------------------

// Diagonal Gaussian over the 2-D displacement. The actor net ends in four
// linear outputs (mu_x, mu_y, z_x, z_y); sigma = softplus(z) + sigma_floor.
struct GaussianHead {
  double sigma_floor = 1e-3;

  struct Params {
    Eigen::Vector2d mu;
    Eigen::Vector2d sigma;
  };

  Params params(const Eigen::Vector4d& raw) const;
  Eigen::Vector2d sample(const Params& p, Rng& rng) const;
  static double log_prob(const Params& p, const Eigen::Vector2d& action);
  static double entropy(const Params& p);

  // Gradients w.r.t. the four raw network outputs.
  Eigen::Vector4d log_prob_grad(const Eigen::Vector4d& raw, const Eigen::Vector2d& action) const;
  Eigen::Vector4d entropy_grad(const Eigen::Vector4d& raw) const;
};

// Softmax policy over encoded discrete actions; all functions are overflow-safe.
struct CategoricalHead {
  static Eigen::VectorXd probs(const Eigen::VectorXd& logits);
  static double log_prob(const Eigen::VectorXd& logits, Eigen::Index action);
  static Eigen::VectorXd log_prob_grad(const Eigen::VectorXd& logits, Eigen::Index action);
  static double entropy(const Eigen::VectorXd& logits);
  static Eigen::VectorXd entropy_grad(const Eigen::VectorXd& logits);
};

// With probability eps pick uniformly among all actions, otherwise sample the
// distribution. `probs` must be a valid distribution.
std::int64_t categorical_sample_eps_greedy(const Eigen::VectorXd& probs, double eps, Rng& rng);

double softplus(double x);
double sigmoid(double x);

// --- checkpoint primitives --------------------------------------------------
// Layer shapes plus row-major parameter arrays; loaders validate shape tags.

void save_mlp(std::ostream& os, const Mlp& net);
Mlp load_mlp(std::istream& is);
void save_adam(std::ostream& os, const AdamState& s);
AdamState load_adam(std::istream& is);

}  // namespace uavrl::nn
