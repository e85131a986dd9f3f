#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "mediabias/labels.hpp"
#include "mediabias/random.hpp"

namespace mediabias {

// Feed-forward classifier: input -> dropout -> 128 ReLU -> dropout -> 64 tanh
// -> 3-way softmax.
inline constexpr int kHidden1 = 128;
inline constexpr int kHidden2 = 64;

struct MlpParams {
  Eigen::MatrixXd w1;  // kHidden1 x d
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // kHidden2 x kHidden1
  Eigen::VectorXd b2;
  Eigen::MatrixXd w3;  // kNumClasses x kHidden2
  Eigen::VectorXd b3;

  static MlpParams zeros(Eigen::Index input_dim);

  Eigen::Index input_dim() const { return w1.cols(); }
  Eigen::Index num_parameters() const;
  bool all_finite() const;
  bool has_valid_shapes() const;

  // Applies fn(tensor) to w1, b1, w2, b2, w3, b3 in that order.
  template <typename Fn>
  void visit(Fn&& fn) {
    fn(w1), fn(b1), fn(w2), fn(b2), fn(w3), fn(b3);
  }
  template <typename Fn>
  void visit(Fn&& fn) const {
    fn(w1), fn(b1), fn(w2), fn(b2), fn(w3), fn(b3);
  }

  friend bool operator==(const MlpParams& a, const MlpParams& b);
};

// Applies fn(a_tensor, b_tensor) pairwise over two parameter sets.
template <typename A, typename B, typename Fn>
void zip_tensors(A& a, B& b, Fn&& fn) {
  fn(a.w1, b.w1), fn(a.b1, b.b1), fn(a.w2, b.w2), fn(a.b2, b.b2), fn(a.w3, b.w3), fn(a.b3, b.b3);
}

struct TrainConfig {
  int epochs = 35;
  int batch_size = 75;
  double dropout_rate = 0.2;
  double learning_rate = 0.01;
  double adagrad_epsilon = 1e-8;
  std::uint64_t seed = 0;

  // Throws ConfigError when a field is out of range.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct Posterior {
  std::array<double, kNumClasses> p{};

  double sum() const { return p[0] + p[1] + p[2]; }
  // Ties go to the lowest class code.
  BiasLabel argmax() const;

  friend bool operator==(const Posterior&, const Posterior&) = default;
};

Posterior softmax(const std::array<double, kNumClasses>& logits);

enum class ForwardMode { kTrain, kEval };

// Intermediate values of one forward pass, consumed by backward(). Dropout
// masks hold 0 or 1/keep_prob per unit.
struct ForwardCache {
  Eigen::VectorXd input_mask;
  Eigen::VectorXd input;  // x after dropout
  Eigen::VectorXd pre1;
  Eigen::VectorXd hidden1_mask;
  Eigen::VectorXd hidden1;  // relu(pre1) after dropout
  Eigen::VectorXd pre2;
  Eigen::VectorXd hidden2;
  std::array<double, kNumClasses> logits{};
  Posterior posterior;
};

// Train mode applies inverted dropout (drawing masks from rng) to the input
// and to the first hidden layer; eval mode is deterministic and ignores rng.
// Throws DimensionError when x does not match the network.
ForwardCache forward(const MlpParams& params, std::span<const double> x, ForwardMode mode,
                     double dropout_rate = 0.0, Rng* rng = nullptr);

Posterior predict(const MlpParams& params, std::span<const double> x);

// Eval-mode posteriors for each row of x (rows are instances).
std::vector<Posterior> predict_rows(const MlpParams& params, const Eigen::MatrixXd& x);

// Cross-entropy -log p[label], with p clamped below at 1e-12.
double loss(const Posterior& posterior, BiasLabel label);

// Exact gradient of loss() for the pass recorded in cache, with the dropout
// masks treated as constants.
MlpParams backward(const MlpParams& params, const ForwardCache& cache, BiasLabel label);

// Mean loss and mean gradient over a mini-batch, computed with matrix
// products. `columns` are instances (d x b).
struct BatchGradient {
  MlpParams grad;
  double mean_loss = 0.0;
};
BatchGradient batch_gradient(const MlpParams& params, const Eigen::MatrixXd& columns,
                             std::span<const BiasLabel> labels, ForwardMode mode,
                             double dropout_rate = 0.0, Rng* rng = nullptr);

struct AdagradState {
  MlpParams accumulator;

  static AdagradState for_params(const MlpParams& params);
};

// accumulator += g^2; param -= lr * g / (sqrt(accumulator) + eps).
// Coordinates with g == 0 are left untouched.
void adagrad_step(MlpParams& params, const MlpParams& grads, AdagradState& state,
                  const TrainConfig& config);

// Glorot-uniform weights, zero biases.
MlpParams glorot_uniform(Eigen::Index input_dim, Rng& rng);

// Trains from scratch. Rows of x are instances. Examples are reshuffled each
// epoch; the final short batch is kept. Deterministic for a given seed.
// Throws PreconditionError on an empty dataset or mismatched label count.
MlpParams train(const Eigen::MatrixXd& x, std::span<const BiasLabel> labels,
                const TrainConfig& config);

}  // namespace mediabias
