#include "mediabias/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

constexpr double kProbabilityFloor = 1e-12;

Eigen::VectorXd draw_mask(Eigen::Index n, double rate, Rng& rng) {
  Eigen::VectorXd mask(n);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < n; ++i) mask(i) = uniform01(rng) < rate ? 0.0 : scale;
  return mask;
}

Eigen::MatrixXd draw_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  Eigen::MatrixXd mask(rows, cols);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) mask(r, c) = uniform01(rng) < rate ? 0.0 : scale;
  }
  return mask;
}

void check_input(const MlpParams& params, std::size_t size) {
  if (static_cast<Eigen::Index>(size) != params.input_dim()) {
    throw DimensionError("network expects " + std::to_string(params.input_dim()) +
                         " inputs, got " + std::to_string(size));
  }
}

bool dropout_active(ForwardMode mode, double rate) { return mode == ForwardMode::kTrain && rate > 0.0; }

}  // namespace

MlpParams MlpParams::zeros(Eigen::Index input_dim) {
  MlpParams p;
  p.w1 = Eigen::MatrixXd::Zero(kHidden1, input_dim);
  p.b1 = Eigen::VectorXd::Zero(kHidden1);
  p.w2 = Eigen::MatrixXd::Zero(kHidden2, kHidden1);
  p.b2 = Eigen::VectorXd::Zero(kHidden2);
  p.w3 = Eigen::MatrixXd::Zero(kNumClasses, kHidden2);
  p.b3 = Eigen::VectorXd::Zero(kNumClasses);
  return p;
}

Eigen::Index MlpParams::num_parameters() const {
  Eigen::Index n = 0;
  visit([&](const auto& t) { n += t.size(); });
  return n;
}

bool MlpParams::all_finite() const {
  bool ok = true;
  visit([&](const auto& t) { ok = ok && t.allFinite(); });
  return ok;
}

bool MlpParams::has_valid_shapes() const {
  return w1.rows() == kHidden1 && b1.size() == kHidden1 && w2.rows() == kHidden2 &&
         w2.cols() == kHidden1 && b2.size() == kHidden2 && w3.rows() == kNumClasses &&
         w3.cols() == kHidden2 && b3.size() == kNumClasses;
}

bool operator==(const MlpParams& a, const MlpParams& b) {
  bool eq = true;
  zip_tensors(a, b, [&](const auto& x, const auto& y) {
    eq = eq && x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  });
  return eq;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout_rate must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (!(adagrad_epsilon >= 0.0) || !std::isfinite(adagrad_epsilon)) {
    throw ConfigError("adagrad_epsilon must be non-negative");
  }
}

BiasLabel Posterior::argmax() const {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (p[k] > p[best]) best = k;
  }
  return static_cast<BiasLabel>(best);
}

Posterior softmax(const std::array<double, kNumClasses>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  Posterior out;
  double total = 0.0;
  for (int k = 0; k < kNumClasses; ++k) {
    out.p[k] = std::exp(logits[k] - m);
    total += out.p[k];
  }
  for (auto& v : out.p) v /= total;
  return out;
}

ForwardCache forward(const MlpParams& params, std::span<const double> x, ForwardMode mode,
                     double dropout_rate, Rng* rng) {
  check_input(params, x.size());
  const bool dropout = dropout_active(mode, dropout_rate);
  if (dropout && rng == nullptr) throw PreconditionError("train-mode dropout needs an rng");

  ForwardCache c;
  const Eigen::Map<const Eigen::VectorXd> xin(x.data(), static_cast<Eigen::Index>(x.size()));
  c.input_mask = dropout ? draw_mask(xin.size(), dropout_rate, *rng)
                         : Eigen::VectorXd::Ones(xin.size());
  c.input = xin.cwiseProduct(c.input_mask);

  c.pre1 = params.w1 * c.input + params.b1;
  c.hidden1_mask =
      dropout ? draw_mask(kHidden1, dropout_rate, *rng) : Eigen::VectorXd::Ones(kHidden1);
  c.hidden1 = c.pre1.cwiseMax(0.0).cwiseProduct(c.hidden1_mask);

  c.pre2 = params.w2 * c.hidden1 + params.b2;
  c.hidden2 = c.pre2.array().tanh().matrix();

  const Eigen::VectorXd z = params.w3 * c.hidden2 + params.b3;
  for (int k = 0; k < kNumClasses; ++k) c.logits[k] = z(k);
  c.posterior = softmax(c.logits);
  return c;
}

Posterior predict(const MlpParams& params, std::span<const double> x) {
  return forward(params, x, ForwardMode::kEval).posterior;
}

std::vector<Posterior> predict_rows(const MlpParams& params, const Eigen::MatrixXd& x) {
  if (x.rows() > 0) check_input(params, static_cast<std::size_t>(x.cols()));
  std::vector<Posterior> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  if (x.rows() == 0) return out;

  const Eigen::MatrixXd h1 = ((params.w1 * x.transpose()).colwise() + params.b1).cwiseMax(0.0);
  const Eigen::MatrixXd h2 = ((params.w2 * h1).colwise() + params.b2).array().tanh().matrix();
  const Eigen::MatrixXd z = (params.w3 * h2).colwise() + params.b3;
  for (Eigen::Index i = 0; i < z.cols(); ++i) out.push_back(softmax({z(0, i), z(1, i), z(2, i)}));
  return out;
}

double loss(const Posterior& posterior, BiasLabel label) {
  return -std::log(std::max(posterior.p[code(label)], kProbabilityFloor));
}

MlpParams backward(const MlpParams& params, const ForwardCache& cache, BiasLabel label) {
  MlpParams g;
  Eigen::VectorXd dz(kNumClasses);
  for (int k = 0; k < kNumClasses; ++k) dz(k) = cache.posterior.p[k];
  dz(code(label)) -= 1.0;

  g.w3 = dz * cache.hidden2.transpose();
  g.b3 = dz;

  const Eigen::VectorXd dpre2 =
      (params.w3.transpose() * dz).cwiseProduct((1.0 - cache.hidden2.array().square()).matrix());
  g.w2 = dpre2 * cache.hidden1.transpose();
  g.b2 = dpre2;

  const Eigen::VectorXd relu_grad = (cache.pre1.array() > 0.0).cast<double>().matrix();
  const Eigen::VectorXd dpre1 = (params.w2.transpose() * dpre2)
                                    .cwiseProduct(cache.hidden1_mask)
                                    .cwiseProduct(relu_grad);
  g.w1 = dpre1 * cache.input.transpose();
  g.b1 = dpre1;
  return g;
}

BatchGradient batch_gradient(const MlpParams& params, const Eigen::MatrixXd& columns,
                             std::span<const BiasLabel> labels, ForwardMode mode,
                             double dropout_rate, Rng* rng) {
  const Eigen::Index b = columns.cols();
  if (b == 0 || static_cast<std::size_t>(b) != labels.size()) {
    throw PreconditionError("batch must be non-empty with one label per column");
  }
  check_input(params, static_cast<std::size_t>(columns.rows()));
  const bool dropout = dropout_active(mode, dropout_rate);
  if (dropout && rng == nullptr) throw PreconditionError("train-mode dropout needs an rng");

  Eigen::MatrixXd input = columns;
  if (dropout) input.array() *= draw_mask(columns.rows(), b, dropout_rate, *rng).array();

  const Eigen::MatrixXd pre1 = (params.w1 * input).colwise() + params.b1;
  Eigen::MatrixXd hidden1 = pre1.cwiseMax(0.0);
  Eigen::MatrixXd mask1;
  if (dropout) {
    mask1 = draw_mask(kHidden1, b, dropout_rate, *rng);
    hidden1.array() *= mask1.array();
  }
  const Eigen::MatrixXd hidden2 =
      ((params.w2 * hidden1).colwise() + params.b2).array().tanh().matrix();
  const Eigen::MatrixXd z = (params.w3 * hidden2).colwise() + params.b3;

  BatchGradient out;
  Eigen::MatrixXd dz(kNumClasses, b);
  double total_loss = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto post = softmax({z(0, i), z(1, i), z(2, i)});
    total_loss += loss(post, labels[static_cast<std::size_t>(i)]);
    for (int k = 0; k < kNumClasses; ++k) dz(k, i) = post.p[k];
    dz(code(labels[static_cast<std::size_t>(i)]), i) -= 1.0;
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  dz *= inv_b;
  out.mean_loss = total_loss * inv_b;

  out.grad.w3 = dz * hidden2.transpose();
  out.grad.b3 = dz.rowwise().sum();
  const Eigen::MatrixXd dpre2 =
      ((params.w3.transpose() * dz).array() * (1.0 - hidden2.array().square())).matrix();
  out.grad.w2 = dpre2 * hidden1.transpose();
  out.grad.b2 = dpre2.rowwise().sum();
  Eigen::MatrixXd dpre1 =
      ((params.w2.transpose() * dpre2).array() * (pre1.array() > 0.0).cast<double>()).matrix();
  if (dropout) dpre1.array() *= mask1.array();
  out.grad.w1 = dpre1 * input.transpose();
  out.grad.b1 = dpre1.rowwise().sum();
  return out;
}

AdagradState AdagradState::for_params(const MlpParams& params) {
  return {MlpParams::zeros(params.input_dim())};
}

void adagrad_step(MlpParams& params, const MlpParams& grads, AdagradState& state,
                  const TrainConfig& config) {
  const double lr = config.learning_rate;
  const double eps = config.adagrad_epsilon;
  auto update = [&](auto& param, const auto& grad, auto& acc) {
    if (param.rows() != grad.rows() || param.cols() != grad.cols() ||
        param.rows() != acc.rows() || param.cols() != acc.cols()) {
      throw DimensionError("adagrad: parameter, gradient and accumulator shapes differ");
    }
    for (Eigen::Index i = 0; i < param.size(); ++i) {
      const double g = grad.data()[i];
      if (g == 0.0) continue;
      double& a = acc.data()[i];
      a += g * g;
      param.data()[i] -= lr * g / (std::sqrt(a) + eps);
    }
  };
  update(params.w1, grads.w1, state.accumulator.w1);
  update(params.b1, grads.b1, state.accumulator.b1);
  update(params.w2, grads.w2, state.accumulator.w2);
  update(params.b2, grads.b2, state.accumulator.b2);
  update(params.w3, grads.w3, state.accumulator.w3);
  update(params.b3, grads.b3, state.accumulator.b3);
}

MlpParams glorot_uniform(Eigen::Index input_dim, Rng& rng) {
  auto p = MlpParams::zeros(input_dim);
  auto fill = [&](Eigen::MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = uniform(rng, -limit, limit);
    }
  };
  fill(p.w1);
  fill(p.w2);
  fill(p.w3);
  return p;
}

MlpParams train(const Eigen::MatrixXd& x, std::span<const BiasLabel> labels,
                const TrainConfig& config) {
  config.validate();
  if (x.rows() == 0) throw PreconditionError("cannot train on an empty dataset");
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw PreconditionError("training matrix has " + std::to_string(x.rows()) + " rows but " +
                            std::to_string(labels.size()) + " labels");
  }
  if (!x.allFinite()) throw DimensionError("training matrix contains non-finite values");

  Rng rng(config.seed);
  auto params = glorot_uniform(x.cols(), rng);
  auto state = AdagradState::for_params(params);

  const Eigen::MatrixXd columns = x.transpose();
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const auto batch = static_cast<std::size_t>(config.batch_size);
  Eigen::MatrixXd batch_columns;
  std::vector<BiasLabel> batch_labels;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span(order), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t n = std::min(batch, order.size() - start);
      batch_columns.resize(columns.rows(), static_cast<Eigen::Index>(n));
      batch_labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        batch_columns.col(static_cast<Eigen::Index>(i)) =
            columns.col(static_cast<Eigen::Index>(order[start + i]));
        batch_labels[i] = labels[order[start + i]];
      }
      const auto g = batch_gradient(params, batch_columns, batch_labels, ForwardMode::kTrain,
                                    config.dropout_rate, &rng);
      adagrad_step(params, g.grad, state, config);
    }
  }
  return params;
}

}  // namespace mediabias
