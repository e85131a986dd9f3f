#include "mediabias/normalizer.hpp"

#include <cmath>
#include <string>

#include "mediabias/error.hpp"

namespace mediabias {

Normalizer Normalizer::identity(std::size_t dim) {
  Normalizer n;
  n.mean_.assign(dim, 0.0);
  n.stddev_.assign(dim, 1.0);
  return n;
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw PreconditionError("cannot fit a normalizer on an empty training set");
  const auto n = static_cast<double>(rows.rows());
  Normalizer out;
  out.mean_.resize(rows.cols());
  out.stddev_.resize(rows.cols());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const auto col = rows.col(j);
    if (col.minCoeff() == col.maxCoeff()) {
      out.mean_[j] = col(0);
      out.stddev_[j] = 1.0;
      continue;
    }
    const double mean = col.sum() / n;
    const double var = (col.array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    out.mean_[j] = mean;
    out.stddev_[j] = sd > 1e-12 * (1.0 + std::abs(mean)) ? sd : 1.0;
  }
  return out;
}

Normalizer Normalizer::from_parameters(std::vector<double> mean, std::vector<double> stddev) {
  if (mean.size() != stddev.size()) {
    throw DimensionError("normalizer mean/std length mismatch");
  }
  for (double s : stddev) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DimensionError("normalizer std must be positive");
  }
  Normalizer n;
  n.mean_ = std::move(mean);
  n.stddev_ = std::move(stddev);
  return n;
}

void Normalizer::apply_inplace(std::span<double> x) const {
  if (x.size() != mean_.size()) {
    throw DimensionError("normalizer expects " + std::to_string(mean_.size()) +
                         " dimensions, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] - mean_[i]) / stddev_[i];
}

void Normalizer::apply_rows(Eigen::MatrixXd& rows) const {
  if (static_cast<std::size_t>(rows.cols()) != mean_.size()) {
    throw DimensionError("normalizer expects " + std::to_string(mean_.size()) +
                         " dimensions, got " + std::to_string(rows.cols()));
  }
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    rows.col(j) = (rows.col(j).array() - mean_[j]) / stddev_[j];
  }
}

}  // namespace mediabias
