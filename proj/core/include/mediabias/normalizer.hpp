#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mediabias {

// Per-dimension z-scoring. Dimensions without variance keep std = 1 so they
// map to 0.
class Normalizer {
 public:
  Normalizer() = default;

  static Normalizer identity(std::size_t dim);

  // Rows are instances. Uses the population standard deviation. Throws
  // PreconditionError on an empty matrix.
  static Normalizer fit(const Eigen::MatrixXd& rows);

  static Normalizer from_parameters(std::vector<double> mean, std::vector<double> stddev);

  std::size_t dim() const { return mean_.size(); }
  std::span<const double> mean() const { return mean_; }
  std::span<const double> stddev() const { return stddev_; }

  void apply_inplace(std::span<double> x) const;
  void apply_rows(Eigen::MatrixXd& rows) const;

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

}  // namespace mediabias
