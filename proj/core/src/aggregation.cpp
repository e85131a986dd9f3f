#include "mediabias/aggregation.hpp"

#include <algorithm>

#include "mediabias/error.hpp"

namespace mediabias {

std::optional<AggregationMethod> parse_aggregation(std::string_view name) {
  if (name == "average" || name == "avg") return AggregationMethod::kAverage;
  if (name == "maximum" || name == "max") return AggregationMethod::kMaximum;
  return std::nullopt;
}

std::string_view to_string(AggregationMethod method) {
  return method == AggregationMethod::kAverage ? "average" : "maximum";
}

ChannelPrediction aggregate_posteriors(std::span<const Posterior> posteriors,
                                       AggregationMethod method) {
  if (posteriors.empty()) throw PreconditionError("cannot aggregate zero posteriors");
  if (posteriors.size() == 1) return {posteriors[0], posteriors[0].argmax()};

  Posterior out;
  if (method == AggregationMethod::kAverage) {
    for (const auto& p : posteriors) {
      for (int k = 0; k < kNumClasses; ++k) out.p[k] += p.p[k];
    }
    for (auto& v : out.p) v /= static_cast<double>(posteriors.size());
  } else {
    out = posteriors[0];
    for (const auto& p : posteriors.subspan(1)) {
      for (int k = 0; k < kNumClasses; ++k) out.p[k] = std::max(out.p[k], p.p[k]);
    }
    const double total = out.sum();
    for (auto& v : out.p) v /= total;
  }
  return {out, out.argmax()};
}

}  // namespace mediabias
