#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "mediabias/mlp.hpp"

namespace mediabias {

enum class AggregationMethod { kAverage, kMaximum };

std::optional<AggregationMethod> parse_aggregation(std::string_view name);
std::string_view to_string(AggregationMethod method);

struct ChannelPrediction {
  Posterior posterior;
  BiasLabel label = BiasLabel::kLeft;
};

// Combines one channel's instance posteriors. Average takes the
// component-wise mean; maximum takes the component-wise max and rescales it
// to sum to one. The label is the argmax, ties toward the lowest code.
// Throws PreconditionError on empty input.
ChannelPrediction aggregate_posteriors(std::span<const Posterior> posteriors,
                                       AggregationMethod method);

}  // namespace mediabias
