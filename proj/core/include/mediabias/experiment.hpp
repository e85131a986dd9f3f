#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mediabias/aggregation.hpp"
#include "mediabias/catalog.hpp"
#include "mediabias/feature_store.hpp"
#include "mediabias/folds.hpp"
#include "mediabias/mlp.hpp"

namespace mediabias {

// Granularity the classifier is trained and queried at.
enum class Level { kVideo, kEpisode };

std::optional<Level> parse_level(std::string_view name);
std::string_view to_string(Level level);

struct ExperimentSpec {
  std::string name;
  std::vector<FeatureGroup> groups;  // canonical order; empty for the baseline
  Level level = Level::kVideo;
  AggregationMethod aggregation = AggregationMethod::kAverage;
  bool majority_baseline = false;

  // Throws ConfigError when a non-baseline spec has no groups or groups are
  // not canonical.
  void validate() const;
};

// One distantly supervised training/test instance: a video, or one episode
// of it, carrying its channel's label.
struct Instance {
  std::string channel_id;
  std::string video_id;
  std::optional<int> episode_index;
  BiasLabel label = BiasLabel::kLeft;
};

// Videos (level video) or attached episodes (level episode) in catalog
// order, each labeled with its channel's label.
std::vector<Instance> distant_label_instances(const Catalog& catalog, Level level);

struct RunOptions {
  TrainConfig train;
  MissingPolicy missing = MissingPolicy::kError;
  int folds = kDefaultFolds;
  std::uint64_t seed = 0;  // fold shuffling; fold f trains with seed + f
  bool parallel_folds = false;
};

struct ChannelResult {
  std::string channel_id;
  int fold = 0;
  BiasLabel label = BiasLabel::kLeft;
  BiasLabel predicted = BiasLabel::kLeft;
  Posterior posterior;
  std::size_t instances = 0;

  bool correct() const { return label == predicted; }
};

struct FoldResult {
  int fold = 0;
  std::size_t train_channels = 0;
  std::size_t train_instances = 0;
  std::size_t test_channels = 0;
  std::size_t correct = 0;

  double accuracy() const {
    return test_channels == 0 ? 0.0 : static_cast<double>(correct) / test_channels;
  }
};

struct Report {
  ExperimentSpec spec;
  RunOptions options;
  std::vector<FoldResult> folds;
  std::vector<ChannelResult> channels;  // sorted by channel id

  std::size_t correct() const;
  std::size_t total() const { return channels.size(); }
  // Micro accuracy over all channels of all folds.
  double accuracy() const;
  // Unweighted mean of per-fold accuracies.
  double macro_fold_accuracy() const;
};

// Every fold predicts the majority class of its training channels (ties to
// the lowest code); the channel posterior is the training class frequency.
Report majority_baseline(const Catalog& catalog, const FoldAssignment& folds,
                         const RunOptions& options = {});

// Full cross-validated run: per fold, fit the normalizer on training
// instances, train the network, predict test instances and aggregate them
// per channel. Throws MissingFeatureError (policy error) or
// PreconditionError when a test channel has no instances.
Report run_experiment(const ExperimentSpec& spec, const Catalog& catalog,
                      const FeatureStore& store, const RunOptions& options);

// Same with a precomputed fold assignment.
Report run_experiment(const ExperimentSpec& spec, const Catalog& catalog,
                      const FeatureStore& store, const FoldAssignment& folds,
                      const RunOptions& options);

}  // namespace mediabias
