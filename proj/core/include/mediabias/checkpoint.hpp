#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mediabias/experiment.hpp"
#include "mediabias/mlp.hpp"
#include "mediabias/normalizer.hpp"

namespace mediabias {

inline constexpr int kCheckpointVersion = 1;

// A trained network plus everything needed to apply it to new videos.
struct Checkpoint {
  MlpParams params;
  TrainConfig config;
  std::vector<FeatureGroup> groups;
  Level level = Level::kVideo;
  Normalizer normalizer;
};

// JSON with explicit shapes; weights are written as shortest round-trip
// decimals, so save followed by load reproduces every bit.
std::string checkpoint_to_json(const Checkpoint& checkpoint);
// Throws ParseError on a malformed file or an unsupported version and
// DimensionError on inconsistent shapes.
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& file);
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace mediabias
