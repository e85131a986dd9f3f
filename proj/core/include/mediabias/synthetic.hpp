#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mediabias/catalog.hpp"
#include "mediabias/feature_store.hpp"

namespace mediabias {

// Generated catalogs with controllable class separation, for tests,
// benchmarks and demos.
struct SyntheticOptions {
  std::array<int, kNumClasses> channels_per_class{20, 20, 20};
  int min_videos_per_channel = 3;
  int max_videos_per_channel = 5;
  int episodes_per_video = 3;  // 0..5
  std::vector<FeatureGroup> groups{FeatureGroup::kNela};
  // The first `signal_dims` coordinates of every group are N(mean_c, 1) with
  // mean_c = separation * (code(c) - 1); the rest are `background`.
  int signal_dims = 20;
  double separation = 10.0;
  enum class Background { kZero, kNoise } background = Background::kZero;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  std::vector<Channel> channels;
  std::vector<Video> videos;
  std::vector<SpeechEpisode> episodes;
  std::vector<FeatureRecord> records;

  Catalog catalog() const;  // with episodes attached
  FeatureStore store(const Catalog& catalog) const;

  // channels.jsonl, videos.jsonl, episodes.jsonl, features.jsonl.
  void write(const std::filesystem::path& dir) const;
};

SyntheticDataset make_synthetic(const SyntheticOptions& options);

}  // namespace mediabias
