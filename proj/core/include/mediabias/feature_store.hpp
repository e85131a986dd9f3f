#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mediabias/catalog.hpp"
#include "mediabias/feature_group.hpp"
#include "mediabias/normalizer.hpp"

namespace mediabias {

struct FeatureRecord {
  FeatureGroup group = FeatureGroup::kNumericMeta;
  std::string video_id;
  std::optional<int> episode_index;  // present iff the group is episode-scoped
  std::vector<double> vector;
};

enum class MissingPolicy { kError, kZeroFill };

std::optional<MissingPolicy> parse_missing_policy(std::string_view name);
std::string_view to_string(MissingPolicy policy);

// Validated feature vectors keyed by (group, video[, episode]). Filled once,
// then read-only.
class FeatureStore {
 public:
  // Validates dimension, finiteness, scope/episode_index agreement, the
  // video id against the catalog and key uniqueness.
  void add(FeatureRecord record, const Catalog& catalog);

  // features.jsonl: {"group","video_id","episode_index"?,"vector":[...]}.
  // Errors carry the 1-based line number.
  static FeatureStore ingest(std::istream& in, const Catalog& catalog);
  static FeatureStore ingest(const std::filesystem::path& file, const Catalog& catalog);

  std::size_t size() const { return size_; }
  std::size_t count(FeatureGroup group) const;

  const std::vector<double>* video_vector(FeatureGroup group, const std::string& video_id) const;
  const std::vector<double>* episode_vector(FeatureGroup group, const std::string& video_id,
                                            int episode_index) const;

  // Component-wise mean over the video's episode records of an episode-scoped
  // group; nullopt when the video has none. Throws PreconditionError for a
  // video-scoped group.
  std::optional<std::vector<double>> aggregate_to_video(FeatureGroup group,
                                                        const std::string& video_id) const;

  // Episode indices present for the video in any episode-scoped group.
  std::vector<int> episode_indices(const std::string& video_id) const;

  // Every (video, episode) pair with an episode-scoped record, as 15 s
  // episodes with unknown timing (start_ms = end_ms - 15000 = 0).
  std::vector<SpeechEpisode> episodes() const;

 private:
  using Key = std::pair<FeatureGroup, std::string>;
  std::map<Key, std::vector<double>> video_scope_;
  std::map<Key, std::map<int, std::vector<double>>> episode_scope_;
  std::size_t size_ = 0;
};

// Raw (unnormalized) concatenation of the selected groups for a video, with
// episode-scoped groups averaged over the video's episodes. Groups must be
// non-empty and in canonical order. Absent groups either throw
// MissingFeatureError or become zeros, per policy.
std::vector<double> assemble_raw(const FeatureStore& store, const std::string& video_id,
                                 std::span<const FeatureGroup> groups, MissingPolicy policy);

// Same for one episode: episode-scoped groups come from that episode's
// record, video-scoped groups are replicated.
std::vector<double> assemble_episode_raw(const FeatureStore& store, const std::string& video_id,
                                         int episode_index, std::span<const FeatureGroup> groups,
                                         MissingPolicy policy);

// assemble_raw followed by normalization (skipped when normalizer is null).
std::vector<double> assemble(const FeatureStore& store, const std::string& video_id,
                             std::span<const FeatureGroup> groups, const Normalizer* normalizer,
                             MissingPolicy policy);

// Fits z-scoring over the assembled raw training matrix of the given videos.
Normalizer fit_normalizer(const FeatureStore& store, std::span<const FeatureGroup> groups,
                          std::span<const std::string> training_video_ids, MissingPolicy policy);

std::string feature_record_to_json_line(const FeatureRecord& record);

}  // namespace mediabias
