#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mediabias {

// Declaration order is the canonical concatenation order.
enum class FeatureGroup {
  kBertTitleDescTags,
  kBertCaptions,
  kNela,
  kNumericMeta,
  kIvectors,
  kOpensmileIs09,
};

enum class FeatureScope { kVideo, kEpisode };

struct FeatureGroupInfo {
  FeatureGroup group;
  std::string_view name;
  std::size_t dim;
  FeatureScope scope;
};

inline constexpr std::array<FeatureGroupInfo, 6> kFeatureGroups = {{
    {FeatureGroup::kBertTitleDescTags, "bert_title_desc_tags", 768, FeatureScope::kVideo},
    {FeatureGroup::kBertCaptions, "bert_captions", 768, FeatureScope::kVideo},
    {FeatureGroup::kNela, "nela", 260, FeatureScope::kVideo},
    {FeatureGroup::kNumericMeta, "numeric_meta", 5, FeatureScope::kVideo},
    {FeatureGroup::kIvectors, "ivectors", 600, FeatureScope::kEpisode},
    {FeatureGroup::kOpensmileIs09, "opensmile_is09", 385, FeatureScope::kEpisode},
}};

constexpr const FeatureGroupInfo& info(FeatureGroup g) {
  return kFeatureGroups[static_cast<std::size_t>(g)];
}
constexpr std::size_t dim(FeatureGroup g) { return info(g).dim; }
constexpr FeatureScope scope(FeatureGroup g) { return info(g).scope; }
constexpr std::string_view to_string(FeatureGroup g) { return info(g).name; }

std::optional<FeatureGroup> parse_feature_group(std::string_view name);

// Sorted into canonical order with duplicates removed.
std::vector<FeatureGroup> canonical_groups(std::vector<FeatureGroup> groups);
bool is_canonical(std::span<const FeatureGroup> groups);

std::size_t total_dim(std::span<const FeatureGroup> groups);

// "bert_captions+numeric_meta"
std::string join_groups(std::span<const FeatureGroup> groups);
std::vector<FeatureGroup> parse_group_list(std::string_view text);

}  // namespace mediabias
