#include "mediabias/feature_group.hpp"

#include <algorithm>

#include "mediabias/error.hpp"

namespace mediabias {

std::optional<FeatureGroup> parse_feature_group(std::string_view name) {
  for (const auto& g : kFeatureGroups) {
    if (g.name == name) return g.group;
  }
  return std::nullopt;
}

std::vector<FeatureGroup> canonical_groups(std::vector<FeatureGroup> groups) {
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  return groups;
}

bool is_canonical(std::span<const FeatureGroup> groups) {
  return std::adjacent_find(groups.begin(), groups.end(), std::greater_equal<>()) == groups.end();
}

std::size_t total_dim(std::span<const FeatureGroup> groups) {
  std::size_t d = 0;
  for (auto g : groups) d += dim(g);
  return d;
}

std::string join_groups(std::span<const FeatureGroup> groups) {
  std::string out;
  for (auto g : groups) {
    if (!out.empty()) out += '+';
    out += to_string(g);
  }
  return out;
}

std::vector<FeatureGroup> parse_group_list(std::string_view text) {
  std::vector<FeatureGroup> groups;
  while (!text.empty()) {
    const auto plus = text.find_first_of("+,");
    const auto name = text.substr(0, plus);
    const auto g = parse_feature_group(name);
    if (!g) throw ConfigError("unknown feature group '" + std::string(name) + "'");
    groups.push_back(*g);
    if (plus == std::string_view::npos) break;
    text.remove_prefix(plus + 1);
  }
  if (groups.empty()) throw ConfigError("empty feature group list");
  return canonical_groups(std::move(groups));
}

}  // namespace mediabias
