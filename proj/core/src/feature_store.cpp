#include "mediabias/feature_store.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

std::string describe_key(FeatureGroup group, const std::string& video_id,
                         std::optional<int> episode) {
  std::string s = "(" + std::string(to_string(group)) + ", " + video_id;
  if (episode) s += ", episode " + std::to_string(*episode);
  return s + ")";
}

void check_groups(std::span<const FeatureGroup> groups) {
  if (groups.empty()) throw PreconditionError("feature group list is empty");
  if (!is_canonical(groups)) {
    throw PreconditionError("feature groups must be unique and in canonical order, got '" +
                            join_groups(groups) + "'");
  }
}

void append_or_fill(std::vector<double>& out, const std::vector<double>* v, FeatureGroup g,
                    const std::string& video_id, MissingPolicy policy, const std::string& what) {
  if (v) {
    out.insert(out.end(), v->begin(), v->end());
    return;
  }
  if (policy == MissingPolicy::kError) {
    throw MissingFeatureError("video '" + video_id + "' has no '" + std::string(to_string(g)) +
                              "' features" + what);
  }
  out.insert(out.end(), dim(g), 0.0);
}

}  // namespace

std::optional<MissingPolicy> parse_missing_policy(std::string_view name) {
  if (name == "error") return MissingPolicy::kError;
  if (name == "zero_fill") return MissingPolicy::kZeroFill;
  return std::nullopt;
}

std::string_view to_string(MissingPolicy policy) {
  return policy == MissingPolicy::kError ? "error" : "zero_fill";
}

void FeatureStore::add(FeatureRecord record, const Catalog& catalog) {
  const auto g = record.group;
  const auto key_text = describe_key(g, record.video_id, record.episode_index);
  if (record.vector.size() != dim(g)) {
    throw DimensionError("group '" + std::string(to_string(g)) + "' expects " +
                         std::to_string(dim(g)) + " values, got " +
                         std::to_string(record.vector.size()) + " for " + key_text);
  }
  for (std::size_t i = 0; i < record.vector.size(); ++i) {
    if (!std::isfinite(record.vector[i])) {
      throw DimensionError("non-finite value at position " + std::to_string(i) + " of " +
                           key_text);
    }
  }
  if (!catalog.find_video(record.video_id)) {
    throw IntegrityError("feature record " + key_text + " references unknown video");
  }

  if (scope(g) == FeatureScope::kVideo) {
    if (record.episode_index) {
      throw IntegrityError("video-scoped group record " + key_text + " carries an episode_index");
    }
    auto [it, inserted] =
        video_scope_.try_emplace(Key{g, record.video_id}, std::move(record.vector));
    if (!inserted) throw IntegrityError("duplicate feature record " + key_text);
  } else {
    if (!record.episode_index) {
      throw IntegrityError("episode-scoped group record " + key_text + " lacks an episode_index");
    }
    if (*record.episode_index < 0 || *record.episode_index >= kMaxEpisodesPerVideo) {
      throw IntegrityError("episode_index out of range in " + key_text);
    }
    auto& per_video = episode_scope_[Key{g, record.video_id}];
    auto [it, inserted] = per_video.try_emplace(*record.episode_index, std::move(record.vector));
    if (!inserted) throw IntegrityError("duplicate feature record " + key_text);
  }
  ++size_;
}

FeatureStore FeatureStore::ingest(std::istream& in, const Catalog& catalog) {
  using nlohmann::json;
  FeatureStore store;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    FeatureRecord record;
    try {
      const auto row = json::parse(line);
      const auto name = row.at("group").get<std::string>();
      const auto group = parse_feature_group(name);
      if (!group) throw ParseError(number, "unknown feature group '" + name + "'");
      record.group = *group;
      record.video_id = row.at("video_id").get<std::string>();
      if (const auto it = row.find("episode_index"); it != row.end() && !it->is_null()) {
        record.episode_index = it->get<int>();
      }
      const auto& values = row.at("vector");
      if (!values.is_array()) throw ParseError(number, "'vector' must be an array");
      record.vector.reserve(values.size());
      for (const auto& v : values) {
        if (!v.is_number()) throw ParseError(number, "'vector' holds a non-numeric entry");
        record.vector.push_back(v.get<double>());
      }
    } catch (const json::exception& e) {
      throw ParseError(number, std::string("invalid feature record: ") + e.what());
    }
    try {
      store.add(std::move(record), catalog);
    } catch (const DimensionError& e) {
      throw DimensionError("line " + std::to_string(number) + ": " + e.what());
    } catch (const IntegrityError& e) {
      throw IntegrityError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return store;
}

FeatureStore FeatureStore::ingest(const std::filesystem::path& file, const Catalog& catalog) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  return ingest(in, catalog);
}

std::size_t FeatureStore::count(FeatureGroup group) const {
  std::size_t n = 0;
  if (scope(group) == FeatureScope::kVideo) {
    for (const auto& [key, _] : video_scope_) n += key.first == group;
  } else {
    for (const auto& [key, per_video] : episode_scope_) {
      if (key.first == group) n += per_video.size();
    }
  }
  return n;
}

const std::vector<double>* FeatureStore::video_vector(FeatureGroup group,
                                                      const std::string& video_id) const {
  const auto it = video_scope_.find(Key{group, video_id});
  return it == video_scope_.end() ? nullptr : &it->second;
}

const std::vector<double>* FeatureStore::episode_vector(FeatureGroup group,
                                                        const std::string& video_id,
                                                        int episode_index) const {
  const auto it = episode_scope_.find(Key{group, video_id});
  if (it == episode_scope_.end()) return nullptr;
  const auto e = it->second.find(episode_index);
  return e == it->second.end() ? nullptr : &e->second;
}

std::optional<std::vector<double>> FeatureStore::aggregate_to_video(
    FeatureGroup group, const std::string& video_id) const {
  if (scope(group) != FeatureScope::kEpisode) {
    throw PreconditionError("group '" + std::string(to_string(group)) +
                            "' is video-scoped and cannot be aggregated");
  }
  const auto it = episode_scope_.find(Key{group, video_id});
  if (it == episode_scope_.end() || it->second.empty()) return std::nullopt;
  std::vector<double> mean(dim(group), 0.0);
  for (const auto& [_, v] : it->second) {
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  const auto n = static_cast<double>(it->second.size());
  for (auto& m : mean) m /= n;
  return mean;
}

std::vector<int> FeatureStore::episode_indices(const std::string& video_id) const {
  std::set<int> indices;
  for (const auto& g : kFeatureGroups) {
    if (g.scope != FeatureScope::kEpisode) continue;
    const auto it = episode_scope_.find(Key{g.group, video_id});
    if (it == episode_scope_.end()) continue;
    for (const auto& [idx, _] : it->second) indices.insert(idx);
  }
  return {indices.begin(), indices.end()};
}

std::vector<SpeechEpisode> FeatureStore::episodes() const {
  std::set<std::pair<std::string, int>> keys;
  for (const auto& [key, per_video] : episode_scope_) {
    for (const auto& [idx, _] : per_video) keys.emplace(key.second, idx);
  }
  std::vector<SpeechEpisode> out;
  out.reserve(keys.size());
  for (const auto& [video, idx] : keys) out.push_back({video, idx, 0, kEpisodeLengthMs});
  return out;
}

std::vector<double> assemble_raw(const FeatureStore& store, const std::string& video_id,
                                 std::span<const FeatureGroup> groups, MissingPolicy policy) {
  check_groups(groups);
  std::vector<double> out;
  out.reserve(total_dim(groups));
  for (auto g : groups) {
    if (scope(g) == FeatureScope::kVideo) {
      append_or_fill(out, store.video_vector(g, video_id), g, video_id, policy, "");
    } else {
      const auto mean = store.aggregate_to_video(g, video_id);
      append_or_fill(out, mean ? &*mean : nullptr, g, video_id, policy, " for any episode");
    }
  }
  return out;
}

std::vector<double> assemble_episode_raw(const FeatureStore& store, const std::string& video_id,
                                         int episode_index, std::span<const FeatureGroup> groups,
                                         MissingPolicy policy) {
  check_groups(groups);
  std::vector<double> out;
  out.reserve(total_dim(groups));
  for (auto g : groups) {
    if (scope(g) == FeatureScope::kVideo) {
      append_or_fill(out, store.video_vector(g, video_id), g, video_id, policy, "");
    } else {
      append_or_fill(out, store.episode_vector(g, video_id, episode_index), g, video_id, policy,
                     " for episode " + std::to_string(episode_index));
    }
  }
  return out;
}

std::vector<double> assemble(const FeatureStore& store, const std::string& video_id,
                             std::span<const FeatureGroup> groups, const Normalizer* normalizer,
                             MissingPolicy policy) {
  auto v = assemble_raw(store, video_id, groups, policy);
  if (normalizer) normalizer->apply_inplace(v);
  return v;
}

Normalizer fit_normalizer(const FeatureStore& store, std::span<const FeatureGroup> groups,
                          std::span<const std::string> training_video_ids, MissingPolicy policy) {
  if (training_video_ids.empty()) {
    throw PreconditionError("cannot fit a normalizer on an empty training set");
  }
  check_groups(groups);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(training_video_ids.size()),
                       static_cast<Eigen::Index>(total_dim(groups)));
  for (std::size_t r = 0; r < training_video_ids.size(); ++r) {
    const auto v = assemble_raw(store, training_video_ids[r], groups, policy);
    rows.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const Eigen::RowVectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return Normalizer::fit(rows);
}

std::string feature_record_to_json_line(const FeatureRecord& record) {
  nlohmann::ordered_json j;
  j["group"] = std::string(to_string(record.group));
  j["video_id"] = record.video_id;
  if (record.episode_index) j["episode_index"] = *record.episode_index;
  j["vector"] = record.vector;
  return j.dump();
}

}  // namespace mediabias
