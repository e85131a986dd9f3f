#include "mediabias/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

using nlohmann::json;

template <typename T>
T required(const json& row, const char* key, std::size_t line) {
  const auto it = row.find(key);
  if (it == row.end() || it->is_null()) {
    throw ParseError(line, std::string("missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(line, std::string("field '") + key + "' has the wrong type");
  }
}

std::uint64_t required_count(const json& row, const char* key, std::size_t line) {
  const auto it = row.find(key);
  if (it == row.end() || it->is_null()) {
    throw ParseError(line, std::string("missing field '") + key + "'");
  }
  const bool ok = it->is_number_unsigned() ||
                  (it->is_number_integer() && it->get<std::int64_t>() >= 0);
  if (!ok) {
    throw ParseError(line, std::string("field '") + key + "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(number, std::string("invalid JSON: ") + e.what());
    }
    if (!row.is_object()) throw ParseError(number, "expected a JSON object");
    fn(row, number);
  }
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  return in;
}

}  // namespace

double CatalogSummary::videos_per_channel() const {
  return channels == 0 ? 0.0 : static_cast<double>(videos) / static_cast<double>(channels);
}

double CatalogSummary::episodes_per_video() const {
  return videos == 0 ? 0.0 : static_cast<double>(episodes) / static_cast<double>(videos);
}

Catalog Catalog::build(std::vector<Channel> channels, std::vector<Video> videos,
                       std::vector<std::string> excluded_channel_ids) {
  Catalog cat;
  std::sort(channels.begin(), channels.end(),
            [](const Channel& a, const Channel& b) { return a.id < b.id; });
  std::sort(videos.begin(), videos.end(),
            [](const Video& a, const Video& b) { return a.id < b.id; });

  const std::set<std::string> excluded(excluded_channel_ids.begin(), excluded_channel_ids.end());
  if (excluded.size() != excluded_channel_ids.size()) {
    throw IntegrityError("duplicate channel id among excluded channels");
  }

  for (auto& channel : channels) {
    if (excluded.contains(channel.id) || cat.channel_index_.contains(channel.id)) {
      throw IntegrityError("duplicate channel id '" + channel.id + "'");
    }
    cat.channel_index_.emplace(channel.id, cat.channels_.size());
    cat.channel_videos_[channel.id];
    cat.channels_.push_back(std::move(channel));
  }

  std::set<std::string> skipped_ids;
  std::size_t skipped = 0;
  for (auto& video : videos) {
    if (cat.video_index_.contains(video.id) || skipped_ids.contains(video.id)) {
      throw IntegrityError("duplicate video id '" + video.id + "'");
    }
    if (excluded.contains(video.channel_id)) {
      skipped_ids.insert(video.id);
      ++skipped;
      continue;
    }
    if (!cat.channel_index_.contains(video.channel_id)) {
      throw IntegrityError("video '" + video.id + "' references unknown channel '" +
                           video.channel_id + "'");
    }
    if (video.metadata.duration_s == 0) {
      throw IntegrityError("video '" + video.id + "' has a non-positive duration");
    }
    cat.video_index_.emplace(video.id, cat.videos_.size());
    cat.channel_videos_[video.channel_id].push_back(cat.videos_.size());
    cat.videos_.push_back(std::move(video));
  }

  if (!excluded.empty()) {
    cat.warnings_.push_back("dropped " + std::to_string(excluded.size()) +
                            " channel(s) with a center-left/center-right label");
  }
  if (skipped > 0) {
    cat.warnings_.push_back("skipped " + std::to_string(skipped) +
                            " video(s) of channels with an excluded label");
  }
  return cat;
}

void Catalog::attach_episodes(std::vector<SpeechEpisode> episodes) {
  std::size_t unknown = 0;
  for (auto& episode : episodes) {
    if (!video_index_.contains(episode.video_id)) {
      ++unknown;
      continue;
    }
    auto& list = episodes_[episode.video_id];
    const bool duplicate = std::any_of(list.begin(), list.end(), [&](const SpeechEpisode& e) {
      return e.index == episode.index;
    });
    if (duplicate) {
      throw IntegrityError("duplicate episode " + std::to_string(episode.index) + " of video '" +
                           episode.video_id + "'");
    }
    list.push_back(std::move(episode));
    ++episode_count_;
  }
  for (auto& [_, list] : episodes_) {
    std::sort(list.begin(), list.end(),
              [](const SpeechEpisode& a, const SpeechEpisode& b) { return a.index < b.index; });
  }
  if (unknown > 0) {
    warnings_.push_back("skipped " + std::to_string(unknown) +
                        " episode(s) of videos not in the catalog");
  }
}

const Channel* Catalog::find_channel(const std::string& id) const {
  const auto it = channel_index_.find(id);
  return it == channel_index_.end() ? nullptr : &channels_[it->second];
}

const Video* Catalog::find_video(const std::string& id) const {
  const auto it = video_index_.find(id);
  return it == video_index_.end() ? nullptr : &videos_[it->second];
}

const Channel& Catalog::channel_of(const Video& video) const {
  return channels_[channel_index_.at(video.channel_id)];
}

std::vector<const Video*> Catalog::videos_of(const std::string& channel_id) const {
  std::vector<const Video*> out;
  if (const auto it = channel_videos_.find(channel_id); it != channel_videos_.end()) {
    for (auto idx : it->second) out.push_back(&videos_[idx]);
  }
  return out;
}

std::span<const SpeechEpisode> Catalog::episodes_of(const std::string& video_id) const {
  const auto it = episodes_.find(video_id);
  if (it == episodes_.end()) return {};
  return it->second;
}

CatalogSummary Catalog::summary() const {
  CatalogSummary s;
  s.channels = channels_.size();
  for (const auto& c : channels_) ++s.channels_per_class[code(c.label)];
  s.videos = videos_.size();
  s.episodes = episode_count_;
  return s;
}

Catalog load_manifest(std::istream& channels_in, std::istream& videos_in) {
  std::vector<Channel> channels;
  std::vector<std::string> excluded;
  for_each_json_line(channels_in, [&](const json& row, std::size_t line) {
    Channel c;
    c.id = required<std::string>(row, "id", line);
    c.name = required<std::string>(row, "name", line);
    c.youtube_url = required<std::string>(row, "youtube_url", line);
    const auto raw_text = required<std::string>(row, "label_raw", line);
    const auto raw = parse_raw_label(raw_text);
    if (!raw) throw ParseError(line, "unknown MBFC label '" + raw_text + "'");
    c.raw_label = *raw;
    if (const auto it = row.find("description"); it != row.end() && !it->is_null()) {
      c.description = required<std::string>(row, "description", line);
    }
    if (const auto it = row.find("stats"); it != row.end() && !it->is_null()) {
      if (!it->is_object()) throw ParseError(line, "field 'stats' must be an object");
      c.stats = ChannelStats{required_count(*it, "views", line),
                             required_count(*it, "video_count", line),
                             required_count(*it, "subscribers", line)};
    }
    if (const auto label = normalize_label(c.raw_label)) {
      c.label = *label;
      channels.push_back(std::move(c));
    } else {
      excluded.push_back(c.id);
    }
  });

  std::vector<Video> videos;
  for_each_json_line(videos_in, [&](const json& row, std::size_t line) {
    Video v;
    v.id = required<std::string>(row, "id", line);
    v.channel_id = required<std::string>(row, "channel_id", line);
    v.title = required<std::string>(row, "title", line);
    v.description = required<std::string>(row, "description", line);
    v.tags = required<std::vector<std::string>>(row, "tags", line);
    v.metadata.views = required_count(row, "views", line);
    v.metadata.likes = required_count(row, "likes", line);
    v.metadata.dislikes = required_count(row, "dislikes", line);
    v.metadata.comments = required_count(row, "comments", line);
    v.metadata.duration_s = required_count(row, "duration_s", line);
    if (v.metadata.duration_s == 0) throw ParseError(line, "field 'duration_s' must be positive");
    videos.push_back(std::move(v));
  });

  return Catalog::build(std::move(channels), std::move(videos), std::move(excluded));
}

Catalog load_manifest(const std::filesystem::path& channel_file,
                      const std::filesystem::path& video_file) {
  auto channels = open_or_throw(channel_file);
  auto videos = open_or_throw(video_file);
  return load_manifest(channels, videos);
}

std::vector<SpeechEpisode> load_episodes(std::istream& in) {
  std::vector<SpeechEpisode> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(episode_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError(number, e.what());
    }
  }
  return out;
}

std::vector<SpeechEpisode> load_episodes(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  return load_episodes(in);
}

std::string channel_to_json_line(const Channel& c) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["name"] = c.name;
  j["youtube_url"] = c.youtube_url;
  j["label_raw"] = std::string(to_string(c.raw_label));
  if (c.description) j["description"] = *c.description;
  if (c.stats) {
    j["stats"] = {{"views", c.stats->views},
                  {"video_count", c.stats->video_count},
                  {"subscribers", c.stats->subscribers}};
  }
  return j.dump();
}

std::string video_to_json_line(const Video& v) {
  nlohmann::ordered_json j;
  j["id"] = v.id;
  j["channel_id"] = v.channel_id;
  j["title"] = v.title;
  j["description"] = v.description;
  j["tags"] = v.tags;
  j["views"] = v.metadata.views;
  j["likes"] = v.metadata.likes;
  j["dislikes"] = v.metadata.dislikes;
  j["comments"] = v.metadata.comments;
  j["duration_s"] = v.metadata.duration_s;
  return j.dump();
}

}  // namespace mediabias
