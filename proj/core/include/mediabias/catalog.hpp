#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mediabias/labels.hpp"
#include "mediabias/segmenter.hpp"

namespace mediabias {

struct ChannelStats {
  std::uint64_t views = 0;
  std::uint64_t video_count = 0;
  std::uint64_t subscribers = 0;

  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

struct Channel {
  std::string id;
  std::string name;
  std::string youtube_url;
  RawMbfcLabel raw_label = RawMbfcLabel::kCenter;
  BiasLabel label = BiasLabel::kCenter;
  std::optional<std::string> description;
  std::optional<ChannelStats> stats;

  friend bool operator==(const Channel&, const Channel&) = default;
};

// The five per-video counts used as the numeric_meta feature group.
struct VideoMetadata {
  std::uint64_t views = 0;
  std::uint64_t likes = 0;
  std::uint64_t dislikes = 0;
  std::uint64_t comments = 0;
  std::uint64_t duration_s = 1;

  friend bool operator==(const VideoMetadata&, const VideoMetadata&) = default;
};

struct Video {
  std::string id;
  std::string channel_id;
  std::string title;
  std::string description;
  std::vector<std::string> tags;
  VideoMetadata metadata;

  friend bool operator==(const Video&, const Video&) = default;
};

struct CatalogSummary {
  std::size_t channels = 0;
  std::array<std::size_t, kNumClasses> channels_per_class{};
  std::size_t videos = 0;
  std::size_t episodes = 0;

  double videos_per_channel() const;
  double episodes_per_video() const;
};

// Channels, videos and (optionally) speech episodes with referential
// integrity. Every stored video resolves to a channel carrying a 3-way label.
// Entities are kept sorted by id, so the catalog does not depend on the
// order its inputs arrived in. Immutable once built, apart from
// attach_episodes().
class Catalog {
 public:
  Catalog() = default;

  // Throws IntegrityError on duplicate ids or a video whose channel is
  // unknown. Channels whose raw label normalizes to nothing are dropped,
  // together with their videos, and recorded in warnings().
  static Catalog build(std::vector<Channel> channels, std::vector<Video> videos,
                       std::vector<std::string> excluded_channel_ids = {});

  // Episodes of videos not in the catalog are skipped with a warning;
  // duplicate (video, index) pairs throw IntegrityError.
  void attach_episodes(std::vector<SpeechEpisode> episodes);

  std::span<const Channel> channels() const { return channels_; }
  std::span<const Video> videos() const { return videos_; }

  const Channel* find_channel(const std::string& id) const;
  const Video* find_video(const std::string& id) const;
  const Channel& channel_of(const Video& video) const;

  // Sorted by video id.
  std::vector<const Video*> videos_of(const std::string& channel_id) const;
  // Sorted by episode index; empty when none are attached.
  std::span<const SpeechEpisode> episodes_of(const std::string& video_id) const;
  bool has_episodes() const { return episode_count_ > 0; }

  CatalogSummary summary() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.channels_ == b.channels_ && a.videos_ == b.videos_ && a.episodes_ == b.episodes_;
  }

 private:
  std::vector<Channel> channels_;
  std::vector<Video> videos_;
  std::map<std::string, std::size_t> channel_index_;
  std::map<std::string, std::size_t> video_index_;
  std::map<std::string, std::vector<std::size_t>> channel_videos_;
  std::map<std::string, std::vector<SpeechEpisode>> episodes_;
  std::size_t episode_count_ = 0;
  std::vector<std::string> warnings_;
};

// JSON-lines manifests. channels.jsonl rows:
//   {"id","name","youtube_url","label_raw","description"?,"stats"?:{"views","video_count","subscribers"}}
// videos.jsonl rows:
//   {"id","channel_id","title","description","tags":[...],"views","likes","dislikes","comments","duration_s"}
// Malformed rows throw ParseError with the 1-based line number.
Catalog load_manifest(std::istream& channels, std::istream& videos);
Catalog load_manifest(const std::filesystem::path& channel_file,
                      const std::filesystem::path& video_file);

std::vector<SpeechEpisode> load_episodes(std::istream& in);
std::vector<SpeechEpisode> load_episodes(const std::filesystem::path& file);

std::string channel_to_json_line(const Channel& channel);
std::string video_to_json_line(const Video& video);

}  // namespace mediabias
