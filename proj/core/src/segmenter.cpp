#include "mediabias/segmenter.hpp"

#include <algorithm>
#include <optional>

#include <json.hpp>

#include "mediabias/error.hpp"

namespace mediabias {

std::vector<SpeechEpisode> extract_episodes(const CaptionTrack& track,
                                            std::int64_t audio_duration_ms) {
  if (audio_duration_ms <= 0) {
    throw PreconditionError("audio duration must be positive for video '" + track.video_id + "'");
  }

  std::vector<std::int64_t> starts;
  starts.reserve(track.cues.size());
  for (const auto& cue : track.cues) starts.push_back(cue.start_ms);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  std::vector<SpeechEpisode> episodes;
  std::optional<std::int64_t> previous_end;
  for (const auto start : starts) {
    if (episodes.size() == kMaxEpisodesPerVideo) break;
    if (start < 0) continue;
    // Starts are sorted, so once one overruns the audio every later one does.
    if (start + kEpisodeLengthMs > audio_duration_ms) break;
    if (previous_end && start < *previous_end + kMinEpisodeGapMs) continue;
    episodes.push_back({track.video_id, static_cast<int>(episodes.size()), start,
                        start + kEpisodeLengthMs});
    previous_end = start + kEpisodeLengthMs;
  }
  return episodes;
}

std::string episode_to_json_line(const SpeechEpisode& episode) {
  nlohmann::ordered_json j;
  j["video_id"] = episode.video_id;
  j["index"] = episode.index;
  j["start_ms"] = episode.start_ms;
  j["end_ms"] = episode.end_ms;
  return j.dump();
}

SpeechEpisode episode_from_json_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    SpeechEpisode e;
    e.video_id = j.at("video_id").get<std::string>();
    e.index = j.at("index").get<int>();
    e.start_ms = j.at("start_ms").get<std::int64_t>();
    e.end_ms = j.at("end_ms").get<std::int64_t>();
    if (e.index < 0 || e.index >= kMaxEpisodesPerVideo) {
      throw IntegrityError("episode index out of range for video '" + e.video_id + "'");
    }
    if (e.end_ms - e.start_ms != kEpisodeLengthMs || e.start_ms < 0) {
      throw IntegrityError("episode of video '" + e.video_id + "' is not 15000 ms long");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(1, std::string("episode record: ") + ex.what());
  }
}

}  // namespace mediabias
