#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mediabias/subtitles.hpp"

namespace mediabias {

inline constexpr std::int64_t kEpisodeLengthMs = 15000;
inline constexpr std::int64_t kMinEpisodeGapMs = 1000;
inline constexpr int kMaxEpisodesPerVideo = 5;

struct SpeechEpisode {
  std::string video_id;
  int index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  friend bool operator==(const SpeechEpisode&, const SpeechEpisode&) = default;
};

// Greedy left-to-right scan over cue start times. A start s becomes episode
// [s, s + 15000] when the episode fits inside the audio and s is at least
// 1000 ms after the previous episode's end. Stops after five episodes.
// Throws PreconditionError when audio_duration_ms <= 0.
std::vector<SpeechEpisode> extract_episodes(const CaptionTrack& track,
                                            std::int64_t audio_duration_ms);

// {"video_id":..,"index":..,"start_ms":..,"end_ms":..}
std::string episode_to_json_line(const SpeechEpisode& episode);
SpeechEpisode episode_from_json_line(const std::string& line);

}  // namespace mediabias
