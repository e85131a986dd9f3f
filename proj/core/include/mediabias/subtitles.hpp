#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mediabias {

enum class SubtitleFormat { kSrt, kWebVtt };

std::optional<SubtitleFormat> parse_subtitle_format(std::string_view name);
std::string_view to_string(SubtitleFormat format);

struct CaptionCue {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;

  friend bool operator==(const CaptionCue&, const CaptionCue&) = default;
};

// Cues are sorted by start, have positive length and do not overlap once a
// track has gone through normalize_cues().
struct CaptionTrack {
  std::string video_id;
  std::vector<CaptionCue> cues;

  friend bool operator==(const CaptionTrack&, const CaptionTrack&) = default;
};

// Sorts cues, drops zero-length ones and merges overlapping cues into the
// union of their intervals with texts joined by a newline. Cues that merely
// touch (next.start == prev.end) are kept apart.
std::vector<CaptionCue> normalize_cues(std::vector<CaptionCue> cues);

// Parses SRT or WebVTT text into a normalized track. A malformed timing line
// or a cue ending before it starts throws ParseError carrying the 1-based line
// number. Empty input yields an empty track. A leading UTF-8 BOM and CRLF line
// endings are accepted.
CaptionTrack parse_subtitles(std::string_view raw, SubtitleFormat format,
                             std::string video_id = {});

// "HH:MM:SS,mmm" for SRT, "HH:MM:SS.mmm" for WebVTT.
std::string format_timestamp(std::int64_t ms, SubtitleFormat format);

std::string serialize_subtitles(const CaptionTrack& track, SubtitleFormat format);

}  // namespace mediabias
