#include "mediabias/subtitles.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

struct Line {
  std::size_t number;  // 1-based
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<Line> split_lines(std::string_view raw) {
  if (raw.size() >= 3 && static_cast<unsigned char>(raw[0]) == 0xEF &&
      static_cast<unsigned char>(raw[1]) == 0xBB && static_cast<unsigned char>(raw[2]) == 0xBF) {
    raw.remove_prefix(3);
  }
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!raw.empty()) {
    const auto nl = raw.find('\n');
    std::string_view line = raw.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, line});
    if (nl == std::string_view::npos) break;
    raw.remove_prefix(nl + 1);
  }
  return lines;
}

// Parses a run of decimal digits; returns false if empty or too long.
bool parse_digits(std::string_view s, std::int64_t& out, std::size_t max_len = 9) {
  if (s.empty() || s.size() > max_len) return false;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

// SRT: HH:MM:SS,mmm. WebVTT: [HH:]MM:SS.mmm.
bool parse_timestamp(std::string_view s, SubtitleFormat format, std::int64_t& ms) {
  const char frac_sep = format == SubtitleFormat::kSrt ? ',' : '.';
  const auto sep = s.rfind(frac_sep);
  if (sep == std::string_view::npos) return false;
  std::int64_t millis;
  if (s.size() - sep - 1 != 3 || !parse_digits(s.substr(sep + 1), millis)) return false;

  std::vector<std::string_view> fields;
  std::string_view clock = s.substr(0, sep);
  while (true) {
    const auto colon = clock.find(':');
    fields.push_back(clock.substr(0, colon));
    if (colon == std::string_view::npos) break;
    clock.remove_prefix(colon + 1);
  }
  const bool hours_optional = format == SubtitleFormat::kWebVtt;
  if (fields.size() != 3 && !(hours_optional && fields.size() == 2)) return false;

  std::int64_t hours = 0, minutes, seconds;
  std::size_t i = 0;
  if (fields.size() == 3 && !parse_digits(fields[i++], hours)) return false;
  if (fields[i].size() != 2 || !parse_digits(fields[i++], minutes) || minutes >= 60) return false;
  if (fields[i].size() != 2 || !parse_digits(fields[i], seconds) || seconds >= 60) return false;
  ms = ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis;
  return true;
}

void parse_timing_line(const Line& line, SubtitleFormat format, CaptionCue& cue) {
  const auto arrow = line.text.find("-->");
  const std::string_view left = trim(line.text.substr(0, arrow));
  std::string_view right = trim(line.text.substr(arrow + 3));
  // WebVTT cue settings follow the end timestamp.
  if (const auto space = right.find_first_of(" \t"); space != std::string_view::npos) {
    if (format == SubtitleFormat::kSrt) {
      throw ParseError(line.number, "malformed timestamp '" + std::string(right) + "'");
    }
    right = right.substr(0, space);
  }
  if (!parse_timestamp(left, format, cue.start_ms)) {
    throw ParseError(line.number, "malformed timestamp '" + std::string(left) + "'");
  }
  if (!parse_timestamp(right, format, cue.end_ms)) {
    throw ParseError(line.number, "malformed timestamp '" + std::string(right) + "'");
  }
  if (cue.end_ms < cue.start_ms) {
    throw ParseError(line.number, "cue ends before it starts");
  }
}

bool is_vtt_metadata_block(std::string_view first) {
  auto starts = [&](std::string_view kw) {
    return first.substr(0, kw.size()) == kw &&
           (first.size() == kw.size() || first[kw.size()] == ' ' || first[kw.size()] == '\t');
  };
  return starts("NOTE") || starts("STYLE") || starts("REGION");
}

}  // namespace

std::optional<SubtitleFormat> parse_subtitle_format(std::string_view name) {
  if (name == "srt") return SubtitleFormat::kSrt;
  if (name == "webvtt" || name == "vtt") return SubtitleFormat::kWebVtt;
  return std::nullopt;
}

std::string_view to_string(SubtitleFormat format) {
  return format == SubtitleFormat::kSrt ? "srt" : "webvtt";
}

std::vector<CaptionCue> normalize_cues(std::vector<CaptionCue> cues) {
  std::erase_if(cues, [](const CaptionCue& c) { return c.end_ms <= c.start_ms; });
  std::stable_sort(cues.begin(), cues.end(), [](const CaptionCue& a, const CaptionCue& b) {
    return a.start_ms != b.start_ms ? a.start_ms < b.start_ms : a.end_ms < b.end_ms;
  });

  std::vector<CaptionCue> merged;
  for (auto& cue : cues) {
    if (!merged.empty() && cue.start_ms < merged.back().end_ms) {
      auto& last = merged.back();
      last.end_ms = std::max(last.end_ms, cue.end_ms);
      if (!cue.text.empty()) {
        if (!last.text.empty()) last.text += '\n';
        last.text += cue.text;
      }
    } else {
      merged.push_back(std::move(cue));
    }
  }
  return merged;
}

CaptionTrack parse_subtitles(std::string_view raw, SubtitleFormat format, std::string video_id) {
  const auto lines = split_lines(raw);
  std::vector<CaptionCue> cues;

  std::size_t i = 0;
  bool first_block = true;
  while (i < lines.size()) {
    if (trim(lines[i].text).empty()) {
      ++i;
      continue;
    }
    std::vector<Line> block;
    while (i < lines.size() && !trim(lines[i].text).empty()) block.push_back(lines[i++]);

    const bool was_first = std::exchange(first_block, false);
    if (format == SubtitleFormat::kWebVtt) {
      const auto head = trim(block.front().text);
      if (was_first && head.substr(0, 6) == "WEBVTT") continue;
      if (is_vtt_metadata_block(head)) continue;
    }

    std::size_t timing = 0;
    if (block[0].text.find("-->") == std::string_view::npos) {
      if (block.size() < 2 || block[1].text.find("-->") == std::string_view::npos) {
        throw ParseError(block.size() < 2 ? block[0].number : block[1].number,
                         "expected a timing line ('start --> end')");
      }
      timing = 1;
    }

    CaptionCue cue;
    parse_timing_line(block[timing], format, cue);
    for (std::size_t k = timing + 1; k < block.size(); ++k) {
      if (!cue.text.empty()) cue.text += '\n';
      cue.text += trim(block[k].text);
    }
    cues.push_back(std::move(cue));
  }

  return CaptionTrack{std::move(video_id), normalize_cues(std::move(cues))};
}

std::string format_timestamp(std::int64_t ms, SubtitleFormat format) {
  const auto hours = ms / 3'600'000;
  const auto minutes = ms / 60'000 % 60;
  const auto seconds = ms / 1000 % 60;
  const auto millis = ms % 1000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld%c%03lld", static_cast<long long>(hours),
                static_cast<long long>(minutes), static_cast<long long>(seconds),
                format == SubtitleFormat::kSrt ? ',' : '.', static_cast<long long>(millis));
  return buf;
}

std::string serialize_subtitles(const CaptionTrack& track, SubtitleFormat format) {
  std::ostringstream out;
  if (format == SubtitleFormat::kWebVtt) out << "WEBVTT\n\n";
  std::size_t index = 1;
  for (const auto& cue : track.cues) {
    if (format == SubtitleFormat::kSrt) out << index++ << '\n';
    out << format_timestamp(cue.start_ms, format) << " --> " << format_timestamp(cue.end_ms, format)
        << '\n';
    if (!cue.text.empty()) out << cue.text << '\n';
    out << '\n';
  }
  return out.str();
}

}  // namespace mediabias
