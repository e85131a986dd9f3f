#include "mediabias/labels.hpp"

#include <cctype>
#include <string>

namespace mediabias {
namespace {

std::string canonical(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '_' || c == ' ') c = '-';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::optional<BiasLabel> label_from_code(int code) {
  if (code < 0 || code >= kNumClasses) return std::nullopt;
  return static_cast<BiasLabel>(code);
}

std::optional<BiasLabel> normalize_label(RawMbfcLabel raw) {
  switch (raw) {
    case RawMbfcLabel::kExtremeLeft:
    case RawMbfcLabel::kLeft:
      return BiasLabel::kLeft;
    case RawMbfcLabel::kCenter:
      return BiasLabel::kCenter;
    case RawMbfcLabel::kRight:
    case RawMbfcLabel::kExtremeRight:
      return BiasLabel::kRight;
    case RawMbfcLabel::kCenterLeft:
    case RawMbfcLabel::kCenterRight:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<RawMbfcLabel> parse_raw_label(std::string_view text) {
  const auto key = canonical(text);
  for (auto raw : kAllRawLabels) {
    if (key == to_string(raw)) return raw;
  }
  return std::nullopt;
}

std::optional<BiasLabel> parse_bias_label(std::string_view text) {
  const auto key = canonical(text);
  for (auto label : kAllLabels) {
    if (key == to_string(label)) return label;
  }
  return std::nullopt;
}

std::string_view to_string(RawMbfcLabel raw) {
  switch (raw) {
    case RawMbfcLabel::kExtremeLeft: return "extreme-left";
    case RawMbfcLabel::kLeft: return "left";
    case RawMbfcLabel::kCenterLeft: return "center-left";
    case RawMbfcLabel::kCenter: return "center";
    case RawMbfcLabel::kCenterRight: return "center-right";
    case RawMbfcLabel::kRight: return "right";
    case RawMbfcLabel::kExtremeRight: return "extreme-right";
  }
  return "?";
}

std::string_view to_string(BiasLabel label) {
  switch (label) {
    case BiasLabel::kLeft: return "left";
    case BiasLabel::kCenter: return "center";
    case BiasLabel::kRight: return "right";
  }
  return "?";
}

}  // namespace mediabias
