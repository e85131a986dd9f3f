#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace mediabias {

// Seven-point annotation as published by Media Bias/Fact Check.
enum class RawMbfcLabel {
  kExtremeLeft,
  kLeft,
  kCenterLeft,
  kCenter,
  kCenterRight,
  kRight,
  kExtremeRight,
};

inline constexpr std::array<RawMbfcLabel, 7> kAllRawLabels = {
    RawMbfcLabel::kExtremeLeft, RawMbfcLabel::kLeft,  RawMbfcLabel::kCenterLeft,
    RawMbfcLabel::kCenter,      RawMbfcLabel::kCenterRight, RawMbfcLabel::kRight,
    RawMbfcLabel::kExtremeRight};

// Prediction target. The integer codes are part of the contract: argmax ties
// resolve toward the lowest code.
enum class BiasLabel : int { kLeft = 0, kCenter = 1, kRight = 2 };

inline constexpr int kNumClasses = 3;
inline constexpr std::array<BiasLabel, kNumClasses> kAllLabels = {
    BiasLabel::kLeft, BiasLabel::kCenter, BiasLabel::kRight};

constexpr int code(BiasLabel label) { return static_cast<int>(label); }

std::optional<BiasLabel> label_from_code(int code);

// Extreme labels fold into their side; center-left and center-right are
// dropped (nullopt).
std::optional<BiasLabel> normalize_label(RawMbfcLabel raw);

// Accepts "extreme-left", "center-right", ... Case-insensitive; '_' and ' '
// are accepted in place of '-'.
std::optional<RawMbfcLabel> parse_raw_label(std::string_view text);
std::optional<BiasLabel> parse_bias_label(std::string_view text);

std::string_view to_string(RawMbfcLabel raw);
std::string_view to_string(BiasLabel label);

}  // namespace mediabias
