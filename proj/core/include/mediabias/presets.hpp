#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mediabias/experiment.hpp"

namespace mediabias {

enum class PresetSection { kFeatureComparison, kAggregationAblation };

// A named configuration from the results matrix; `row` is its 1-based
// position within its section.
struct Preset {
  PresetSection section = PresetSection::kFeatureComparison;
  int row = 0;
  std::string type;   // "", "Text", "Meta", "Audio", "Combined", or the ablation level
  std::string title;  // human-readable experiment name
  ExperimentSpec spec;
};

// Feature comparison rows 1-11 followed by ablation rows 1-4.
const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);
std::vector<std::string> preset_names();
std::vector<std::string> ablation_preset_names();

// Textual groups used by the "Text" combinations.
std::vector<FeatureGroup> text_groups();

// "<name>:<group>+<group>[:<level>[:<aggregation>]]", e.g.
// "audio:ivectors+opensmile_is09:episode:maximum". Throws ConfigError.
ExperimentSpec parse_custom_spec(std::string_view text);

// A preset name, or a custom spec when the text contains ':'. Throws
// ConfigError listing valid preset names for unknown names.
ExperimentSpec resolve_experiment(std::string_view text);

}  // namespace mediabias
