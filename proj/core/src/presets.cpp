#include "mediabias/presets.hpp"

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

using G = FeatureGroup;

std::vector<FeatureGroup> with_text(std::vector<FeatureGroup> extra) {
  auto groups = text_groups();
  groups.insert(groups.end(), extra.begin(), extra.end());
  return canonical_groups(std::move(groups));
}

Preset feature_row(int row, std::string type, std::string title, std::string name,
                   std::vector<FeatureGroup> groups) {
  Preset p;
  p.section = PresetSection::kFeatureComparison;
  p.row = row;
  p.type = std::move(type);
  p.title = std::move(title);
  p.spec.name = std::move(name);
  p.spec.groups = canonical_groups(std::move(groups));
  return p;
}

Preset ablation_row(int row, std::string name, Level level, AggregationMethod aggregation) {
  Preset p;
  p.section = PresetSection::kAggregationAblation;
  p.row = row;
  p.type = level == Level::kVideo ? "Video" : "Episodes";
  p.title = aggregation == AggregationMethod::kAverage ? "Average" : "Maximum";
  p.spec.name = std::move(name);
  p.spec.groups = with_text({G::kNumericMeta, G::kOpensmileIs09});
  p.spec.level = level;
  p.spec.aggregation = aggregation;
  return p;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  Preset baseline;
  baseline.section = PresetSection::kFeatureComparison;
  baseline.row = 1;
  baseline.title = "Baseline";
  baseline.spec.name = "baseline";
  baseline.spec.majority_baseline = true;
  out.push_back(baseline);

  out.push_back(feature_row(2, "Text", "NELA (title, description)", "nela", {G::kNela}));
  out.push_back(feature_row(3, "Meta", "Numerical", "meta", {G::kNumericMeta}));
  out.push_back(feature_row(4, "Audio", "i-vectors", "ivectors", {G::kIvectors}));
  out.push_back(feature_row(5, "Audio", "openSMILE", "opensmile", {G::kOpensmileIs09}));
  out.push_back(
      feature_row(6, "Text", "BERT (captions)", "bert_captions", {G::kBertCaptions}));
  out.push_back(feature_row(7, "Text", "BERT (title, description, tags)", "bert_text",
                            {G::kBertTitleDescTags}));
  out.push_back(
      feature_row(8, "Combined", "Text + Meta", "text_meta", with_text({G::kNumericMeta})));
  out.push_back(feature_row(9, "Combined", "Text + Meta + i-vectors", "text_meta_ivec",
                            with_text({G::kNumericMeta, G::kIvectors})));
  out.push_back(feature_row(10, "Combined", "Text + Meta + Audio", "text_meta_audio",
                            with_text({G::kNumericMeta, G::kIvectors, G::kOpensmileIs09})));
  out.push_back(feature_row(11, "Combined", "Text + Meta + openSMILE", "text_meta_opensmile",
                            with_text({G::kNumericMeta, G::kOpensmileIs09})));

  out.push_back(ablation_row(1, "video_avg", Level::kVideo, AggregationMethod::kAverage));
  out.push_back(ablation_row(2, "video_max", Level::kVideo, AggregationMethod::kMaximum));
  out.push_back(ablation_row(3, "episode_avg", Level::kEpisode, AggregationMethod::kAverage));
  out.push_back(ablation_row(4, "episode_max", Level::kEpisode, AggregationMethod::kMaximum));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build_presets();
  return table;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.spec.name == name) return &p;
  }
  return nullptr;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.push_back(p.spec.name);
  return out;
}

std::vector<std::string> ablation_preset_names() {
  return {"video_avg", "video_max", "episode_avg", "episode_max"};
}

std::vector<FeatureGroup> text_groups() {
  return {G::kBertTitleDescTags, G::kBertCaptions, G::kNela};
}

ExperimentSpec parse_custom_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = text.find(':');
    parts.push_back(trim(text.substr(0, colon)));
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  if (parts.size() < 2 || parts.size() > 4 || parts[0].empty()) {
    throw ConfigError("custom experiment must look like name:groups[:level[:aggregation]]");
  }
  if (find_preset(parts[0])) {
    throw ConfigError("custom experiment name '" + std::string(parts[0]) +
                      "' collides with a preset");
  }
  ExperimentSpec spec;
  spec.name = std::string(parts[0]);
  spec.groups = parse_group_list(parts[1]);
  if (parts.size() > 2) {
    const auto level = parse_level(parts[2]);
    if (!level) throw ConfigError("unknown level '" + std::string(parts[2]) + "'");
    spec.level = *level;
  }
  if (parts.size() > 3) {
    const auto agg = parse_aggregation(parts[3]);
    if (!agg) throw ConfigError("unknown aggregation '" + std::string(parts[3]) + "'");
    spec.aggregation = *agg;
  }
  return spec;
}

ExperimentSpec resolve_experiment(std::string_view text) {
  if (text.find(':') != std::string_view::npos) return parse_custom_spec(text);
  if (const auto* p = find_preset(text)) return p->spec;
  std::string valid;
  for (const auto& name : preset_names()) valid += (valid.empty() ? "" : ", ") + name;
  throw ConfigError("unknown experiment '" + std::string(text) + "'; valid presets: " + valid);
}

}  // namespace mediabias
