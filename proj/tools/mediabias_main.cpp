#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mediabias/mediabias.hpp"

namespace fs = std::filesystem;
using namespace mediabias;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> missing;
  std::optional<fs::path> out;
  bool parallel_folds = false;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void warn(const std::string& msg) { std::cerr << "warning: " << one_line(msg) << '\n'; }

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + file.string() + "'");
}

RunConfig load_config(const fs::path& file, const Overrides& o) {
  auto cfg = load_run_config(file);
  if (o.seed) cfg.options.seed = *o.seed;
  if (o.missing) cfg.options.missing = *parse_missing_policy(*o.missing);
  if (o.out) cfg.out = *o.out;
  if (o.parallel_folds) cfg.options.parallel_folds = true;
  return cfg;
}

struct Data {
  Catalog catalog;
  std::optional<FeatureStore> store;
};

Data load_data(const RunConfig& cfg, bool need_features) {
  Data d{load_manifest(cfg.channels, cfg.videos), std::nullopt};
  if (cfg.episodes) d.catalog.attach_episodes(load_episodes(*cfg.episodes));
  for (const auto& w : d.catalog.warnings()) warn(w);
  if (need_features) {
    if (cfg.features.empty()) throw ConfigError("config has no 'features' path");
    std::ifstream in(cfg.features);
    if (!in) throw IoError("cannot read '" + cfg.features.string() + "'");
    d.store = FeatureStore::ingest(in, d.catalog);
  }
  return d;
}

std::vector<ExperimentSpec> resolve_all(const std::vector<std::string>& names) {
  std::vector<ExperimentSpec> out;
  for (const auto& n : names) out.push_back(resolve_experiment(n));
  return out;
}

void print_summary(std::ostream& os, const CatalogSummary& s) {
  os << "channels " << s.channels << " (left " << s.channels_per_class[0] << ", center "
     << s.channels_per_class[1] << ", right " << s.channels_per_class[2] << ")\n"
     << "videos   " << s.videos << '\n'
     << "episodes " << s.episodes << '\n';
}

// ---- segment -------------------------------------------------------------

int cmd_segment(const fs::path& subtitle_dir, const fs::path& durations_file,
                const std::string& format_name, const fs::path& out_dir) {
  const auto format = *parse_subtitle_format(format_name);
  if (!fs::is_directory(subtitle_dir)) {
    throw IoError("subtitle directory '" + subtitle_dir.string() + "' does not exist");
  }

  std::map<std::string, std::int64_t> durations;
  {
    std::istringstream in(read_file(durations_file));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        durations[j.at("video_id").get<std::string>()] = j.at("duration_ms").get<std::int64_t>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, "durations file: " + std::string(e.what()));
      }
    }
  }

  const std::string ext = format == SubtitleFormat::kSrt ? ".srt" : ".vtt";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(subtitle_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::ostringstream lines;
  std::size_t processed = 0, failed = 0, emitted = 0;
  for (const auto& file : files) {
    const auto video_id = file.stem().string();
    try {
      const auto it = durations.find(video_id);
      if (it == durations.end()) throw IntegrityError("no duration for video '" + video_id + "'");
      const auto track = parse_subtitles(read_file(file), format, video_id);
      for (const auto& e : extract_episodes(track, it->second)) {
        lines << episode_to_json_line(e) << '\n';
        ++emitted;
      }
      ++processed;
    } catch (const Error& e) {
      warn(file.filename().string() + ": " + e.kind() + ": " + e.what());
      ++failed;
    }
  }
  if (!files.empty() && processed == 0) {
    throw IoError("all " + std::to_string(files.size()) + " subtitle files failed");
  }
  write_file(out_dir / "episodes.jsonl", lines.str());

  std::cout << "videos processed  " << processed << '\n'
            << "videos failed     " << failed << '\n'
            << "episodes emitted  " << emitted << '\n';
  std::ostringstream mean;
  mean.precision(2);
  mean << std::fixed << (processed == 0 ? 0.0 : static_cast<double>(emitted) / processed);
  std::cout << "mean per video    " << mean.str() << '\n';
  return 0;
}

// ---- ingest / folds ------------------------------------------------------

int cmd_ingest(const RunConfig& cfg) {
  const auto d = load_data(cfg, !cfg.features.empty());
  print_summary(std::cout, d.catalog.summary());
  if (d.store) {
    for (const auto& info : kFeatureGroups) {
      std::cout << "feature " << info.name << ' ' << d.store->count(info.group) << " records\n";
    }
  }
  return 0;
}

int cmd_folds(const RunConfig& cfg) {
  const auto d = load_data(cfg, false);
  const auto folds = stratified_folds(d.catalog, cfg.options.folds, cfg.options.seed);
  write_file(cfg.out / "folds.json", folds_to_json(folds, cfg.options.seed) + "\n");
  std::cout << "fold  left  center  right\n";
  for (int f = 0; f < folds.k; ++f) {
    std::array<int, kNumClasses> counts{};
    for (const auto& id : folds.test_channels(f)) ++counts[code(d.catalog.find_channel(id)->label)];
    std::cout << std::setw(4) << f << std::setw(6) << counts[0] << std::setw(8) << counts[1]
              << std::setw(7) << counts[2] << '\n';
  }
  return 0;
}

// ---- train ---------------------------------------------------------------

int cmd_train(const RunConfig& cfg, const std::string& name) {
  const auto spec = resolve_experiment(name);
  if (spec.majority_baseline) throw ConfigError("the baseline has no model to train");
  const auto d = load_data(cfg, true);
  const auto instances = distant_label_instances(d.catalog, spec.level);
  if (instances.empty()) throw PreconditionError("no training instances");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(instances.size()),
                    static_cast<Eigen::Index>(total_dim(spec.groups)));
  std::vector<BiasLabel> labels;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto row = inst.episode_index
                         ? assemble_episode_raw(*d.store, inst.video_id, *inst.episode_index,
                                                spec.groups, cfg.options.missing)
                         : assemble_raw(*d.store, inst.video_id, spec.groups, cfg.options.missing);
    x.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
    labels.push_back(inst.label);
  }

  Checkpoint ck;
  ck.groups = spec.groups;
  ck.level = spec.level;
  ck.normalizer = Normalizer::fit(x);
  ck.normalizer.apply_rows(x);
  ck.config = cfg.options.train;
  ck.config.seed = cfg.options.seed;
  ck.params = train(x, labels, ck.config);
  const auto file = cfg.out / ("model_" + spec.name + ".json");
  save_checkpoint(ck, file);
  std::cout << "trained " << spec.name << " on " << instances.size() << " instances -> "
            << file.string() << '\n';
  return 0;
}

// ---- evaluate / ablate / report -----------------------------------------

int run_experiments(const RunConfig& cfg, const std::vector<ExperimentSpec>& specs) {
  const bool need_features = std::any_of(specs.begin(), specs.end(),
                                         [](const auto& s) { return !s.majority_baseline; });
  const auto d = load_data(cfg, need_features);
  const auto folds = stratified_folds(d.catalog, cfg.options.folds, cfg.options.seed);
  const FeatureStore empty;
  for (const auto& spec : specs) {
    const auto report = run_experiment(spec, d.catalog, d.store ? *d.store : empty, folds, cfg.options);
    write_file(cfg.out / ("report_" + spec.name + ".json"), report_to_json(report));
    write_file(cfg.out / ("report_" + spec.name + ".txt"), report_to_text(report));
    std::ostringstream acc;
    acc.precision(2);
    acc << std::fixed << 100.0 * report.accuracy();
    std::cout << spec.name << "  " << acc.str() << "%  (" << report.correct() << "/"
              << report.total() << ")\n";
  }
  return 0;
}

int cmd_report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("report directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("report_") && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ReportSummary> summaries;
  for (const auto& f : files) {
    try {
      summaries.push_back(summary_from_json(read_file(f)));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), f.filename().string() + ": " + e.what());
    }
  }
  const auto table = summary_table(summaries);
  write_file(dir / "summary.txt", table);
  std::cout << table;
  return 0;
}

// ---- synth ---------------------------------------------------------------

int cmd_synth(const fs::path& out, std::uint64_t seed, const std::string& groups,
              double separation) {
  SyntheticOptions opt;
  opt.seed = seed;
  opt.separation = separation;
  opt.groups = parse_group_list(groups);
  opt.background = SyntheticOptions::Background::kNoise;
  const auto data = make_synthetic(opt);
  data.write(out);
  write_file(out / "run.toml",
             "channels = \"channels.jsonl\"\n"
             "videos = \"videos.jsonl\"\n"
             "episodes = \"episodes.jsonl\"\n"
             "features = \"features.jsonl\"\n"
             "out = \"reports\"\n"
             "experiments = [\"baseline\", \"synthetic:" + join_groups(opt.groups) + "\"]\n"
             "seed = " + std::to_string(seed) + "\n");
  std::cout << "wrote " << data.channels.size() << " channels, " << data.videos.size()
            << " videos, " << data.records.size() << " feature records to " << out.string() << '\n';
  return 0;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Seed for fold shuffling and training");
  cmd->add_option("--missing", o.missing, "Missing-feature policy")
      ->check(CLI::IsMember({"error", "zero_fill"}));
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--parallel-folds", o.parallel_folds, "Train the folds concurrently");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel-level political bias classification from video features"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mediabias 0.1.0");

  Overrides o;
  fs::path config;
  std::vector<std::string> experiments;
  std::string train_name = "text_meta_opensmile";

  fs::path subtitle_dir, durations, segment_out = ".";
  std::string format;
  auto* segment = app.add_subcommand("segment", "Extract speech episodes from subtitle files");
  segment->add_option("subtitle_dir", subtitle_dir, "Directory of subtitle files")->required();
  segment->add_option("--durations", durations, "JSON lines of {video_id, duration_ms}")
      ->required()
      ->check(CLI::ExistingFile);
  segment->add_option("--format", format, "Subtitle format")
      ->required()
      ->check(CLI::IsMember({"srt", "webvtt"}));
  segment->add_option("--out", segment_out, "Directory for episodes.jsonl");

  auto with_config = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", config, "Flat TOML run configuration")->required();
    add_overrides(cmd, o);
    return cmd;
  };
  auto* ingest = with_config("ingest", "Validate the manifest and feature files");
  auto* folds = with_config("folds", "Write the stratified channel folds");
  auto* train_cmd = with_config("train", "Train one experiment on all channels and save the model");
  train_cmd->add_option("--experiment", train_name, "Preset or custom experiment");
  auto* evaluate = with_config("evaluate", "Cross-validate experiments and write reports");
  evaluate->alias("run");
  evaluate->add_option("experiments", experiments,
                       "Presets or name:groups[:level[:aggregation]]; default from config");
  auto* ablate = with_config("ablate", "Run the level/aggregation ablation presets");

  fs::path report_dir;
  auto* report = app.add_subcommand("report", "Tabulate the reports in a directory");
  report->add_option("dir", report_dir, "Directory containing report_*.json")->required();

  fs::path synth_out;
  std::uint64_t synth_seed = 1;
  std::string synth_groups = "nela+numeric_meta+opensmile_is09";
  double synth_sep = 1.0;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset and run config");
  synth->add_option("out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed);
  synth->add_option("--groups", synth_groups);
  synth->add_option("--separation", synth_sep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (*segment) return cmd_segment(subtitle_dir, durations, format, segment_out);
    if (*report) return cmd_report(report_dir);
    if (*synth) return cmd_synth(synth_out, synth_seed, synth_groups, synth_sep);

    const auto cfg = load_config(config, o);
    if (*ingest) return cmd_ingest(cfg);
    if (*folds) return cmd_folds(cfg);
    if (*train_cmd) return cmd_train(cfg, train_name);
    if (*ablate) return run_experiments(cfg, resolve_all(ablation_preset_names()));
    if (*evaluate) {
      auto names = experiments.empty() ? cfg.experiments : experiments;
      if (names.empty()) {
        for (const auto& p : presets()) {
          if (p.section == PresetSection::kFeatureComparison) names.push_back(p.spec.name);
        }
      }
      return run_experiments(cfg, resolve_all(names));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
