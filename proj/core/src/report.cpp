#include "mediabias/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mediabias/error.hpp"
#include "mediabias/presets.hpp"

namespace mediabias {
namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string report_to_json(const Report& report) {
  nlohmann::ordered_json j;
  const auto& spec = report.spec;
  j["experiment"] = spec.name;
  j["majority_baseline"] = spec.majority_baseline;
  auto groups = nlohmann::ordered_json::array();
  for (auto g : spec.groups) groups.push_back(std::string(to_string(g)));
  j["groups"] = std::move(groups);
  j["input_dim"] = total_dim(spec.groups);
  j["level"] = std::string(to_string(spec.level));
  j["aggregation"] = std::string(to_string(spec.aggregation));
  j["seed"] = report.options.seed;
  j["k"] = report.folds.size();
  j["missing"] = std::string(to_string(report.options.missing));
  const auto& t = report.options.train;
  j["train"] = {{"epochs", t.epochs},
                {"batch_size", t.batch_size},
                {"dropout_rate", t.dropout_rate},
                {"learning_rate", t.learning_rate},
                {"adagrad_epsilon", t.adagrad_epsilon}};
  j["correct"] = report.correct();
  j["total"] = report.total();
  j["accuracy"] = report.accuracy();
  j["macro_fold_accuracy"] = report.macro_fold_accuracy();

  auto folds = nlohmann::ordered_json::array();
  for (const auto& f : report.folds) {
    nlohmann::ordered_json fj;
    fj["fold"] = f.fold;
    fj["train_channels"] = f.train_channels;
    fj["train_instances"] = f.train_instances;
    fj["test_channels"] = f.test_channels;
    fj["correct"] = f.correct;
    fj["accuracy"] = f.accuracy();
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);

  auto channels = nlohmann::ordered_json::array();
  for (const auto& c : report.channels) {
    nlohmann::ordered_json cj;
    cj["channel_id"] = c.channel_id;
    cj["fold"] = c.fold;
    cj["label"] = std::string(to_string(c.label));
    cj["predicted"] = std::string(to_string(c.predicted));
    cj["posterior"] = c.posterior.p;
    cj["instances"] = c.instances;
    channels.push_back(std::move(cj));
  }
  j["channels"] = std::move(channels);
  return j.dump(2) + "\n";
}

std::string report_to_text(const Report& report) {
  std::ostringstream out;
  const auto& spec = report.spec;
  out << "experiment   " << spec.name;
  if (const auto* p = find_preset(spec.name)) {
    out << "  ("
        << (p->section == PresetSection::kFeatureComparison ? "feature comparison"
                                                            : "aggregation ablation")
        << " row " << p->row << ": "
        << (p->type.empty() ? "" : p->type + " / ") << p->title << ")";
  }
  out << '\n';
  if (spec.majority_baseline) {
    out << "features     none (majority class of the training channels)\n";
  } else {
    out << "features     " << join_groups(spec.groups) << " (" << total_dim(spec.groups)
        << " dims)\n";
    out << "level        " << to_string(spec.level) << '\n';
    out << "aggregation  " << to_string(spec.aggregation) << '\n';
  }
  out << "seed         " << report.options.seed << "\n\n";

  out << "fold  train_channels  train_instances  test_channels  correct  accuracy\n";
  for (const auto& f : report.folds) {
    out << lpad(std::to_string(f.fold), 4) << lpad(std::to_string(f.train_channels), 16)
        << lpad(std::to_string(f.train_instances), 17) << lpad(std::to_string(f.test_channels), 15)
        << lpad(std::to_string(f.correct), 9) << lpad(percent(f.accuracy()), 10) << '\n';
  }
  out << '\n'
      << "accuracy (micro over channels)  " << percent(report.accuracy()) << "  ("
      << report.correct() << "/" << report.total() << ")\n"
      << "accuracy (mean over folds)      " << percent(report.macro_fold_accuracy()) << '\n';
  return out.str();
}

ReportSummary summarize(const Report& report) {
  return {report.spec.name, report.correct(), report.total(), report.accuracy(),
          report.macro_fold_accuracy()};
}

ReportSummary summary_from_json(const std::string& json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    ReportSummary s;
    s.experiment = j.at("experiment").get<std::string>();
    s.correct = j.at("correct").get<std::size_t>();
    s.total = j.at("total").get<std::size_t>();
    s.accuracy = j.at("accuracy").get<double>();
    s.macro_fold_accuracy = j.at("macro_fold_accuracy").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("not a report: ") + e.what());
  }
}

std::string summary_table(const std::vector<ReportSummary>& summaries) {
  std::map<std::string, const ReportSummary*> by_name;
  for (const auto& s : summaries) by_name[s.experiment] = &s;

  std::ostringstream out;
  bool any4 = false, any5 = false;
  for (const auto& p : presets()) {
    any4 |= p.section == PresetSection::kFeatureComparison && by_name.contains(p.spec.name);
    any5 |= p.section == PresetSection::kAggregationAblation && by_name.contains(p.spec.name);
  }

  auto row = [&](const std::string& num, const std::string& a, const std::string& b,
                 const ReportSummary& s) {
    out << pad(num, 4) << pad(a, 10) << pad(b, 36) << lpad(percent(s.accuracy), 8) << '\n';
  };

  if (any4) {
    out << "Feature comparison\n" << pad("#", 4) << pad("Type", 10) << pad("Experiment", 36)
        << lpad("Accuracy", 8) << '\n';
    for (const auto& p : presets()) {
      if (p.section != PresetSection::kFeatureComparison) continue;
      if (const auto it = by_name.find(p.spec.name); it != by_name.end()) {
        row(std::to_string(p.row), p.type, p.title, *it->second);
      }
    }
  }
  if (any5) {
    if (any4) out << '\n';
    out << "Aggregation ablation\n" << pad("#", 4) << pad("Level", 10) << pad("Aggregation", 36)
        << lpad("Accuracy", 8) << '\n';
    for (const auto& p : presets()) {
      if (p.section != PresetSection::kAggregationAblation) continue;
      if (const auto it = by_name.find(p.spec.name); it != by_name.end()) {
        row(std::to_string(p.row), p.type, p.title, *it->second);
      }
    }
  }
  bool header = false;
  for (const auto& [name, s] : by_name) {
    if (find_preset(name)) continue;
    if (!header) {
      if (any4 || any5) out << '\n';
      out << "Custom experiments\n" << pad("#", 4) << pad("Type", 10) << pad("Experiment", 36)
          << lpad("Accuracy", 8) << '\n';
      header = true;
    }
    row("-", "Custom", name, *s);
  }
  return out.str();
}

}  // namespace mediabias
