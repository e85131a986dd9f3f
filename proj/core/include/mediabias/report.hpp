#pragma once

#include <string>
#include <vector>

#include "mediabias/experiment.hpp"

namespace mediabias {

// Deterministic, pretty-printed JSON; identical inputs give identical bytes.
std::string report_to_json(const Report& report);

// Per-fold table plus overall accuracy.
std::string report_to_text(const Report& report);

// The headline numbers of a report, as read back from its JSON.
struct ReportSummary {
  std::string experiment;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
  double macro_fold_accuracy = 0.0;
};

ReportSummary summarize(const Report& report);
// Throws ParseError when the text is not a report.
ReportSummary summary_from_json(const std::string& json_text);

// Results laid out like the feature-comparison and ablation tables: preset
// rows in table order, then custom experiments. Accuracy is in percent with
// two decimals.
std::string summary_table(const std::vector<ReportSummary>& summaries);

}  // namespace mediabias
