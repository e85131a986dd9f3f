#include "mediabias/experiment.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "mediabias/error.hpp"

namespace mediabias {
namespace {

struct FoldOutput {
  FoldResult result;
  std::vector<ChannelResult> channels;
};

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Eigen::MatrixXd assemble_instances(const std::vector<Instance>& instances,
                                   const FeatureStore& store, const ExperimentSpec& spec,
                                   MissingPolicy policy) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(instances.size()),
                    static_cast<Eigen::Index>(total_dim(spec.groups)));
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto row = inst.episode_index
                         ? assemble_episode_raw(store, inst.video_id, *inst.episode_index,
                                                spec.groups, policy)
                         : assemble_raw(store, inst.video_id, spec.groups, policy);
    x.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
  }
  return x;
}

FoldOutput run_fold(int fold, const ExperimentSpec& spec, const Catalog& catalog,
                    const FoldAssignment& folds, const std::vector<Instance>& instances,
                    const Eigen::MatrixXd& x, const RunOptions& options) {
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    (folds.fold_of.at(instances[i].channel_id) == fold ? test_rows : train_rows).push_back(i);
  }

  FoldOutput out;
  out.result.fold = fold;
  out.result.train_channels = folds.train_channels(fold).size();
  out.result.train_instances = train_rows.size();
  if (train_rows.empty()) {
    throw PreconditionError("fold " + std::to_string(fold) + " has no training instances");
  }

  Eigen::MatrixXd train_x = select_rows(x, train_rows);
  const auto normalizer = Normalizer::fit(train_x);
  normalizer.apply_rows(train_x);
  std::vector<BiasLabel> train_labels;
  train_labels.reserve(train_rows.size());
  for (auto r : train_rows) train_labels.push_back(instances[r].label);

  TrainConfig config = options.train;
  config.seed = options.seed + static_cast<std::uint64_t>(fold);
  const auto params = train(train_x, train_labels, config);

  Eigen::MatrixXd test_x = select_rows(x, test_rows);
  normalizer.apply_rows(test_x);
  const auto posteriors = predict_rows(params, test_x);

  std::map<std::string, std::vector<Posterior>> by_channel;
  for (std::size_t i = 0; i < test_rows.size(); ++i) {
    by_channel[instances[test_rows[i]].channel_id].push_back(posteriors[i]);
  }
  for (const auto& id : folds.test_channels(fold)) {
    const auto it = by_channel.find(id);
    if (it == by_channel.end()) {
      throw PreconditionError("test channel '" + id + "' has no " +
                              std::string(to_string(spec.level)) + " instances");
    }
    const auto agg = aggregate_posteriors(it->second, spec.aggregation);
    ChannelResult cr;
    cr.channel_id = id;
    cr.fold = fold;
    cr.label = catalog.find_channel(id)->label;
    cr.predicted = agg.label;
    cr.posterior = agg.posterior;
    cr.instances = it->second.size();
    out.result.correct += cr.correct();
    out.channels.push_back(std::move(cr));
  }
  out.result.test_channels = out.channels.size();
  return out;
}

void check_folds_cover_catalog(const Catalog& catalog, const FoldAssignment& folds) {
  if (folds.fold_of.size() != catalog.channels().size()) {
    throw PreconditionError("fold assignment does not cover the catalog's channels");
  }
  for (const auto& c : catalog.channels()) {
    const auto it = folds.fold_of.find(c.id);
    if (it == folds.fold_of.end() || it->second < 0 || it->second >= folds.k) {
      throw PreconditionError("channel '" + c.id + "' has no valid fold");
    }
  }
}

Report assemble_report(const ExperimentSpec& spec, const RunOptions& options,
                       std::vector<FoldOutput> outputs) {
  Report report;
  report.spec = spec;
  report.options = options;
  for (auto& o : outputs) {
    report.folds.push_back(o.result);
    for (auto& c : o.channels) report.channels.push_back(std::move(c));
  }
  std::sort(report.channels.begin(), report.channels.end(),
            [](const ChannelResult& a, const ChannelResult& b) {
              return a.channel_id < b.channel_id;
            });
  return report;
}

}  // namespace

std::optional<Level> parse_level(std::string_view name) {
  if (name == "video") return Level::kVideo;
  if (name == "episode" || name == "episodes") return Level::kEpisode;
  return std::nullopt;
}

std::string_view to_string(Level level) { return level == Level::kVideo ? "video" : "episode"; }

void ExperimentSpec::validate() const {
  if (majority_baseline) return;
  if (groups.empty()) throw ConfigError("experiment '" + name + "' selects no feature groups");
  if (!is_canonical(groups)) {
    throw ConfigError("experiment '" + name + "' groups are not in canonical order");
  }
}

std::vector<Instance> distant_label_instances(const Catalog& catalog, Level level) {
  std::vector<Instance> out;
  for (const auto& video : catalog.videos()) {
    const auto& channel = catalog.channel_of(video);
    if (level == Level::kVideo) {
      out.push_back({channel.id, video.id, std::nullopt, channel.label});
    } else {
      for (const auto& e : catalog.episodes_of(video.id)) {
        out.push_back({channel.id, video.id, e.index, channel.label});
      }
    }
  }
  return out;
}

std::size_t Report::correct() const {
  return static_cast<std::size_t>(std::count_if(
      channels.begin(), channels.end(), [](const ChannelResult& c) { return c.correct(); }));
}

double Report::accuracy() const {
  return channels.empty() ? 0.0 : static_cast<double>(correct()) / channels.size();
}

double Report::macro_fold_accuracy() const {
  if (folds.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : folds) sum += f.accuracy();
  return sum / static_cast<double>(folds.size());
}

Report majority_baseline(const Catalog& catalog, const FoldAssignment& folds,
                         const RunOptions& options) {
  if (catalog.channels().empty()) throw PreconditionError("catalog has no channels");
  check_folds_cover_catalog(catalog, folds);

  ExperimentSpec spec;
  spec.name = "baseline";
  spec.majority_baseline = true;

  std::vector<FoldOutput> outputs;
  for (int f = 0; f < folds.k; ++f) {
    FoldOutput out;
    out.result.fold = f;
    std::array<double, kNumClasses> counts{};
    const auto train_ids = folds.train_channels(f);
    for (const auto& id : train_ids) counts[code(catalog.find_channel(id)->label)] += 1.0;
    out.result.train_channels = train_ids.size();
    out.result.train_instances = train_ids.size();

    Posterior prior;
    if (!train_ids.empty()) {
      for (int k = 0; k < kNumClasses; ++k) prior.p[k] = counts[k] / train_ids.size();
    } else {
      prior.p = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    }
    for (const auto& id : folds.test_channels(f)) {
      ChannelResult cr;
      cr.channel_id = id;
      cr.fold = f;
      cr.label = catalog.find_channel(id)->label;
      cr.posterior = prior;
      cr.predicted = prior.argmax();
      out.result.correct += cr.correct();
      out.channels.push_back(std::move(cr));
    }
    out.result.test_channels = out.channels.size();
    outputs.push_back(std::move(out));
  }
  return assemble_report(spec, options, std::move(outputs));
}

Report run_experiment(const ExperimentSpec& spec, const Catalog& catalog,
                      const FeatureStore& store, const RunOptions& options) {
  return run_experiment(spec, catalog, store,
                        stratified_folds(catalog, options.folds, options.seed), options);
}

Report run_experiment(const ExperimentSpec& spec, const Catalog& catalog,
                      const FeatureStore& store, const FoldAssignment& folds,
                      const RunOptions& options) {
  spec.validate();
  options.train.validate();
  if (spec.majority_baseline) return majority_baseline(catalog, folds, options);
  check_folds_cover_catalog(catalog, folds);

  const auto instances = distant_label_instances(catalog, spec.level);
  if (instances.empty()) {
    throw PreconditionError("experiment '" + spec.name + "' has no " +
                            std::string(to_string(spec.level)) + " instances");
  }
  const auto x = assemble_instances(instances, store, spec, options.missing);

  std::vector<FoldOutput> outputs(static_cast<std::size_t>(folds.k));
  if (options.parallel_folds) {
    std::vector<std::exception_ptr> errors(outputs.size());
    std::vector<std::thread> workers;
    for (int f = 0; f < folds.k; ++f) {
      workers.emplace_back([&, f] {
        try {
          outputs[f] = run_fold(f, spec, catalog, folds, instances, x, options);
        } catch (...) {
          errors[f] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (int f = 0; f < folds.k; ++f) {
      outputs[f] = run_fold(f, spec, catalog, folds, instances, x, options);
    }
  }
  return assemble_report(spec, options, std::move(outputs));
}

}  // namespace mediabias
