#include <gtest/gtest.h>

#include <map>

#include "mediabias/error.hpp"
#include "mediabias/experiment.hpp"
#include "mediabias/synthetic.hpp"
#include "oracles.hpp"

namespace mediabias {
namespace {

RunOptions quick_options(int epochs = 35) {
  RunOptions o;
  o.train.epochs = epochs;
  o.seed = 3;
  return o;
}

ExperimentSpec spec_for(std::vector<FeatureGroup> groups, Level level = Level::kVideo,
                        AggregationMethod agg = AggregationMethod::kAverage) {
  ExperimentSpec s;
  s.name = "t";
  s.groups = std::move(groups);
  s.level = level;
  s.aggregation = agg;
  return s;
}

TEST(DistantLabels, EveryInstanceInheritsItsChannelLabel) {
  const auto data = make_synthetic({});
  const auto cat = data.catalog();
  const auto videos = distant_label_instances(cat, Level::kVideo);
  const auto episodes = distant_label_instances(cat, Level::kEpisode);
  EXPECT_EQ(videos.size(), cat.videos().size());
  EXPECT_EQ(episodes.size(), cat.videos().size() * 3);
  for (const auto& inst : episodes) {
    EXPECT_EQ(inst.label, cat.find_channel(inst.channel_id)->label);
    EXPECT_EQ(cat.find_video(inst.video_id)->channel_id, inst.channel_id);
  }
}

TEST(RunExperiment, SeparableSyntheticDataIsLearned) {
  const auto data = make_synthetic({});
  const auto cat = data.catalog();
  const auto store = data.store(cat);
  const auto report = run_experiment(spec_for({FeatureGroup::kNela}), cat, store, quick_options());
  EXPECT_EQ(report.total(), 60u);
  EXPECT_GE(report.accuracy(), 0.95);
  ASSERT_EQ(report.folds.size(), 5u);

  // Recounting from the per-channel rows gives the headline numbers.
  std::size_t correct = 0;
  std::map<int, std::pair<std::size_t, std::size_t>> per_fold;
  for (const auto& c : report.channels) {
    correct += c.label == c.predicted;
    per_fold[c.fold].first += c.label == c.predicted;
    ++per_fold[c.fold].second;
    EXPECT_EQ(c.instances, cat.videos_of(c.channel_id).size());
    EXPECT_NEAR(c.posterior.sum(), 1.0, 1e-12);
  }
  EXPECT_EQ(correct, report.correct());
  double macro = 0.0;
  for (const auto& f : report.folds) {
    EXPECT_EQ(f.correct, per_fold[f.fold].first);
    EXPECT_EQ(f.test_channels, per_fold[f.fold].second);
    macro += static_cast<double>(f.correct) / static_cast<double>(f.test_channels);
  }
  EXPECT_NEAR(report.macro_fold_accuracy(), macro / 5.0, 1e-15);
}

TEST(RunExperiment, EpisodeLevelWithBothAggregations) {
  SyntheticOptions opt;
  opt.groups = {FeatureGroup::kNumericMeta, FeatureGroup::kOpensmileIs09};
  opt.signal_dims = 5;
  const auto data = make_synthetic(opt);
  const auto cat = data.catalog();
  const auto store = data.store(cat);
  for (auto agg : {AggregationMethod::kAverage, AggregationMethod::kMaximum}) {
    const auto report = run_experiment(spec_for(opt.groups, Level::kEpisode, agg), cat, store,
                                       quick_options(10));
    EXPECT_GE(report.accuracy(), 0.95);
    for (const auto& c : report.channels) {
      EXPECT_EQ(c.instances, cat.videos_of(c.channel_id).size() * 3);
    }
  }
}

TEST(RunExperiment, DeterministicAndParallelAgnostic) {
  SyntheticOptions opt;
  opt.separation = 0.5;
  opt.background = SyntheticOptions::Background::kNoise;
  const auto data = make_synthetic(opt);
  const auto cat = data.catalog();
  const auto store = data.store(cat);
  auto o = quick_options(4);
  const auto a = run_experiment(spec_for({FeatureGroup::kNela}), cat, store, o);
  const auto b = run_experiment(spec_for({FeatureGroup::kNela}), cat, store, o);
  o.parallel_folds = true;
  const auto c = run_experiment(spec_for({FeatureGroup::kNela}), cat, store, o);
  ASSERT_EQ(a.channels.size(), b.channels.size());
  for (std::size_t i = 0; i < a.channels.size(); ++i) {
    EXPECT_EQ(a.channels[i].posterior, b.channels[i].posterior);
    EXPECT_EQ(a.channels[i].posterior, c.channels[i].posterior);
  }
}

// Features of a test channel influence no other prediction in its fold, so
// nothing from the test side leaks into normalization or training.
TEST(RunExperiment, TestFoldFeaturesDoNotLeak) {
  SyntheticOptions opt;
  opt.background = SyntheticOptions::Background::kNoise;
  opt.channels_per_class = {6, 6, 6};
  auto data = make_synthetic(opt);
  const auto cat = data.catalog();
  const auto o = quick_options(3);
  const auto folds = stratified_folds(cat, o.folds, o.seed);
  const auto spec = spec_for({FeatureGroup::kNela});
  const auto before = run_experiment(spec, cat, data.store(cat), folds, o);

  const std::string victim = cat.channels().front().id;
  const int victim_fold = folds.fold_of.at(victim);
  for (auto& r : data.records) {
    if (cat.find_video(r.video_id)->channel_id != victim) continue;
    for (auto& v : r.vector) v = v * 1000.0 + 77.0;
  }
  const auto after = run_experiment(spec, cat, data.store(cat), folds, o);
  for (std::size_t i = 0; i < before.channels.size(); ++i) {
    const auto& c = before.channels[i];
    if (c.fold != victim_fold || c.channel_id == victim) continue;
    EXPECT_EQ(c.posterior, after.channels[i].posterior) << c.channel_id;
  }
}

TEST(RunExperiment, MissingFeaturePolicy) {
  SyntheticOptions opt;
  opt.channels_per_class = {5, 5, 5};
  auto data = make_synthetic(opt);
  data.records.pop_back();
  const auto cat = data.catalog();
  const auto store = data.store(cat);
  auto o = quick_options(1);
  EXPECT_THROW(run_experiment(spec_for({FeatureGroup::kNela}), cat, store, o), MissingFeatureError);
  o.missing = MissingPolicy::kZeroFill;
  EXPECT_EQ(run_experiment(spec_for({FeatureGroup::kNela}), cat, store, o).total(), 15u);
}

TEST(RunExperiment, ChannelWithoutEpisodesIsAnError) {
  SyntheticOptions opt;
  opt.channels_per_class = {5, 5, 5};
  opt.groups = {FeatureGroup::kOpensmileIs09};
  opt.episodes_per_video = 0;
  const auto data = make_synthetic(opt);
  const auto cat = data.catalog();
  EXPECT_THROW(run_experiment(spec_for(opt.groups, Level::kEpisode), cat, data.store(cat),
                              quick_options(1)),
               PreconditionError);
}

TEST(RunExperiment, InvalidSpecs) {
  const auto data = make_synthetic({});
  const auto cat = data.catalog();
  const auto store = data.store(cat);
  EXPECT_THROW(run_experiment(spec_for({}), cat, store, quick_options(1)), ConfigError);
  EXPECT_THROW(run_experiment(spec_for({FeatureGroup::kNumericMeta, FeatureGroup::kNela}), cat,
                              store, quick_options(1)),
               ConfigError);
  auto o = quick_options(1);
  o.train.batch_size = 0;
  EXPECT_THROW(run_experiment(spec_for({FeatureGroup::kNela}), cat, store, o), ConfigError);
}

TEST(RunExperiment, SingleVideoChannelsAggregateIdentically) {
  SyntheticOptions opt;
  opt.min_videos_per_channel = opt.max_videos_per_channel = 1;
  opt.separation = 0.3;
  opt.background = SyntheticOptions::Background::kNoise;
  const auto data = make_synthetic(opt);
  const auto cat = data.catalog();
  const auto store = data.store(cat);
  const auto avg = run_experiment(spec_for({FeatureGroup::kNela}), cat, store, quick_options(3));
  const auto max = run_experiment(
      spec_for({FeatureGroup::kNela}, Level::kVideo, AggregationMethod::kMaximum), cat, store,
      quick_options(3));
  EXPECT_EQ(avg.correct(), max.correct());
  for (std::size_t i = 0; i < avg.channels.size(); ++i) {
    EXPECT_EQ(avg.channels[i].posterior, max.channels[i].posterior);
  }
}

// Oracle: per fold, count training labels and predict the first most
// frequent class for every test channel.
std::size_t baseline_oracle(const Catalog& cat, const FoldAssignment& folds) {
  std::size_t correct = 0;
  for (int f = 0; f < folds.k; ++f) {
    std::array<double, 3> counts{};
    for (const auto& [id, fold] : folds.fold_of) {
      if (fold != f) counts[static_cast<std::size_t>(code(cat.find_channel(id)->label))] += 1;
    }
    const int majority = oracle::first_argmax(counts);
    for (const auto& [id, fold] : folds.fold_of) {
      if (fold == f) correct += code(cat.find_channel(id)->label) == majority;
    }
  }
  return correct;
}

TEST(MajorityBaseline, MatchesOracleOnSmallCatalogs) {
  for (std::array<int, 3> sizes : {std::array<int, 3>{3, 5, 2}, {4, 4, 4}, {2, 2, 9}, {7, 3, 7}}) {
    SyntheticOptions opt;
    opt.channels_per_class = sizes;
    const auto cat = make_synthetic(opt).catalog();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto folds = stratified_folds(cat, 2, seed);
      const auto report = majority_baseline(cat, folds);
      EXPECT_EQ(report.correct(), baseline_oracle(cat, folds));
      EXPECT_TRUE(report.spec.majority_baseline);
      for (const auto& c : report.channels) EXPECT_NEAR(c.posterior.sum(), 1.0, 1e-12);
    }
  }
}

TEST(MajorityBaseline, AllCenterCatalogPredictsCenter) {
  std::vector<Channel> channels;
  std::vector<Video> videos;
  for (int i = 0; i < 6; ++i) {
    const auto id = "c" + std::to_string(i);
    channels.push_back({id, id, "u", RawMbfcLabel::kCenter, BiasLabel::kCenter, {}, {}});
  }
  const auto cat = Catalog::build(channels, videos);
  FoldAssignment folds;
  folds.k = 2;
  for (int i = 0; i < 6; ++i) folds.fold_of["c" + std::to_string(i)] = i % 2;
  const auto report = majority_baseline(cat, folds);
  EXPECT_EQ(report.accuracy(), 1.0);
  for (const auto& c : report.channels) {
    EXPECT_EQ(c.posterior.p[1], 1.0);
    EXPECT_EQ(c.predicted, BiasLabel::kCenter);
  }
}

TEST(MajorityBaseline, ChannelCountsOfTheReleasedCorpus) {
  SyntheticOptions opt;
  opt.channels_per_class = {101, 177, 143};
  opt.min_videos_per_channel = opt.max_videos_per_channel = 1;
  const auto cat = make_synthetic(opt).catalog();
  const auto report = majority_baseline(cat, stratified_folds(cat, 5, 0));
  EXPECT_EQ(report.correct(), 177u);
  EXPECT_EQ(report.total(), 421u);
  EXPECT_NEAR(report.accuracy() * 100.0, 42.04, 0.005);
}

}  // namespace
}  // namespace mediabias
