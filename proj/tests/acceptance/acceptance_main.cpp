// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances are fixed below.
//
//   mediabias_acceptance                       guaranteed criteria
//   mediabias_acceptance --released-data DIR   criteria on the released corpus
//
// DIR holds channels.jsonl, videos.jsonl, episodes.jsonl and features.jsonl
// in the manifest schema. Without it the released-data mode exits with 77.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "mediabias/mediabias.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mediabias;

namespace {

constexpr double kGradientStep = 1e-5;
constexpr double kGradientTolerance = 1e-4;
constexpr double kGradientSeconds = 10.0;
constexpr double kAggregationTolerance = 1e-12;
constexpr double kSyntheticAccuracy = 0.95;
constexpr double kSyntheticSeconds = 60.0;
constexpr double kHeadlineTarget = 73.42;
constexpr double kHeadlineTolerance = 3.0;
constexpr int kHeadlineSeeds = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
  std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

void run(const std::string& name, const std::function<Outcome()>& fn) {
  try {
    report(name, fn());
  } catch (const std::exception& e) {
    report(name, {false, std::string("threw: ") + e.what()});
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- gradient ------------------------------------------------------------

Outcome gradient_check() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2021);
  auto params = glorot_uniform(10, rng);
  params.visit([&](auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] += uniform(rng, -0.1, 0.1);
  });
  std::vector<double> x(10);
  for (auto& v : x) v = normal01(rng);

  double worst = 0.0;
  std::size_t checked = 0;
  for (auto label : kAllLabels) {
    const auto grad = backward(params, forward(params, x, ForwardMode::kEval), label);
    auto probe = params;
    zip_tensors(probe, grad, [&](auto& tensor, const auto& g) {
      for (Eigen::Index i = 0; i < tensor.size(); ++i) {
        std::vector<double> theta{tensor.data()[i]};
        const double numeric = oracle::central_difference(
            [&](const std::vector<double>& t) {
              const double saved = tensor.data()[i];
              tensor.data()[i] = t[0];
              const double l = loss(predict(probe, x), label);
              tensor.data()[i] = saved;
              return l;
            },
            theta, 0, kGradientStep);
        const double analytic = g.data()[i];
        const double rel = std::abs(analytic - numeric) /
                           std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, rel);
        ++checked;
      }
    });
  }
  const double secs = seconds_since(t0);
  return {worst <= kGradientTolerance && secs < kGradientSeconds,
          fmt("max rel err %.2e over %.0f coords, %.2f s", worst, static_cast<double>(checked), secs)};
}

// ---- determinism ---------------------------------------------------------

std::vector<std::string> pipeline_reports(const fs::path& dir, bool parallel) {
  const auto cfg = load_run_config(dir / "run.toml");
  auto catalog = load_manifest(cfg.channels, cfg.videos);
  catalog.attach_episodes(load_episodes(*cfg.episodes));
  std::ifstream in(cfg.features);
  const auto store = FeatureStore::ingest(in, catalog);
  auto options = cfg.options;
  options.parallel_folds = parallel;
  std::vector<std::string> out;
  for (const auto& name : cfg.experiments) {
    out.push_back(report_to_json(run_experiment(resolve_experiment(name), catalog, store, options)));
  }
  return out;
}

Outcome determinism() {
  SyntheticOptions opt;
  opt.groups = {FeatureGroup::kNela, FeatureGroup::kNumericMeta, FeatureGroup::kOpensmileIs09};
  opt.separation = 0.4;
  opt.background = SyntheticOptions::Background::kNoise;
  opt.seed = 11;
  const auto dir = fs::temp_directory_path() / "mediabias_acceptance_determinism";
  fs::remove_all(dir);
  make_synthetic(opt).write(dir);
  std::ofstream(dir / "run.toml")
      << "channels = \"channels.jsonl\"\nvideos = \"videos.jsonl\"\n"
         "episodes = \"episodes.jsonl\"\nfeatures = \"features.jsonl\"\n"
         "experiments = [\"baseline\", \"combo:nela+numeric_meta+opensmile_is09\", "
         "\"ep:numeric_meta+opensmile_is09:episode:max\"]\nseed = 5\nepochs = 8\n";
  const auto a = pipeline_reports(dir, false);
  const auto b = pipeline_reports(dir, false);
  const auto c = pipeline_reports(dir, true);
  fs::remove_all(dir);
  std::size_t bytes = 0;
  for (const auto& r : a) bytes += r.size();
  return {a == b && a == c,
          fmt("%.0f reports, %.0f bytes, serial and parallel runs identical",
              static_cast<double>(a.size()), static_cast<double>(bytes))};
}

// ---- stratification ------------------------------------------------------

Outcome stratification() {
  Rng rng(404);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(uniform_index(rng, 9));
    std::vector<Channel> channels;
    for (int c = 0; c < 3; ++c) {
      const int n = k + static_cast<int>(uniform_index(rng, 60));
      for (int i = 0; i < n; ++i) {
        const auto id = "c" + std::to_string(uniform_index(rng, 1u << 30)) + "_" + std::to_string(c) + "_" +
                        std::to_string(i);
        channels.push_back({id, id, "u", RawMbfcLabel::kCenter, *label_from_code(c), {}, {}});
      }
    }
    const auto catalog = Catalog::build(channels, {});
    const auto folds = stratified_folds(catalog, k, rng());

    std::multiset<std::string> seen;
    std::vector<std::array<int, 3>> per_fold(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
      for (const auto& id : folds.test_channels(f)) {
        seen.insert(id);
        ++per_fold[static_cast<std::size_t>(f)][static_cast<std::size_t>(code(catalog.find_channel(id)->label))];
      }
    }
    bool ok = seen.size() == catalog.channels().size();
    for (const auto& c : catalog.channels()) ok = ok && seen.count(c.id) == 1;
    for (std::size_t cls = 0; cls < 3; ++cls) {
      int lo = INT32_MAX, hi = 0;
      for (const auto& counts : per_fold) lo = std::min(lo, counts[cls]), hi = std::max(hi, counts[cls]);
      ok = ok && hi - lo <= 1;
    }
    bad += !ok;
  }
  return {bad == 0, fmt("%.0f/100 catalogs violate partition or balance", bad)};
}

// ---- segmentation --------------------------------------------------------

Outcome segmentation() {
  Rng rng(7);
  int mismatches = 0, episodes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(uniform_index(rng, 21));
    CaptionTrack track{"v", {}};
    std::vector<std::int64_t> starts;
    for (int i = 0; i < n; ++i) {
      const auto s = static_cast<std::int64_t>(uniform_index(rng, 140000));
      track.cues.push_back({s, s + 500 + static_cast<std::int64_t>(uniform_index(rng, 6000)), ""});
      starts.push_back(s);
    }
    const std::string srt = serialize_subtitles(track, SubtitleFormat::kSrt);
    const auto parsed = parse_subtitles(srt, SubtitleFormat::kSrt, "v");
    std::vector<std::int64_t> parsed_starts;
    for (const auto& c : parsed.cues) parsed_starts.push_back(c.start_ms);
    const auto duration = 15000 + static_cast<std::int64_t>(uniform_index(rng, 140000));
    const auto got = extract_episodes(parsed, duration);
    const auto want = oracle::best_episode_starts(parsed_starts, duration, 15000, 1000, 5);
    bool ok = got.size() == want.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i) {
      ok = got[i].start_ms == want[i] && got[i].end_ms - got[i].start_ms == 15000 &&
           got[i].end_ms <= duration && (i == 0 || got[i].start_ms - got[i - 1].end_ms >= 1000);
    }
    mismatches += !ok;
    episodes += static_cast<int>(got.size());
  }
  return {mismatches == 0, fmt("%.0f/50 tracks differ from oracle, %.0f episodes checked", mismatches, episodes)};
}

// ---- aggregation ---------------------------------------------------------

Outcome aggregation() {
  Rng rng(99);
  double worst = 0.0;
  bool labels_ok = true, identity_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 20));
    std::vector<Posterior> ps;
    std::vector<std::array<double, 3>> raw;
    for (int i = 0; i < n; ++i) {
      std::array<double, 3> logits{normal01(rng) * 3, normal01(rng) * 3, normal01(rng) * 3};
      ps.push_back(softmax(logits));
      raw.push_back(ps.back().p);
    }
    const auto avg = aggregate_posteriors(ps, AggregationMethod::kAverage);
    const auto max = aggregate_posteriors(ps, AggregationMethod::kMaximum);
    const auto want_avg = oracle::mean_of(raw);
    const auto want_max = n == 1 ? raw[0] : oracle::normalized_max_of(raw);
    for (std::size_t k = 0; k < 3; ++k) {
      worst = std::max({worst, std::abs(avg.posterior.p[k] - want_avg[k]),
                        std::abs(max.posterior.p[k] - want_max[k])});
    }
    labels_ok = labels_ok && code(avg.label) == oracle::first_argmax(avg.posterior.p) &&
                code(max.label) == oracle::first_argmax(max.posterior.p);
    const std::vector<Posterior> one{ps.front()};
    for (auto m : {AggregationMethod::kAverage, AggregationMethod::kMaximum}) {
      identity_ok = identity_ok && aggregate_posteriors(one, m).posterior == ps.front();
    }
  }
  return {worst <= kAggregationTolerance && labels_ok && identity_ok,
          fmt("max abs err %.2e; single-instance identity ", worst) + (identity_ok ? "exact" : "BROKEN")};
}

// ---- synthetic end to end ------------------------------------------------

Outcome synthetic_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticOptions opt;  // 20/20/20 channels, 20 signal dims, means 10 std apart
  const auto data = make_synthetic(opt);
  const auto catalog = data.catalog();
  const auto store = data.store(catalog);
  RunOptions options;
  const auto r = run_experiment(resolve_experiment("synthetic:nela"), catalog, store, options);
  const double secs = seconds_since(t0);
  return {r.accuracy() >= kSyntheticAccuracy && secs < kSyntheticSeconds && r.total() == 60,
          fmt("accuracy %.2f%% over %.0f channels, %.2f s", 100.0 * r.accuracy(),
              static_cast<double>(r.total()), secs)};
}

// ---- baseline arithmetic -------------------------------------------------

// A manifest with the released corpus's counts: 421 labelled channels
// (101/177/143) plus center-left/center-right channels that must be dropped,
// 3,345 videos and 15,945 episodes.
void write_corpus_shaped_manifest(const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream ch(dir / "channels.jsonl"), vid(dir / "videos.jsonl"), ep(dir / "episodes.jsonl");
  const std::array<std::pair<const char*, int>, 5> classes{
      {{"extreme-left", 30}, {"left", 71}, {"center", 177}, {"right", 90}, {"extreme-right", 53}}};
  int channel_no = 0, video_no = 0;
  auto add_channel = [&](const char* raw, int n_videos, bool with_episodes) {
    char id[16];
    std::snprintf(id, sizeof id, "UC%04d", channel_no++);
    ch << R"({"id":")" << id << R"(","name":"n","youtube_url":"u","label_raw":")" << raw << "\"}\n";
    for (int v = 0; v < n_videos; ++v) {
      char vid_id[16];
      std::snprintf(vid_id, sizeof vid_id, "v%05d", video_no++);
      vid << R"({"id":")" << vid_id << R"(","channel_id":")" << id
          << R"(","title":"t","description":"","tags":[],"views":1,"likes":0,"dislikes":0,"comments":0,"duration_s":600})"
          << '\n';
      if (!with_episodes) continue;
      // 2,565 videos carry 5 episodes and 780 carry 4.
      const int n_ep = video_no <= 2565 ? 5 : 4;
      for (int e = 0; e < n_ep; ++e) {
        ep << R"({"video_id":")" << vid_id << R"(","index":)" << e << R"(,"start_ms":)" << e * 16000
           << R"(,"end_ms":)" << e * 16000 + 15000 << "}\n";
      }
    }
  };
  // 398 channels with 8 videos and 23 with 7 give 3,345 videos.
  int labelled = 0;
  for (const auto& [raw, n] : classes) {
    for (int i = 0; i < n; ++i) add_channel(raw, labelled++ < 398 ? 8 : 7, true);
  }
  add_channel("center-left", 6, false);
  add_channel("center-right", 4, false);
}

Outcome baseline_counts(const fs::path& dir, const char* what) {
  auto catalog = load_manifest(dir / "channels.jsonl", dir / "videos.jsonl");
  catalog.attach_episodes(load_episodes(dir / "episodes.jsonl"));
  const auto s = catalog.summary();
  const bool counts_ok = s.channels == 421 && s.channels_per_class == std::array<std::size_t, 3>{101, 177, 143} &&
                         s.videos == 3345 && s.episodes == 15945;
  const auto r = majority_baseline(catalog, stratified_folds(catalog, kDefaultFolds, 0));
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: %zu channels (%zu/%zu/%zu), %zu videos, %zu episodes; baseline %.2f%% (%zu/%zu)",
                what, s.channels, s.channels_per_class[0], s.channels_per_class[1],
                s.channels_per_class[2], s.videos, s.episodes, 100.0 * r.accuracy(), r.correct(),
                r.total());
  return {counts_ok && r.correct() == 177 && r.total() == 421, buf};
}

Outcome baseline_on_corpus_shaped_manifest() {
  const auto dir = fs::temp_directory_path() / "mediabias_acceptance_manifest";
  fs::remove_all(dir);
  write_corpus_shaped_manifest(dir);
  auto o = baseline_counts(dir, "reconstructed manifest");
  fs::remove_all(dir);
  return o;
}

// ---- released data -------------------------------------------------------

int released_data(const fs::path& dir) {
  for (const char* f : {"channels.jsonl", "videos.jsonl", "episodes.jsonl", "features.jsonl"}) {
    if (!fs::exists(dir / f)) {
      std::printf("SKIP  released corpus not found (%s missing)\n", (dir / f).string().c_str());
      return 77;
    }
  }
  run("baseline_released_manifest", [&] { return baseline_counts(dir, "released manifest"); });

  run("headline_reproduction", [&] {
    auto catalog = load_manifest(dir / "channels.jsonl", dir / "videos.jsonl");
    catalog.attach_episodes(load_episodes(dir / "episodes.jsonl"));
    std::ifstream in(dir / "features.jsonl");
    const auto store = FeatureStore::ingest(in, catalog);
    double sum = 0.0;
    int combined_wins = 0, avg_wins = 0;
    std::string per_seed;
    for (int seed = 0; seed < kHeadlineSeeds; ++seed) {
      RunOptions o;
      o.seed = static_cast<std::uint64_t>(seed);
      o.parallel_folds = true;
      const auto folds = stratified_folds(catalog, o.folds, o.seed);
      const double combined =
          run_experiment(find_preset("text_meta_opensmile")->spec, catalog, store, folds, o).accuracy();
      const double bert = run_experiment(find_preset("bert_text")->spec, catalog, store, folds, o).accuracy();
      const double vmax = run_experiment(find_preset("video_max")->spec, catalog, store, folds, o).accuracy();
      sum += 100.0 * combined;
      combined_wins += combined > bert;
      avg_wins += combined >= vmax;
      per_seed += fmt(" %.2f", 100.0 * combined);
    }
    const double mean = sum / kHeadlineSeeds;
    const int majority = kHeadlineSeeds / 2 + 1;
    return Outcome{std::abs(mean - kHeadlineTarget) <= kHeadlineTolerance && combined_wins >= majority &&
                       avg_wins >= majority,
                   fmt("mean %.2f%% (target 73.42 +/- 3.0); combined>bert_text in %.0f seeds; ", mean,
                       combined_wins) +
                       fmt("avg>=max in %.0f seeds; per seed:", avg_wins) + per_seed};
  });
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--released-data") {
    if (std::string(argv[2]).empty()) {
      std::printf("SKIP  released corpus not configured\n");
      return 77;
    }
    return released_data(argv[2]);
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--released-data DIR]\n", argv[0]);
    return 2;
  }
  run("gradient_check", gradient_check);
  run("determinism", determinism);
  run("stratification", stratification);
  run("segmentation", segmentation);
  run("aggregation", aggregation);
  run("synthetic_end_to_end", synthetic_end_to_end);
  run("baseline_arithmetic", baseline_on_corpus_shaped_manifest);
  std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME FAILED");
  return failures == 0 ? 0 : 1;
}
