// Files produced by the feature extraction adapter must ingest cleanly.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mediabias/catalog.hpp"
#include "mediabias/error.hpp"
#include "mediabias/feature_store.hpp"
#include "mediabias/synthetic.hpp"

namespace mediabias {
namespace {

const std::filesystem::path kDir = std::filesystem::path(MEDIABIAS_FIXTURE_DIR) / "adapter";

Catalog fixture_catalog() {
  auto cat = load_manifest(kDir / "channels.jsonl", kDir / "videos.jsonl");
  cat.attach_episodes(load_episodes(kDir / "episodes.jsonl"));
  return cat;
}

// videos x (video-scope groups) + episodes x (episode-scope groups)
std::size_t expected_records(const Catalog& cat, const std::vector<FeatureGroup>& groups) {
  std::size_t n = 0;
  for (auto g : groups) {
    n += scope(g) == FeatureScope::kVideo ? cat.videos().size() : cat.summary().episodes;
  }
  return n;
}

TEST(AdapterOutput, ThreeVideoFixtureIngestsCleanly) {
  const auto cat = fixture_catalog();
  EXPECT_TRUE(cat.warnings().empty());
  ASSERT_EQ(cat.videos().size(), 3u);
  EXPECT_EQ(cat.summary().episodes, 7u);

  std::ifstream in(kDir / "features.jsonl");
  const auto store = FeatureStore::ingest(in, cat);
  std::vector<FeatureGroup> all;
  for (const auto& info : kFeatureGroups) all.push_back(info.group);
  EXPECT_EQ(store.size(), expected_records(cat, all));
  EXPECT_EQ(store.size(), 26u);
  for (auto g : all) {
    const auto want = scope(g) == FeatureScope::kVideo ? 3u : 7u;
    EXPECT_EQ(store.count(g), want) << to_string(g);
  }
  for (const auto& v : cat.videos()) {
    const std::vector<FeatureGroup> meta{FeatureGroup::kNumericMeta};
    EXPECT_EQ(assemble_raw(store, v.id, meta, MissingPolicy::kError).size(), 5u);
    const auto full = assemble_raw(store, v.id, all, MissingPolicy::kZeroFill);
    EXPECT_EQ(full.size(), total_dim(all));
  }
  // numeric_meta is the metadata packed as [views, likes, dislikes, comments, duration_s]
  EXPECT_EQ(*store.video_vector(FeatureGroup::kNumericMeta, "vid001"),
            (std::vector<double>{10, 2, 1, 0, 300}));
  const auto& m = cat.find_video("vid003")->metadata;
  EXPECT_EQ(*store.video_vector(FeatureGroup::kNumericMeta, "vid003"),
            (std::vector<double>{static_cast<double>(m.views), static_cast<double>(m.likes),
                                 static_cast<double>(m.dislikes), static_cast<double>(m.comments),
                                 m.duration_s}));
}

TEST(AdapterOutput, RecordCountFormulaOnGeneratedJobs) {
  for (int episodes : {0, 1, 5}) {
    SyntheticOptions opt;
    opt.channels_per_class = {2, 2, 2};
    opt.episodes_per_video = episodes;
    opt.groups = {FeatureGroup::kNela, FeatureGroup::kNumericMeta, FeatureGroup::kOpensmileIs09};
    const auto data = make_synthetic(opt);
    const auto cat = data.catalog();
    std::stringstream lines;
    for (const auto& r : data.records) lines << feature_record_to_json_line(r) << '\n';
    const auto store = FeatureStore::ingest(lines, cat);
    EXPECT_EQ(store.size(), expected_records(cat, opt.groups));
  }
}

TEST(AdapterOutput, SingleVideoFiveEpisodes) {
  SyntheticOptions opt;
  opt.channels_per_class = {1, 0, 0};
  opt.min_videos_per_channel = opt.max_videos_per_channel = 1;
  opt.episodes_per_video = 5;
  opt.groups = {FeatureGroup::kOpensmileIs09};
  const auto data = make_synthetic(opt);
  EXPECT_EQ(data.records.size(), 5u);
  const auto cat = data.catalog();
  EXPECT_EQ(data.store(cat).size(), 5u);
}

TEST(AdapterOutput, WrongDimensionCitesLine) {
  const auto cat = fixture_catalog();
  std::stringstream lines;
  lines << feature_record_to_json_line({FeatureGroup::kNumericMeta, "vid001", {}, {1, 2, 3, 4, 5}}) << '\n'
        << R"({"group":"opensmile_is09","video_id":"vid001","episode_index":0,"vector":[1,2,3]})" << '\n';
  try {
    FeatureStore::ingest(lines, cat);
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace mediabias
