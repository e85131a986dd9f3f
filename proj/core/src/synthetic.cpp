#include "mediabias/synthetic.hpp"

#include <cstdio>
#include <fstream>

#include "mediabias/error.hpp"
#include "mediabias/random.hpp"

namespace mediabias {
namespace {

std::string numbered(const char* prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04d", prefix, n);
  return buf;
}

std::vector<double> sample_vector(FeatureGroup g, BiasLabel label, const SyntheticOptions& o,
                                  Rng& rng) {
  std::vector<double> v(dim(g), 0.0);
  const double mean = o.separation * (code(label) - 1);
  const auto signal = std::min<std::size_t>(static_cast<std::size_t>(o.signal_dims), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i < signal) {
      v[i] = mean + normal01(rng);
    } else if (o.background == SyntheticOptions::Background::kNoise) {
      v[i] = normal01(rng);
    }
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  return out;
}

}  // namespace

SyntheticDataset make_synthetic(const SyntheticOptions& o) {
  if (o.min_videos_per_channel < 1 || o.max_videos_per_channel < o.min_videos_per_channel) {
    throw PreconditionError("invalid videos-per-channel range");
  }
  if (o.episodes_per_video < 0 || o.episodes_per_video > kMaxEpisodesPerVideo) {
    throw PreconditionError("episodes_per_video must lie in [0, 5]");
  }
  Rng rng(o.seed);
  SyntheticDataset ds;
  const auto groups = canonical_groups(o.groups);

  int channel_no = 0, video_no = 0;
  for (auto label : kAllLabels) {
    for (int i = 0; i < o.channels_per_class[code(label)]; ++i) {
      Channel c;
      c.id = numbered("ch", channel_no++);
      c.name = "Channel " + c.id;
      c.youtube_url = "https://www.youtube.com/channel/" + c.id;
      c.label = label;
      c.raw_label = label == BiasLabel::kLeft     ? RawMbfcLabel::kLeft
                    : label == BiasLabel::kCenter ? RawMbfcLabel::kCenter
                                                  : RawMbfcLabel::kRight;
      const auto span = static_cast<std::uint64_t>(o.max_videos_per_channel -
                                                   o.min_videos_per_channel + 1);
      const int n_videos = o.min_videos_per_channel + static_cast<int>(uniform_index(rng, span));
      for (int k = 0; k < n_videos; ++k) {
        Video v;
        v.id = numbered("vid", video_no++);
        v.channel_id = c.id;
        v.title = "Video " + v.id;
        v.description = "Synthetic video " + v.id + " of " + c.id;
        v.tags = {"news", std::string(to_string(label))};
        v.metadata = {uniform_index(rng, 100000), uniform_index(rng, 5000),
                      uniform_index(rng, 500), uniform_index(rng, 800),
                      60 + uniform_index(rng, 1200)};

        for (int e = 0; e < o.episodes_per_video; ++e) {
          const std::int64_t start = e * (kEpisodeLengthMs + kMinEpisodeGapMs);
          ds.episodes.push_back({v.id, e, start, start + kEpisodeLengthMs});
        }
        for (auto g : groups) {
          if (scope(g) == FeatureScope::kVideo) {
            ds.records.push_back({g, v.id, std::nullopt, sample_vector(g, label, o, rng)});
          } else {
            for (int e = 0; e < o.episodes_per_video; ++e) {
              ds.records.push_back({g, v.id, e, sample_vector(g, label, o, rng)});
            }
          }
        }
        ds.videos.push_back(std::move(v));
      }
      ds.channels.push_back(std::move(c));
    }
  }
  return ds;
}

Catalog SyntheticDataset::catalog() const {
  auto cat = Catalog::build(channels, videos);
  cat.attach_episodes(episodes);
  return cat;
}

FeatureStore SyntheticDataset::store(const Catalog& catalog) const {
  FeatureStore store;
  for (const auto& r : records) store.add(r, catalog);
  return store;
}

void SyntheticDataset::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto ch = open_out(dir / "channels.jsonl");
  for (const auto& c : channels) ch << channel_to_json_line(c) << '\n';
  auto vid = open_out(dir / "videos.jsonl");
  for (const auto& v : videos) vid << video_to_json_line(v) << '\n';
  auto ep = open_out(dir / "episodes.jsonl");
  for (const auto& e : episodes) ep << episode_to_json_line(e) << '\n';
  auto feat = open_out(dir / "features.jsonl");
  for (const auto& r : records) feat << feature_record_to_json_line(r) << '\n';
}

}  // namespace mediabias
