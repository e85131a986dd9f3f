#include "mediabias/folds.hpp"

#include <json.hpp>

#include "mediabias/error.hpp"
#include "mediabias/random.hpp"

namespace mediabias {

std::vector<std::string> FoldAssignment::test_channels(int fold) const {
  std::vector<std::string> out;
  for (const auto& [id, f] : fold_of) {
    if (f == fold) out.push_back(id);
  }
  return out;
}

std::vector<std::string> FoldAssignment::train_channels(int fold) const {
  std::vector<std::string> out;
  for (const auto& [id, f] : fold_of) {
    if (f != fold) out.push_back(id);
  }
  return out;
}

FoldAssignment stratified_folds(const Catalog& catalog, int k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("need at least 2 folds, got " + std::to_string(k));

  std::array<std::vector<std::string>, kNumClasses> by_class;
  for (const auto& c : catalog.channels()) by_class[code(c.label)].push_back(c.id);

  FoldAssignment out;
  out.k = k;
  Rng rng(seed);
  for (auto label : kAllLabels) {
    auto& ids = by_class[code(label)];
    if (ids.size() < static_cast<std::size_t>(k)) {
      throw PreconditionError("class '" + std::string(to_string(label)) + "' has " +
                              std::to_string(ids.size()) + " channel(s), fewer than " +
                              std::to_string(k) + " folds");
    }
    shuffle(std::span(ids), rng);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out.fold_of.emplace(ids[i], static_cast<int>(i % static_cast<std::size_t>(k)));
    }
  }
  return out;
}

std::string folds_to_json(const FoldAssignment& folds, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["k"] = folds.k;
  j["seed"] = seed;
  nlohmann::ordered_json map = nlohmann::ordered_json::object();
  for (const auto& [id, f] : folds.fold_of) map[id] = f;
  j["folds"] = std::move(map);
  return j.dump(2);
}

}  // namespace mediabias
