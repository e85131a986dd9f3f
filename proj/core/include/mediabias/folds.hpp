#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mediabias/catalog.hpp"

namespace mediabias {

inline constexpr int kDefaultFolds = 5;

// channel id -> fold in [0, k).
struct FoldAssignment {
  int k = kDefaultFolds;
  std::map<std::string, int> fold_of;

  std::vector<std::string> test_channels(int fold) const;
  std::vector<std::string> train_channels(int fold) const;

  friend bool operator==(const FoldAssignment&, const FoldAssignment&) = default;
};

// Within each class the channels (sorted by id) are shuffled with the seed
// and dealt round-robin, so per-class fold sizes differ by at most one.
// Throws PreconditionError when k < 2 or any class has fewer than k channels.
FoldAssignment stratified_folds(const Catalog& catalog, int k, std::uint64_t seed);

// {"k":5,"seed":..,"folds":{"<channel>":<fold>,...}}
std::string folds_to_json(const FoldAssignment& folds, std::uint64_t seed);

}  // namespace mediabias
