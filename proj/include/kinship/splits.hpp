#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kinship/story.hpp"

namespace kinship {

struct SplitConfig {
  std::map<int, std::size_t> train_counts;  // level -> examples
  std::map<int, std::size_t> test_counts;
  Naming naming = Naming::anonymized;
  std::uint64_t seed = 0;
  // Per test example, named mode only.
  std::size_t max_attempts = 2000;
  bool parallel = true;
};

struct RejectionStats {
  std::size_t rejected = 0;      // discarded draws
  std::size_t worst_attempts = 0;  // most draws needed by one example
};

struct Splits {
  std::vector<Example> train;  // ascending level, then index
  std::map<int, std::vector<Example>> test;
  std::map<int, RejectionStats> rejections;  // named mode only
};

// Train examples use seeds derive_seed(seed, 1, level, i); test examples
// derive_seed(seed, 2, level, i, attempt). In named mode a test draw is
// rejected while any of its facts (story facts and every trace conclusion,
// the answer among them) or their inverses occurs among the train facts.
// Throws ArgumentError for levels < 2 and GenerationError when a test
// example exhausts max_attempts.
Splits build_splits(const StoryGenerator& gen, const SplitConfig& cfg);

// Fact keys of an example: story facts and trace conclusions.
std::vector<std::string> fact_keys(const Example& ex);

// fact_keys of every train example plus the inverse of each fact.
std::unordered_set<std::string> train_fact_set(const std::vector<Example>& train,
                                               const RuleBase& rules);

// `total` examples spread as evenly as possible over `levels`, lower levels
// taking the remainder.
std::map<int, std::size_t> spread_evenly(std::size_t total, const std::vector<int>& levels);

// "2:1000,4:1000" or "2-10:200" or "2-10" (count left to the caller).
// Throws ArgumentError naming the bad item; levels must be >= 2 and unique.
std::map<int, std::optional<std::size_t>> parse_level_spec(std::string_view spec);

}  // namespace kinship
