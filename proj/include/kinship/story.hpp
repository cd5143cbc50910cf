#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kinship/fact.hpp"
#include "kinship/names.hpp"
#include "kinship/rulebase.hpp"

namespace kinship {

enum class Naming : std::uint8_t { named, anonymized };

std::string_view name(Naming n);
std::optional<Naming> naming_from_name(std::string_view text);

// A level-k story: k facts forming a simple path over k+1 entities.
struct StoryGraph {
  std::vector<Fact> facts;       // presentation order
  std::vector<Entity> entities;  // creation order
  int level = 0;

  friend bool operator==(const StoryGraph&, const StoryGraph&) = default;
};

struct Query {
  Entity source;
  Entity target;

  friend bool operator==(const Query&, const Query&) = default;
};

struct Example {
  StoryGraph story;
  Query query;
  Fact answer;  // (source, e*, target)
  // Splits in generation order; step 0 concludes the answer.
  std::vector<ProofStep> split_trace;
  std::uint64_t seed = 0;
  Naming naming = Naming::named;

  friend bool operator==(const Example&, const Example&) = default;
};

struct GeneratorOptions {
  bool shuffle_story = true;
  std::size_t anon_pool_size = 20;
  // Draws per example before giving up on a consistent story.
  std::size_t max_resamples = 1000;
};

// Samples examples by recursive splitting: start from the answer fact and
// level-1 times replace a story fact (A r3 C) with (A r1 B), (B r2 C) for a
// compose entry r1 . r2 -> r3 and a fresh entity B.
//
// Splits that would make a spouse edge join two entities of the same gender,
// or give an entity a second spouse (implied facts included), are skipped.
// A draw whose compositional closure assigns two relations to one entity
// pair is discarded and redrawn from a seed derived from `seed`, so every
// story has a single reading under the rulebase.
class StoryGenerator {
 public:
  // Throws ConfigError when the rulebase leaves no relation splittable.
  StoryGenerator(const RuleBase& rules, const NamePool& names, GeneratorOptions opts = {});

  // Deterministic in (level, naming, seed). Throws ArgumentError for
  // level < 2 and GenerationError if splitting dead-ends.
  Example generate(int level, Naming naming, std::uint64_t seed) const;

  // Relations that admit at least one split (candidate answers).
  const std::vector<Relation>& answer_relations() const { return answer_relations_; }

  const RuleBase& rules() const { return *rules_; }

 private:
  const RuleBase* rules_;
  const NamePool* names_;
  GeneratorOptions opts_;
  std::vector<Relation> answer_relations_;
};

// Replaces each entity surface with a distinct token drawn without
// replacement from {ENT_0 .. ENT_<pool_size-1>}; genders are kept.
// Throws ArgumentError when pool_size < number of entities.
Example anonymize(const Example& ex, std::size_t pool_size, std::uint64_t seed);

// Checks the structural contract of a generated example: |story| = k,
// |entities| = k+1, |trace| = k-1, path-shaped story, well-formed facts,
// and that folding the trace from the last step back reproduces the answer.
// Returns an empty string when everything holds, otherwise the first problem.
std::string check_structure(const Example& ex, const RuleBase& rules);

}  // namespace kinship
