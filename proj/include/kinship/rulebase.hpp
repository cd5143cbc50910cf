#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinship/fact.hpp"
#include "kinship/relation.hpp"

namespace kinship {

// Composition table (r1 . r2 -> r3, "A r1 B and B r2 C imply A r3 C") and
// inversion table (inv r g -> r', "A r B with B of gender g gives B r' A").
//
// Text format, one entry per line, '#' starts a comment:
//
//   brother . granddaughter -> grandson
//   inv granddaughter female -> grandmother
//
// Immutable once built; all lookups are O(1) and thread-safe.
class RuleBase {
 public:
  struct ComposeEntry {
    Relation first;
    Relation second;
    Relation result;
    int line = 0;
  };
  struct InvertEntry {
    Relation relation;
    Gender object_gender;
    Relation result;
    int line = 0;
  };

  // Throws ConfigError naming the origin and line on malformed input or on
  // two entries assigning different results to the same key.
  static RuleBase parse(std::string_view text, std::string_view origin = "<memory>");
  static RuleBase load(const std::filesystem::path& path);

  std::optional<Relation> compose(Relation first, Relation second) const {
    return compose_[index(first) * kRelationCount + index(second)];
  }

  std::optional<Relation> invert(Relation r, Gender object_gender) const {
    return invert_[index(r) * 2 + static_cast<std::size_t>(object_gender)];
  }

  // (s, r, o) -> (o, invert(r, gender(o)), s). Throws ConfigError when the
  // inversion table has no entry, which validate() reports up front.
  Fact invert_fact(const Fact& f) const;

  // All (r1, r2) with r1 . r2 -> target, in file order.
  const std::vector<std::pair<Relation, Relation>>& splits_of(Relation target) const {
    return splits_[index(target)];
  }

  const std::vector<ComposeEntry>& compose_entries() const { return compose_entries_; }
  const std::vector<InvertEntry>& invert_entries() const { return invert_entries_; }
  const std::string& origin() const { return origin_; }

 private:
  std::array<std::optional<Relation>, kRelationCount * kRelationCount> compose_{};
  std::array<std::optional<Relation>, kRelationCount * 2> invert_{};
  std::array<std::vector<std::pair<Relation, Relation>>, kRelationCount> splits_{};
  std::vector<ComposeEntry> compose_entries_;
  std::vector<InvertEntry> invert_entries_;
  std::string origin_;
};

struct Violation {
  std::string entry;    // offending entry or table cell, as text
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty iff every compose entry preserves the first relation's gender, the
// inversion table is total over 20 relations x 2 genders, each inverse has
// the requested gender, and inversion is an involution.
std::vector<Violation> validate_rulebase(const RuleBase& rb);

// Path of the shipped rulebase, overridable with $KINSHIP_RULES.
std::filesystem::path default_rules_path();
std::filesystem::path data_dir();

}  // namespace kinship
