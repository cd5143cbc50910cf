#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "kinship/relation.hpp"

namespace kinship {

// Within one example the surface is the entity's identifier: surfaces are
// unique per example (names drawn without replacement, tokens injective).
struct Entity {
  std::string surface;
  Gender gender = Gender::male;

  friend bool operator==(const Entity&, const Entity&) = default;
  friend auto operator<=>(const Entity&, const Entity&) = default;
};

// True when `surface` can appear in a rendered sentence without colliding
// with tokenization or record delimiters: one nonempty token, no angle
// brackets, no sentence punctuation.
bool valid_surface(std::string_view surface);

struct Fact {
  Entity subject;
  Relation relation = Relation::father;
  Entity object;

  friend bool operator==(const Fact&, const Fact&) = default;
  friend auto operator<=>(const Fact&, const Fact&) = default;
};

// subject != object and the subject's gender matches the relation's.
bool well_formed(const Fact& f);

// Surface-level (entity, relation, entity) triple, the shape recovered by
// parsing a sentence. Carries no gender.
struct Triple {
  std::string subject;
  Relation relation = Relation::father;
  std::string object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

Triple shape(const Fact& f);

// "subject|relation|object", used as a hash key and in diagnostics.
std::string key(const Triple& t);
std::string key(const Fact& f);

// One inference: premise1 = (A r1 B), premise2 = (B r2 C), conclusion = (A r3 C).
struct ProofStep {
  Fact premise1;
  Fact premise2;
  Fact conclusion;

  friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

struct StepShape {
  Triple premise1;
  Triple premise2;
  Triple conclusion;

  friend bool operator==(const StepShape&, const StepShape&) = default;
};

StepShape shape(const ProofStep& s);

}  // namespace kinship
