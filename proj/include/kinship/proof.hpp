#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "kinship/fact.hpp"
#include "kinship/rulebase.hpp"
#include "kinship/story.hpp"

namespace kinship {

// sp / lp are forward chaining (answer in the last step), spr / lpr are
// backward chaining (answer in the first step), np carries no steps.
enum class Strategy : std::uint8_t { sp, spr, lp, lpr, np };

inline constexpr std::array<Strategy, 5> kAllStrategies{Strategy::sp, Strategy::spr, Strategy::lp,
                                                        Strategy::lpr, Strategy::np};

std::string_view name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view text);

struct Proof {
  Strategy strategy = Strategy::np;
  std::vector<ProofStep> steps;

  friend bool operator==(const Proof&, const Proof&) = default;
};

// The split trace as generated. Throws std::logic_error on an empty trace.
Proof short_proof_rev(const Example& ex);

// short_proof_rev with the steps reversed.
Proof short_proof(const Example& ex);

// Forward-chaining enumeration over the story.
//
// The known list starts as story facts interleaved with their inverses.
// Pairs (i, j), i < j, are scanned in lexicographic order over the growing
// list; each pair sharing exactly one entity is aligned as A-B + B-C and
// composed, falling back to C-B + B-A on the inverted relations. A new
// conclusion is appended with its inverse and emitted as a step, and the
// scan restarts from the first pair. Conclusions already known (directly or
// as an inverse) emit nothing. Stops as soon as a conclusion links the query
// entities in either direction.
//
// Throws InferenceIncomplete when no pair yields anything new and the query
// is still unresolved.
Proof long_proof(const Example& ex, const RuleBase& rules);

// long_proof with the steps reversed.
Proof long_proof_rev(const Example& ex, const RuleBase& rules);

Proof make_proof(Strategy s, const Example& ex, const RuleBase& rules);

}  // namespace kinship
