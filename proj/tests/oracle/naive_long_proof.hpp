#pragma once

// Reference forward chainer for long proofs. Written from the pseudo-code
// with no shortcuts: after every new fact the pair scan starts over from the
// first pair of the (grown) fact list. Quadratic per step, fine for tests.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "kinship/rulebase.hpp"
#include "kinship/story.hpp"

namespace kinship::oracle {

using NaiveFact = std::tuple<std::string, Relation, std::string>;

struct NaiveStep {
  NaiveFact p1, p2, concl;
};

inline std::optional<std::vector<NaiveStep>> naive_long_proof(const Example& ex,
                                                              const RuleBase& rules) {
  std::map<std::string, Gender> gender;
  for (const auto& e : ex.story.entities) gender[e.surface] = e.gender;
  auto reverse = [&](const NaiveFact& f) {
    const auto& [a, r, b] = f;
    return NaiveFact{b, *rules.invert(r, gender.at(b)), a};
  };

  std::vector<NaiveFact> all;
  std::set<NaiveFact> seen;
  auto push = [&](const NaiveFact& f) {
    all.push_back(f);
    all.push_back(reverse(f));
    seen.insert(f);
    seen.insert(reverse(f));
  };
  for (const auto& f : ex.story.facts) {
    NaiveFact nf{f.subject.surface, f.relation, f.object.surface};
    if (!seen.count(nf)) push(nf);
  }

  const std::string& src = ex.query.source.surface;
  const std::string& tgt = ex.query.target.surface;
  std::vector<NaiveStep> proof;
  for (;;) {
    bool grew = false;
    for (std::size_t i = 0; i < all.size() && !grew; ++i) {
      for (std::size_t j = i + 1; j < all.size() && !grew; ++j) {
        const NaiveFact f1 = all[i], f2 = all[j];
        const auto& [e11, r1, e12] = f1;
        const auto& [e21, r2, e22] = f2;
        NaiveFact ab, bc;
        if (e11 == e21 && e12 != e22) {
          ab = reverse(f1), bc = f2;
        } else if (e11 == e22 && e12 != e21) {
          ab = f2, bc = f1;
        } else if (e12 == e21 && e11 != e22) {
          ab = f1, bc = f2;
        } else if (e12 == e22 && e11 != e21) {
          ab = f1, bc = reverse(f2);
        } else {
          continue;
        }
        NaiveStep step;
        if (auto r3 = rules.compose(std::get<1>(ab), std::get<1>(bc))) {
          step = {ab, bc, {std::get<0>(ab), *r3, std::get<2>(bc)}};
        } else {
          const NaiveFact cb = reverse(bc), ba = reverse(ab);
          auto r3b = rules.compose(std::get<1>(cb), std::get<1>(ba));
          if (!r3b) continue;
          step = {cb, ba, {std::get<0>(cb), *r3b, std::get<2>(ba)}};
        }
        if (seen.count(step.concl)) continue;
        push(step.concl);
        proof.push_back(step);
        grew = true;
        const auto& [a, r, c] = step.concl;
        if ((a == src && c == tgt) || (a == tgt && c == src)) return proof;
      }
    }
    if (!grew) return std::nullopt;
  }
}

}  // namespace kinship::oracle
