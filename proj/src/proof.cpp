#include "kinship/proof.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "kinship/errors.hpp"

namespace kinship {

std::string_view name(Strategy s) {
  switch (s) {
    case Strategy::sp: return "sp";
    case Strategy::spr: return "spr";
    case Strategy::lp: return "lp";
    case Strategy::lpr: return "lpr";
    case Strategy::np: return "np";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(std::string_view text) {
  for (Strategy s : kAllStrategies) {
    if (name(s) == text) return s;
  }
  return std::nullopt;
}

Proof short_proof_rev(const Example& ex) {
  if (ex.split_trace.empty()) throw std::logic_error("example has an empty split trace");
  return Proof{Strategy::spr, ex.split_trace};
}

Proof short_proof(const Example& ex) {
  Proof p = short_proof_rev(ex);
  std::reverse(p.steps.begin(), p.steps.end());
  p.strategy = Strategy::sp;
  return p;
}

namespace {

struct LocalFact {
  std::uint32_t subject;
  Relation relation;
  std::uint32_t object;
};

std::uint64_t pack(std::uint32_t s, Relation r, std::uint32_t o) {
  return (static_cast<std::uint64_t>(s) << 40) | (static_cast<std::uint64_t>(o) << 8) |
         static_cast<std::uint64_t>(index(r));
}

class ForwardChainer {
 public:
  ForwardChainer(const Example& ex, const RuleBase& rules) : ex_(ex), rules_(rules) {
    const auto& ents = ex.story.entities;
    for (std::uint32_t i = 0; i < ents.size(); ++i) id_[ents[i].surface] = i;
    source_ = id_.at(ex.query.source.surface);
    target_ = id_.at(ex.query.target.surface);
    for (const Fact& f : ex.story.facts) {
      LocalFact lf{id_.at(f.subject.surface), f.relation, id_.at(f.object.surface)};
      if (known_keys_.count(pack(lf.subject, lf.relation, lf.object))) continue;
      add(lf);
    }
  }

  std::vector<ProofStep> run() {
    std::vector<std::size_t> next;
    for (;;) {
      next.resize(known_.size(), 0);
      bool appended = false;
      for (std::size_t i = 0; i < known_.size() && !appended; ++i) {
        for (std::size_t j = std::max(next[i], i + 1); j < known_.size(); ++j) {
          next[i] = j + 1;
          if (try_pair(known_[i], known_[j])) {
            appended = true;
            break;
          }
        }
      }
      if (done_) return std::move(steps_);
      if (!appended) {
        throw InferenceIncomplete(
            "forward chaining exhausted " + std::to_string(known_.size()) +
            " known facts without linking " + ex_.query.source.surface + " and " +
            ex_.query.target.surface + "; rulebase " + rules_.origin() +
            " lacks the compositions needed for this story");
      }
    }
  }

 private:
  Gender gender(std::uint32_t e) const { return ex_.story.entities[e].gender; }

  Relation inv(Relation r, std::uint32_t object) const {
    auto out = rules_.invert(r, gender(object));
    if (!out) {
      throw ConfigError("rulebase " + rules_.origin() + " has no inversion for (" +
                        std::string(name(r)) + ", " + std::string(name(gender(object))) + ")");
    }
    return *out;
  }

  void add(const LocalFact& f) {
    LocalFact back{f.object, inv(f.relation, f.object), f.subject};
    known_.push_back(f);
    known_.push_back(back);
    known_keys_.insert(pack(f.subject, f.relation, f.object));
    known_keys_.insert(pack(back.subject, back.relation, back.object));
  }

  Fact fact(std::uint32_t s, Relation r, std::uint32_t o) const {
    return Fact{ex_.story.entities[s], r, ex_.story.entities[o]};
  }

  // Returns true when the pair produced a new fact.
  bool try_pair(LocalFact f1, LocalFact f2) {
    const auto [e11, r1, e12] = f1;
    const auto [e21, r2, e22] = f2;
    const Relation inv_r1 = inv(r1, e12);
    const Relation inv_r2 = inv(r2, e22);

    std::uint32_t a, b, c;
    Relation first, second;       // A first B, B second C
    Relation first_inv, second_inv;  // B first_inv A, C second_inv B
    if (e11 == e21 && e12 != e22) {
      a = e12, first = inv_r1, b = e11, second = r2, c = e22;
      first_inv = r1, second_inv = inv_r2;
    } else if (e11 == e22 && e12 != e21) {
      a = e21, first = r2, b = e22, second = r1, c = e12;
      first_inv = inv_r2, second_inv = inv_r1;
    } else if (e12 == e21 && e11 != e22) {
      a = e11, first = r1, b = e12, second = r2, c = e22;
      first_inv = inv_r1, second_inv = inv_r2;
    } else if (e12 == e22 && e11 != e21) {
      a = e11, first = r1, b = e12, second = inv_r2, c = e21;
      first_inv = inv_r1, second_inv = r2;
    } else {
      return false;
    }

    LocalFact p1, p2, concl;
    if (auto r3 = rules_.compose(first, second)) {
      p1 = {a, first, b}, p2 = {b, second, c}, concl = {a, *r3, c};
    } else if (auto r3 = rules_.compose(second_inv, first_inv)) {
      p1 = {c, second_inv, b}, p2 = {b, first_inv, a}, concl = {c, *r3, a};
    } else {
      return false;
    }
    if (known_keys_.count(pack(concl.subject, concl.relation, concl.object))) return false;

    add(concl);
    steps_.push_back(ProofStep{fact(p1.subject, p1.relation, p1.object),
                               fact(p2.subject, p2.relation, p2.object),
                               fact(concl.subject, concl.relation, concl.object)});
    if ((concl.subject == source_ && concl.object == target_) ||
        (concl.subject == target_ && concl.object == source_)) {
      done_ = true;
    }
    return true;
  }

  const Example& ex_;
  const RuleBase& rules_;
  std::map<std::string, std::uint32_t> id_;
  std::uint32_t source_ = 0;
  std::uint32_t target_ = 0;
  std::vector<LocalFact> known_;
  std::unordered_set<std::uint64_t> known_keys_;
  std::vector<ProofStep> steps_;
  bool done_ = false;
};

}  // namespace

Proof long_proof(const Example& ex, const RuleBase& rules) {
  return Proof{Strategy::lp, ForwardChainer(ex, rules).run()};
}

Proof long_proof_rev(const Example& ex, const RuleBase& rules) {
  Proof p = long_proof(ex, rules);
  std::reverse(p.steps.begin(), p.steps.end());
  p.strategy = Strategy::lpr;
  return p;
}

Proof make_proof(Strategy s, const Example& ex, const RuleBase& rules) {
  switch (s) {
    case Strategy::sp: return short_proof(ex);
    case Strategy::spr: return short_proof_rev(ex);
    case Strategy::lp: return long_proof(ex, rules);
    case Strategy::lpr: return long_proof_rev(ex, rules);
    case Strategy::np: return Proof{Strategy::np, {}};
  }
  return Proof{};
}

}  // namespace kinship
