#include "kinship/story.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "kinship/errors.hpp"
#include "kinship/rng.hpp"

namespace kinship {

std::string_view name(Naming n) { return n == Naming::named ? "named" : "anon"; }

std::optional<Naming> naming_from_name(std::string_view text) {
  if (text == "named") return Naming::named;
  if (text == "anon" || text == "anonymized") return Naming::anonymized;
  return std::nullopt;
}

namespace {

struct Edge {
  std::size_t subject;
  Relation relation;
  std::size_t object;
};

// Composes known relations (story facts and inverses) to a fixpoint over
// the entities of `chain`. False when some pair of entities gets two
// different relations, or a spouse relation joins two entities of the same
// gender: the story describes no family the rulebase admits.
bool closure_consistent(const std::vector<Edge>& chain, const std::vector<Gender>& genders,
                        const RuleBase& rules) {
  const std::size_t n = genders.size();
  std::vector<std::optional<Relation>> rel(n * n);
  auto set = [&](std::size_t a, Relation r, std::size_t c) {
    if (is_spouse(r) && genders[a] == genders[c]) return false;
    auto& slot = rel[a * n + c];
    if (slot) return *slot == r;
    slot = r;
    return true;
  };
  auto assert_fact = [&](std::size_t a, Relation r, std::size_t c) {
    if (!set(a, r, c)) return false;
    auto inv = rules.invert(r, genders[c]);
    return !inv || set(c, *inv, a);
  };
  for (const Edge& e : chain) {
    if (!assert_fact(e.subject, e.relation, e.object)) return false;
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const auto r1 = rel[a * n + b];
        if (!r1) continue;
        for (std::size_t c = 0; c < n; ++c) {
          const auto r2 = rel[b * n + c];
          if (c == a || !r2) continue;
          const auto r3 = rules.compose(*r1, *r2);
          if (!r3) continue;
          const bool fresh = !rel[a * n + c];
          if (!assert_fact(a, *r3, c)) return false;
          grew = grew || fresh;
        }
      }
    }
  }
  return true;
}

// One draw of the splitting process, before the consistency check.
void sample_chain(const RuleBase& rules, const std::vector<Relation>& answer_relations, int level,
                  Rng& rng, std::vector<Gender>& genders, std::vector<Edge>& chain,
                  std::vector<std::array<Edge, 3>>& trace) {
  const Relation answer_rel = answer_relations[rng.below(answer_relations.size())];
  genders.push_back(gender_of(answer_rel));
  genders.push_back(is_spouse(answer_rel) ? opposite(genders[0]) : kGenders[rng.below(2)]);

  chain = {{0, answer_rel, 1}};
  // Spouse edges ever created, including ones later split away: implied
  // facts count too, so nobody ends up with two spouses.
  std::vector<bool> married{is_spouse(answer_rel), is_spouse(answer_rel)};

  std::vector<std::pair<Relation, Relation>> options;
  std::vector<std::size_t> candidates;
  for (int step = 1; step < level; ++step) {
    auto applicable = [&](std::size_t i, std::vector<std::pair<Relation, Relation>>* out) {
      const Edge& e = chain[i];
      std::size_t count = 0;
      for (const auto& [r1, r2] : rules.splits_of(e.relation)) {
        const Gender middle = gender_of(r2);
        if (is_spouse(r1) && (middle == genders[e.subject] || married[e.subject])) continue;
        if (is_spouse(r2) && (middle == genders[e.object] || married[e.object])) continue;
        ++count;
        if (out) out->emplace_back(r1, r2);
      }
      return count;
    };

    candidates.clear();
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (applicable(i, nullptr) > 0) candidates.push_back(i);
    }
    if (candidates.empty()) {
      std::ostringstream msg;
      msg << "no applicable split for any story relation (";
      for (std::size_t i = 0; i < chain.size(); ++i) {
        msg << (i ? ", " : "") << name(chain[i].relation);
      }
      msg << ") under rulebase " << rules.origin();
      throw GenerationError(msg.str());
    }
    const std::size_t pick = candidates[rng.below(candidates.size())];
    options.clear();
    applicable(pick, &options);
    const auto [r1, r2] = options[rng.below(options.size())];

    const Edge whole = chain[pick];
    const std::size_t middle = genders.size();
    genders.push_back(gender_of(r2));
    married.push_back(is_spouse(r1) || is_spouse(r2));
    if (is_spouse(r1)) married[whole.subject] = true;
    if (is_spouse(r2)) married[whole.object] = true;
    const Edge left{whole.subject, r1, middle};
    const Edge right{middle, r2, whole.object};
    trace.push_back({left, right, whole});
    chain[pick] = left;
    chain.insert(chain.begin() + static_cast<std::ptrdiff_t>(pick) + 1, right);
  }
}

}  // namespace

StoryGenerator::StoryGenerator(const RuleBase& rules, const NamePool& names, GeneratorOptions opts)
    : rules_(&rules), names_(&names), opts_(opts) {
  for (Relation r : kAllRelations) {
    if (!rules.splits_of(r).empty()) answer_relations_.push_back(r);
  }
  if (answer_relations_.empty()) {
    throw ConfigError("rulebase " + rules.origin() + " has no splittable relation");
  }
}

Example StoryGenerator::generate(int level, Naming naming, std::uint64_t seed) const {
  if (level < 2) throw ArgumentError("level must be >= 2, got " + std::to_string(level));

  Rng rng(seed);
  std::vector<Gender> genders;
  std::vector<Edge> chain;
  std::vector<std::array<Edge, 3>> trace;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == opts_.max_resamples) {
      throw GenerationError("no consistent level-" + std::to_string(level) + " story after " +
                            std::to_string(attempt) + " draws (seed " + std::to_string(seed) +
                            ") under rulebase " + rules_->origin());
    }
    if (attempt > 0) rng = Rng(derive_seed(seed, 0x726573616d706c65ULL, attempt));
    genders.clear();
    trace.clear();
    sample_chain(*rules_, answer_relations_, level, rng, genders, chain, trace);
    if (closure_consistent(chain, genders, *rules_)) break;
  }

  if (opts_.shuffle_story) rng.shuffle(std::span<Edge>(chain));

  Example ex;
  ex.seed = seed;
  ex.naming = naming;
  ex.story.level = level;

  // Named surfaces come from the pool; anonymized examples get placeholders
  // first and are then re-tokenized.
  std::vector<std::string> surfaces;
  if (naming == Naming::named) {
    std::set<std::size_t> used[2];
    for (Gender g : genders) {
      const auto& pool = names_->names(g);
      auto& taken = used[static_cast<std::size_t>(g)];
      if (taken.size() >= pool.size()) {
        throw GenerationError("name pool has too few " + std::string(name(g)) + " names");
      }
      std::size_t k = rng.below(pool.size());
      while (taken.count(k)) k = rng.below(pool.size());
      taken.insert(k);
      surfaces.push_back(pool[k]);
    }
  } else {
    for (std::size_t i = 0; i < genders.size(); ++i) surfaces.push_back("E" + std::to_string(i));
  }

  for (std::size_t i = 0; i < genders.size(); ++i) {
    ex.story.entities.push_back(Entity{surfaces[i], genders[i]});
  }
  auto to_fact = [&](const Edge& e) {
    return Fact{ex.story.entities[e.subject], e.relation, ex.story.entities[e.object]};
  };
  for (const Edge& e : chain) ex.story.facts.push_back(to_fact(e));
  for (const auto& t : trace) {
    ex.split_trace.push_back(ProofStep{to_fact(t[0]), to_fact(t[1]), to_fact(t[2])});
  }
  ex.query = Query{ex.story.entities[0], ex.story.entities[1]};
  ex.answer = to_fact(trace.front()[2]);

  if (naming == Naming::anonymized) {
    return anonymize(ex, opts_.anon_pool_size, derive_seed(seed, 0x616e6f6eULL));
  }
  return ex;
}

Example anonymize(const Example& ex, std::size_t pool_size, std::uint64_t seed) {
  const std::size_t n = ex.story.entities.size();
  if (pool_size < n) {
    throw ArgumentError("anonymization pool of " + std::to_string(pool_size) +
                        " tokens is smaller than the " + std::to_string(n) + " entities");
  }
  Rng rng(seed);
  std::vector<std::size_t> tokens(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) tokens[i] = i;
  // Partial Fisher-Yates: the first n slots are a draw without replacement.
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(tokens[i], tokens[i + rng.below(pool_size - i)]);
  }
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < n; ++i) {
    rename[ex.story.entities[i].surface] = "ENT_" + std::to_string(tokens[i]);
  }
  auto ent = [&](const Entity& e) { return Entity{rename.at(e.surface), e.gender}; };
  auto fact = [&](const Fact& f) { return Fact{ent(f.subject), f.relation, ent(f.object)}; };

  Example out = ex;
  out.naming = Naming::anonymized;
  for (auto& e : out.story.entities) e = ent(e);
  for (auto& f : out.story.facts) f = fact(f);
  for (auto& s : out.split_trace) {
    s = ProofStep{fact(s.premise1), fact(s.premise2), fact(s.conclusion)};
  }
  out.query = Query{ent(ex.query.source), ent(ex.query.target)};
  out.answer = fact(ex.answer);
  return out;
}

std::string check_structure(const Example& ex, const RuleBase& rules) {
  const auto& st = ex.story;
  const auto k = static_cast<std::size_t>(st.level);
  if (st.level < 2) return "level < 2";
  if (st.facts.size() != k) return "story has " + std::to_string(st.facts.size()) + " facts";
  if (st.entities.size() != k + 1) return "story has " + std::to_string(st.entities.size()) + " entities";
  if (ex.split_trace.size() != k - 1) return "trace has " + std::to_string(ex.split_trace.size()) + " steps";

  std::map<std::string, Gender> gender;
  for (const auto& e : st.entities) {
    if (!valid_surface(e.surface)) return "invalid surface '" + e.surface + "'";
    if (!gender.emplace(e.surface, e.gender).second) return "duplicate surface '" + e.surface + "'";
  }
  auto known_entity = [&](const Entity& e) {
    auto it = gender.find(e.surface);
    return it != gender.end() && it->second == e.gender;
  };

  std::map<std::string, int> degree;
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& f : st.facts) {
    if (!well_formed(f)) return "ill-formed fact " + key(f);
    if (!known_entity(f.subject) || !known_entity(f.object)) return "unknown entity in " + key(f);
    auto ends = std::minmax(f.subject.surface, f.object.surface);
    if (!edges.insert(ends).second) return "duplicate edge " + key(f);
    ++degree[f.subject.surface];
    ++degree[f.object.surface];
  }
  // A connected graph with k+1 nodes, k edges, two leaves and the rest of
  // degree two is a simple path.
  if (degree.size() != k + 1) return "story does not touch every entity";
  for (const auto& [surface, d] : degree) {
    const bool endpoint = surface == ex.query.source.surface || surface == ex.query.target.surface;
    if (d != (endpoint ? 1 : 2)) return "story is not a path between the query entities";
  }
  std::set<std::string> seen{ex.query.source.surface};
  std::vector<std::string> frontier{ex.query.source.surface};
  while (!frontier.empty()) {
    std::string cur = frontier.back();
    frontier.pop_back();
    for (const auto& [a, b] : edges) {
      const std::string* next = a == cur ? &b : (b == cur ? &a : nullptr);
      if (next && seen.insert(*next).second) frontier.push_back(*next);
    }
  }
  if (seen.size() != k + 1) return "story is disconnected";

  if (ex.answer.subject != ex.query.source || ex.answer.object != ex.query.target) {
    return "answer does not link the query entities";
  }
  std::unordered_set<std::string> known;
  for (const auto& f : st.facts) known.insert(key(f));
  for (auto it = ex.split_trace.rbegin(); it != ex.split_trace.rend(); ++it) {
    const ProofStep& s = *it;
    if (!known.count(key(s.premise1)) || !known.count(key(s.premise2))) {
      return "trace premise not available when folding: " + key(s.conclusion);
    }
    if (s.premise1.object != s.premise2.subject || s.conclusion.subject != s.premise1.subject ||
        s.conclusion.object != s.premise2.object) {
      return "trace step entities do not chain: " + key(s.conclusion);
    }
    auto r = rules.compose(s.premise1.relation, s.premise2.relation);
    if (!r || *r != s.conclusion.relation) return "trace step not licensed: " + key(s.conclusion);
    known.insert(key(s.conclusion));
  }
  if (ex.split_trace.front().conclusion != ex.answer) return "first split does not conclude the answer";
  return {};
}

}  // namespace kinship
