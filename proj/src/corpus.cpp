#include "kinship/corpus.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

#include "kinship/errors.hpp"
#include "kinship/rng.hpp"
#include "text_util.hpp"

namespace kinship {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kTags{"<STORY>", "<QUERY>", "<PROOF>", "<ANSWER>"};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t pick_variant(std::uint64_t seed, std::string_view content, std::uint64_t slot) {
  return static_cast<std::size_t>(derive_seed(seed, fnv1a(content), slot) %
                                   TemplateSet::kFactVariants);
}

}  // namespace

VariantPlan seeded_variants(const Example& ex, const Proof& proof) {
  VariantPlan plan;
  for (const Fact& f : ex.story.facts) plan.story.push_back(pick_variant(ex.seed, key(f), 0));
  for (const ProofStep& s : proof.steps) {
    const std::string content = key(s.premise1) + "/" + key(s.premise2);
    plan.steps.push_back({pick_variant(ex.seed, content, 1), pick_variant(ex.seed, content, 2),
                          pick_variant(ex.seed, content, 3)});
  }
  return plan;
}

FlatRecord render_record(std::string id, const Example& ex, const Proof& proof,
                         const TemplateSet& tpl, const VariantPlan& plan,
                         const StoryTemplates* story_templates) {
  std::vector<std::string> parts{"<STORY>"};
  for (std::size_t i = 0; i < ex.story.facts.size(); ++i) {
    const Fact& f = ex.story.facts[i];
    parts.push_back(story_templates ? story_templates->render(f, plan.story.at(i))
                                    : tpl.render_fact(f, plan.story.at(i)));
  }
  parts.emplace_back("<QUERY>");
  parts.push_back(tpl.render_query(ex.query));
  parts.emplace_back("<PROOF>");
  if (proof.strategy == Strategy::np) {
    parts.emplace_back("none .");
  } else {
    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
      parts.push_back(tpl.render_step(proof.steps[i], plan.steps.at(i)));
    }
  }
  parts.emplace_back("<ANSWER>");
  parts.push_back(tpl.render_answer(ex.answer));
  return FlatRecord{std::move(id), text_util::join(parts, " "), ex.story.level, proof.strategy};
}

namespace {

json triple_json(const Fact& f) {
  return json::array({f.subject.surface, std::string(name(f.relation)), f.object.surface});
}

json step_json(const ProofStep& s) {
  return json::array({triple_json(s.premise1), triple_json(s.premise2), triple_json(s.conclusion)});
}

class EntityTable {
 public:
  explicit EntityTable(const std::vector<Entity>& ents) {
    for (const auto& e : ents) by_surface_[e.surface] = e;
  }
  const Entity& at(const std::string& surface) const {
    auto it = by_surface_.find(surface);
    if (it == by_surface_.end()) throw InputError("unknown entity '" + surface + "'");
    return it->second;
  }

 private:
  std::map<std::string, Entity> by_surface_;
};

Fact fact_from(const json& j, const EntityTable& ents) {
  if (!j.is_array() || j.size() != 3) throw InputError("fact must be a 3-element array");
  auto r = relation_from_name(j[1].get<std::string>());
  if (!r) throw InputError("unknown relation '" + j[1].get<std::string>() + "'");
  return Fact{ents.at(j[0].get<std::string>()), *r, ents.at(j[2].get<std::string>())};
}

std::vector<ProofStep> steps_from(const json& j, const EntityTable& ents) {
  std::vector<ProofStep> out;
  for (const auto& s : j) {
    if (!s.is_array() || s.size() != 3) throw InputError("proof step must be a 3-element array");
    out.push_back(ProofStep{fact_from(s[0], ents), fact_from(s[1], ents), fact_from(s[2], ents)});
  }
  return out;
}

}  // namespace

std::string sidecar_line(const SidecarRecord& rec) {
  const Example& ex = rec.example;
  json j;
  j["id"] = rec.id;
  j["level"] = ex.story.level;
  j["seed"] = ex.seed;
  j["naming"] = std::string(name(ex.naming));
  j["strategy"] = std::string(name(rec.proof.strategy));
  json ents = json::array();
  for (const auto& e : ex.story.entities) ents.push_back({e.surface, std::string(name(e.gender))});
  j["entities"] = ents;
  json story = json::array();
  for (const auto& f : ex.story.facts) story.push_back(triple_json(f));
  j["story"] = story;
  j["query"] = json::array({ex.query.source.surface, ex.query.target.surface});
  j["answer"] = triple_json(ex.answer);
  json trace = json::array();
  for (const auto& s : ex.split_trace) trace.push_back(step_json(s));
  j["trace"] = trace;
  json proof = json::array();
  for (const auto& s : rec.proof.steps) proof.push_back(step_json(s));
  j["proof"] = proof;
  return j.dump();
}

SidecarRecord parse_sidecar_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    SidecarRecord rec;
    rec.id = j.at("id").get<std::string>();
    Example& ex = rec.example;
    ex.story.level = j.at("level").get<int>();
    ex.seed = j.at("seed").get<std::uint64_t>();
    auto naming = naming_from_name(j.at("naming").get<std::string>());
    auto strategy = strategy_from_name(j.at("strategy").get<std::string>());
    if (!naming || !strategy) throw InputError("unknown naming or strategy");
    ex.naming = *naming;
    rec.proof.strategy = *strategy;
    for (const auto& e : j.at("entities")) {
      auto g = gender_from_name(e.at(1).get<std::string>());
      if (!g) throw InputError("unknown gender");
      ex.story.entities.push_back(Entity{e.at(0).get<std::string>(), *g});
    }
    EntityTable table(ex.story.entities);
    for (const auto& f : j.at("story")) ex.story.facts.push_back(fact_from(f, table));
    const auto& q = j.at("query");
    ex.query = Query{table.at(q.at(0).get<std::string>()), table.at(q.at(1).get<std::string>())};
    ex.answer = fact_from(j.at("answer"), table);
    ex.split_trace = steps_from(j.at("trace"), table);
    rec.proof.steps = steps_from(j.at("proof"), table);
    return rec;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed sidecar record: ") + e.what());
  }
}

std::vector<SidecarRecord> load_sidecar(const std::filesystem::path& path) {
  const std::string text = text_util::read_file(path);
  std::vector<SidecarRecord> out;
  int line_no = 0;
  for (std::string_view line : text_util::split_lines(text)) {
    ++line_no;
    if (text_util::trim(line).empty()) continue;
    try {
      out.push_back(parse_sidecar_line(line));
    } catch (const InputError& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::optional<ParsedRecord> parse_record(std::string_view text, const TemplateSet& tpl) {
  const auto toks = text_util::split_ws(text);
  std::array<std::size_t, 4> at{};
  std::size_t next = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    for (std::size_t t = 0; t < kTags.size(); ++t) {
      if (toks[i] != kTags[t]) continue;
      if (t != next) return std::nullopt;  // missing, repeated or out of order
      at[next++] = i;
    }
  }
  if (next != kTags.size() || at[0] != 0) return std::nullopt;

  auto sentences = [&](std::size_t from, std::size_t to) {
    std::vector<std::vector<std::string_view>> out;
    std::vector<std::string_view> cur;
    for (std::size_t i = from; i < to; ++i) {
      cur.push_back(toks[i]);
      if (toks[i] == "." || toks[i] == "?") {
        out.push_back(cur);
        cur.clear();
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };

  ParsedRecord rec;
  for (const auto& s : sentences(at[0] + 1, at[1])) {
    auto t = tpl.parse_fact_tokens(s);
    if (!t) return std::nullopt;
    rec.story.push_back(*t);
  }
  auto q = sentences(at[1] + 1, at[2]);
  if (q.size() != 1) return std::nullopt;
  auto query = tpl.parse_query(text_util::join(q[0], " "));
  if (!query) return std::nullopt;
  rec.query = *query;
  auto proof = sentences(at[2] + 1, at[3]);
  if (proof.size() == 1 && text_util::join(proof[0], " ") == "none .") {
    rec.no_proof = true;
  } else {
    for (const auto& s : proof) {
      auto step = tpl.parse_step_tokens(s);
      if (!step) return std::nullopt;
      rec.proof.push_back(*step);
    }
  }
  auto ans = sentences(at[3] + 1, toks.size());
  if (ans.size() != 1) return std::nullopt;
  auto answer = tpl.parse_fact_tokens(ans[0]);
  if (!answer) return std::nullopt;
  rec.answer = *answer;
  return rec;
}

ParsedRecord expected_parse(const SidecarRecord& rec) {
  ParsedRecord out;
  for (const auto& f : rec.example.story.facts) out.story.push_back(shape(f));
  out.query = {rec.example.query.source.surface, rec.example.query.target.surface};
  for (const auto& s : rec.proof.steps) out.proof.push_back(shape(s));
  out.no_proof = rec.proof.strategy == Strategy::np;
  out.answer = shape(rec.example.answer);
  return out;
}

void emit_corpus(std::span<const SidecarRecord> records, const TemplateSet& tpl,
                 const std::filesystem::path& prefix, const StoryTemplates* story_templates) {
  for (const auto& rec : records) {
    for (const auto& e : rec.example.story.entities) {
      if (!valid_surface(e.surface)) {
        throw GenerationError("entity surface '" + e.surface + "' in record " + rec.id +
                              " collides with record delimiters or tokenization");
      }
    }
  }
  std::filesystem::path flat_path = prefix;
  flat_path += ".txt";
  std::filesystem::path side_path = prefix;
  side_path += ".jsonl";
  if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
  std::ofstream flat(flat_path, std::ios::binary);
  std::ofstream side(side_path, std::ios::binary);
  if (!flat || !side) throw InputError("cannot write corpus files at " + prefix.string());
  for (const auto& rec : records) {
    FlatRecord fr = render_record(rec.id, rec.example, rec.proof, tpl, story_templates);
    flat << fr.id << '\t' << fr.text << '\n';
    side << sidecar_line(rec) << '\n';
  }
  if (!flat || !side) throw InputError("write failed for " + prefix.string());
}

}  // namespace kinship
