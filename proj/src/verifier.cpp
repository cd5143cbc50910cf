#include "kinship/verifier.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "text_util.hpp"

namespace kinship {

std::string_view name(GenerationMode m) {
  switch (m) {
    case GenerationMode::proof_generated: return "proof_generated";
    case GenerationMode::proof_given: return "proof_given";
    case GenerationMode::no_proof: return "no_proof";
  }
  return "?";
}

std::optional<GenerationMode> mode_from_name(std::string_view text) {
  for (auto m : {GenerationMode::proof_generated, GenerationMode::proof_given,
                 GenerationMode::no_proof}) {
    if (name(m) == text) return m;
  }
  return std::nullopt;
}

std::string_view name(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::answer_parse_fail: return "answer_parse_fail";
    case FailureReason::answer_wrong: return "answer_wrong";
    case FailureReason::step_parse_fail: return "step_parse_fail";
    case FailureReason::rule_violation: return "rule_violation";
    case FailureReason::ungrounded_premise: return "ungrounded_premise";
    case FailureReason::no_proof_section: return "no_proof_section";
  }
  return "?";
}

namespace {

bool is_tag(std::string_view tok) {
  return tok.size() > 2 && tok.front() == '<' && tok.back() == '>';
}

// Whitespace tokens, with record tags split off even when glued to words.
std::vector<std::string> tokenize(std::string_view text) {
  std::string spaced;
  spaced.reserve(text.size() + 16);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') {
      std::size_t close = text.find('>', i);
      if (close != std::string_view::npos) {
        spaced.push_back(' ');
        spaced.append(text.substr(i, close - i + 1));
        spaced.push_back(' ');
        i = close;
        continue;
      }
    }
    spaced.push_back(text[i]);
  }
  std::vector<std::string> out;
  for (std::string_view t : text_util::split_ws(spaced)) out.emplace_back(t);
  return out;
}

}  // namespace

std::optional<Triple> extract_answer(const Generation& gen, const TemplateSet& tpl) {
  const auto toks = tokenize(gen.raw_text);
  auto tag = std::find(toks.begin(), toks.end(), "<ANSWER>");
  std::size_t start;
  if (tag != toks.end()) {
    start = static_cast<std::size_t>(tag - toks.begin()) + 1;
  } else if (gen.mode == GenerationMode::proof_given) {
    start = 0;
  } else {
    return std::nullopt;
  }
  std::vector<std::string_view> sentence;
  for (std::size_t i = start; i < toks.size(); ++i) {
    if (is_tag(toks[i])) break;
    sentence.push_back(toks[i]);
    if (toks[i] == ".") break;
  }
  return tpl.parse_fact_tokens(sentence);
}

std::vector<std::string> proof_sentences(std::string_view raw_text) {
  const auto toks = tokenize(raw_text);
  std::size_t start = 0;
  if (auto it = std::find(toks.begin(), toks.end(), "<PROOF>"); it != toks.end()) {
    start = static_cast<std::size_t>(it - toks.begin()) + 1;
  }
  std::vector<std::string> out;
  std::vector<std::string_view> cur;
  for (std::size_t i = start; i < toks.size(); ++i) {
    if (is_tag(toks[i])) break;
    cur.push_back(toks[i]);
    if (toks[i] == ".") {
      out.push_back(text_util::join(cur, " "));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(text_util::join(cur, " "));
  return out;
}

namespace {

class GroundSet {
 public:
  GroundSet(std::span<const Fact> story, const RuleBase& rules) : rules_(rules) {
    for (const Fact& f : story) {
      gender_[f.subject.surface] = f.subject.gender;
      gender_[f.object.surface] = f.object.gender;
    }
    for (const Fact& f : story) add(shape(f));
  }

  bool contains(const Triple& t) const { return keys_.count(key(t)) > 0; }

  void add(const Triple& t) {
    keys_.insert(key(t));
    auto g = gender_.find(t.object);
    if (g == gender_.end()) return;
    if (auto inv = rules_.invert(t.relation, g->second)) {
      keys_.insert(key(Triple{t.object, *inv, t.subject}));
    }
  }

 private:
  const RuleBase& rules_;
  std::map<std::string, Gender, std::less<>> gender_;
  std::unordered_set<std::string> keys_;
};

// Index of the first step whose premises are not grounded when the steps
// are read in the given order, or steps.size() when all ground.
std::size_t ground_in_order(std::span<const Fact> story, const RuleBase& rules,
                            const std::vector<StepShape>& steps,
                            const std::vector<std::size_t>& order) {
  GroundSet ground(story, rules);
  for (std::size_t i : order) {
    const StepShape& s = steps[i];
    if (!ground.contains(s.premise1) || !ground.contains(s.premise2)) return i;
    ground.add(s.conclusion);
  }
  return steps.size();
}

}  // namespace

Verdict verify_proof(std::span<const Fact> story, const Generation& gen, const RuleBase& rules,
                     const TemplateSet& tpl, const VerifyOptions& opts) {
  Verdict v;
  const auto sentences = proof_sentences(gen.raw_text);
  if (sentences.empty() || (sentences.size() == 1 && sentences[0] == "none .")) {
    v.failure_reason = FailureReason::no_proof_section;
    return v;
  }

  std::vector<StepShape> steps;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto parsed = tpl.parse_step(sentences[i]);
    if (!parsed) {
      v.per_step.push_back({i, sentences[i], FailureReason::step_parse_fail,
                            "sentence does not match the step pattern"});
      continue;
    }
    const StepShape& s = *parsed;
    std::string problem;
    if (s.premise1.object != s.premise2.subject) {
      problem = "premises do not share a middle entity";
    } else if (s.conclusion.subject != s.premise1.subject ||
               s.conclusion.object != s.premise2.object) {
      problem = "conclusion entities do not match the premises";
    } else if (auto r = rules.compose(s.premise1.relation, s.premise2.relation); !r) {
      problem = "no rule for " + std::string(name(s.premise1.relation)) + " . " +
                std::string(name(s.premise2.relation));
    } else if (*r != s.conclusion.relation) {
      problem = "rule gives " + std::string(name(*r)) + ", step concludes " +
                std::string(name(s.conclusion.relation));
    }
    if (!problem.empty()) {
      v.per_step.push_back({i, sentences[i], FailureReason::rule_violation, problem});
    }
    steps.push_back(s);
  }
  if (!v.per_step.empty()) {
    // Parsing is checked before rules, whatever the step order.
    const bool unparsed = steps.size() < sentences.size();
    v.failure_reason = unparsed ? FailureReason::step_parse_fail : FailureReason::rule_violation;
    return v;
  }

  std::vector<std::size_t> order(steps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::size_t bad = steps.size();
  if (opts.grounding == Grounding::forward_or_reversed) {
    bad = ground_in_order(story, rules, steps, order);
    if (bad != steps.size()) {
      std::vector<std::size_t> reversed(order.rbegin(), order.rend());
      if (ground_in_order(story, rules, steps, reversed) == steps.size()) bad = steps.size();
    }
  } else {
    GroundSet ground(story, rules);
    std::vector<bool> accepted(steps.size(), false);
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t i = 0; i < steps.size(); ++i) {
        if (accepted[i]) continue;
        if (ground.contains(steps[i].premise1) && ground.contains(steps[i].premise2)) {
          accepted[i] = true;
          ground.add(steps[i].conclusion);
          progress = true;
        }
      }
    }
    auto it = std::find(accepted.begin(), accepted.end(), false);
    bad = static_cast<std::size_t>(it - accepted.begin());
  }
  if (bad != steps.size()) {
    v.failure_reason = FailureReason::ungrounded_premise;
    v.per_step.push_back({bad, sentences[bad], FailureReason::ungrounded_premise,
                          "premise is neither a story fact nor a conclusion of another step"});
    return v;
  }
  v.proof_valid = true;
  return v;
}

bool answer_matches(const Triple& got, const Example& gold, const RuleBase& rules,
                    bool strict_direction) {
  if (got == shape(gold.answer)) return true;
  if (strict_direction) return false;
  auto inv = rules.invert(gold.answer.relation, gold.answer.object.gender);
  return inv && got == Triple{gold.answer.object.surface, *inv, gold.answer.subject.surface};
}

Verdict grade(const Example& gold, const Generation& gen, const RuleBase& rules,
              const TemplateSet& tpl, const VerifyOptions& opts) {
  Verdict v;
  if (gen.mode != GenerationMode::proof_given) {
    v = verify_proof(gold.story.facts, gen, rules, tpl, opts);
  }
  auto got = extract_answer(gen, tpl);
  if (!got) {
    if (v.failure_reason == FailureReason::none) v.failure_reason = FailureReason::answer_parse_fail;
    return v;
  }
  v.answer_correct = answer_matches(*got, gold, rules, opts.strict_direction);
  if (!v.answer_correct && v.failure_reason == FailureReason::none) {
    v.failure_reason = FailureReason::answer_wrong;
  }
  return v;
}

}  // namespace kinship
