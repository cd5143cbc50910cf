#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kinship/fact.hpp"
#include "kinship/rulebase.hpp"
#include "kinship/story.hpp"
#include "kinship/templates.hpp"

namespace kinship {

enum class GenerationMode : std::uint8_t { proof_generated, proof_given, no_proof };

std::string_view name(GenerationMode m);
std::optional<GenerationMode> mode_from_name(std::string_view text);

// A model continuation: the text emitted after the prompt.
struct Generation {
  std::string example_id;
  std::string raw_text;
  GenerationMode mode = GenerationMode::proof_generated;
};

enum class FailureReason : std::uint8_t {
  none,
  answer_parse_fail,
  answer_wrong,
  step_parse_fail,
  rule_violation,
  ungrounded_premise,
  no_proof_section,
};

std::string_view name(FailureReason r);

struct StepDiagnostic {
  std::size_t index = 0;
  std::string sentence;
  FailureReason reason = FailureReason::none;
  std::string detail;
};

struct Verdict {
  bool answer_correct = false;
  bool proof_valid = false;
  FailureReason failure_reason = FailureReason::none;
  std::vector<StepDiagnostic> per_step;
};

enum class Grounding : std::uint8_t {
  // Premises must come from the story or earlier steps, reading the steps
  // in order or in reverse order.
  forward_or_reversed,
  // Steps may be accepted in any order.
  order_insensitive,
};

struct VerifyOptions {
  Grounding grounding = Grounding::forward_or_reversed;
  // Require the answer triple in the query's direction; otherwise the
  // inverse triple is accepted too.
  bool strict_direction = false;
};

// First sentence after the first "<ANSWER>" tag, parsed as a fact. For
// proof-given generations, which start after the tag, a missing tag means
// the whole text is the answer region. Never throws.
std::optional<Triple> extract_answer(const Generation& gen, const TemplateSet& tpl);

// Sentences between "<PROOF>" (or the start of the text when the tag is in
// the prompt) and "<ANSWER>", split at "." tokens.
std::vector<std::string> proof_sentences(std::string_view raw_text);

// Checks the proof region of `gen` against the story: every sentence parses
// as a step, every step is licensed by a compose entry with chained
// entities, and every premise is grounded in the story (up to inversion) or
// in another accepted step per `opts.grounding`. Fills proof_valid,
// failure_reason and per_step; answer_correct is left false.
Verdict verify_proof(std::span<const Fact> story, const Generation& gen, const RuleBase& rules,
                     const TemplateSet& tpl, const VerifyOptions& opts = {});

// verify_proof plus answer grading against the example's gold answer.
// failure_reason reports the proof failure first, then the answer failure.
Verdict grade(const Example& gold, const Generation& gen, const RuleBase& rules,
              const TemplateSet& tpl, const VerifyOptions& opts = {});

// Whether an extracted triple matches the gold answer (or its inverse when
// not strict).
bool answer_matches(const Triple& got, const Example& gold, const RuleBase& rules,
                    bool strict_direction);

}  // namespace kinship
