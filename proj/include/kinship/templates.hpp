#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinship/fact.hpp"
#include "kinship/story.hpp"

namespace kinship {

// A space-separated token pattern. Tokens of the form {name} are slots;
// everything else is matched literally.
class Pattern {
 public:
  struct Token {
    bool slot = false;
    std::string text;  // literal text, or slot name without braces
  };
  using Tokens = std::span<const std::string_view>;
  // Decides whether a slot may capture the given (nonempty) token span.
  using SlotCheck = std::function<bool(std::string_view slot, Tokens span)>;
  using Captures = std::map<std::string, Tokens, std::less<>>;

  Pattern() = default;
  static Pattern parse(std::string_view text);

  // Slot values are inserted verbatim; tokens are joined by single spaces.
  std::string render(const std::map<std::string, std::string, std::less<>>& values) const;

  // Backtracking match of the whole token sequence. Slots capture one or
  // more tokens subject to `check`. Returns the first assignment found,
  // trying shorter captures first.
  std::optional<Captures> match(Tokens tokens, const SlotCheck& check) const;

  // Copy without a trailing literal "." token, if any.
  Pattern without_terminal() const;

  std::vector<std::string> slots() const;
  const std::vector<Token>& tokens() const { return tokens_; }
  std::string text() const;

 private:
  bool match_from(std::size_t pi, Tokens tokens, std::size_t ti, const SlotCheck& check,
                  Captures& caps) const;

  std::vector<Token> tokens_;
};

// The sentence templates used for stories, queries, proofs and answers.
//
// Config format, one directive per line ('#' comments):
//   fact   <pattern with {A} {r} {B}>      (exactly five, variant = order)
//   query  <pattern with {A} {B}>
//   step   <pattern with {1} {2} {3}>      (premise, premise, conclusion)
//   answer <pattern with {A} {r} {B}>
class TemplateSet {
 public:
  static constexpr std::size_t kFactVariants = 5;

  // Throws ConfigError on malformed directives, wrong slot sets, a count of
  // fact patterns other than five, or a pattern that does not round-trip.
  static TemplateSet parse(std::string_view text, std::string_view origin = "<memory>");
  static TemplateSet load(const std::filesystem::path& path);

  std::string render_fact(const Triple& t, std::size_t variant) const;
  std::string render_fact(const Fact& f, std::size_t variant) const {
    return render_fact(shape(f), variant);
  }
  // Accepts any of the five patterns, with or without the final " .".
  // Never throws.
  std::optional<Triple> parse_fact(std::string_view sentence) const;
  std::optional<Triple> parse_fact_tokens(Pattern::Tokens tokens) const;

  std::string render_step(const StepShape& s, std::array<std::size_t, 3> variants) const;
  std::string render_step(const ProofStep& s, std::array<std::size_t, 3> variants) const {
    return render_step(shape(s), variants);
  }
  std::optional<StepShape> parse_step(std::string_view sentence) const;
  std::optional<StepShape> parse_step_tokens(Pattern::Tokens tokens) const;

  std::string render_query(const Query& q) const;
  std::optional<std::pair<std::string, std::string>> parse_query(std::string_view sentence) const;

  std::string render_answer(const Fact& f) const;

  const std::vector<Pattern>& fact_patterns() const { return facts_; }

 private:
  std::vector<Pattern> facts_;   // full sentences, ending in "."
  std::vector<Pattern> clauses_; // facts_ without the final "."
  Pattern query_;
  Pattern step_;
  Pattern answer_;
};

// Free-text story sentences per relation (crowd-written style), with {A}
// (subject) and {B} (object) slots. File format: `relation<TAB>sentence`
// per line, '#' comments. Stories rendered with these cannot be parsed back.
class StoryTemplates {
 public:
  static StoryTemplates parse(std::string_view text, std::string_view origin = "<memory>");
  static StoryTemplates load(const std::filesystem::path& path);

  std::size_t count(Relation r) const { return sentences_[index(r)].size(); }
  // Throws ArgumentError when the relation has no sentence.
  std::string render(const Fact& f, std::size_t choice) const;

 private:
  std::array<std::vector<Pattern>, kRelationCount> sentences_{};
};

std::filesystem::path default_templates_path();
std::filesystem::path default_story_templates_path();

}  // namespace kinship
