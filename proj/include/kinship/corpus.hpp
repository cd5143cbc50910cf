#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinship/proof.hpp"
#include "kinship/story.hpp"
#include "kinship/templates.hpp"

namespace kinship {

// One line of the language-model corpus:
//   <STORY> ... <QUERY> ... <PROOF> ... <ANSWER> ...
// Written to disk as `id<TAB>text`.
struct FlatRecord {
  std::string id;
  std::string text;
  int level = 0;
  Strategy strategy = Strategy::np;
};

// The structured twin of a flat record (one JSON object per line).
struct SidecarRecord {
  std::string id;
  Example example;
  Proof proof;

  friend bool operator==(const SidecarRecord&, const SidecarRecord&) = default;
};

// Fact-pattern variant per story sentence, and per proof step for the two
// premises and the conclusion.
struct VariantPlan {
  std::vector<std::size_t> story;
  std::vector<std::array<std::size_t, 3>> steps;
};

// Seeded by the example seed and the content of each sentence, so a step
// renders identically in sp and spr (and in lp and lpr).
VariantPlan seeded_variants(const Example& ex, const Proof& proof);

// `story_templates` switches story sentences to free-text templates;
// query, proof and answer always use `tpl`.
FlatRecord render_record(std::string id, const Example& ex, const Proof& proof,
                         const TemplateSet& tpl, const VariantPlan& plan,
                         const StoryTemplates* story_templates = nullptr);

inline FlatRecord render_record(std::string id, const Example& ex, const Proof& proof,
                                const TemplateSet& tpl,
                                const StoryTemplates* story_templates = nullptr) {
  return render_record(std::move(id), ex, proof, tpl, seeded_variants(ex, proof), story_templates);
}

std::string sidecar_line(const SidecarRecord& rec);
// Throws InputError on malformed JSON or inconsistent content.
SidecarRecord parse_sidecar_line(std::string_view line);
std::vector<SidecarRecord> load_sidecar(const std::filesystem::path& path);

// Structure recovered from a facts-template flat record.
struct ParsedRecord {
  std::vector<Triple> story;
  std::pair<std::string, std::string> query;
  std::vector<StepShape> proof;  // empty for "none ."
  bool no_proof = false;
  Triple answer;

  friend bool operator==(const ParsedRecord&, const ParsedRecord&) = default;
};

std::optional<ParsedRecord> parse_record(std::string_view text, const TemplateSet& tpl);

// The sidecar content a flat record should parse back to.
ParsedRecord expected_parse(const SidecarRecord& rec);

// Writes `<prefix>.txt` (flat records) and `<prefix>.jsonl` (sidecar).
// Throws GenerationError when an entity surface would collide with the
// record delimiters, InputError on I/O failure.
void emit_corpus(std::span<const SidecarRecord> records, const TemplateSet& tpl,
                 const std::filesystem::path& prefix,
                 const StoryTemplates* story_templates = nullptr);

}  // namespace kinship
