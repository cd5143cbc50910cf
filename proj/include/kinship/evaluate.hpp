#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinship/corpus.hpp"
#include "kinship/verifier.hpp"

namespace kinship {

// Generations file: one `id<TAB>raw_text` per line, with backslash, tab and
// newline in raw_text written as \\, \t and \n.
std::string escape_field(std::string_view text);
std::string unescape_field(std::string_view text);

std::string format_generations(std::span<const Generation> gens);
// Throws InputError naming the line on a missing tab or duplicate id.
std::vector<Generation> parse_generations(std::string_view text, GenerationMode mode,
                                          std::string_view origin = "<memory>");
std::vector<Generation> load_generations(const std::filesystem::path& path, GenerationMode mode);

// Most-frequent-relation baseline over train answers, keyed by the ordered
// (source, target) surface pair; unseen pairs get the global mode. Ties go
// to the relation whose name sorts first.
class MfrBaseline {
 public:
  // Throws ArgumentError on an empty train set.
  explicit MfrBaseline(std::span<const Example> train);

  Relation predict(std::string_view source, std::string_view target) const;
  Relation global_mode() const { return global_mode_; }
  std::size_t pairs() const { return by_pair_.size(); }

 private:
  using Histogram = std::array<std::size_t, kRelationCount>;
  static Relation argmax(const Histogram& h);

  std::map<std::pair<std::string, std::string>, Histogram, std::less<>> by_pair_;
  Relation global_mode_ = Relation::father;
};

struct LevelMetrics {
  int level = 0;
  std::size_t n = 0;
  std::optional<double> answer_acc;    // absent for baseline-only rows
  std::optional<double> proof_validity;  // proof_generated mode only
  std::optional<double> mfr_acc;         // when a baseline is supplied
};

struct EvalResult {
  std::vector<LevelMetrics> levels;  // ascending
  std::map<std::string, Verdict> verdicts;  // by example id
};

// Throws InputError listing ids present on one side only.
EvalResult evaluate(std::span<const SidecarRecord> test, std::span<const Generation> gens,
                    const RuleBase& rules, const TemplateSet& tpl, const VerifyOptions& opts,
                    const MfrBaseline* mfr = nullptr, bool parallel = true);

// MFR accuracy per level without generations.
std::vector<LevelMetrics> baseline_metrics(std::span<const SidecarRecord> test,
                                           const MfrBaseline& mfr);

// Header `level,n,answer_acc,proof_validity,mfr_acc`; rates with 4
// decimals, NA when absent.
std::string metrics_csv(std::span<const LevelMetrics> rows);

}  // namespace kinship
