#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kinship/proof.hpp"
#include "kinship/story.hpp"
#include "kinship/verifier.hpp"

// Per-example kernels. Each has a serial reference and an OpenMP version
// that must produce identical output; exceptions raised inside a parallel
// region are rethrown on the caller's thread (lowest index wins).
namespace kinship::batch {

// 0 keeps the OpenMP default.
void set_threads(int n);
int max_threads();

struct ExampleRequest {
  int level = 2;
  std::uint64_t seed = 0;
};

std::vector<Example> generate_serial(const StoryGenerator& gen, std::span<const ExampleRequest> reqs,
                                     Naming naming);
std::vector<Example> generate(const StoryGenerator& gen, std::span<const ExampleRequest> reqs,
                              Naming naming);

std::vector<Proof> proofs_serial(std::span<const Example> examples, Strategy s,
                                 const RuleBase& rules);
std::vector<Proof> proofs(std::span<const Example> examples, Strategy s, const RuleBase& rules);

struct GradeItem {
  const Example* gold = nullptr;
  const Generation* generation = nullptr;
};

std::vector<Verdict> grade_serial(std::span<const GradeItem> items, const RuleBase& rules,
                                  const TemplateSet& tpl, const VerifyOptions& opts = {});
std::vector<Verdict> grade(std::span<const GradeItem> items, const RuleBase& rules,
                           const TemplateSet& tpl, const VerifyOptions& opts = {});

}  // namespace kinship::batch
