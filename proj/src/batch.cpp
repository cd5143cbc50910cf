#include "kinship/batch.hpp"

#include "parallel.hpp"

namespace kinship::batch {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

std::vector<Example> generate_serial(const StoryGenerator& gen, std::span<const ExampleRequest> reqs,
                                     Naming naming) {
  std::vector<Example> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) out.push_back(gen.generate(r.level, naming, r.seed));
  return out;
}

std::vector<Example> generate(const StoryGenerator& gen, std::span<const ExampleRequest> reqs,
                              Naming naming) {
  std::vector<Example> out(reqs.size());
  detail::parallel_for(reqs.size(), [&](std::size_t i) {
    out[i] = gen.generate(reqs[i].level, naming, reqs[i].seed);
  });
  return out;
}

std::vector<Proof> proofs_serial(std::span<const Example> examples, Strategy s,
                                 const RuleBase& rules) {
  std::vector<Proof> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(make_proof(s, ex, rules));
  return out;
}

std::vector<Proof> proofs(std::span<const Example> examples, Strategy s, const RuleBase& rules) {
  std::vector<Proof> out(examples.size());
  detail::parallel_for(examples.size(),
                       [&](std::size_t i) { out[i] = make_proof(s, examples[i], rules); });
  return out;
}

std::vector<Verdict> grade_serial(std::span<const GradeItem> items, const RuleBase& rules,
                                  const TemplateSet& tpl, const VerifyOptions& opts) {
  std::vector<Verdict> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(kinship::grade(*it.gold, *it.generation, rules, tpl, opts));
  return out;
}

std::vector<Verdict> grade(std::span<const GradeItem> items, const RuleBase& rules,
                           const TemplateSet& tpl, const VerifyOptions& opts) {
  std::vector<Verdict> out(items.size());
  detail::parallel_for(items.size(), [&](std::size_t i) {
    out[i] = kinship::grade(*items[i].gold, *items[i].generation, rules, tpl, opts);
  });
  return out;
}

}  // namespace kinship::batch
