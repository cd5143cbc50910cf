// Serial reference vs OpenMP kernels: wall time and output equality.
// Usage: kinship_bench [examples] [threads]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinship/batch.hpp"
#include "kinship/corpus.hpp"
#include "kinship/names.hpp"
#include "kinship/overlap.hpp"
#include "kinship/templates.hpp"

using namespace kinship;

namespace {

double time_best(const std::function<void()>& f, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* kernel, double serial, double parallel, bool same) {
  std::printf("%-10s %10.4f %10.4f %8.2fx  %s\n", kernel, serial, parallel, serial / parallel,
              same ? "identical" : "DIFFERENT");
}

bool same_verdicts(const std::vector<Verdict>& a, const std::vector<Verdict>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].proof_valid != b[i].proof_valid || a[i].answer_correct != b[i].answer_correct ||
        a[i].failure_reason != b[i].failure_reason) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;
  if (argc > 2) batch::set_threads(std::atoi(argv[2]));

  const RuleBase rules = RuleBase::load(default_rules_path());
  const TemplateSet tpl = TemplateSet::load(default_templates_path());
  const NamePool names = NamePool::load(default_names_path());
  const StoryGenerator gen(rules, names);

  std::vector<batch::ExampleRequest> reqs;
  for (std::size_t i = 0; i < n; ++i) reqs.push_back({2 + static_cast<int>(i % 9), i});

  std::printf("examples=%zu threads=%d\n", n, batch::max_threads());
  std::printf("%-10s %10s %10s %9s  %s\n", "kernel", "serial_s", "omp_s", "speedup", "output");

  std::vector<Example> a, b;
  const double gs = time_best([&] { a = batch::generate_serial(gen, reqs, Naming::named); });
  const double gp = time_best([&] { b = batch::generate(gen, reqs, Naming::named); });
  row("generate", gs, gp, a == b);

  std::vector<Proof> pa, pb;
  const double ps = time_best([&] { pa = batch::proofs_serial(a, Strategy::lp, rules); });
  const double pp = time_best([&] { pb = batch::proofs(a, Strategy::lp, rules); });
  row("long_proof", ps, pp, pa == pb);

  std::vector<Generation> gens(a.size());
  std::vector<SidecarRecord> recs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string text = render_record("b", a[i], pa[i], tpl).text;
    gens[i] = {"b", text.substr(text.find("<PROOF>")), GenerationMode::proof_generated};
    recs[i] = {std::to_string(i), a[i], pa[i]};
  }
  std::vector<batch::GradeItem> items;
  for (std::size_t i = 0; i < a.size(); ++i) items.push_back({&a[i], &gens[i]});
  std::vector<Verdict> va, vb;
  const double vs = time_best([&] { va = batch::grade_serial(items, rules, tpl); });
  const double vp = time_best([&] { vb = batch::grade(items, rules, tpl); });
  row("grade", vs, vp, same_verdicts(va, vb));

  const std::size_t half = recs.size() / 2;
  const std::span<const SidecarRecord> train(recs.data(), half), test(recs.data() + half, recs.size() - half);
  std::string oa, ob;
  const double os = time_best([&] { oa = overlap_report(train, test, tpl, false).to_csv(); });
  const double op = time_best([&] { ob = overlap_report(train, test, tpl, true).to_csv(); });
  row("overlap", os, op, oa == ob);
  return 0;
}
