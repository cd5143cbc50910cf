#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinship/batch.hpp"
#include "kinship/corpus.hpp"
#include "kinship/errors.hpp"
#include "kinship/evaluate.hpp"
#include "kinship/names.hpp"
#include "kinship/overlap.hpp"
#include "kinship/rulebase.hpp"
#include "kinship/splits.hpp"

namespace fs = std::filesystem;
using namespace kinship;
using nlohmann::json;

namespace {

struct Common {
  std::string rules = default_rules_path().string();
  std::string templates = default_templates_path().string();
  int jobs = 0;
};

struct GenerateArgs {
  std::string names = default_names_path().string();
  std::string story_templates;
  std::string levels;
  std::string test_levels;
  std::optional<std::size_t> test_total;
  std::string strategy = "all";
  std::string naming = "anon";
  std::optional<std::uint64_t> seed;
  std::string out = "corpus";
  std::size_t max_attempts = 2000;
};

struct EvalArgs {
  std::string test;
  std::string gen;
  std::string train;
  std::string mode = "proof_generated";
  std::string grounding = "forward-or-reversed";
  bool strict_direction = false;
  std::string out;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InputError("cannot write " + path.string());
}

void require_file(const std::string& path, const std::string& flag) {
  if (!fs::is_regular_file(path)) throw InputError(flag + ": no such file '" + path + "'");
}

RuleBase load_rules(const Common& c) {
  require_file(c.rules, "--rules");
  RuleBase rb = RuleBase::load(c.rules);
  if (auto v = validate_rulebase(rb); !v.empty()) {
    throw ConfigError("--rules: " + c.rules + ": " + v.front().entry + ": " + v.front().message +
                      " (" + std::to_string(v.size()) + " violations, run rules-check)");
  }
  return rb;
}

TemplateSet load_templates(const Common& c) {
  require_file(c.templates, "--templates");
  return TemplateSet::load(c.templates);
}

std::vector<Strategy> parse_strategies(const std::string& text) {
  if (text == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<Strategy> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    auto s = strategy_from_name(item);
    if (!s) throw ArgumentError("--strategy: unknown strategy '" + item + "'");
    out.push_back(*s);
    start = comma + 1;
  }
  return out;
}

std::map<int, std::size_t> train_counts(const std::string& spec) {
  std::map<int, std::size_t> out;
  for (const auto& [level, n] : parse_level_spec(spec)) {
    if (!n) throw ArgumentError("--levels: level " + std::to_string(level) + " needs a count (L:N)");
    out[level] = *n;
  }
  return out;
}

std::map<int, std::size_t> test_counts(const GenerateArgs& a) {
  if (a.test_levels.empty()) return {};
  const auto spec = parse_level_spec(a.test_levels);
  if (a.test_total) {
    std::vector<int> levels;
    for (const auto& [level, n] : spec) {
      if (n) throw ArgumentError("--test-total: give --test-levels without per-level counts");
      levels.push_back(level);
    }
    return spread_evenly(*a.test_total, levels);
  }
  std::map<int, std::size_t> out;
  for (const auto& [level, n] : spec) {
    if (!n) {
      throw ArgumentError("--test-levels: level " + std::to_string(level) +
                          " needs a count (L:N) or use --test-total");
    }
    out[level] = *n;
  }
  return out;
}

std::vector<SidecarRecord> with_proofs(const std::vector<Example>& examples,
                                       const std::vector<std::string>& ids, Strategy s,
                                       const RuleBase& rules) {
  auto proofs = batch::proofs(examples, s, rules);
  std::vector<SidecarRecord> out;
  out.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out.push_back(SidecarRecord{ids[i], examples[i], std::move(proofs[i])});
  }
  return out;
}

int run_rules_check(const Common& c) {
  require_file(c.rules, "--rules");
  RuleBase rb = RuleBase::load(c.rules);
  const auto violations = validate_rulebase(rb);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << v.entry << ": " << v.message << "\n";
    std::cout << "FAIL: " << violations.size() << " violations in " << c.rules << "\n";
    return 2;
  }
  std::cout << "OK: " << kRelationCount << " relations, " << rb.compose_entries().size()
            << " compose entries, inversion total\n";
  return 0;
}

int run_generate(const Common& c, const GenerateArgs& a) {
  const auto naming = naming_from_name(a.naming);
  if (!naming) throw ArgumentError("--naming: expected named or anon, got '" + a.naming + "'");
  const auto strategies = parse_strategies(a.strategy);
  SplitConfig cfg;
  cfg.train_counts = train_counts(a.levels);
  cfg.test_counts = test_counts(a);
  cfg.naming = *naming;
  cfg.seed = *a.seed;
  cfg.max_attempts = a.max_attempts;

  const RuleBase rules = load_rules(c);
  const TemplateSet tpl = load_templates(c);
  require_file(a.names, "--names");
  const NamePool names = NamePool::load(a.names);
  std::optional<StoryTemplates> amt;
  if (!a.story_templates.empty()) {
    require_file(a.story_templates, "--story-templates");
    amt = StoryTemplates::load(a.story_templates);
  }
  StoryGenerator gen(rules, names);
  const Splits splits = build_splits(gen, cfg);

  std::vector<std::string> train_ids;
  {
    std::map<int, std::size_t> seen;
    for (const auto& ex : splits.train) {
      const int l = ex.story.level;
      train_ids.push_back("train-" + std::to_string(l) + "-" + std::to_string(seen[l]++));
    }
  }
  std::vector<Example> test;
  std::vector<std::string> test_ids;
  for (const auto& [level, exs] : splits.test) {
    for (std::size_t i = 0; i < exs.size(); ++i) {
      test.push_back(exs[i]);
      test_ids.push_back("test-" + std::to_string(level) + "-" + std::to_string(i));
    }
  }

  const fs::path out(a.out);
  fs::create_directories(out);
  json files = json::array();
  for (Strategy s : strategies) {
    const std::string tag(name(s));
    if (!splits.train.empty()) {
      emit_corpus(with_proofs(splits.train, train_ids, s, rules), tpl, out / ("train." + tag),
                  amt ? &*amt : nullptr);
      files.push_back("train." + tag + ".txt");
      files.push_back("train." + tag + ".jsonl");
    }
    if (!test.empty()) {
      emit_corpus(with_proofs(test, test_ids, s, rules), tpl, out / ("test." + tag),
                  amt ? &*amt : nullptr);
      files.push_back("test." + tag + ".txt");
      files.push_back("test." + tag + ".jsonl");
    }
  }

  json manifest;
  manifest["seed"] = cfg.seed;
  manifest["naming"] = std::string(name(cfg.naming));
  manifest["strategies"] = json::array();
  for (Strategy s : strategies) manifest["strategies"].push_back(std::string(name(s)));
  json tr = json::object(), te = json::object(), rej = json::object();
  for (const auto& [l, n] : cfg.train_counts) tr[std::to_string(l)] = n;
  for (const auto& [l, n] : cfg.test_counts) te[std::to_string(l)] = n;
  for (const auto& [l, st] : splits.rejections) {
    rej[std::to_string(l)] = {{"rejected", st.rejected}, {"worst_attempts", st.worst_attempts}};
  }
  manifest["train_counts"] = tr;
  manifest["test_counts"] = te;
  manifest["rejections"] = rej;
  manifest["max_attempts"] = cfg.max_attempts;
  manifest["rules"] = fs::path(c.rules).filename().string();
  manifest["compose_entries"] = rules.compose_entries().size();
  manifest["story_templates"] = a.story_templates.empty() ? json(nullptr)
                                                          : json(fs::path(a.story_templates).filename().string());
  manifest["files"] = files;
  write_text(out / "manifest.json", manifest.dump(2) + "\n");

  std::size_t rejected = 0;
  for (const auto& [l, st] : splits.rejections) rejected += st.rejected;
  std::cout << "generated " << splits.train.size() << " train + " << test.size()
            << " test examples x " << strategies.size() << " strategies (" << name(cfg.naming)
            << ", seed " << cfg.seed << ", " << rejected << " rejected draws) -> " << out.string()
            << "\n";
  return 0;
}

std::vector<SidecarRecord> load_corpus(const std::string& path, const std::string& flag) {
  require_file(path, flag);
  return load_sidecar(path);
}

int run_overlap(const std::string& train_path, const std::string& test_path,
                const std::string& out_path, const Common& c) {
  const TemplateSet tpl = load_templates(c);
  const auto train = load_corpus(train_path, "--train");
  const auto test = load_corpus(test_path, "--test");
  const OverlapReport rep = overlap_report(train, test, tpl);
  const std::string csv = rep.to_csv();
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text(out_path, csv);
  }
  std::cout << "overlap: " << train.size() << " train vs " << test.size() << " test records over "
            << rep.percent.size() << " levels" << (out_path.empty() ? "" : " -> " + out_path)
            << "\n";
  return 0;
}

VerifyOptions verify_options(const EvalArgs& a) {
  VerifyOptions o;
  o.strict_direction = a.strict_direction;
  if (a.grounding == "forward-or-reversed") {
    o.grounding = Grounding::forward_or_reversed;
  } else if (a.grounding == "any-order") {
    o.grounding = Grounding::order_insensitive;
  } else {
    throw ArgumentError("--grounding: expected forward-or-reversed or any-order, got '" +
                        a.grounding + "'");
  }
  return o;
}

GenerationMode parse_mode(const std::string& text) {
  auto m = mode_from_name(text);
  if (!m) {
    throw ArgumentError("--mode: expected proof_generated, proof_given or no_proof, got '" +
                        text + "'");
  }
  return *m;
}

int run_verify(const Common& c, const EvalArgs& a) {
  const auto mode = parse_mode(a.mode);
  const auto opts = verify_options(a);
  const RuleBase rules = load_rules(c);
  const TemplateSet tpl = load_templates(c);
  const auto test = load_corpus(a.test, "--test");
  require_file(a.gen, "--gen");
  const auto gens = load_generations(a.gen, mode);
  const EvalResult res = evaluate(test, gens, rules, tpl, opts);
  std::string lines;
  std::size_t correct = 0, valid = 0;
  for (const auto& rec : test) {
    const Verdict& v = res.verdicts.at(rec.id);
    correct += v.answer_correct;
    valid += v.proof_valid;
    json j{{"id", rec.id},
           {"answer_correct", v.answer_correct},
           {"proof_valid", v.proof_valid},
           {"failure_reason", std::string(name(v.failure_reason))}};
    json steps = json::array();
    for (const auto& d : v.per_step) {
      steps.push_back({{"index", d.index},
                       {"sentence", d.sentence},
                       {"reason", std::string(name(d.reason))},
                       {"detail", d.detail}});
    }
    j["per_step"] = steps;
    lines += j.dump() + "\n";
  }
  if (a.out.empty()) {
    std::cout << lines;
  } else {
    write_text(a.out, lines);
  }
  std::cout << "verified " << test.size() << " generations: " << correct << " answers correct, "
            << valid << " proofs valid" << (a.out.empty() ? "" : " -> " + a.out) << "\n";
  return 0;
}

std::optional<MfrBaseline> load_baseline(const std::string& train_path,
                                         std::vector<Example>& storage) {
  if (train_path.empty()) return std::nullopt;
  for (auto& rec : load_corpus(train_path, "--train")) storage.push_back(std::move(rec.example));
  return MfrBaseline(storage);
}

int run_evaluate(const Common& c, const EvalArgs& a) {
  const auto mode = parse_mode(a.mode);
  const auto opts = verify_options(a);
  const RuleBase rules = load_rules(c);
  const TemplateSet tpl = load_templates(c);
  const auto test = load_corpus(a.test, "--test");
  require_file(a.gen, "--gen");
  const auto gens = load_generations(a.gen, mode);
  std::vector<Example> train;
  const auto mfr = load_baseline(a.train, train);
  const EvalResult res = evaluate(test, gens, rules, tpl, opts, mfr ? &*mfr : nullptr);
  const std::string csv = metrics_csv(res.levels);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_text(a.out, csv);
  }
  std::size_t correct = 0;
  for (const auto& [id, v] : res.verdicts) correct += v.answer_correct;
  std::cout << "evaluated " << test.size() << " generations over " << res.levels.size()
            << " levels: answer accuracy " << correct << "/" << test.size()
            << (a.out.empty() ? "" : " -> " + a.out) << "\n";
  return 0;
}

int run_baseline(const EvalArgs& a) {
  if (a.train.empty()) throw ArgumentError("--train is required");
  const auto test = load_corpus(a.test, "--test");
  std::vector<Example> train;
  const auto mfr = load_baseline(a.train, train);
  const auto rows = baseline_metrics(test, *mfr);
  const std::string csv = metrics_csv(rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_text(a.out, csv);
  }
  std::cout << "baseline: " << mfr->pairs() << " train pairs, global mode "
            << name(mfr->global_mode()) << ", " << test.size() << " test queries"
            << (a.out.empty() ? "" : " -> " + a.out) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinship: kinship-logic corpus generator, proof engine and grader"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--rules", common.rules, "rulebase file (default: $KINSHIP_RULES or data/default.rules)");
  app.add_option("--templates", common.templates, "template file");
  app.add_option("--jobs", common.jobs, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  auto* rules_check = app.add_subcommand("rules-check", "validate a rulebase");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "build train/test splits and emit corpora");
  generate->add_option("--levels", gen.levels, "train levels, e.g. 2:1000,4:1000,6:1000");
  generate->add_option("--test-levels", gen.test_levels, "test levels, e.g. 2-10:200, or 2-10 with --test-total");
  generate->add_option("--test-total", gen.test_total, "total test examples spread evenly over --test-levels");
  generate->add_option("--strategy", gen.strategy, "all or a comma list of sp,spr,lp,lpr,np");
  generate->add_option("--naming", gen.naming, "anon or named");
  generate->add_option("--seed", gen.seed, "master seed")->required();
  generate->add_option("--out", gen.out, "output directory");
  generate->add_option("--names", gen.names, "name pool file");
  generate->add_option("--story-templates", gen.story_templates, "free-text story sentences (relation<TAB>sentence)");
  generate->add_option("--max-attempts", gen.max_attempts, "named-mode draws per test example")->check(CLI::PositiveNumber);

  std::string ov_train, ov_test, ov_out;
  auto* overlap = app.add_subcommand("overlap", "train/test building-block overlap (CSV)");
  overlap->add_option("--train", ov_train, "train sidecar (.jsonl)")->required();
  overlap->add_option("--test", ov_test, "test sidecar (.jsonl)")->required();
  overlap->add_option("--out", ov_out, "CSV output (default: stdout)");

  EvalArgs ev;
  auto add_eval_flags = [&](CLI::App* sub, bool metrics) {
    sub->add_option("--test", ev.test, "test sidecar (.jsonl)")->required();
    sub->add_option("--gen", ev.gen, "generations file (id<TAB>text)")->required();
    sub->add_option("--mode", ev.mode, "proof_generated, proof_given or no_proof");
    sub->add_option("--grounding", ev.grounding, "forward-or-reversed or any-order");
    sub->add_flag("--strict-direction", ev.strict_direction, "answers must follow the query direction");
    sub->add_option("--out", ev.out, metrics ? "CSV output (default: stdout)" : "verdicts JSONL (default: stdout)");
    if (metrics) sub->add_option("--train", ev.train, "train sidecar for the MFR column");
  };
  auto* verify = app.add_subcommand("verify", "grade a generations file, one verdict per line");
  add_eval_flags(verify, false);
  auto* evaluate_cmd = app.add_subcommand("evaluate", "per-level metrics CSV");
  add_eval_flags(evaluate_cmd, true);
  auto* baseline = app.add_subcommand("baseline", "most-frequent-relation baseline CSV");
  baseline->add_option("--train", ev.train, "train sidecar (.jsonl)")->required();
  baseline->add_option("--test", ev.test, "test sidecar (.jsonl)")->required();
  baseline->add_option("--out", ev.out, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    batch::set_threads(common.jobs);
    if (rules_check->parsed()) return run_rules_check(common);
    if (generate->parsed()) return run_generate(common, gen);
    if (overlap->parsed()) return run_overlap(ov_train, ov_test, ov_out, common);
    if (verify->parsed()) return run_verify(common, ev);
    if (evaluate_cmd->parsed()) return run_evaluate(common, ev);
    if (baseline->parsed()) return run_baseline(ev);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
