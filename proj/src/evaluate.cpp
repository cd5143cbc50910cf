#include "kinship/evaluate.hpp"

#include <cstdio>
#include <set>
#include <unordered_map>

#include "kinship/batch.hpp"
#include "kinship/errors.hpp"
#include "text_util.hpp"

namespace kinship {

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      out.push_back(text[i]);
      continue;
    }
    switch (text[++i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        out.push_back('\\');
        out.push_back(text[i]);
    }
  }
  return out;
}

std::string format_generations(std::span<const Generation> gens) {
  std::string out;
  for (const auto& g : gens) {
    out += escape_field(g.example_id);
    out += '\t';
    out += escape_field(g.raw_text);
    out += '\n';
  }
  return out;
}

std::vector<Generation> parse_generations(std::string_view text, GenerationMode mode,
                                          std::string_view origin) {
  std::vector<Generation> out;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (std::string_view line : text_util::split_lines(text)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw InputError(where + "expected 'id<TAB>text'");
    Generation g{unescape_field(line.substr(0, tab)), unescape_field(line.substr(tab + 1)), mode};
    if (!seen.insert(g.example_id).second) {
      throw InputError(where + "duplicate id '" + g.example_id + "'");
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Generation> load_generations(const std::filesystem::path& path, GenerationMode mode) {
  return parse_generations(text_util::read_file(path), mode, path.string());
}

MfrBaseline::MfrBaseline(std::span<const Example> train) {
  if (train.empty()) throw ArgumentError("MFR baseline needs a nonempty train set");
  Histogram global{};
  for (const auto& ex : train) {
    const std::size_t r = index(ex.answer.relation);
    auto [it, fresh] = by_pair_.try_emplace({ex.query.source.surface, ex.query.target.surface});
    it->second[r]++;
    global[r]++;
  }
  global_mode_ = argmax(global);
}

Relation MfrBaseline::argmax(const Histogram& h) {
  std::optional<Relation> best;
  for (Relation r : kAllRelations) {
    const std::size_t c = h[index(r)];
    if (c == 0) continue;
    if (!best || c > h[index(*best)] || (c == h[index(*best)] && name(r) < name(*best))) best = r;
  }
  return *best;
}

Relation MfrBaseline::predict(std::string_view source, std::string_view target) const {
  auto it = by_pair_.find(std::make_pair(std::string(source), std::string(target)));
  return it == by_pair_.end() ? global_mode_ : argmax(it->second);
}

namespace {

struct Tally {
  std::size_t n = 0, correct = 0, valid = 0, mfr = 0;
};

bool mfr_correct(const MfrBaseline& mfr, const Example& ex) {
  return mfr.predict(ex.query.source.surface, ex.query.target.surface) == ex.answer.relation;
}

std::string orphan_message(const std::vector<std::string>& missing,
                           const std::vector<std::string>& unknown) {
  auto list = [](const std::vector<std::string>& ids) {
    std::vector<std::string> head(ids.begin(), ids.begin() + std::min<std::size_t>(ids.size(), 10));
    std::string s = text_util::join(head, ", ");
    if (ids.size() > head.size()) s += ", ... (" + std::to_string(ids.size()) + " total)";
    return s;
  };
  std::string msg = "generation ids do not align with the test corpus:";
  if (!missing.empty()) msg += " no generation for [" + list(missing) + "]";
  if (!unknown.empty()) msg += " unknown ids [" + list(unknown) + "]";
  return msg;
}

}  // namespace

EvalResult evaluate(std::span<const SidecarRecord> test, std::span<const Generation> gens,
                    const RuleBase& rules, const TemplateSet& tpl, const VerifyOptions& opts,
                    const MfrBaseline* mfr, bool parallel) {
  std::unordered_map<std::string, const Generation*> by_id;
  for (const auto& g : gens) by_id.emplace(g.example_id, &g);
  std::vector<std::string> missing, unknown;
  std::set<std::string, std::less<>> test_ids;
  std::vector<batch::GradeItem> items;
  for (const auto& rec : test) {
    test_ids.insert(rec.id);
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) {
      missing.push_back(rec.id);
    } else {
      items.push_back({&rec.example, it->second});
    }
  }
  for (const auto& g : gens) {
    if (!test_ids.count(g.example_id)) unknown.push_back(g.example_id);
  }
  if (!missing.empty() || !unknown.empty()) throw InputError(orphan_message(missing, unknown));

  const auto verdicts = parallel ? batch::grade(items, rules, tpl, opts)
                                 : batch::grade_serial(items, rules, tpl, opts);
  EvalResult out;
  std::map<int, Tally> tallies;
  bool proofs_graded = false;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const SidecarRecord& rec = test[i];
    const Verdict& v = verdicts[i];
    Tally& t = tallies[rec.example.story.level];
    t.n++;
    t.correct += v.answer_correct;
    t.valid += v.proof_valid;
    if (mfr) t.mfr += mfr_correct(*mfr, rec.example);
    proofs_graded = proofs_graded || items[i].generation->mode == GenerationMode::proof_generated;
    out.verdicts.emplace(rec.id, v);
  }
  for (const auto& [level, t] : tallies) {
    LevelMetrics m{level, t.n, double(t.correct) / double(t.n), std::nullopt, std::nullopt};
    if (proofs_graded) m.proof_validity = double(t.valid) / double(t.n);
    if (mfr) m.mfr_acc = double(t.mfr) / double(t.n);
    out.levels.push_back(m);
  }
  return out;
}

std::vector<LevelMetrics> baseline_metrics(std::span<const SidecarRecord> test,
                                           const MfrBaseline& mfr) {
  std::map<int, Tally> tallies;
  for (const auto& rec : test) {
    Tally& t = tallies[rec.example.story.level];
    t.n++;
    t.mfr += mfr_correct(mfr, rec.example);
  }
  std::vector<LevelMetrics> out;
  for (const auto& [level, t] : tallies) {
    const double acc = double(t.mfr) / double(t.n);
    out.push_back({level, t.n, std::nullopt, std::nullopt, acc});
  }
  return out;
}

std::string metrics_csv(std::span<const LevelMetrics> rows) {
  auto rate = [](std::optional<double> v) {
    if (!v) return std::string("NA");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::string out = "level,n,answer_acc,proof_validity,mfr_acc\n";
  for (const auto& m : rows) {
    out += std::to_string(m.level) + "," + std::to_string(m.n) + "," + rate(m.answer_acc) + "," +
           rate(m.proof_validity) + "," + rate(m.mfr_acc) + "\n";
  }
  return out;
}

}  // namespace kinship
