#include "kinship/templates.hpp"

#include <set>

#include "kinship/errors.hpp"
#include "kinship/rulebase.hpp"
#include "text_util.hpp"

namespace kinship {

Pattern Pattern::parse(std::string_view text) {
  Pattern p;
  for (std::string_view tok : text_util::split_ws(text)) {
    if (tok.size() > 2 && tok.front() == '{' && tok.back() == '}') {
      p.tokens_.push_back({true, std::string(tok.substr(1, tok.size() - 2))});
    } else {
      p.tokens_.push_back({false, std::string(tok)});
    }
  }
  return p;
}

std::string Pattern::render(const std::map<std::string, std::string, std::less<>>& values) const {
  std::string out;
  for (const Token& t : tokens_) {
    if (!out.empty()) out.push_back(' ');
    out.append(t.slot ? values.at(t.text) : t.text);
  }
  return out;
}

std::optional<Pattern::Captures> Pattern::match(Tokens tokens, const SlotCheck& check) const {
  Captures caps;
  if (match_from(0, tokens, 0, check, caps)) return caps;
  return std::nullopt;
}

bool Pattern::match_from(std::size_t pi, Tokens tokens, std::size_t ti, const SlotCheck& check,
                         Captures& caps) const {
  if (pi == tokens_.size()) return ti == tokens.size();
  const Token& t = tokens_[pi];
  if (!t.slot) {
    return ti < tokens.size() && tokens[ti] == t.text &&
           match_from(pi + 1, tokens, ti + 1, check, caps);
  }
  // Each remaining pattern token consumes at least one input token.
  const std::size_t rest = tokens_.size() - pi - 1;
  for (std::size_t len = 1; ti + len + rest <= tokens.size(); ++len) {
    Tokens span = tokens.subspan(ti, len);
    if (!check(t.text, span)) continue;
    caps[t.text] = span;
    if (match_from(pi + 1, tokens, ti + len, check, caps)) return true;
  }
  caps.erase(t.text);
  return false;
}

Pattern Pattern::without_terminal() const {
  Pattern p = *this;
  if (!p.tokens_.empty() && !p.tokens_.back().slot && p.tokens_.back().text == ".") {
    p.tokens_.pop_back();
  }
  return p;
}

std::vector<std::string> Pattern::slots() const {
  std::vector<std::string> out;
  for (const Token& t : tokens_) {
    if (t.slot) out.push_back(t.text);
  }
  return out;
}

std::string Pattern::text() const {
  std::vector<std::string> parts;
  for (const Token& t : tokens_) parts.push_back(t.slot ? "{" + t.text + "}" : t.text);
  return text_util::join(parts, " ");
}

namespace {

bool single_entity(Pattern::Tokens span) { return span.size() == 1 && valid_surface(span[0]); }

Pattern::Tokens drop_terminal(Pattern::Tokens toks) {
  if (!toks.empty() && toks.back() == ".") return toks.first(toks.size() - 1);
  return toks;
}

void expect_slots(const Pattern& p, std::multiset<std::string> want, const std::string& where) {
  auto got = p.slots();
  if (std::multiset<std::string>(got.begin(), got.end()) != want) {
    std::string names;
    for (const auto& s : want) names += "{" + s + "}";
    throw ConfigError(where + "pattern '" + p.text() + "' must use exactly the slots " + names);
  }
}

}  // namespace

TemplateSet TemplateSet::parse(std::string_view text, std::string_view origin) {
  TemplateSet ts;
  bool have_query = false, have_step = false, have_answer = false;
  int line_no = 0;
  for (std::string_view raw : text_util::split_lines(text)) {
    ++line_no;
    std::string_view line = text_util::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const std::size_t sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) throw ConfigError(where + "directive without a pattern");
    std::string_view directive = line.substr(0, sp);
    Pattern p = Pattern::parse(line.substr(sp + 1));
    if (directive == "fact") {
      expect_slots(p, {"A", "B", "r"}, where);
      if (p.tokens().back().slot || p.tokens().back().text != ".") {
        throw ConfigError(where + "fact pattern must end with ' .'");
      }
      ts.facts_.push_back(p);
      ts.clauses_.push_back(p.without_terminal());
    } else if (directive == "query") {
      expect_slots(p, {"A", "B"}, where);
      ts.query_ = p;
      have_query = true;
    } else if (directive == "step") {
      expect_slots(p, {"1", "2", "3"}, where);
      ts.step_ = p;
      have_step = true;
    } else if (directive == "answer") {
      expect_slots(p, {"A", "B", "r"}, where);
      ts.answer_ = p;
      have_answer = true;
    } else {
      throw ConfigError(where + "unknown directive '" + std::string(directive) + "'");
    }
  }
  const std::string where = std::string(origin) + ": ";
  if (ts.facts_.size() != kFactVariants) {
    throw ConfigError(where + "expected exactly 5 fact patterns, found " +
                      std::to_string(ts.facts_.size()));
  }
  if (!have_query || !have_step || !have_answer) {
    throw ConfigError(where + "missing query, step or answer pattern");
  }
  // Every pattern must invert to the triple it rendered, for every relation.
  for (std::size_t v = 0; v < kFactVariants; ++v) {
    for (Relation r : kAllRelations) {
      Triple probe{"Xa", r, "Yb"};
      if (ts.parse_fact(ts.render_fact(probe, v)) != probe) {
        throw ConfigError(where + "fact pattern '" + ts.facts_[v].text() +
                          "' is not uniquely invertible");
      }
    }
  }
  return ts;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  try {
    return parse(text_util::read_file(path), path.string());
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::string TemplateSet::render_fact(const Triple& t, std::size_t variant) const {
  return facts_.at(variant).render(
      {{"A", t.subject}, {"B", t.object}, {"r", std::string(name(t.relation))}});
}

std::optional<Triple> TemplateSet::parse_fact(std::string_view sentence) const {
  auto toks = text_util::split_ws(sentence);
  return parse_fact_tokens(toks);
}

std::optional<Triple> TemplateSet::parse_fact_tokens(Pattern::Tokens tokens) const {
  tokens = drop_terminal(tokens);
  if (tokens.empty()) return std::nullopt;
  const Pattern::SlotCheck check = [](std::string_view slot, Pattern::Tokens span) {
    if (slot == "r") return span.size() == 1 && relation_from_name(span[0]).has_value();
    return single_entity(span);
  };
  for (const Pattern& p : clauses_) {
    if (auto caps = p.match(tokens, check)) {
      Triple t{std::string(caps->at("A")[0]), *relation_from_name(caps->at("r")[0]),
               std::string(caps->at("B")[0])};
      if (t.subject == t.object) return std::nullopt;
      return t;
    }
  }
  return std::nullopt;
}

std::string TemplateSet::render_step(const StepShape& s, std::array<std::size_t, 3> v) const {
  auto clause = [&](const Triple& t, std::size_t variant) {
    return clauses_.at(variant).render(
        {{"A", t.subject}, {"B", t.object}, {"r", std::string(name(t.relation))}});
  };
  return step_.render({{"1", clause(s.premise1, v[0])},
                       {"2", clause(s.premise2, v[1])},
                       {"3", clause(s.conclusion, v[2])}});
}

std::optional<StepShape> TemplateSet::parse_step(std::string_view sentence) const {
  auto toks = text_util::split_ws(sentence);
  return parse_step_tokens(toks);
}

std::optional<StepShape> TemplateSet::parse_step_tokens(Pattern::Tokens tokens) const {
  const Pattern body = step_.without_terminal();
  tokens = drop_terminal(tokens);
  const Pattern::SlotCheck check = [this](std::string_view, Pattern::Tokens span) {
    return parse_fact_tokens(span).has_value();
  };
  auto caps = body.match(tokens, check);
  if (!caps) return std::nullopt;
  return StepShape{*parse_fact_tokens(caps->at("1")), *parse_fact_tokens(caps->at("2")),
                   *parse_fact_tokens(caps->at("3"))};
}

std::string TemplateSet::render_query(const Query& q) const {
  return query_.render({{"A", q.source.surface}, {"B", q.target.surface}});
}

std::optional<std::pair<std::string, std::string>> TemplateSet::parse_query(
    std::string_view sentence) const {
  auto toks = text_util::split_ws(sentence);
  auto caps = query_.match(toks, [](std::string_view, Pattern::Tokens span) {
    return single_entity(span);
  });
  if (!caps) return std::nullopt;
  return std::make_pair(std::string(caps->at("A")[0]), std::string(caps->at("B")[0]));
}

std::string TemplateSet::render_answer(const Fact& f) const {
  return answer_.render({{"A", f.subject.surface},
                         {"B", f.object.surface},
                         {"r", std::string(name(f.relation))}});
}

StoryTemplates StoryTemplates::parse(std::string_view text, std::string_view origin) {
  StoryTemplates st;
  int line_no = 0;
  for (std::string_view raw : text_util::split_lines(text)) {
    ++line_no;
    if (text_util::trim(raw).empty() || text_util::trim(raw).front() == '#') continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const std::size_t tab = raw.find('\t');
    if (tab == std::string_view::npos) throw ConfigError(where + "expected 'relation<TAB>sentence'");
    auto r = relation_from_name(text_util::trim(raw.substr(0, tab)));
    if (!r) throw ConfigError(where + "unknown relation");
    Pattern p = Pattern::parse(raw.substr(tab + 1));
    auto slots = p.slots();
    std::set<std::string> uniq(slots.begin(), slots.end());
    if (uniq != std::set<std::string>{"A", "B"}) {
      throw ConfigError(where + "sentence must use the slots {A} and {B} and nothing else");
    }
    st.sentences_[index(*r)].push_back(std::move(p));
  }
  return st;
}

StoryTemplates StoryTemplates::load(const std::filesystem::path& path) {
  try {
    return parse(text_util::read_file(path), path.string());
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::string StoryTemplates::render(const Fact& f, std::size_t choice) const {
  const auto& options = sentences_[index(f.relation)];
  if (options.empty()) {
    throw ArgumentError("no story sentence for relation " + std::string(name(f.relation)));
  }
  return options[choice % options.size()].render(
      {{"A", f.subject.surface}, {"B", f.object.surface}});
}

std::filesystem::path default_templates_path() { return data_dir() / "facts.tpl"; }
std::filesystem::path default_story_templates_path() { return data_dir() / "amt_sample.tsv"; }

}  // namespace kinship
