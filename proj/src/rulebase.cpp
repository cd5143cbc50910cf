#include "kinship/rulebase.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kinship/errors.hpp"
#include "text_util.hpp"

namespace kinship {

namespace {

[[noreturn]] void fail(std::string_view origin, int line, const std::string& what) {
  std::ostringstream msg;
  msg << origin << ":" << line << ": " << what;
  throw ConfigError(msg.str());
}

Relation expect_relation(std::string_view tok, std::string_view origin, int line) {
  auto r = relation_from_name(tok);
  if (!r) fail(origin, line, "unknown relation '" + std::string(tok) + "'");
  return *r;
}

}  // namespace

RuleBase RuleBase::parse(std::string_view text, std::string_view origin) {
  RuleBase rb;
  rb.origin_ = std::string(origin);
  int line_no = 0;
  for (std::string_view raw : text_util::split_lines(text)) {
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    std::vector<std::string_view> tok = text_util::split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "inv") {
      if (tok.size() != 5 || tok[3] != "->") {
        fail(origin, line_no, "expected 'inv <relation> <gender> -> <relation>'");
      }
      Relation r = expect_relation(tok[1], origin, line_no);
      auto g = gender_from_name(tok[2]);
      if (!g) fail(origin, line_no, "unknown gender '" + std::string(tok[2]) + "'");
      Relation out = expect_relation(tok[4], origin, line_no);
      auto& cell = rb.invert_[index(r) * 2 + static_cast<std::size_t>(*g)];
      if (cell && *cell != out) {
        fail(origin, line_no, "conflicting inversion for (" + std::string(tok[1]) + ", " +
                                  std::string(tok[2]) + ")");
      }
      if (!cell) rb.invert_entries_.push_back({r, *g, out, line_no});
      cell = out;
      continue;
    }

    if (tok.size() != 5 || tok[1] != "." || tok[3] != "->") {
      fail(origin, line_no, "expected '<relation> . <relation> -> <relation>'");
    }
    Relation a = expect_relation(tok[0], origin, line_no);
    Relation b = expect_relation(tok[2], origin, line_no);
    Relation c = expect_relation(tok[4], origin, line_no);
    auto& cell = rb.compose_[index(a) * kRelationCount + index(b)];
    if (cell && *cell != c) {
      fail(origin, line_no, "conflicting composition for " + std::string(tok[0]) + " . " +
                                std::string(tok[2]));
    }
    if (!cell) {
      rb.compose_entries_.push_back({a, b, c, line_no});
      rb.splits_[index(c)].emplace_back(a, b);
    }
    cell = c;
  }
  return rb;
}

RuleBase RuleBase::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rulebase file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

Fact RuleBase::invert_fact(const Fact& f) const {
  auto r = invert(f.relation, f.object.gender);
  if (!r) {
    throw ConfigError("rulebase " + origin_ + " has no inversion for (" +
                      std::string(name(f.relation)) + ", " +
                      std::string(name(f.object.gender)) + ")");
  }
  return Fact{f.object, *r, f.subject};
}

std::vector<Violation> validate_rulebase(const RuleBase& rb) {
  std::vector<Violation> out;
  for (const auto& e : rb.compose_entries()) {
    if (gender_of(e.result) != gender_of(e.first)) {
      out.push_back({std::string(name(e.first)) + " . " + std::string(name(e.second)) +
                         " -> " + std::string(name(e.result)),
                     "gender violation: result is " + std::string(name(gender_of(e.result))) +
                         " but first relation is " +
                         std::string(name(gender_of(e.first))) + " (line " +
                         std::to_string(e.line) + ")"});
    }
  }
  for (Relation r : kAllRelations) {
    for (Gender g : kGenders) {
      std::string cell = "inv " + std::string(name(r)) + " " + std::string(name(g));
      auto inv = rb.invert(r, g);
      if (!inv) {
        out.push_back({cell, "incomplete inversion table: no entry"});
        continue;
      }
      if (gender_of(*inv) != g) {
        out.push_back({cell, "inverse " + std::string(name(*inv)) + " does not have gender " +
                                 std::string(name(g))});
      }
      auto back = rb.invert(*inv, gender_of(r));
      if (back && *back != r) {
        out.push_back({cell, "inversion is not an involution: " + std::string(name(r)) +
                                 " -> " + std::string(name(*inv)) + " -> " +
                                 std::string(name(*back))});
      }
    }
  }
  return out;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("KINSHIP_DATA")) return env;
  return KINSHIP_DATA_DIR;
}

std::filesystem::path default_rules_path() {
  if (const char* env = std::getenv("KINSHIP_RULES")) return env;
  return data_dir() / "default.rules";
}

}  // namespace kinship
