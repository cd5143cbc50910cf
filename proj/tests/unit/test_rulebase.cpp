#include "doctest.h"

#include <string>

#include "kinship/errors.hpp"
#include "kinship/rulebase.hpp"
#include "support/shipped.hpp"
#include "support/worked_example.hpp"

using namespace kinship;
using namespace kinship::testing;

namespace {

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

bool has_message(const std::vector<Violation>& vs, const std::string& entry,
                 const std::string& prefix) {
  for (const auto& v : vs) {
    if (v.entry == entry && v.message.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

std::string config_error(const std::string& text) {
  try {
    RuleBase::parse(text, "t.rules");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("rulebase") {
  TEST_CASE("shipped rulebase passes validation") {
    const auto& rb = shipped_rules();
    CHECK(validate_rulebase(rb).empty());
    CHECK(rb.compose_entries().size() == 104);
    CHECK(rb.invert_entries().size() == 40);
  }

  TEST_CASE("composition examples") {
    const auto& rb = shipped_rules();
    CHECK(rb.compose(Relation::brother, Relation::granddaughter) == Relation::grandson);
    CHECK(rb.compose(Relation::sister, Relation::grandson) == Relation::granddaughter);
    CHECK(rb.compose(Relation::sister, Relation::brother) == Relation::sister);
    CHECK_FALSE(rb.compose(Relation::granddaughter, Relation::granddaughter).has_value());
  }

  TEST_CASE("inversion examples") {
    const auto& rb = shipped_rules();
    const Fact f{natasha(), Relation::granddaughter, betty()};
    CHECK(rb.invert_fact(f) == Fact{betty(), Relation::grandmother, natasha()});
    const Fact g{gregorio(), Relation::brother, natasha()};
    CHECK(rb.invert_fact(g) == Fact{natasha(), Relation::sister, gregorio()});
  }

  TEST_CASE("inversion is an involution on every well-formed fact") {
    const auto& rb = shipped_rules();
    for (Relation r : kAllRelations) {
      for (Gender g : kGenders) {
        const Fact f{{"A", gender_of(r)}, r, {"B", g}};
        CHECK(rb.invert_fact(rb.invert_fact(f)) == f);
      }
    }
  }

  TEST_CASE("every composition preserves the first relation's gender") {
    for (const auto& e : shipped_rules().compose_entries()) {
      CHECK(gender_of(e.result) == gender_of(e.first));
    }
  }

  TEST_CASE("splits_of lists the entries producing a relation") {
    const auto& rb = shipped_rules();
    std::size_t total = 0;
    for (Relation r : kAllRelations) {
      for (auto [a, b] : rb.splits_of(r)) CHECK(rb.compose(a, b) == r);
      total += rb.splits_of(r).size();
    }
    CHECK(total == rb.compose_entries().size());
  }

  TEST_CASE("a gender-violating entry is reported") {
    const std::string text = replace_line(shipped_rules_text(), "brother . granddaughter -> grandson",
                                          "brother . granddaughter -> granddaughter");
    const auto vs = validate_rulebase(RuleBase::parse(text));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].entry == "brother . granddaughter -> granddaughter");
    CHECK(vs[0].message.rfind("gender violation", 0) == 0);
  }

  TEST_CASE("a missing inversion entry is reported") {
    const std::string text =
        replace_line(shipped_rules_text(), "inv wife male -> husband", "# removed");
    const auto vs = validate_rulebase(RuleBase::parse(text));
    CHECK(has_message(vs, "inv wife male", "incomplete inversion table"));
  }

  TEST_CASE("an inverse of the wrong gender is reported") {
    const std::string text =
        replace_line(shipped_rules_text(), "inv wife male -> husband", "inv wife male -> wife");
    const auto vs = validate_rulebase(RuleBase::parse(text));
    CHECK(has_message(vs, "inv wife male", "inverse wife does not have gender male"));
  }

  TEST_CASE("a non-involutive inversion is reported") {
    const std::string text =
        replace_line(shipped_rules_text(), "inv wife male -> husband", "inv wife male -> son");
    const auto vs = validate_rulebase(RuleBase::parse(text));
    CHECK(has_message(vs, "inv wife male", "inversion is not an involution"));
  }

  TEST_CASE("parse errors name the origin and line") {
    CHECK(config_error("father . father -> grandfather\nfather . cousin -> uncle\n")
              .rfind("t.rules:2: unknown relation 'cousin'", 0) == 0);
    CHECK(config_error("# c\n\nfather father grandfather\n").rfind("t.rules:3: expected", 0) == 0);
    CHECK(config_error("inv son other -> father\n").rfind("t.rules:1: unknown gender", 0) == 0);
    CHECK(config_error("inv son male\n").rfind("t.rules:1: expected 'inv", 0) == 0);
    CHECK(config_error("son . son -> grandson\nson . son -> son\n")
              .rfind("t.rules:2: conflicting composition", 0) == 0);
    CHECK(config_error("inv son male -> father\ninv son male -> mother\n")
              .rfind("t.rules:2: conflicting inversion", 0) == 0);
  }

  TEST_CASE("duplicate identical entries are accepted once") {
    const auto rb = RuleBase::parse("son . son -> grandson\nson . son -> grandson # again\n");
    CHECK(rb.compose_entries().size() == 1);
    CHECK(rb.compose(Relation::son, Relation::son) == Relation::grandson);
  }

  TEST_CASE("invert_fact without an entry throws") {
    const auto rb = RuleBase::parse("");
    CHECK_THROWS_AS(rb.invert_fact({{"A", Gender::male}, Relation::son, {"B", Gender::male}}),
                    ConfigError);
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_AS(RuleBase::load("/nonexistent/x.rules"), ConfigError);
  }
}
