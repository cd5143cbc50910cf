#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kinship/errors.hpp"
#include "kinship/proof.hpp"
#include "oracle/naive_long_proof.hpp"
#include "support/shipped.hpp"
#include "support/worked_example.hpp"

using namespace kinship;
using namespace kinship::testing;

namespace {

std::string fact_text(const Fact& f) {
  return f.subject.surface + " " + std::string(name(f.relation)) + " " + f.object.surface;
}

std::string step_text(const ProofStep& s) {
  return fact_text(s.premise1) + " ; " + fact_text(s.premise2) + " ; " + fact_text(s.conclusion);
}

std::string naive_fact_text(const oracle::NaiveFact& f) {
  return std::get<0>(f) + " " + std::string(name(std::get<1>(f))) + " " + std::get<2>(f);
}

std::vector<std::string> golden_lines(const std::string& file) {
  std::ifstream in(test_dir() / "golden" / file);
  REQUIRE(in.good());
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::vector<std::string> texts(const Proof& p) {
  std::vector<std::string> out;
  for (const auto& s : p.steps) out.push_back(step_text(s));
  return out;
}

const std::string kStep1 = "Gregorio brother Natasha ; Natasha granddaughter Betty ; Gregorio grandson Betty";
const std::string kStep2 = "Florence sister Gregorio ; Gregorio grandson Betty ; Florence granddaughter Betty";

}  // namespace

TEST_SUITE("proof") {
  TEST_CASE("worked example short proofs") {
    const Example ex = worked_example();
    CHECK(texts(short_proof_rev(ex)) == std::vector<std::string>{kStep2, kStep1});
    CHECK(texts(short_proof(ex)) == std::vector<std::string>{kStep1, kStep2});
    CHECK(short_proof(ex).strategy == Strategy::sp);
    CHECK(short_proof_rev(ex).strategy == Strategy::spr);
  }

  TEST_CASE("worked example long proof matches the golden file") {
    const auto& rb = shipped_rules();
    const Example ex = worked_example();
    const auto golden = golden_lines("worked_example_lp.txt");
    CHECK(texts(long_proof(ex, rb)) == golden);
    auto rev = golden;
    std::reverse(rev.begin(), rev.end());
    CHECK(texts(long_proof_rev(ex, rb)) == rev);
  }

  TEST_CASE("the golden file agrees with the reference chainer") {
    const auto naive = oracle::naive_long_proof(worked_example(), shipped_rules());
    REQUIRE(naive.has_value());
    std::vector<std::string> lines;
    for (const auto& s : *naive) {
      lines.push_back(naive_fact_text(s.p1) + " ; " + naive_fact_text(s.p2) + " ; " +
                      naive_fact_text(s.concl));
    }
    CHECK(lines == golden_lines("worked_example_lp.txt"));
  }

  TEST_CASE("long proof equals the reference chainer on generated examples") {
    const auto& rb = shipped_rules();
    const auto& gen = shipped_generator();
    for (int level = 2; level <= 8; ++level) {
      for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Example ex = gen.generate(level, Naming::named, seed + 1000 * level);
        const Proof lp = long_proof(ex, rb);
        const auto naive = oracle::naive_long_proof(ex, rb);
        REQUIRE(naive.has_value());
        REQUIRE(lp.steps.size() == naive->size());
        for (std::size_t i = 0; i < lp.steps.size(); ++i) {
          const auto& s = lp.steps[i];
          const auto& n = (*naive)[i];
          CHECK(fact_text(s.premise1) == naive_fact_text(n.p1));
          CHECK(fact_text(s.premise2) == naive_fact_text(n.p2));
          CHECK(fact_text(s.conclusion) == naive_fact_text(n.concl));
        }
      }
    }
  }

  TEST_CASE("level 2 long proof is the short proof") {
    const auto& rb = shipped_rules();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Example ex = shipped_generator().generate(2, Naming::anonymized, seed);
      const Proof lp = long_proof(ex, rb);
      REQUIRE(lp.steps.size() == 1);
      CHECK(lp.steps == short_proof(ex).steps);
    }
  }

  TEST_CASE("duality and lengths") {
    const auto& rb = shipped_rules();
    const auto& gen = shipped_generator();
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const int level = 2 + static_cast<int>(seed % 9);
      const Example ex = gen.generate(level, Naming::anonymized, seed);
      auto sp = short_proof(ex).steps, spr = short_proof_rev(ex).steps;
      auto lp = long_proof(ex, rb).steps, lpr = long_proof_rev(ex, rb).steps;
      std::reverse(spr.begin(), spr.end());
      std::reverse(lpr.begin(), lpr.end());
      CHECK(sp == spr);
      CHECK(lp == lpr);
      CHECK(sp.size() == static_cast<std::size_t>(level - 1));
      CHECK(lp.size() >= static_cast<std::size_t>(level - 1));
      CHECK(sp.back().conclusion == ex.answer);
      CHECK(short_proof_rev(ex).steps.front().conclusion == ex.answer);
      const Fact last = lp.back().conclusion;
      CHECK((last == ex.answer || last == rb.invert_fact(ex.answer)));
    }
  }

  TEST_CASE("every emitted step is licensed by the rulebase") {
    const auto& rb = shipped_rules();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Example ex = shipped_generator().generate(2 + static_cast<int>(seed % 9),
                                                      Naming::named, seed);
      for (Strategy s : {Strategy::sp, Strategy::lp}) {
        for (const auto& st : make_proof(s, ex, rb).steps) {
          CHECK(st.premise1.object == st.premise2.subject);
          CHECK(st.conclusion.subject == st.premise1.subject);
          CHECK(st.conclusion.object == st.premise2.object);
          CHECK(rb.compose(st.premise1.relation, st.premise2.relation) == st.conclusion.relation);
        }
      }
    }
  }

  TEST_CASE("no-proof strategy is empty") {
    const Proof p = make_proof(Strategy::np, worked_example(), shipped_rules());
    CHECK(p.steps.empty());
    CHECK(p.strategy == Strategy::np);
  }

  TEST_CASE("chaining that cannot reach the query throws") {
    Example ex = worked_example();
    const auto rb = RuleBase::parse(
        "inv granddaughter female -> grandmother\ninv grandmother female -> granddaughter\n"
        "inv sister male -> brother\ninv brother female -> sister\n"
        "inv brother male -> brother\ninv sister female -> sister\n");
    CHECK_THROWS_AS(long_proof(ex, rb), InferenceIncomplete);
  }

  TEST_CASE("short proof of an empty trace is a logic error") {
    Example ex = worked_example();
    ex.split_trace.clear();
    CHECK_THROWS_AS(short_proof(ex), std::logic_error);
  }

  TEST_CASE("strategy names") {
    CHECK(name(Strategy::lpr) == "lpr");
    CHECK(strategy_from_name("np") == Strategy::np);
    CHECK_FALSE(strategy_from_name("xx").has_value());
  }
}
