#include "doctest.h"

#include <string>
#include <unordered_set>

#include "kinship/errors.hpp"
#include "kinship/rng.hpp"
#include "kinship/splits.hpp"
#include "support/shipped.hpp"

using namespace kinship;
using namespace kinship::testing;

TEST_SUITE("splits") {
  TEST_CASE("anonymized split shapes match the requested counts") {
    SplitConfig cfg;
    cfg.train_counts = {{2, 40}, {4, 30}, {6, 20}};
    for (int level = 2; level <= 10; ++level) cfg.test_counts[level] = 7;
    cfg.seed = 3;
    const Splits s = build_splits(shipped_generator(), cfg);
    CHECK(s.train.size() == 90);
    CHECK(s.test.size() == 9);
    for (const auto& [level, exs] : s.test) {
      CHECK(exs.size() == 7);
      for (const auto& ex : exs) CHECK(ex.story.level == level);
    }
    CHECK(s.train.front().story.level == 2);
    CHECK(s.train.back().story.level == 6);
    CHECK(s.rejections.empty());
  }

  TEST_CASE("seeds follow the documented derivation") {
    SplitConfig cfg;
    cfg.train_counts = {{3, 2}};
    cfg.test_counts = {{4, 2}};
    cfg.seed = 99;
    const Splits s = build_splits(shipped_generator(), cfg);
    CHECK(s.train[1] == shipped_generator().generate(3, Naming::anonymized, derive_seed(99, 1, 3, 1)));
    CHECK(s.test.at(4)[0] ==
          shipped_generator().generate(4, Naming::anonymized, derive_seed(99, 2, 4, 0)));
  }

  TEST_CASE("named test examples share no fact with train") {
    SplitConfig cfg;
    cfg.train_counts = {{2, 150}, {4, 150}, {6, 150}};
    for (int level = 2; level <= 10; ++level) cfg.test_counts[level] = 10;
    cfg.naming = Naming::named;
    cfg.seed = 5;
    const Splits s = build_splits(shipped_generator(), cfg);
    const auto train_facts = train_fact_set(s.train, shipped_rules());
    for (const auto& [level, exs] : s.test) {
      for (const auto& ex : exs) {
        for (const auto& k : fact_keys(ex)) CHECK_FALSE(train_facts.count(k));
      }
    }
    CHECK(s.rejections.size() == 9);
  }

  TEST_CASE("fact keys cover the story and the trace") {
    const Example ex = shipped_generator().generate(4, Naming::named, 1);
    const auto keys = fact_keys(ex);
    const std::unordered_set<std::string> set(keys.begin(), keys.end());
    for (const auto& f : ex.story.facts) CHECK(set.count(key(f)));
    CHECK(set.count(key(ex.answer)));
    const auto with_inverses = train_fact_set({ex}, shipped_rules());
    CHECK(with_inverses.count(key(shipped_rules().invert_fact(ex.answer))));
  }

  TEST_CASE("serial and parallel splits are identical") {
    SplitConfig cfg;
    cfg.train_counts = {{2, 60}, {5, 60}};
    cfg.test_counts = {{3, 20}, {7, 20}};
    cfg.naming = Naming::named;
    cfg.seed = 17;
    const Splits a = build_splits(shipped_generator(), cfg);
    cfg.parallel = false;
    const Splits b = build_splits(shipped_generator(), cfg);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.rejections.at(3).rejected == b.rejections.at(3).rejected);
  }

  TEST_CASE("an exhausted rejection budget is a generation error") {
    SplitConfig cfg;
    cfg.train_counts = {{2, 2000}};
    cfg.test_counts = {{2, 50}};
    cfg.naming = Naming::named;
    cfg.max_attempts = 1;
    CHECK_THROWS_AS(build_splits(shipped_generator(), cfg), GenerationError);
  }

  TEST_CASE("levels below 2 are rejected") {
    SplitConfig cfg;
    cfg.train_counts = {{1, 5}};
    CHECK_THROWS_AS(build_splits(shipped_generator(), cfg), ArgumentError);
  }

  TEST_CASE("level specs") {
    const auto a = parse_level_spec("2:1000,4:500");
    CHECK(a.size() == 2);
    CHECK(a.at(2) == 1000u);
    CHECK(a.at(4) == 500u);
    const auto b = parse_level_spec("2-10:200");
    CHECK(b.size() == 9);
    CHECK(b.at(7) == 200u);
    const auto c = parse_level_spec("2-4");
    CHECK(c.size() == 3);
    CHECK_FALSE(c.at(3).has_value());
    CHECK_THROWS_AS(parse_level_spec("1:5"), ArgumentError);
    CHECK_THROWS_AS(parse_level_spec("2:5,2:6"), ArgumentError);
    CHECK_THROWS_AS(parse_level_spec("x"), ArgumentError);
    CHECK_THROWS_AS(parse_level_spec("5-3"), ArgumentError);
    CHECK_THROWS_AS(parse_level_spec(""), ArgumentError);
  }

  TEST_CASE("even spreading") {
    const auto s = spread_evenly(10, {2, 3, 4});
    CHECK(s.at(2) == 4);
    CHECK(s.at(3) == 3);
    CHECK(s.at(4) == 3);
    const auto t = spread_evenly(10000, {2, 3, 4, 5, 6, 7, 8, 9, 10});
    std::size_t total = 0;
    for (const auto& [l, n] : t) total += n;
    CHECK(total == 10000);
    CHECK(t.at(2) == 1112);
    CHECK(t.at(10) == 1111);
  }
}
