#include "kinship/splits.hpp"

#include <algorithm>
#include <charconv>

#include "kinship/batch.hpp"
#include "kinship/errors.hpp"
#include "kinship/rng.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace kinship {

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;

void check_levels(const std::map<int, std::size_t>& counts) {
  for (const auto& [level, n] : counts) {
    if (level < 2) throw ArgumentError("level must be >= 2, got " + std::to_string(level));
  }
}

std::vector<batch::ExampleRequest> requests(const std::map<int, std::size_t>& counts,
                                            std::uint64_t seed, std::uint64_t stream) {
  std::vector<batch::ExampleRequest> out;
  for (const auto& [level, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({level, derive_seed(seed, stream, static_cast<std::uint64_t>(level), i)});
    }
  }
  return out;
}

bool touches(const Example& ex, const std::unordered_set<std::string>& facts) {
  for (const auto& k : fact_keys(ex)) {
    if (facts.count(k)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> fact_keys(const Example& ex) {
  std::vector<std::string> out;
  out.reserve(ex.story.facts.size() + ex.split_trace.size());
  for (const auto& f : ex.story.facts) out.push_back(key(f));
  for (const auto& s : ex.split_trace) out.push_back(key(s.conclusion));
  return out;
}

std::unordered_set<std::string> train_fact_set(const std::vector<Example>& train,
                                               const RuleBase& rules) {
  std::unordered_set<std::string> out;
  auto add = [&](const Fact& f) {
    out.insert(key(f));
    out.insert(key(rules.invert_fact(f)));
  };
  for (const auto& ex : train) {
    for (const auto& f : ex.story.facts) add(f);
    for (const auto& s : ex.split_trace) add(s.conclusion);
  }
  return out;
}

Splits build_splits(const StoryGenerator& gen, const SplitConfig& cfg) {
  check_levels(cfg.train_counts);
  check_levels(cfg.test_counts);
  Splits out;
  const auto train_reqs = requests(cfg.train_counts, cfg.seed, kTrainStream);
  out.train = cfg.parallel ? batch::generate(gen, train_reqs, cfg.naming)
                           : batch::generate_serial(gen, train_reqs, cfg.naming);

  if (cfg.naming == Naming::anonymized) {
    for (const auto& [level, n] : cfg.test_counts) {
      const auto reqs = requests({{level, n}}, cfg.seed, kTestStream);
      out.test[level] = cfg.parallel ? batch::generate(gen, reqs, cfg.naming)
                                     : batch::generate_serial(gen, reqs, cfg.naming);
    }
    return out;
  }

  const auto train_facts = train_fact_set(out.train, gen.rules());
  for (const auto& [level, n] : cfg.test_counts) {
    std::vector<Example> examples(n);
    std::vector<std::size_t> attempts(n, 0);
    auto draw = [&](std::size_t i) {
      for (std::size_t a = 0; a < cfg.max_attempts; ++a) {
        const std::uint64_t seed =
            derive_seed(cfg.seed, kTestStream, static_cast<std::uint64_t>(level), i, a);
        Example ex = gen.generate(level, cfg.naming, seed);
        if (!touches(ex, train_facts)) {
          examples[i] = std::move(ex);
          attempts[i] = a + 1;
          return;
        }
      }
      throw GenerationError("named test example " + std::to_string(i) + " at level " +
                            std::to_string(level) + " still shares facts with train after " +
                            std::to_string(cfg.max_attempts) + " attempts (" +
                            std::to_string(train_facts.size()) +
                            " train facts incl. inverses); reduce train size or raise the budget");
    };
    if (cfg.parallel) {
      detail::parallel_for(n, draw);
    } else {
      for (std::size_t i = 0; i < n; ++i) draw(i);
    }
    RejectionStats& st = out.rejections[level];
    for (std::size_t a : attempts) {
      st.rejected += a - 1;
      st.worst_attempts = std::max(st.worst_attempts, a);
    }
    out.test[level] = std::move(examples);
  }
  return out;
}

std::map<int, std::size_t> spread_evenly(std::size_t total, const std::vector<int>& levels) {
  std::map<int, std::size_t> out;
  if (levels.empty()) return out;
  const std::size_t base = total / levels.size();
  std::size_t extra = total % levels.size();
  std::vector<int> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  for (int l : sorted) {
    out[l] = base + (extra > 0 ? 1 : 0);
    if (extra > 0) --extra;
  }
  return out;
}

namespace {

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::map<int, std::optional<std::size_t>> parse_level_spec(std::string_view spec) {
  std::map<int, std::optional<std::size_t>> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    const std::string_view item = text_util::trim(spec.substr(start, comma - start));
    start = comma + 1;
    const std::string bad = "bad level spec item '" + std::string(item) + "'";
    std::string_view levels = item;
    std::optional<std::size_t> count;
    if (auto colon = item.find(':'); colon != std::string_view::npos) {
      levels = item.substr(0, colon);
      count = to_number<std::size_t>(item.substr(colon + 1));
      if (!count) throw ArgumentError(bad + ": count is not a number");
    }
    std::optional<int> lo, hi;
    if (auto dash = levels.find('-'); dash != std::string_view::npos) {
      lo = to_number<int>(levels.substr(0, dash));
      hi = to_number<int>(levels.substr(dash + 1));
    } else {
      lo = hi = to_number<int>(levels);
    }
    if (!lo || !hi || *lo > *hi) throw ArgumentError(bad + ": expected L, L:N, L1-L2 or L1-L2:N");
    if (*lo < 2) throw ArgumentError(bad + ": levels start at 2");
    for (int l = *lo; l <= *hi; ++l) {
      if (!out.emplace(l, count).second) {
        throw ArgumentError(bad + ": level " + std::to_string(l) + " given twice");
      }
    }
  }
  return out;
}

}  // namespace kinship
