#include "kinship/overlap.hpp"

#include <cstdio>
#include <set>
#include <unordered_set>

#include "parallel.hpp"
#include "text_util.hpp"

namespace kinship {

std::string_view name(Block b) {
  switch (b) {
    case Block::proofs: return "proofs";
    case Block::proof_steps: return "proof_steps";
    case Block::facts: return "facts";
    case Block::entities: return "entities";
    case Block::relations: return "relations";
  }
  return "?";
}

std::array<std::vector<std::string>, 5> building_blocks(const SidecarRecord& rec,
                                                        const TemplateSet& tpl) {
  std::array<std::set<std::string>, 5> sets;
  auto& [proofs, steps, facts, entities, relations] = sets;
  auto add_fact = [&](const Fact& f) {
    facts.insert(key(f));
    relations.insert(std::string(name(f.relation)));
  };
  std::vector<std::string> rendered;
  for (const auto& s : rec.proof.steps) {
    rendered.push_back(tpl.render_step(shape(s), {0, 0, 0}));
    steps.insert(rendered.back());
    add_fact(s.premise1);
    add_fact(s.premise2);
    add_fact(s.conclusion);
  }
  if (!rendered.empty()) proofs.insert(text_util::join(rendered, " "));
  for (const auto& f : rec.example.story.facts) add_fact(f);
  add_fact(rec.example.answer);
  for (const auto& e : rec.example.story.entities) entities.insert(e.surface);

  std::array<std::vector<std::string>, 5> out;
  for (std::size_t b = 0; b < out.size(); ++b) out[b].assign(sets[b].begin(), sets[b].end());
  return out;
}

std::string OverlapReport::to_csv() const {
  std::string out = "block";
  for (const auto& [level, _] : percent) out += ",level_" + std::to_string(level);
  out += "\n";
  for (Block b : kAllBlocks) {
    out += name(b);
    for (const auto& [level, row] : percent) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ",%.2f", row[static_cast<std::size_t>(b)]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

OverlapReport overlap_report(std::span<const SidecarRecord> train,
                             std::span<const SidecarRecord> test, const TemplateSet& tpl,
                             bool parallel) {
  std::array<std::unordered_set<std::string>, 5> index;
  for (const auto& rec : train) {
    auto blocks = building_blocks(rec, tpl);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (auto& s : blocks[b]) index[b].insert(std::move(s));
    }
  }

  std::vector<std::array<std::vector<std::string>, 5>> test_blocks(test.size());
  auto extract = [&](std::size_t i) { test_blocks[i] = building_blocks(test[i], tpl); };
  if (parallel) {
    detail::parallel_for(test.size(), extract);
  } else {
    for (std::size_t i = 0; i < test.size(); ++i) extract(i);
  }

  std::map<int, std::array<std::set<std::string>, 5>> distinct;
  OverlapReport out;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const int level = test[i].example.story.level;
    out.examples[level]++;
    auto& sets = distinct[level];
    for (std::size_t b = 0; b < 5; ++b) sets[b].insert(test_blocks[i][b].begin(), test_blocks[i][b].end());
  }
  for (const auto& [level, sets] : distinct) {
    auto& row = out.percent[level];
    for (std::size_t b = 0; b < 5; ++b) {
      std::size_t hit = 0;
      for (const auto& s : sets[b]) hit += index[b].count(s);
      row[b] = sets[b].empty() ? 100.0 : 100.0 * double(hit) / double(sets[b].size());
    }
  }
  return out;
}

}  // namespace kinship
