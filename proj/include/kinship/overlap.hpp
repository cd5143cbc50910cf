#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kinship/corpus.hpp"
#include "kinship/templates.hpp"

namespace kinship {

enum class Block : std::uint8_t { proofs, proof_steps, facts, entities, relations };

inline constexpr std::array<Block, 5> kAllBlocks{Block::proofs, Block::proof_steps, Block::facts,
                                                 Block::entities, Block::relations};

std::string_view name(Block b);

// Building blocks of one record, as distinct strings per block:
//   proofs       the whole proof, steps rendered with pattern 0, in order
//   proof_steps  each step rendered with pattern 0
//   facts        story facts, proof step facts and the answer as triples
//   entities     surfaces
//   relations    relation names used by any of the facts
std::array<std::vector<std::string>, 5> building_blocks(const SidecarRecord& rec,
                                                        const TemplateSet& tpl);

struct OverlapReport {
  // level -> percentage of the level's distinct test blocks found in train,
  // indexed by Block. A level with no blocks of a kind reports 100.
  std::map<int, std::array<double, 5>> percent;
  std::map<int, std::size_t> examples;

  double at(int level, Block b) const { return percent.at(level)[static_cast<std::size_t>(b)]; }

  // Rows = blocks, columns = levels, values with 2 decimals.
  std::string to_csv() const;
};

OverlapReport overlap_report(std::span<const SidecarRecord> train,
                             std::span<const SidecarRecord> test, const TemplateSet& tpl,
                             bool parallel = true);

}  // namespace kinship
