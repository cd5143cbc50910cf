#include "kinship/relation.hpp"

namespace kinship {

namespace {

constexpr std::array<std::string_view, kRelationCount> kRelationNames{
    "father",        "mother",        "son",
    "daughter",      "brother",       "sister",
    "grandfather",   "grandmother",   "grandson",
    "granddaughter", "uncle",         "aunt",
    "nephew",        "niece",         "husband",
    "wife",          "father-in-law", "mother-in-law",
    "son-in-law",    "daughter-in-law",
};

}  // namespace

std::string_view name(Gender g) { return g == Gender::male ? "male" : "female"; }

std::optional<Gender> gender_from_name(std::string_view text) {
  if (text == "male") return Gender::male;
  if (text == "female") return Gender::female;
  return std::nullopt;
}

std::string_view name(Relation r) { return kRelationNames[index(r)]; }

std::optional<Relation> relation_from_name(std::string_view text) {
  for (std::size_t i = 0; i < kRelationCount; ++i) {
    if (kRelationNames[i] == text) return relation_at(i);
  }
  return std::nullopt;
}

}  // namespace kinship
