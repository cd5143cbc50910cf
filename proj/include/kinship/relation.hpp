#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace kinship {

enum class Gender : std::uint8_t { male = 0, female = 1 };

inline constexpr std::array<Gender, 2> kGenders{Gender::male, Gender::female};

constexpr Gender opposite(Gender g) {
  return g == Gender::male ? Gender::female : Gender::male;
}

std::string_view name(Gender g);
std::optional<Gender> gender_from_name(std::string_view text);

// The 20 kinship labels. Kinds are laid out as gender-mirrored couples:
// even values are male, the following odd value is the female counterpart.
enum class Relation : std::uint8_t {
  father,
  mother,
  son,
  daughter,
  brother,
  sister,
  grandfather,
  grandmother,
  grandson,
  granddaughter,
  uncle,
  aunt,
  nephew,
  niece,
  husband,
  wife,
  father_in_law,
  mother_in_law,
  son_in_law,
  daughter_in_law,
};

inline constexpr std::size_t kRelationCount = 20;

constexpr std::size_t index(Relation r) { return static_cast<std::size_t>(r); }

constexpr Relation relation_at(std::size_t i) { return static_cast<Relation>(i); }

inline constexpr std::array<Relation, kRelationCount> kAllRelations = [] {
  std::array<Relation, kRelationCount> out{};
  for (std::size_t i = 0; i < kRelationCount; ++i) out[i] = relation_at(i);
  return out;
}();

// Gender of the subject of any fact carrying this relation.
constexpr Gender gender_of(Relation r) {
  return (index(r) & 1U) == 0 ? Gender::male : Gender::female;
}

// The other member of the gender-mirrored couple (son <-> daughter, ...).
constexpr Relation mirror(Relation r) { return relation_at(index(r) ^ 1U); }

constexpr bool is_spouse(Relation r) {
  return r == Relation::husband || r == Relation::wife;
}

std::string_view name(Relation r);
std::optional<Relation> relation_from_name(std::string_view text);

}  // namespace kinship
