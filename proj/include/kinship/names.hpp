#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kinship/relation.hpp"

namespace kinship {

// Gendered first names for named-mode entities. File format: one
// `name,gender` pair per line, '#' comments allowed.
class NamePool {
 public:
  static NamePool parse(std::string_view text, std::string_view origin = "<memory>");
  static NamePool load(const std::filesystem::path& path);

  const std::vector<std::string>& names(Gender g) const {
    return g == Gender::male ? male_ : female_;
  }
  std::size_t size() const { return male_.size() + female_.size(); }

 private:
  std::vector<std::string> male_;
  std::vector<std::string> female_;
};

std::filesystem::path default_names_path();

}  // namespace kinship
