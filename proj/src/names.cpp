#include "kinship/names.hpp"

#include <set>

#include "kinship/errors.hpp"
#include "kinship/fact.hpp"
#include "kinship/rulebase.hpp"
#include "text_util.hpp"

namespace kinship {

NamePool NamePool::parse(std::string_view text, std::string_view origin) {
  NamePool pool;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (std::string_view raw : text_util::split_lines(text)) {
    ++line_no;
    std::string_view line = text_util::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw ConfigError(where() + "expected 'name,gender'");
    std::string_view nm = text_util::trim(line.substr(0, comma));
    auto g = gender_from_name(text_util::trim(line.substr(comma + 1)));
    if (!g) throw ConfigError(where() + "unknown gender");
    if (!valid_surface(nm)) throw ConfigError(where() + "invalid name '" + std::string(nm) + "'");
    if (!seen.emplace(nm).second) throw ConfigError(where() + "duplicate name '" + std::string(nm) + "'");
    (*g == Gender::male ? pool.male_ : pool.female_).emplace_back(nm);
  }
  return pool;
}

NamePool NamePool::load(const std::filesystem::path& path) {
  try {
    return parse(text_util::read_file(path), path.string());
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

std::filesystem::path default_names_path() { return data_dir() / "names.csv"; }

}  // namespace kinship
