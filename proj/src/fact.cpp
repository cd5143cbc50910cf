#include "kinship/fact.hpp"

#include <algorithm>

namespace kinship {

bool valid_surface(std::string_view surface) {
  if (surface.empty()) return false;
  return std::none_of(surface.begin(), surface.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '<' ||
           c == '>' || c == '.' || c == ',' || c == '?' || c == '|' ||
           c == '{' || c == '}';
  });
}

bool well_formed(const Fact& f) {
  return f.subject.surface != f.object.surface &&
         f.subject.gender == gender_of(f.relation);
}

Triple shape(const Fact& f) {
  return Triple{f.subject.surface, f.relation, f.object.surface};
}

std::string key(const Triple& t) {
  std::string out;
  out.reserve(t.subject.size() + t.object.size() + 20);
  out.append(t.subject).push_back('|');
  out.append(name(t.relation)).push_back('|');
  out.append(t.object);
  return out;
}

std::string key(const Fact& f) { return key(shape(f)); }

StepShape shape(const ProofStep& s) {
  return StepShape{shape(s.premise1), shape(s.premise2), shape(s.conclusion)};
}

}  // namespace kinship
