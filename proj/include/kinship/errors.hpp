#pragma once

#include <stdexcept>

namespace kinship {

// Bad caller-supplied argument (level < 2, pool too small, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent configuration file (rulebase, templates, names).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sampling could not satisfy its constraints within budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corrupt or misaligned data files handed to the evaluator.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Forward chaining exhausted every fact pair without linking the query.
class InferenceIncomplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinship
