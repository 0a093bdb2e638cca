#pragma once

#include <stdexcept>
#include <string>

namespace stochedit {

// Malformed input: unknown tokens, bad files, symbols outside an alphabet.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model or option that violates a structural precondition.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// EM could not make progress (empty corpus, zero accumulators, ...).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochedit
