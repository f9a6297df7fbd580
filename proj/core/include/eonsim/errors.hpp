#pragma once

#include <stdexcept>
#include <string>

namespace eonsim {

// Malformed input document (topology file, config file, CSV).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input that violates a semantic rule
// (dangling node reference, duplicate link, bad config value, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke an API precondition or an internal invariant was
// breached; simulation state can no longer be trusted.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace eonsim
