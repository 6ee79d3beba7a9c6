#pragma once

#include <stdexcept>
#include <string>

namespace perispace {

// Malformed input documents (scene files, run configs, record tables).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a model invariant or is inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Aggregation over snapshots that were not all evaluated.
class IncompleteDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace perispace
