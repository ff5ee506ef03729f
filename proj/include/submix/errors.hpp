#pragma once

#include <stdexcept>
#include <string>

namespace submix {

// Unresolvable configuration: missing feature channel, bad solver name,
// mismatched model/weight dimensions.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data: unparsable corpus/model files, empty references.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace submix
