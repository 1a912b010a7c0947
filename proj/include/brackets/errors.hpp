#pragma once

#include <stdexcept>
#include <string>

namespace brackets {

// A computation was asked to enumerate more states than its configured cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A CLI config file failed to parse or validate.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace brackets
