#pragma once

#include <stdexcept>
#include <string>

namespace corebandit {

// Malformed bandit instance or instance parameters.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Random instance generation gave up after its retry budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation that needs past rewards was handed none.
class EmptyHistory : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyPool : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Agent/environment call sequence violated (feedback without a pending action,
// feedback inconsistent with the shown list, ...).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure that indicates corrupted state (e.g. a non-SPD Gram matrix).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration value. `path` is the dotted field path, e.g. "agents[1].alpha".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace corebandit
