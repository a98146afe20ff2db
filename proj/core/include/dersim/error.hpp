#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dersim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad index, self-loop, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for this input class (e.g. directed graphs).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

struct FieldIssue {
  std::string path;
  std::string message;
};

// Scenario/parameter validation failure. Carries every issue found, each
// tagged with the config field path it refers to.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldIssue> issues);
  ConfigError(std::string path, std::string message);

  const std::vector<FieldIssue>& issues() const { return issues_; }

 private:
  static std::string Summarize(const std::vector<FieldIssue>& issues);
  std::vector<FieldIssue> issues_;
};

// Simulation state went non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(long step, int agent, const std::string& what);

  long step() const { return step_; }
  int agent() const { return agent_; }

 private:
  long step_;
  int agent_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what);
};

}  // namespace dersim
