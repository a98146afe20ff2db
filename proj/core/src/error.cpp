#include "dersim/error.hpp"

namespace dersim {

ConfigError::ConfigError(std::vector<FieldIssue> issues)
    : Error(Summarize(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string path, std::string message)
    : ConfigError(std::vector<FieldIssue>{{std::move(path), std::move(message)}}) {}

std::string ConfigError::Summarize(const std::vector<FieldIssue>& issues) {
  std::string out = "invalid configuration";
  for (const auto& issue : issues) {
    out += "\n  " + issue.path + ": " + issue.message;
  }
  return out;
}

DivergenceError::DivergenceError(long step, int agent, const std::string& what)
    : Error("non-finite state at step " + std::to_string(step) + ", agent " +
            std::to_string(agent) + ": " + what),
      step_(step),
      agent_(agent) {}

IoError::IoError(const std::string& path, const std::string& what)
    : Error(path + ": " + what) {}

}  // namespace dersim
